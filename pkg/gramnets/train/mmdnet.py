"""
Generator-only baseline: descend the data-space MMD^2 directly, no critic.
"""
from typing import Optional

from gramnets.autodiff.tensor import gradients
from gramnets.data.datasets import DatasetHandle
from gramnets.domain.kernels import gram_pair, mmd2_from_pair
from gramnets.models.trace import TraceRecord
from gramnets.models.train import Method, TrainConfig
from gramnets.nn.mlp import mlp_forward
from gramnets.nn.optim import Direction
from gramnets.train.base import Trainer, TrainResult


class MmdNetTrainer(Trainer):
    method = Method.MMDNET

    def loss(self, X, Z):
        return mmd2_from_pair(gram_pair(mlp_forward(self.generator, Z), X, self.config.kernel))

    def step(self, iteration: int) -> TraceRecord:
        X, Z = self.sample_batches()
        loss = self.loss(X, Z)
        value = loss.item()
        self.check_finite(iteration, generator_mmd2=value)
        self.generator_optimizer.step(self.generator, gradients(loss, self.generator), Direction.DESCEND)
        return TraceRecord(iteration=iteration, generator_mmd2=value)


def train_mmdnet(config: TrainConfig, dataset: Optional[DatasetHandle] = None) -> TrainResult:
    return MmdNetTrainer(config, dataset).run()
