"""
Adversarial baseline with the same generator and a critic-shaped discriminator.

Alternating 1:1 schedule. The discriminator descends
-[mean log D(x) + mean log(1 - D(G(z)))]; the generator then descends the
non-saturating loss -mean log D(G(z)) on the same noise batch. Both use
log-sigmoid of the logits so saturated outputs stay finite.
"""
from typing import Dict, Optional

import numpy as np

from gramnets.autodiff import ops
from gramnets.autodiff.tensor import TensorNode, gradients
from gramnets.data.datasets import DatasetHandle
from gramnets.data.rng import Stream
from gramnets.models.trace import TraceRecord
from gramnets.models.train import Method, TrainConfig
from gramnets.nn.mlp import ModelParams, mlp_forward, mlp_init
from gramnets.nn.optim import Direction, Optimizer, make_optimizer
from gramnets.train.base import Trainer, TrainResult


def discriminator_loss(discriminator: ModelParams, X, fake) -> TensorNode:
    real_logits = mlp_forward(discriminator, X, return_logits=True)
    fake_logits = mlp_forward(discriminator, fake, return_logits=True)
    return ops.neg(ops.add(ops.mean(ops.log_sigmoid(real_logits)),
                           ops.mean(ops.log_sigmoid(ops.neg(fake_logits)))))


def generator_loss(generator: ModelParams, discriminator: ModelParams, Z) -> TensorNode:
    fake = mlp_forward(generator, Z)
    return ops.neg(ops.mean(ops.log_sigmoid(mlp_forward(discriminator, fake, return_logits=True))))


class GanTrainer(Trainer):
    method = Method.GAN

    def __init__(self, config: TrainConfig, dataset: Optional[DatasetHandle] = None):
        super().__init__(config, dataset)
        self.discriminator = mlp_init(config.discriminator_spec, config.seed, Stream.INIT_CRITIC)
        self.discriminator_optimizer = make_optimizer(config.optimizer.critic)

    def optimizers(self) -> Dict[str, Optimizer]:
        return {"generator": self.generator_optimizer, "discriminator": self.discriminator_optimizer}

    def generator_gradients(self, Z: np.ndarray) -> Dict[str, np.ndarray]:
        return gradients(generator_loss(self.generator, self.discriminator, Z), self.generator)

    def step(self, iteration: int) -> TraceRecord:
        X, Z = self.sample_batches()
        fake = mlp_forward(self.generator, Z).values
        d_loss = discriminator_loss(self.discriminator, X, fake)
        d_value = d_loss.item()
        self.check_finite(iteration, gan_d_loss=d_value)
        self.discriminator_optimizer.step(self.discriminator, gradients(d_loss, self.discriminator), Direction.DESCEND)

        g_loss = generator_loss(self.generator, self.discriminator, Z)
        g_value = g_loss.item()
        self.check_finite(iteration, gan_g_loss=g_value)
        self.generator_optimizer.step(self.generator, gradients(g_loss, self.generator), Direction.DESCEND)
        return TraceRecord(iteration=iteration, gan_d_loss=d_value, gan_g_loss=g_value)


def train_gan(config: TrainConfig, dataset: Optional[DatasetHandle] = None) -> TrainResult:
    return GanTrainer(config, dataset).run()
