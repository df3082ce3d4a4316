"""
Joint non-adversarial training of generator and critic.

Each iteration projects a data batch and a generated batch through the
critic and builds one set of Gram matrices. From those matrices the critic
objective (Pearson-divergence estimate plus positivity term) is ascended in
the critic parameters and the projected MMD^2 is descended in the
generator parameters. Both gradients are taken before either network moves.
"""
import logging
from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np

from gramnets.autodiff.tensor import TensorNode, gradients
from gramnets.data.datasets import DatasetHandle
from gramnets.data.rng import Stream
from gramnets.domain.kernels import GramPair, gram_pair, mmd2_from_pair
from gramnets.domain.ratio import RatioEstimate, critic_loss, estimate_ratio, pearson_divergence_estimate
from gramnets.models.trace import TraceRecord
from gramnets.models.train import Method, TrainConfig
from gramnets.nn.mlp import ModelParams, mlp_forward, mlp_init
from gramnets.nn.optim import Direction, Optimizer, make_optimizer
from gramnets.train.base import Trainer, TrainResult

logger = logging.getLogger(__name__)


@dataclass
class GramLosses:
    pair: GramPair
    ratio: RatioEstimate
    critic_objective: TensorNode
    generator_loss: TensorNode
    pd: TensorNode


def gram_losses(
    generator: ModelParams,
    critic: ModelParams,
    X: np.ndarray,
    Z: np.ndarray,
    config: TrainConfig,
) -> GramLosses:
    """Both objectives from one forward pass and one GramPair."""
    generated = mlp_forward(generator, Z)
    pair = gram_pair(mlp_forward(critic, generated), mlp_forward(critic, X), config.kernel)
    ratio = estimate_ratio(pair.K_qq, pair.K_qp, config.critic_loss.ridge)
    return GramLosses(
        pair=pair,
        ratio=ratio,
        critic_objective=critic_loss(ratio, config.critic_loss),
        generator_loss=mmd2_from_pair(pair),
        pd=pearson_divergence_estimate(ratio),
    )


class GramTrainer(Trainer):
    method = Method.GRAM

    def __init__(self, config: TrainConfig, dataset: Optional[DatasetHandle] = None):
        super().__init__(config, dataset)
        self._critic = mlp_init(config.critic_spec, config.seed, Stream.INIT_CRITIC)
        self.critic_optimizer = make_optimizer(config.optimizer.critic)

    @property
    def critic(self) -> ModelParams:
        return self._critic

    def optimizers(self) -> Dict[str, Optimizer]:
        return {"generator": self.generator_optimizer, "critic": self.critic_optimizer}

    def step(self, iteration: int) -> TraceRecord:
        X, Z = self.sample_batches()
        losses = gram_losses(self.generator, self.critic, X, Z, self.config)
        critic_value = losses.critic_objective.item()
        generator_value = losses.generator_loss.item()
        self.check_finite(iteration, critic_loss=critic_value, generator_mmd2=generator_value)

        critic_grads = gradients(losses.critic_objective, self.critic)
        generator_grads = gradients(losses.generator_loss, self.generator)
        self.critic_optimizer.step(self.critic, critic_grads, Direction.ASCEND)
        self.generator_optimizer.step(self.generator, generator_grads, Direction.DESCEND)

        return TraceRecord(
            iteration=iteration,
            generator_mmd2=generator_value,
            pd_estimate=losses.pd.item(),
            critic_loss=critic_value,
        )


def train_gram(config: TrainConfig, dataset: Optional[DatasetHandle] = None) -> TrainResult:
    return GramTrainer(config, dataset).run()
