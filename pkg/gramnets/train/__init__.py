from gramnets.models.train import Method
from gramnets.train.base import Trainer, TrainResult, make_dataset
from gramnets.train.gan import GanTrainer, train_gan
from gramnets.train.gram import GramTrainer, train_gram
from gramnets.train.mmdnet import MmdNetTrainer, train_mmdnet
from gramnets.train.snapshot import snapshot_projection

TRAINERS = {
    Method.GRAM: GramTrainer,
    Method.GAN: GanTrainer,
    Method.MMDNET: MmdNetTrainer,
}


def train(config, dataset=None) -> TrainResult:
    """Run whichever method the configuration selects."""
    return TRAINERS[config.method](config, dataset).run()


__all__ = [
    "GanTrainer",
    "GramTrainer",
    "MmdNetTrainer",
    "TRAINERS",
    "Trainer",
    "TrainResult",
    "make_dataset",
    "snapshot_projection",
    "train",
    "train_gan",
    "train_gram",
    "train_mmdnet",
]
