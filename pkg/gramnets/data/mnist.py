"""
MNIST ingestion from the big-endian IDX container.
"""
import logging
import struct
from pathlib import Path
from typing import BinaryIO, Tuple

import numpy as np

from gramnets.core.errors import CountMismatchError, TruncatedPayloadError, WrongMagicError
from gramnets.data.datasets import DatasetHandle

logger = logging.getLogger(__name__)

MNIST_IMAGE_MAGIC = 2051
MNIST_LABEL_MAGIC = 2049


def read_be32(file: BinaryIO) -> int:
    data = file.read(4)
    if len(data) != 4:
        raise TruncatedPayloadError("truncated IDX header")
    result, = struct.unpack(">i", data)
    return result


def _read_payload(file: BinaryIO, expected: int, path: Path) -> np.ndarray:
    payload = file.read(expected)
    if len(payload) != expected:
        raise TruncatedPayloadError(f"{path}: expected {expected} payload bytes, found {len(payload)}")
    return np.frombuffer(payload, dtype=np.uint8)


def load_idx_images(path: Path) -> Tuple[np.ndarray, int, int]:
    # Data format (big endian):
    # i32 | Magic
    # i32 | Item count
    # i32 | Row count
    # i32 | Column count
    # u8[] | Pixels (organized row-wise)
    path = Path(path)
    with path.open("rb") as f:
        magic = read_be32(f)
        if magic != MNIST_IMAGE_MAGIC:
            raise WrongMagicError(f"{path}: wrong magic {magic} for an image file (expected {MNIST_IMAGE_MAGIC})")
        count, rows, cols = read_be32(f), read_be32(f), read_be32(f)
        pixels = _read_payload(f, count * rows * cols, path)
    return pixels.reshape(count, rows * cols), rows, cols


def load_idx_labels(path: Path) -> np.ndarray:
    # i32 | Magic
    # i32 | Item count
    # u8[] | Labels (0-9)
    path = Path(path)
    with path.open("rb") as f:
        magic = read_be32(f)
        if magic != MNIST_LABEL_MAGIC:
            raise WrongMagicError(f"{path}: wrong magic {magic} for a label file (expected {MNIST_LABEL_MAGIC})")
        count = read_be32(f)
        return _read_payload(f, count, path).copy()


def mnist_load(images_path: Path, labels_path: Path) -> DatasetHandle:
    """Rows of 784 pixels scaled into [0, 1], row-major."""
    pixels, rows, cols = load_idx_images(images_path)
    labels = load_idx_labels(labels_path)
    if labels.shape[0] != pixels.shape[0]:
        raise CountMismatchError(f"{pixels.shape[0]} images but {labels.shape[0]} labels")
    logger.info(f"Loaded {pixels.shape[0]} MNIST images of {rows}x{cols} from {images_path}")
    data = pixels.astype(np.float64) / 255.0
    return DatasetHandle.from_array(data, name="mnist", labels=labels)
