"""
Core utility functions for the application.
"""
import logging
import secrets
import string
from datetime import datetime, timezone
from pathlib import Path

logger = logging.getLogger(__name__)


def generate_unique_run_id(root: Path, prefix: str = "run", length: int = 4) -> str:
    """Generates a run id that does not collide with an existing directory under `root`."""
    # Exclude confusing characters like o, 0, i, 1
    chars = [c for c in string.ascii_lowercase + string.digits if c not in "o0i1"]
    stamp = datetime.now(timezone.utc).strftime("%Y%m%d-%H%M%S")
    while True:
        code = "".join(secrets.choice(chars) for _ in range(length))
        run_id = f"{prefix}-{stamp}-{code}"
        if not (root / run_id).exists():
            logger.info(f"Generated unique run id: {run_id}")
            return run_id
        logger.info(f"Run id {run_id} already exists. Retrying...")
