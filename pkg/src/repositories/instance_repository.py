import logging
from pathlib import Path

from src.models.instance import QapInstance
from src.qap.qaplib import parse_qaplib, serialize_qaplib

logger = logging.getLogger(__name__)


def instance_name(path: Path) -> str:
    return path.stem.lower()


class InstanceRepository:
    def __init__(self, swap_matrices: bool = False) -> None:
        """Read QAPLIB files; with ``swap_matrices`` the first matrix is taken as distance."""
        self.swap_matrices = swap_matrices

    def load(self, path: Path) -> QapInstance:
        """Load an instance named after its file; unreadable files raise OSError naming the path."""
        inst = parse_qaplib(path.read_text(encoding="utf-8"), name=instance_name(path))
        if self.swap_matrices:
            inst = inst.swapped()
        logger.debug(f"Loaded {inst.name} (n={inst.n}) from {path}")
        return inst

    def save(self, inst: QapInstance, path: Path) -> Path:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(serialize_qaplib(inst), encoding="utf-8")
        return path
