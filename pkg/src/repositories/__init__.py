from src.repositories.instance_repository import InstanceRepository
from src.repositories.trace_repository import TraceRepository

__all__ = ["InstanceRepository", "TraceRepository"]
