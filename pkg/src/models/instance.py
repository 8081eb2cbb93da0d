import logging
from collections.abc import Sequence
from typing import Any, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.exceptions import ContractViolationError, InvalidSizeError

logger = logging.getLogger(__name__)

# Objective value z; integer for integer-valued instances.
Cost = Union[int, float]


def _as_matrix(value: Any) -> np.ndarray:
    matrix = np.array(value)
    # int64 accumulates Tho150-scale objectives exactly
    matrix = matrix.astype(np.int64) if matrix.dtype.kind in "iub" else matrix.astype(np.float64)
    matrix.setflags(write=False)
    return matrix


class QapInstance(BaseModel):
    """Koopmans-Beckmann QAP instance.

    Attributes
        - flow: n x n facility flows f_ij
        - distance: n x n location distances d_kp
        - linear_cost: optional n x n allocation costs, indexed [location, facility]
        - name: instance label
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    flow: np.ndarray
    distance: np.ndarray
    linear_cost: Optional[np.ndarray] = None
    name: str = Field(default="", description="Instance label, e.g. 'scr15'")

    @field_validator("flow", "distance", "linear_cost", mode="before")
    @classmethod
    def _coerce_matrix(cls, value: Any) -> Optional[np.ndarray]:
        if value is None:
            return None
        return _as_matrix(value)

    @model_validator(mode="after")
    def _check_shapes(self) -> "QapInstance":
        flow, distance = self.flow, self.distance
        if flow.ndim != 2 or flow.shape[0] != flow.shape[1]:
            raise ContractViolationError(f"flow matrix must be square, got shape {flow.shape}")
        if distance.shape != flow.shape:
            raise ContractViolationError(f"distance shape {distance.shape} does not match flow shape {flow.shape}")
        if flow.shape[0] < 2:
            raise InvalidSizeError(f"instance size must be at least 2, got {flow.shape[0]}")
        if self.linear_cost is not None and self.linear_cost.shape != flow.shape:
            raise ContractViolationError(f"linear cost shape {self.linear_cost.shape} does not match {flow.shape}")

        for label, matrix in (("flow", flow), ("distance", distance), ("linear_cost", self.linear_cost)):
            if matrix is not None and not np.all(np.isfinite(matrix)):
                raise ContractViolationError(f"{label} matrix contains non-finite entries")

        if np.any(np.diag(flow)) or np.any(np.diag(distance)):
            logger.warning(f"Instance {self.name or '<unnamed>'} has non-zero diagonal entries")
        return self

    @property
    def n(self) -> int:
        return int(self.flow.shape[0])

    @property
    def is_integral(self) -> bool:
        matrices = [self.flow, self.distance] + ([self.linear_cost] if self.linear_cost is not None else [])
        return all(m.dtype.kind in "iu" for m in matrices)

    def swapped(self) -> "QapInstance":
        """Same data with the flow/distance interpretation exchanged."""
        return QapInstance(flow=self.distance, distance=self.flow, linear_cost=self.linear_cost, name=self.name)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QapInstance):
            return NotImplemented
        if self.name != other.name or (self.linear_cost is None) != (other.linear_cost is None):
            return False
        if self.linear_cost is not None and not np.array_equal(
            self.linear_cost, other.linear_cost  # type: ignore[arg-type]
        ):
            return False
        return bool(np.array_equal(self.flow, other.flow) and np.array_equal(self.distance, other.distance))

    def __hash__(self) -> int:
        return hash((self.name, self.n))


class Assignment(BaseModel):
    """One-line permutation: perm[i] is the location assigned to facility i."""

    model_config = ConfigDict(frozen=True)

    perm: tuple[int, ...]

    @field_validator("perm", mode="before")
    @classmethod
    def _coerce_perm(cls, value: Any) -> tuple[int, ...]:
        return tuple(int(v) for v in value)

    @field_validator("perm")
    @classmethod
    def _check_bijection(cls, perm: tuple[int, ...]) -> tuple[int, ...]:
        if sorted(perm) != list(range(len(perm))):
            raise ValueError(f"{list(perm)} is not a permutation of 0..{len(perm) - 1}")
        return perm

    @classmethod
    def of(cls, perm: Union[Sequence[int], np.ndarray]) -> "Assignment":
        return cls(perm=tuple(int(v) for v in perm))

    @classmethod
    def trusted(cls, perm: Union[Sequence[int], np.ndarray]) -> "Assignment":
        """Build without the bijection check; for solver hot loops that only permute valid inputs."""
        return cls.model_construct(perm=tuple(int(v) for v in perm))

    @classmethod
    def identity(cls, n: int) -> "Assignment":
        return cls.trusted(range(n))

    @property
    def n(self) -> int:
        return len(self.perm)

    def as_array(self) -> np.ndarray:
        return np.fromiter(self.perm, dtype=np.intp, count=len(self.perm))
