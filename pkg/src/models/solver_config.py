from enum import StrEnum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


class Algorithm(StrEnum):
    LSH = "lsh"
    GA = "ga"
    PSO = "pso"
    GA_PSO = "ga_pso"
    GWO = "gwo"
    HS = "hs"
    SA = "sa"


class MutationMix(BaseModel):
    """Relative weights of insertion, inversion and exchange mutation."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    ism: float = Field(default=1.0, ge=0)
    ivm: float = Field(default=1.0, ge=0)
    em: float = Field(default=1.0, ge=0)

    @model_validator(mode="after")
    def _check_total(self) -> "MutationMix":
        if self.ism + self.ivm + self.em <= 0:
            raise ValueError("at least one mutation weight must be positive")
        return self


class DetectorSettings(BaseModel):
    """Strong-convergence tunables: window n, threshold delta, target count K."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    window: int = Field(default=50, ge=1)
    threshold: float = Field(default=1e-3, gt=0)
    target: int = Field(default=10, ge=1)


class SolverConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    algorithm: Algorithm
    max_iterations: int = Field(default=200, ge=1)
    population_size: int = Field(default=30, ge=1)
    seed: int = Field(default=0, ge=0, lt=2**64)

    # GA
    crossover_rate: float = Field(default=0.9, ge=0, le=1)
    mutation_rate: float = Field(default=0.2, ge=0, le=1)
    mutation_mix: MutationMix = Field(default_factory=MutationMix)

    # PSO and GA-PSO
    inertia: float = Field(default=0.729, ge=0)
    c1_start: float = Field(default=2.0, ge=0)
    c1_end: float = Field(default=0.5, ge=0)
    c2_start: float = Field(default=2.0, ge=0)
    c2_end: float = Field(default=0.5, ge=0)

    # GWO
    a_start: float = Field(default=2.0, ge=0)
    a_end: float = Field(default=0.0, ge=0)

    # HS
    hms: int = Field(default=10, ge=1)
    hmcr: float = Field(default=0.9, ge=0, le=1)
    par: float = Field(default=0.3, ge=0, le=1)
    bandwidth: float = Field(default=0.05, ge=0)

    # SA
    t0_acceptance_ratio: float = Field(default=0.8, gt=0, lt=1)
    cooling_alpha: float = Field(default=0.95, gt=0, lt=1)
    moves_per_temperature: int = Field(default=100, ge=1)
    initial_temperature: Optional[float] = Field(
        default=None, gt=0, description="Fixed starting temperature; skips acceptance-ratio calibration"
    )

    # Stop at the strong-convergence trigger instead of exhausting max_iterations
    stop_on_convergence: bool = False
    detector: DetectorSettings = Field(default_factory=DetectorSettings)

    @model_validator(mode="after")
    def _check_schedules(self) -> "SolverConfig":
        if self.c1_end > self.c1_start or self.c2_end > self.c2_start:
            raise ValueError("PSO coefficients must decrease: c1_end <= c1_start and c2_end <= c2_start")
        if self.a_end > self.a_start:
            raise ValueError("GWO parameter a must decrease: a_end <= a_start")
        return self
