"""Tuned default parameters per instance-size band."""

import logging
from functools import lru_cache
from pathlib import Path
from typing import Any, Optional

from pydantic import BaseModel, Field, ValidationError

from src.models.solver_config import Algorithm, SolverConfig

logger = logging.getLogger(__name__)

DEFAULTS_PATH = Path(__file__).with_name("tuned_defaults.json")


class SizeBand(BaseModel):
    max_n: Optional[int] = Field(..., description="Largest instance size in the band; null for the open band")
    algorithms: dict[Algorithm, dict[str, Any]]


class TunedDefaults(BaseModel):
    version: int
    bands: list[SizeBand]

    def band_for(self, n: int) -> SizeBand:
        for band in self.bands:
            if band.max_n is None or n <= band.max_n:
                return band
        return self.bands[-1]


@lru_cache
def load_defaults(path: Path = DEFAULTS_PATH) -> TunedDefaults:
    defaults = TunedDefaults.model_validate_json(path.read_text(encoding="utf-8"))
    logger.debug(f"Loaded tuned defaults version {defaults.version} from {path}")
    return defaults


def resolve_solver_config(algorithm: Algorithm, n: int, overrides: Optional[dict[str, Any]] = None) -> SolverConfig:
    """Band defaults for an instance of size n, with explicit values taking precedence."""
    params = dict(load_defaults().band_for(n).algorithms.get(algorithm, {}))
    params.update(overrides or {})
    params["algorithm"] = algorithm
    return SolverConfig.model_validate(params)


def override_errors(algorithm: Algorithm, overrides: dict[str, Any]) -> list[str]:
    """Every violation the overrides cause in any size band, without duplicates."""
    errors: list[str] = []
    for band in load_defaults().bands:
        params = {**band.algorithms.get(algorithm, {}), **overrides, "algorithm": algorithm}
        try:
            SolverConfig.model_validate(params)
        except ValidationError as e:
            for error in e.errors():
                field = ".".join(str(part) for part in error["loc"]) or "overrides"
                message = f"{algorithm}: {field}: {error['msg']}"
                if message not in errors:
                    errors.append(message)
    return errors
