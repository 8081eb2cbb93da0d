from functools import lru_cache
from pathlib import Path
from typing import Any

from pydantic import BaseModel, Field, ValidationError
from pydantic_settings import BaseSettings, SettingsConfigDict

from src.models.solver_config import DetectorSettings


class HarnessConfig(BaseModel):
    workers: int = Field(default=1, ge=1, description="Worker processes for experiment cells")
    replications: int = Field(default=10, ge=1, description="Replications when an experiment does not say")
    output_dir: Path = Field(default=Path("results"), description="Report directory when an experiment does not say")


class AppConfig(BaseSettings):
    model_config = SettingsConfigDict(
        env_file=".env",
        env_nested_delimiter="__",
    )

    harness: HarnessConfig = Field(default_factory=HarnessConfig)
    detector: DetectorSettings = Field(default_factory=DetectorSettings)

    environment: str = Field(default="development", description="Environment name")
    log_file: Path = Field(default=Path("qap_bench.log"), description="Log file used in production")

    def experiment_defaults(self) -> dict[str, Any]:
        """Values an experiment document inherits for the keys it leaves out."""
        return {
            "workers": self.harness.workers,
            "replications": self.harness.replications,
            "output_dir": self.harness.output_dir,
            "detector": self.detector,
        }


@lru_cache
def get_config() -> AppConfig:
    try:
        return AppConfig()
    except ValidationError as err:
        print("\n CONFIGURATION ERROR: Invalid Environment Variables\n")
        print(err)
        raise SystemExit(1) from err


config = get_config()
