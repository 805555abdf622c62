"""
Configuration management using Pydantic Settings
"""
from pathlib import Path
from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings

DATA_DIR = Path(__file__).parent / "data"


class Settings(BaseSettings):
    """Simulator settings loaded from environment variables"""

    # Application
    APP_NAME: str = "efid"
    APP_VERSION: str = "1.0.0"
    FORMAT_VERSION: str = "efid-sim/1"
    DEBUG: bool = False
    LOG_LEVEL: str = "INFO"

    # Parallelism (None -> os.cpu_count())
    EFID_THREADS: Optional[int] = Field(None, ge=1)

    # Experiment defaults
    DEFAULT_TRIALS: int = Field(1000, ge=1)
    CI_TRIALS: int = Field(100, ge=1)
    CI_TOLERANCE_MULTIPLIER: float = Field(3.0, gt=0)
    DEFAULT_SEED: int = Field(7, ge=0)
    DEFAULT_QUALITY: int = Field(75, ge=1, le=100)
    SNR_SEGMENT_LEN: int = Field(256, ge=1)

    # Bundled data
    WORKLOAD_DIR: str = str(DATA_DIR / "workloads")
    MANIFEST_PATH: str = str(DATA_DIR / "manifests" / "ci_sweeps.yaml")

    class Config:
        env_file = ".env"
        case_sensitive = True


# Global settings instance
settings = Settings()
