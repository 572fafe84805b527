from datetime import datetime, timezone
from pydantic_settings import BaseSettings, SettingsConfigDict
from typing import List


class Settings(BaseSettings):
    # Project info
    PROJECT_NAME: str = "Bloch POVM Toolkit"
    API_VERSION: str = "1.0.0"
    DEBUG: bool = False

    # Server
    HOST: str = "0.0.0.0"
    PORT: int = 8000
    WORKERS: int = 1

    # CORS
    ALLOWED_ORIGINS: List[str] = [
        "http://localhost:3000",
        "http://127.0.0.1:3000",
        "http://localhost:5173",
    ]

    # Logging
    LOG_LEVEL: str = "WARNING"

    # Numerical tolerances
    EPS_NORM: float = 1e-9    # positivity / purity slack
    EPS_SUM: float = 1e-9     # closure sums
    EPS_ROUND: float = 1e-12  # pure-arithmetic round trips
    EPS_HERM: float = 1e-12   # imaginary part allowed on a Hermitian diagonal
    EPS_ANG: float = 1e-9     # radians

    # Documents
    SCHEMA_VERSION: str = "1"

    # Sampling limits
    MAX_SAMPLE_TRIALS: int = 10_000_000

    # Figures (pixels)
    FIGURE_WIDTH: int = 400
    FIGURE_HEIGHT: int = 400
    FIGURE_RADIUS: float = 150.0

    @staticmethod
    def get_current_time() -> str:
        return datetime.now(timezone.utc).isoformat()

    model_config = SettingsConfigDict(env_file=".env", case_sensitive=True, extra="ignore")


# Global settings instance
settings = Settings()
