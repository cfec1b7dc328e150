from dotenv import load_dotenv
from pydantic_settings import BaseSettings
import os


environment = os.getenv("ENVIRONMENT", "production")
env_file = f".env.{environment}"
if os.path.exists(env_file):
    load_dotenv(env_file)
load_dotenv()  # Load .env as fallback


class BaseConfig(BaseSettings):
    """Base configuration with common settings"""

    # Application
    APP_NAME: str = "Behavioral Consistency Checker"
    VERSION: str = "1.0.0"
    ENVIRONMENT: str = environment

    # Output
    OGA_OUTPUT_DIR: str = "output"
    PLOT_DPI: int = 150

    # Scenario defaults (simulated seconds)
    DEFAULT_CONSTRAINT: str = "AND(1,2) < AND(3,4)"
    DEFAULT_LIFETIME: float = 20 * 24 * 3600.0
    DEFAULT_MEAN_STAY_IN: float = 600.0
    DEFAULT_MEAN_STAY_OUT: float = 300.0
    DEFAULT_UPDATE_INTERVAL: float = 1.0
    DEFAULT_MEAN_DELAY: float = 0.06
    DEFAULT_MIN_STAY: float = 120.0
    DEFAULT_TRANSIT_TIME: float = 300.0

    # Sweeps
    DEFAULT_SEED_COUNT: int = 10
    SWEEP_WORKERS: int = 4

    # Oracle-equivalence suite
    SELFTEST_TRACES: int = 1000

    class Config:
        env_file_encoding = 'utf-8'
        case_sensitive = True
        extra = "ignore"


class DevelopmentConfig(BaseConfig):
    """Development environment configuration"""
    DEBUG: bool = True
    LOG_LEVEL: str = "DEBUG"


class ProductionConfig(BaseConfig):
    """Production environment configuration"""
    DEBUG: bool = False
    LOG_LEVEL: str = "INFO"


def get_settings() -> BaseConfig:
    env = os.getenv("ENVIRONMENT", "production").lower()

    if env == "production":
        return ProductionConfig()
    else:
        return DevelopmentConfig()


def validate_settings(settings: BaseConfig):
    errors = []

    if settings.DEFAULT_LIFETIME < 0:
        errors.append("DEFAULT_LIFETIME must be >= 0")
    for name in ("DEFAULT_MEAN_STAY_IN", "DEFAULT_MEAN_STAY_OUT", "DEFAULT_MEAN_DELAY"):
        if getattr(settings, name) <= 0:
            errors.append(f"{name} must be positive")
    if settings.DEFAULT_UPDATE_INTERVAL < 0:
        errors.append("DEFAULT_UPDATE_INTERVAL must be >= 0")
    if not 0 <= settings.DEFAULT_MIN_STAY < min(settings.DEFAULT_MEAN_STAY_IN, settings.DEFAULT_MEAN_STAY_OUT):
        errors.append("DEFAULT_MIN_STAY must be >= 0 and below both mean stays")
    if settings.DEFAULT_TRANSIT_TIME < 0:
        errors.append("DEFAULT_TRANSIT_TIME must be >= 0")
    if settings.SWEEP_WORKERS < 1:
        errors.append("SWEEP_WORKERS must be at least 1")
    if settings.DEFAULT_SEED_COUNT < 1:
        errors.append("DEFAULT_SEED_COUNT must be at least 1")
    if not settings.OGA_OUTPUT_DIR:
        errors.append("OGA_OUTPUT_DIR must not be empty")

    if errors:
        raise ValueError(f"Configuration errors: {', '.join(errors)}")


settings = get_settings()
validate_settings(settings)
