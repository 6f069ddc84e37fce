from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    LOG_LEVEL: str = "INFO"
    MAX_SWEEP_WORKERS: int = 4

    model_config = {
        "env_file": ".env",
        "env_file_encoding": "utf-8",
        "env_prefix": "STEWART_",
        "extra": "ignore",
    }


settings = Settings()
