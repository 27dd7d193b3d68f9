from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    APP_NAME: str = "lambda-greedy-td"
    APP_VERSION: str = "0.1.0"

    DEFAULT_SEED: int = 0
    DEFAULT_JOBS: int = 1
    OUTPUT_DIR: str = "results"

    LOG_LEVEL: str = "INFO"
    SHOW_PROGRESS: bool = False

    model_config = SettingsConfigDict(env_file=".env", env_file_encoding="utf-8")


def get_settings() -> Settings:
    return Settings()
