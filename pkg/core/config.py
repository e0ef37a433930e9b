from pydantic_settings import BaseSettings, SettingsConfigDict
from pydantic import Field
from dotenv import load_dotenv

load_dotenv()

class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_prefix="RELGALOIS_",
        env_file=".env",
        case_sensitive=False,
        extra="ignore",
        validate_assignment=True,
    )

    # |A|^n * log2|B| of any enumerated function table
    max_table_bits: int = Field(default=16, ge=1)
    max_candidates: int = Field(default=2 ** 20, ge=1)

    jobs: int = Field(default=1, ge=1)
    seed: int = 0

    log_level: str = "WARNING"
    results_dir: str = "."

settings = Settings()
