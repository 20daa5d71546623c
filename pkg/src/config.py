"""
Configuration management for the sarcasm-aware synthesis toolkit.
Loads environment variables and provides analysis, fusion and logging defaults for all modules.
"""
from pathlib import Path
from typing import Literal

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

# Get project root directory (where .env lives)
PROJECT_ROOT = Path(__file__).parent.parent
ENV_FILE = PROJECT_ROOT / ".env"


class Settings(BaseSettings):
    """Toolkit defaults loaded from environment variables; CLI flags override every field"""

    model_config = SettingsConfigDict(
        env_file=str(ENV_FILE),
        case_sensitive=False,
        extra="ignore",
        populate_by_name=True,
    )

    # Frame analysis
    frame_len: int = Field(default=512, gt=0, alias="SARCASM_TTS_FRAME_LEN")
    hop: int = Field(default=160, gt=0, alias="SARCASM_TTS_HOP")
    n_mels: int = Field(default=40, gt=0, alias="SARCASM_TTS_N_MELS")
    n_ceps: int = Field(default=13, gt=0, alias="SARCASM_TTS_N_CEPS")

    # Pitch tracking
    f0_min: float = Field(default=50.0, gt=0, alias="SARCASM_TTS_F0_MIN")
    f0_max: float = Field(default=500.0, gt=0, alias="SARCASM_TTS_F0_MAX")
    voicing_threshold: float = Field(default=0.3, alias="SARCASM_TTS_VOICING_THRESHOLD")

    # Fusion / LoRA ("expansion factor of 8")
    lora_rank: int = Field(default=8, gt=0, alias="SARCASM_TTS_LORA_RANK")
    lora_alpha: float = Field(default=16.0, gt=0, alias="SARCASM_TTS_LORA_ALPHA")
    learning_rate: float = Field(default=1e-4, gt=0, alias="SARCASM_TTS_LEARNING_RATE")
    exemplar_mode: Literal["sum", "mean"] = Field(default="sum", alias="SARCASM_TTS_EXEMPLAR_MODE")
    init_seed: int = Field(default=0, alias="SARCASM_TTS_INIT_SEED")

    # Logging
    log_level: str = Field(default="INFO", alias="SARCASM_TTS_LOG_LEVEL")
    log_json: bool = Field(default=True, alias="SARCASM_TTS_LOG_JSON")


# Global settings instance
# Purpose: Single source of defaults across all modules
settings = Settings()
