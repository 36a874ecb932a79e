import os
from dataclasses import dataclass
from enum import Enum

from mahbf.config.file_management import DATA_DIR


# Older names still accepted on the command line and in MAHBF_PRESET
PRESET_ALIASES = {"full": "paper"}


class Preset(str, Enum):
    DESK = "desk"
    PAPER = "paper"

    @classmethod
    def _missing_(cls, value: object) -> "Preset | None":
        if isinstance(value, str) and value in PRESET_ALIASES:
            return cls(PRESET_ALIASES[value])
        return None


@dataclass
class Config:
    LOG_LEVEL: str
    WORKERS: int
    PRESET: Preset
    OUTPUT_DIR: str


def get_config() -> Config:
    return Config(
        LOG_LEVEL=os.environ.get("MAHBF_LOG_LEVEL", "INFO").upper(),
        WORKERS=int(os.environ.get("MAHBF_WORKERS", "1")),
        PRESET=Preset(os.environ.get("MAHBF_PRESET", Preset.DESK.value)),
        OUTPUT_DIR=os.environ.get("MAHBF_OUTPUT_DIR", str(DATA_DIR / "results")),
    )


environment = get_config()
