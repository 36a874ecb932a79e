import os
from pathlib import Path

HOME_DIR = Path.home()

_override_config_dir = os.getenv("MAHBF_CONFIG_DIR")

CONFIG_DIR = (
    Path(_override_config_dir)
    if _override_config_dir
    else HOME_DIR / ".config" / "mahbf"
)

_override_data_dir = os.getenv("MAHBF_DATA_DIR")

DATA_DIR = (
    Path(_override_data_dir)
    if _override_data_dir
    else HOME_DIR / ".local" / "share" / "mahbf"
)

DEFAULT_EXPERIMENT_FILE = CONFIG_DIR / "experiment.yaml"
