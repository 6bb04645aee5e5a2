from .io import check_file, check_dir, staged_outputs
from .text import FLOAT_FORMAT, generate_random_key
from .intervals import group_runs

__all__ = [
    "check_file",
    "check_dir",
    "staged_outputs",

    "FLOAT_FORMAT",
    "generate_random_key",

    "group_runs",
]
