from .runspec import RunSpec, parse_runspec, format_runspec
from .profile import (ReferenceProfile, load_reference, read_trajectory, check_span, write_trajectory, write_policy,
                      write_comparison, write_expected, write_summary)

__all__ = [
    "RunSpec", "parse_runspec", "format_runspec",
    "ReferenceProfile", "load_reference", "read_trajectory", "check_span",
    "write_trajectory", "write_policy", "write_comparison", "write_expected", "write_summary",
]
