"""Run names of the form <nv>.<nu>.<nm>.<METHOD>.<dh>"""
import math
from dataclasses import dataclass

from goddard_id.errors import RunSpecError, UsageError
from goddard_id.solver.diagram import SegmentPlan
from goddard_id.solver.grids import default_grids
from goddard_id.solver.tableau import TABLEAUS

__all__ = [
    "RunSpec",
    "parse_runspec",
    "format_runspec",
]

FIELDS = ("nv", "nu", "nm", "method", "dh")


@dataclass(frozen=True)
class RunSpec:
    """
    Discretization of one run

    Attributes
    ----------
    nv : int
        number of speed states
    nu : int
        number of control states
    nm : int
        number of mass states
    method : str
        stepper key, one of E, RK, G
    dh : float
        segment length
    """

    nv: int
    nu: int
    nm: int
    method: str
    dh: float

    def __post_init__(self):
        for name in ("nv", "nu", "nm"):
            n = getattr(self, name)
            if isinstance(n, bool) or int(n) != n or n < 2:
                raise RunSpecError(f"{name} must be an integer >= 2, got {n}")
            object.__setattr__(self, name, int(n))
        if self.method not in TABLEAUS:
            raise RunSpecError(f"unknown method {self.method}")
        dh = float(self.dh)
        if not (math.isfinite(dh) and dh > 0):
            raise RunSpecError(f"dh must be a positive number, got {self.dh}")
        object.__setattr__(self, "dh", dh)

    @property
    def name(self):
        return format_runspec(self)

    def plan(self, p):
        """Altitude segments of the run

        Raises:
            RunSpecError: dh does not divide hT - h0
        """
        try:
            return SegmentPlan.from_span(p.h0, p.hT, self.dh)
        except UsageError as e:
            raise RunSpecError(f"dh: {e}") from e

    def grids(self, p):
        return default_grids(p, self.nv, self.nm, self.nu)

    def __str__(self):
        return self.name


def format_runspec(spec):
    """Run name of a RunSpec, floats use the shortest repr that parses back exactly"""
    return f"{spec.nv}.{spec.nu}.{spec.nm}.{spec.method}.{spec.dh!r}"


def _parse_count(name, token):
    if not token.isdigit():
        raise RunSpecError(f"{name}: expected a positive integer, got '{token}'")
    return int(token)


def parse_runspec(name):
    """Parse a run name

    The dh field is everything after the method token, so it may contain dots.

    Args:
        name (str): e.g. "101.11.101.E.0.0005"

    Raises:
        RunSpecError: malformed name, the message names the offending field

    Returns:
        RunSpec: parsed discretization
    """
    tokens = str(name).strip().split(".", 4)
    if len(tokens) < 5:
        missing = FIELDS[len(tokens)]
        raise RunSpecError(f"{missing}: missing in run name '{name}', expected <nv>.<nu>.<nm>.<METHOD>.<dh>")
    nv, nu, nm = (_parse_count(f, t) for f, t in zip(FIELDS[:3], tokens[:3]))
    method, dh_token = tokens[3], tokens[4]
    if method not in TABLEAUS:
        raise RunSpecError(f"unknown method {method}")
    try:
        dh = float(dh_token)
    except ValueError:
        raise RunSpecError(f"dh: cannot parse '{dh_token}' as a number") from None
    return RunSpec(nv, nu, nm, method, dh)
