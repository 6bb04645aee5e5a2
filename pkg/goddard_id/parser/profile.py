"""Functions for reading and writing profile CSVs and run reports"""
import logging
import math
from collections import namedtuple
from pathlib import Path

import numpy as np
import pandas as pd

from goddard_id.errors import ProfileLoadError, SpanMismatchError
from goddard_id.solver.diagram import Policy
from goddard_id.solver.rollout import Trajectory, PROFILE_COLUMNS
from goddard_id.utils.io import check_file
from goddard_id.utils.text import FLOAT_FORMAT

__all__ = [
    "ReferenceProfile",
    "load_reference",
    "read_trajectory",
    "check_span",
    "write_trajectory",
    "write_policy",
    "write_comparison",
    "write_expected",
    "write_summary",
]

logger = logging.getLogger(__name__)

ReferenceProfile = namedtuple("ReferenceProfile", "trajectory label")


def _parse_float(text):
    try:
        return float(text)
    except (TypeError, ValueError):
        return math.nan


def _first_bad_row(mask):
    """1-based data row of the first True entry"""
    return int(np.flatnonzero(mask)[0]) + 1


def load_reference(path, label=None):
    """Load a profile CSV with header h,u,v,m

    Extra columns are ignored. Row numbers in errors count data rows from 1,
    the header is not counted.

    Args:
        path (str): CSV file
        label (str, optional): provenance label. Defaults to the file stem.

    Raises:
        FileNotFoundError: path is not a file
        ProfileLoadError: missing columns, unparseable values or altitude not
            strictly increasing

    Returns:
        ReferenceProfile: loaded trajectory and its label
    """
    path = Path(check_file(path))
    try:
        df = pd.read_csv(path, dtype=str, skipinitialspace=True)
    except pd.errors.EmptyDataError:
        raise ProfileLoadError(f"{path} is empty") from None
    except pd.errors.ParserError as e:
        raise ProfileLoadError(f"{path} is not a valid CSV: {e}") from None
    df.columns = [str(c).strip() for c in df.columns]

    missing = [c for c in PROFILE_COLUMNS if c not in df.columns]
    if missing:
        raise ProfileLoadError(f"{path} lacks column(s) {', '.join(missing)}")
    extra = [c for c in df.columns if c not in PROFILE_COLUMNS]
    if extra:
        logger.debug(f"Ignoring extra column(s) {', '.join(extra)} of {path}")
    if len(df) < 2:
        raise ProfileLoadError(f"{path} needs at least 2 data rows, got {len(df)}")

    values = {}
    for c in PROFILE_COLUMNS:
        # float() reads back every double written with 17 significant digits
        col = df[c].map(_parse_float).to_numpy(dtype=float)
        bad = ~np.isfinite(col)
        if bad.any():
            row = _first_bad_row(bad)
            raise ProfileLoadError(f"cannot parse {c}='{df[c].iloc[row - 1]}' as a finite number", row=row)
        values[c] = col

    steps = np.diff(values["h"]) <= 0
    if steps.any():
        # the row whose altitude fails to exceed its predecessor
        row = _first_bad_row(steps) + 1
        raise ProfileLoadError(f"altitude {values['h'][row - 1]!r} does not increase", row=row)

    label = path.stem if label is None else label
    return ReferenceProfile(Trajectory(**values, label=label), label)


def read_trajectory(path):
    """Trajectory of a profile CSV written by write_trajectory"""
    return load_reference(path).trajectory


def check_span(t, h0, hT, rel_tol=1e-9):
    """Check that a trajectory spans [h0, hT]

    Raises:
        SpanMismatchError: first or last altitude differs from h0 or hT
    """
    tol = rel_tol * max(abs(hT - h0), 1.0)
    if not (math.isclose(t.h[0], h0, rel_tol=0, abs_tol=tol) and math.isclose(t.h[-1], hT, rel_tol=0, abs_tol=tol)):
        raise SpanMismatchError(
            f"Altitude span mismatch: {t.label or 'profile'} covers [{t.h[0]!r}, {t.h[-1]!r}], expected [{h0!r}, {hT!r}]"
        )


def _to_csv(df, path):
    df.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


def write_trajectory(t, path):
    """Write h,u,v,m, one row per segment boundary"""
    _to_csv(t.to_frame(), path)


def write_policy(pol, path):
    """Write segment,v_idx,m_idx,u for every live cell, in index order"""
    seg, iv, im = np.nonzero(pol.control_idx != Policy.DEAD)
    df = pd.DataFrame({
        "segment": seg,
        "v_idx": iv,
        "m_idx": im,
        "u": pol.controls[pol.control_idx[seg, iv, im]],
    })
    _to_csv(df, path)


def write_comparison(report, path):
    """Write profile,max_abs_dev,rms_dev, one row per profile"""
    _to_csv(report.to_frame()[["profile", "max_abs_dev", "rms_dev"]], path)


def write_expected(h, e_v, e_m, path):
    """Write h,v,m of the expected profile through the tables"""
    _to_csv(pd.DataFrame({"h": h, "v": e_v, "m": e_m}), path)


def write_summary(summary, path):
    """Write key: value lines, lists as indented items

    Args:
        summary (dict): ordered report entries
        path (str): output file
    """
    lines = []
    for key, value in summary.items():
        if isinstance(value, (list, tuple)):
            lines.append(f"{key}:")
            lines.extend(f"  - {item}" for item in value)
        elif isinstance(value, float):
            lines.append(f"{key}: {FLOAT_FORMAT % value}")
        else:
            lines.append(f"{key}: {value}")
    with open(path, "w") as out:
        out.write("\n".join(lines) + "\n")
