"""Segmented influence diagram of the Goddard problem

Each segment i carries chance nodes V_i, M_i (speed and mass grid cells), a
decision U_i (control grid index) and the fuel utility f_i. The conditional
tables P(V_i+1, M_i+1 | V_i, M_i, U_i) come from one stepper application per
segment, spread over the bracketing grid cells so that expected successor
speed and mass equal the stepper output.
"""
import logging
import math
from dataclasses import dataclass
from multiprocessing import Pool

import numpy as np

from goddard_id.errors import UsageError, InfeasibleProblemError, DeadCellError
from goddard_id.logger import ProgressBar, error_callback
from goddard_id.solver.grids import locate
from goddard_id.solver.steppers import step_admissible

__all__ = [
    "SegmentPlan",
    "TransitionModel",
    "ValueTable",
    "Policy",
    "cell_distribution",
    "build_transitions",
    "solve",
    "expected_profile",
    "segment_utilities",
]

logger = logging.getLogger(__name__)

# Successor corners (dv, dm) in the order their terms are accumulated
CORNERS = ((0, 0), (1, 0), (0, 1), (1, 1))


def corner_weights(pv, pm):
    """Probabilities of the four successor corners, ordered as CORNERS"""
    return ((1.0 - pv) * (1.0 - pm), pv * (1.0 - pm), (1.0 - pv) * pm, pv * pm)


def cell_distribution(grids, v, m):
    """Bilinear spread of a continuous (v, m) over the speed and mass cells

    Returns:
        np.ndarray: [v_idx, m_idx] probabilities summing to 1
    """
    vw, mw = locate(grids.speed, v), locate(grids.mass, m)
    dist = np.zeros((grids.speed.n, grids.mass.n))
    for (dv, dm), w in zip(CORNERS, corner_weights(vw.p_hi, mw.p_hi)):
        dist[vw.idx_lo + dv, mw.idx_lo + dm] += w
    return dist


@dataclass(frozen=True)
class SegmentPlan:
    """Split of [h0, hT] into n_segments segments of length dh"""

    h0: float
    hT: float
    n_segments: int

    def __post_init__(self):
        if self.n_segments < 1:
            raise UsageError(f"At least one segment is required, got {self.n_segments}")
        if not self.h0 < self.hT:
            raise UsageError(f"h0 must be below hT, got [{self.h0}, {self.hT}]")

    @property
    def dh(self):
        return (self.hT - self.h0) / self.n_segments

    def h_of(self, i):
        """Altitude of segment boundary i, the last boundary is hT exactly"""
        if not 0 <= i <= self.n_segments:
            raise IndexError(f"Segment boundary {i} outside 0..{self.n_segments}")
        return self.hT if i == self.n_segments else self.h0 + i * self.dh

    @property
    def altitudes(self):
        return np.array([self.h_of(i) for i in range(self.n_segments + 1)])

    @classmethod
    def from_span(cls, h0, hT, dh, rel_tol=1e-9):
        """Plan with segments of length dh, which must divide hT - h0

        Raises:
            UsageError: dh does not divide the span within rel_tol
        """
        if not dh > 0:
            raise UsageError(f"Segment length must be positive, got {dh}")
        span = hT - h0
        n = int(round(span / dh))
        if n < 1 or abs(n * dh - span) > rel_tol * span:
            raise UsageError(f"Segment length {dh} does not divide the altitude span {span}")
        return cls(h0, hT, n)


@dataclass(frozen=True, eq=False)
class TransitionModel:
    """
    Conditional probability tables of every segment

    Arrays are indexed [segment, v_idx, m_idx, u_idx]. A feasible entry moves
    to the four cells (v_lo + dv, m_lo + dm) with corner_weights(v_w, m_w);
    an infeasible entry has feasible False and zero weights on (0, 0).

    Attributes
    ----------
    plan : SegmentPlan
    grids : Grids
    method : str
        stepper key used to build the tables
    v_lo, m_lo : np.ndarray of int32
        lower bracketing indices of the successor
    v_w, m_w : np.ndarray of float
        weights of the upper neighbours
    fuel : np.ndarray of float
        deterministic fuel burnt by the stepper, m - m_next
    feasible : np.ndarray of bool
        feasibility mask of (state, control)
    """

    plan: object
    grids: object
    method: str
    v_lo: np.ndarray
    v_w: np.ndarray
    m_lo: np.ndarray
    m_w: np.ndarray
    fuel: np.ndarray
    feasible: np.ndarray

    @property
    def n_segments(self):
        return self.plan.n_segments

    def successors(self, i, iv, im, iu):
        """Sparse successor distribution of one table row

        Returns:
            list: [((v_idx, m_idx), probability), ...], empty if infeasible
        """
        if not self.feasible[i, iv, im, iu]:
            return []
        v_lo, m_lo = int(self.v_lo[i, iv, im, iu]), int(self.m_lo[i, iv, im, iu])
        weights = corner_weights(float(self.v_w[i, iv, im, iu]), float(self.m_w[i, iv, im, iu]))
        return [((v_lo + dv, m_lo + dm), w) for (dv, dm), w in zip(CORNERS, weights) if w > 0]

    def row_totals(self, i):
        """Sum of every table row of segment i, 0 for infeasible rows"""
        w = corner_weights(self.v_w[i], self.m_w[i])
        return np.where(self.feasible[i], w[0] + w[1] + w[2] + w[3], 0.0)

    def expected_successor(self, i):
        """Expected successor speed and mass of every row of segment i"""
        vp, mp = self.grids.speed.points, self.grids.mass.points
        v_lo, m_lo = self.v_lo[i], self.m_lo[i]
        e_v = (1.0 - self.v_w[i]) * vp[v_lo] + self.v_w[i] * vp[v_lo + 1]
        e_m = (1.0 - self.m_w[i]) * mp[m_lo] + self.m_w[i] * mp[m_lo + 1]
        return e_v, e_m


def _build_segment(i, h, dh, terminal, grids, stepper, p):
    """Tables of one segment, a pure function of its arguments"""
    v = grids.speed.points[:, None, None]
    m = grids.mass.points[None, :, None]
    u = grids.control.points[None, None, :]
    res = stepper.step_batch(h, m, v, u, dh, p)
    feasible = step_admissible(res, terminal, p)
    v_next = np.where(feasible, res.v_next, grids.speed.lo)
    m_next = np.where(feasible, res.m_next, grids.mass.lo)
    vw, mw = locate(grids.speed, v_next), locate(grids.mass, m_next)
    v_w = np.where(feasible, vw.p_hi, 0.0)
    m_w = np.where(feasible, mw.p_hi, 0.0)
    v_lo = np.where(feasible, vw.idx_lo, 0).astype(np.int32)
    m_lo = np.where(feasible, mw.idx_lo, 0).astype(np.int32)
    fuel = np.where(feasible, np.broadcast_to(m, feasible.shape) - m_next, 0.0)
    return i, (v_lo, v_w, m_lo, m_w, fuel, feasible)


def build_transitions(plan, grids, stepper, p, threads=1, progress=False):
    """Build the conditional probability tables of every segment

    Args:
        plan (SegmentPlan): altitude segments
        grids (Grids): speed, mass and control grids
        stepper (Stepper): segment integrator
        p (ModelParams): model constants
        threads (int, optional): worker processes. Defaults to 1.
        progress (bool, optional): show a progress bar. Defaults to False.

    Returns:
        TransitionModel: tables of all segments
    """
    n = plan.n_segments
    shape = (n, grids.speed.n, grids.mass.n, grids.control.n)
    tables = {
        "v_lo": np.zeros(shape, dtype=np.int32),
        "v_w": np.zeros(shape),
        "m_lo": np.zeros(shape, dtype=np.int32),
        "m_w": np.zeros(shape),
        "fuel": np.zeros(shape),
        "feasible": np.zeros(shape, dtype=bool),
    }
    prog = ProgressBar(total=n, label="Building CPTs ") if progress else None

    def store(ret):
        i, arrays = ret
        for key, arr in zip(tables, arrays):
            tables[key][i] = arr
        if prog is not None:
            prog.process(1)

    jobs = [(i, plan.h_of(i), plan.dh, i == n - 1, grids, stepper, p) for i in range(n)]
    logger.debug(f"Building {n} segments of {np.prod(shape[1:])} (state, control) pairs with {stepper.key}")
    if threads > 1:
        pool = Pool(threads)
        results = [pool.apply_async(_build_segment, job, callback=store, error_callback=error_callback) for job in jobs]
        pool.close()
        pool.join()
        for res in results:
            # re-raise worker failures
            res.get()
    else:
        for job in jobs:
            store(_build_segment(*job))
    if prog is not None:
        prog.close()

    n_feasible = int(tables["feasible"].sum())
    logger.info(f"Transition tables: {n_feasible}/{tables['feasible'].size} feasible (state, control) pairs")
    return TransitionModel(plan=plan, grids=grids, method=stepper.key, **tables)


@dataclass(frozen=True, eq=False)
class ValueTable:
    """
    Optimal expected terminal mass of every segment boundary and cell

    Attributes
    ----------
    values : np.ndarray
        [boundary, v_idx, m_idx], NaN at dead cells
    alive : np.ndarray of bool
        False marks dead cells, from which no control sequence is feasible
    """

    values: np.ndarray
    alive: np.ndarray

    def value(self, i, iv, im):
        """Value of a cell, None if dead"""
        return float(self.values[i, iv, im]) if self.alive[i, iv, im] else None

    def interpolate(self, grids, i, v, m):
        """Bilinear value of a continuous state on boundary i

        Returns:
            float: weighted value of the bracketing cells, NaN if one of them
                with a positive weight is dead
        """
        dist = cell_distribution(grids, v, m)
        support = dist > 0
        if np.any(support & ~self.alive[i]):
            return math.nan
        return float((dist[support] * self.values[i][support]).sum())


@dataclass(frozen=True, eq=False)
class Policy:
    """
    Optimal control of every segment and cell

    Attributes
    ----------
    control_idx : np.ndarray of int
        [segment, v_idx, m_idx], -1 at dead cells
    controls : np.ndarray
        control grid points
    """

    control_idx: np.ndarray
    controls: np.ndarray

    DEAD = -1

    def control(self, i, iv, im):
        """Control value prescribed at a cell, None if dead"""
        k = int(self.control_idx[i, iv, im])
        return None if k == self.DEAD else float(self.controls[k])


def _tie_break_order(controls):
    """Control indices by increasing |u|, then increasing index"""
    return np.array(sorted(range(len(controls)), key=lambda k: (abs(controls[k]), k)))


def _segment_q(tm, i, target, alive_next):
    """Expected target value of every (cell, control) of segment i

    Entries with a positive weight on a dead successor are not admissible.

    Returns:
        (np.ndarray, np.ndarray): expectations and admissibility mask
    """
    v_lo, m_lo = tm.v_lo[i], tm.m_lo[i]
    filled = np.where(alive_next, target, 0.0)
    q = 0.0
    admissible = tm.feasible[i].copy()
    for (dv, dm), w in zip(CORNERS, corner_weights(tm.v_w[i], tm.m_w[i])):
        admissible &= (w == 0) | alive_next[v_lo + dv, m_lo + dm]
        q = q + w * filled[v_lo + dv, m_lo + dm]
    return q, admissible


def solve(tm, objective="terminal"):
    """Backward induction over the segments

    J_N(cell) is the mass of the cell and J_i(cell) = max_u E[J_i+1]. Ties go
    to the control of smaller |u|, then to the lower index.

    Args:
        tm (TransitionModel): conditional tables
        objective (str, optional): "terminal" maximizes E[M_N]; "fuel"
            maximizes the sum of -f_i, which selects the same controls.

    Raises:
        InfeasibleProblemError: every cell of the first layer is dead

    Returns:
        (ValueTable, Policy): optimal values and controls
    """
    if objective not in ("terminal", "fuel"):
        raise UsageError(f"Unknown objective {objective}, expected terminal or fuel")
    n = tm.n_segments
    nv, nm = tm.grids.speed.n, tm.grids.mass.n
    masses = tm.grids.mass.points
    cell_mass = np.broadcast_to(masses[None, :], (nv, nm))
    controls = tm.grids.control.points
    order = _tie_break_order(controls)

    values = np.full((n + 1, nv, nm), np.nan)
    alive = np.zeros((n + 1, nv, nm), dtype=bool)
    control_idx = np.full((n, nv, nm), Policy.DEAD, dtype=int)

    alive[n] = True
    target = cell_mass.copy() if objective == "terminal" else np.zeros((nv, nm))
    values[n] = target

    for i in reversed(range(n)):
        q, admissible = _segment_q(tm, i, target, alive[i + 1])
        if objective == "fuel":
            # sum of -f_i over the remaining segments, f_i = E[M_i] - E[M_i+1]
            e_m, _ = _segment_q(tm, i, cell_mass, alive[i + 1])
            q = q + (e_m - cell_mass[:, :, None])
        q = np.where(admissible, q, -np.inf)
        best = np.argmax(q[:, :, order], axis=-1)
        chosen = order[best]
        best_q = np.take_along_axis(q, chosen[:, :, None], axis=-1)[:, :, 0]
        alive[i] = np.any(admissible, axis=-1)
        control_idx[i] = np.where(alive[i], chosen, Policy.DEAD)
        target = np.where(alive[i], best_q, 0.0)
        values[i] = np.where(alive[i], best_q, np.nan)
        logger.debug(f"Segment {i}: {int(alive[i].sum())}/{nv * nm} live cells")

    if not alive[0].any():
        raise InfeasibleProblemError("Problem infeasible at this discretization: every initial cell is dead")
    if objective == "fuel":
        values = np.where(alive, values + cell_mass[None, :, :], np.nan)
    return ValueTable(values, alive), Policy(control_idx, controls)


def expected_profile(tm, pol, start, boundary=0):
    """Propagate the policy-induced distribution through the tables

    Args:
        tm (TransitionModel): conditional tables
        pol (Policy): policy from solve
        start (tuple or np.ndarray): (v_idx, m_idx) start cell, or a
            [v_idx, m_idx] distribution over the cells of the start boundary
        boundary (int, optional): start boundary. Defaults to 0.

    Raises:
        DeadCellError: the distribution reaches a dead cell

    Returns:
        (np.ndarray, np.ndarray): expected speed and mass at boundaries
            boundary .. N
    """
    nv, nm = tm.grids.speed.n, tm.grids.mass.n
    vp, mp = tm.grids.speed.points, tm.grids.mass.points
    if isinstance(start, np.ndarray):
        dist = np.asarray(start, dtype=float).copy()
    else:
        dist = np.zeros((nv, nm))
        dist[tuple(start)] = 1.0
    e_v, e_m = [], []
    for i in range(boundary, tm.n_segments + 1):
        e_v.append(float((dist * vp[:, None]).sum()))
        e_m.append(float((dist * mp[None, :]).sum()))
        if i == tm.n_segments:
            break
        iv, im = np.nonzero(dist)
        ku = pol.control_idx[i, iv, im]
        if np.any(ku == Policy.DEAD):
            raise DeadCellError(f"Policy reaches a dead cell at segment {i}")
        v_lo, m_lo = tm.v_lo[i, iv, im, ku], tm.m_lo[i, iv, im, ku]
        nxt = np.zeros_like(dist)
        for (dv, dm), w in zip(CORNERS, corner_weights(tm.v_w[i, iv, im, ku], tm.m_w[i, iv, im, ku])):
            np.add.at(nxt, (v_lo + dv, m_lo + dm), dist[iv, im] * w)
        dist = nxt
    return np.array(e_v), np.array(e_m)


def segment_utilities(tm, vt, pol, start_cell):
    """Expected fuel f_i = E[M_i - M_i+1] of every segment under the policy

    Args:
        tm (TransitionModel): conditional tables
        vt (ValueTable): values from solve
        pol (Policy): policy from solve
        start_cell (tuple): (v_idx, m_idx) at the first boundary

    Raises:
        DeadCellError: start cell is dead

    Returns:
        list: f_1 .. f_N
    """
    if not vt.alive[0][tuple(start_cell)]:
        raise DeadCellError(f"Start cell {tuple(start_cell)} is dead")
    _, e_m = expected_profile(tm, pol, start_cell)
    return [float(x) for x in e_m[:-1] - e_m[1:]]
