"""Segment integrators for the (m, v) system under constant control

One step advances mass and speed over an altitude segment of length dh:

    m(h' + dh) = m' + dh * sum_i w_i * l_i
    v(h' + dh) = v' + dh * sum_i w_i * k_i

with l_i = g(u, V_i), k_i = f(h' + z_i dh, M_i, u, V_i) and the stage values
V_i = v' + dh * sum_j a_ij k_j, M_i = m' + dh * sum_j a_ij l_j. Explicit
tableaus evaluate the stages in order; implicit ones iterate on k.
"""
from collections import namedtuple
from dataclasses import dataclass, field

import numpy as np

from goddard_id.errors import DomainError, InfeasibleStepError, ImplicitSolveError, UsageError
from goddard_id.models.dynamics import _mass_rate, _speed_rate, mass_rate, speed_rate
from goddard_id.solver.tableau import TABLEAUS

__all__ = [
    "ImplicitSolveConfig",
    "StepResult",
    "BatchStep",
    "Stepper",
    "euler_step",
    "rk_step",
    "batch_step",
    "fixed_point_stages",
    "feasible_controls",
    "step_admissible",
    "get_stepper",
]

StepResult = namedtuple("StepResult", "m_next v_next stages_used")

# ok: stages stayed feasible and implicit stages converged
BatchStep = namedtuple("BatchStep", "m_next v_next ok n_iter")


@dataclass(frozen=True)
class ImplicitSolveConfig:
    """Damped fixed-point iteration of implicit stage slopes

    Attributes:
        tol (float): Max-norm residual tolerance, relative to 1 + |k|
        max_iter (int): Iteration cap
        damping (float): Relaxation factor in (0, 1]
    """

    tol: float = 1e-12
    max_iter: int = 100
    damping: float = 1.0

    def __post_init__(self):
        if not self.tol > 0:
            raise UsageError(f"tol must be positive, got {self.tol}")
        if self.max_iter < 1:
            raise UsageError(f"max_iter must be >= 1, got {self.max_iter}")
        if not 0 < self.damping <= 1:
            raise UsageError(f"damping must lie in (0, 1], got {self.damping}")


def _weighted(coeffs, stages):
    """sum_j coeffs[j] * stages[j], accumulated in stage order"""
    total = 0.0
    for c, x in zip(coeffs, stages):
        if c != 0:
            total = total + c * x
    return total


def fixed_point_stages(stage_slopes, k0, cfg):
    """Solve k = F(k) by damped fixed-point iteration

    Iterates elementwise over the trailing axes of k0, the first axis holds
    the stages. Elements with non-finite iterates never converge.

    Args:
        stage_slopes (callable): F, maps an (s, ...) array of slopes to a new one
        k0 (np.ndarray): initial slopes, shape (s, ...)
        cfg (ImplicitSolveConfig): iteration settings

    Returns:
        (np.ndarray, int, np.ndarray, np.ndarray): slopes, iterations used,
        converged mask and last residual, the last two of shape k0.shape[1:]
    """
    k = np.array(k0, dtype=float)
    residual = np.full(k.shape[1:], np.inf)
    converged = np.zeros(k.shape[1:], dtype=bool)
    n_iter = 0
    with np.errstate(all="ignore"):
        for n_iter in range(1, cfg.max_iter + 1):
            k_new = stage_slopes(k)
            delta = k_new - k
            residual = np.max(np.abs(delta), axis=0)
            k = k + cfg.damping * delta
            converged = residual <= cfg.tol * (1.0 + np.max(np.abs(k), axis=0))
            if np.all(converged | ~np.isfinite(residual)):
                break
    return k, n_iter, converged, residual


def batch_step(tab, h, m, v, u, dh, p, cfg=ImplicitSolveConfig()):
    """Advance many (h, m, v, u) combinations by one segment

    Inputs broadcast against each other. Infeasible elements are flagged in
    ``ok`` instead of raising; their m_next / v_next are meaningless.

    Args:
        tab (ButcherTableau): integrator
        h, m, v, u (float or np.ndarray): segment start and control
        dh (float): segment length
        p (ModelParams): model constants
        cfg (ImplicitSolveConfig, optional): implicit stage settings

    Returns:
        BatchStep: m_next, v_next, ok mask, implicit iterations (0 if explicit)
    """
    h, m, v, u = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (h, m, v, u)))
    a, z = tab.a, tab.z
    with np.errstate(all="ignore"):
        ok = (v > 0) & (m >= p.m_payload)
        if tab.is_explicit:
            ell, k = [], []
            for i in range(tab.s):
                v_i = v + dh * _weighted(a[i, :i], k)
                ell.append(_mass_rate(u, v_i, p))
                m_i = m + dh * _weighted(a[i, :i], ell)
                ok &= (v_i > 0) & (m_i >= p.m_payload)
                k.append(_speed_rate(h + z[i] * dh, m_i, u, v_i, p))
            n_iter = 0
        else:
            h_stage = h + z.reshape((-1,) + (1,) * h.ndim) * dh

            def stage_slopes(k):
                v_stage = v + dh * np.tensordot(a, k, axes=1)
                m_stage = m + dh * np.tensordot(a, _mass_rate(u, v_stage, p), axes=1)
                return _speed_rate(h_stage, m_stage, u, v_stage, p)

            k0 = np.broadcast_to(_speed_rate(h, m, u, v, p), (tab.s,) + h.shape)
            k, n_iter, converged, _ = fixed_point_stages(stage_slopes, k0, cfg)
            v_stage = v + dh * np.tensordot(a, k, axes=1)
            ell = _mass_rate(u, v_stage, p)
            m_stage = m + dh * np.tensordot(a, ell, axes=1)
            ok &= converged & np.all(v_stage > 0, axis=0) & np.all(m_stage >= p.m_payload, axis=0)
        m_next = m + dh * _weighted(tab.w, ell)
        v_next = v + dh * _weighted(tab.w, k)
        ok &= np.isfinite(m_next) & np.isfinite(v_next)
    return BatchStep(m_next, v_next, ok, n_iter)


def _check_start(start, dh):
    if dh < 0:
        raise UsageError(f"Segment length must be non-negative, got {dh}")
    if not start.v > 0:
        raise DomainError(f"Speed must be positive at the segment start, got {start.v}")
    if not start.m > 0:
        raise DomainError(f"Mass must be positive at the segment start, got {start.m}")
    if start.h < 1:
        raise DomainError(f"Segment must start at or above the surface (h >= 1), got {start.h}")


def euler_step(start, u, dh, p):
    """One explicit Euler step

    Args:
        start (RocketState): segment start
        u (float): control held over the segment
        dh (float): segment length
        p (ModelParams): model constants

    Returns:
        StepResult: mass and speed at h + dh
    """
    _check_start(start, dh)
    m_next = start.m + dh * mass_rate(u, start.v, p)
    v_next = start.v + dh * speed_rate(start.h, start.m, u, start.v, p)
    return StepResult(float(m_next), float(v_next), 0)


def rk_step(start, u, dh, tab, p, cfg=ImplicitSolveConfig()):
    """One Runge-Kutta step given by a Butcher tableau

    Args:
        start (RocketState): segment start
        u (float): control held over the segment
        dh (float): segment length
        tab (ButcherTableau): integrator
        p (ModelParams): model constants
        cfg (ImplicitSolveConfig, optional): implicit stage settings

    Raises:
        DomainError: start speed or mass not positive
        InfeasibleStepError: a stage speed <= 0 or a stage mass < m_p
        ImplicitSolveError: implicit stages did not converge

    Returns:
        StepResult: mass and speed at h + dh, implicit iterations used
    """
    _check_start(start, dh)
    h, m, v = float(start.h), float(start.m), float(start.v)
    a, z = tab.a, tab.z
    with np.errstate(all="ignore"):
        if tab.is_explicit:
            ell, k = [], []
            for i in range(tab.s):
                v_i = v + dh * _weighted(a[i, :i], k)
                if not v_i > 0:
                    raise InfeasibleStepError(f"Stage {i} speed {v_i} is not positive")
                ell.append(_mass_rate(u, v_i, p))
                m_i = m + dh * _weighted(a[i, :i], ell)
                if not m_i >= p.m_payload:
                    raise InfeasibleStepError(f"Stage {i} mass {m_i} is below the payload {p.m_payload}")
                k.append(_speed_rate(h + z[i] * dh, m_i, u, v_i, p))
            n_iter = 0
        else:
            h_stage = h + z * dh

            def stage_slopes(k):
                v_stage = v + dh * (a @ k)
                m_stage = m + dh * (a @ _mass_rate(u, v_stage, p))
                return _speed_rate(h_stage, m_stage, u, v_stage, p)

            k0 = np.full(tab.s, _speed_rate(h, m, u, v, p))
            k, n_iter, converged, residual = fixed_point_stages(stage_slopes, k0, cfg)
            if not np.all(np.isfinite(k)):
                raise InfeasibleStepError("Implicit stages left the region v > 0")
            if not converged:
                raise ImplicitSolveError(float(residual), n_iter)
            v_stage = v + dh * (a @ k)
            if np.any(v_stage <= 0):
                raise InfeasibleStepError(f"Stage speeds {v_stage} are not all positive")
            ell = _mass_rate(u, v_stage, p)
            m_stage = m + dh * (a @ ell)
            if np.any(m_stage < p.m_payload):
                raise InfeasibleStepError(f"Stage masses {m_stage} fall below the payload {p.m_payload}")
        m_next = m + dh * _weighted(tab.w, ell)
        v_next = v + dh * _weighted(tab.w, k)
    return StepResult(float(m_next), float(v_next), n_iter)


@dataclass(frozen=True)
class Stepper:
    """A named segment integrator, picklable for worker processes

    Attributes:
        key (str): run-name key, one of E, RK, G
        config (ImplicitSolveConfig): implicit stage settings
    """

    key: str
    config: ImplicitSolveConfig = field(default_factory=ImplicitSolveConfig)

    def __post_init__(self):
        if self.key not in TABLEAUS:
            raise UsageError(f"unknown method {self.key}, expected one of {', '.join(TABLEAUS)}")

    @property
    def tableau(self):
        return TABLEAUS[self.key]

    def step(self, start, u, dh, p):
        """Scalar step, see rk_step"""
        return rk_step(start, u, dh, self.tableau, p, self.config)

    def step_batch(self, h, m, v, u, dh, p):
        """Vectorized step, see batch_step"""
        return batch_step(self.tableau, h, m, v, u, dh, p, self.config)


def get_stepper(key, config=None):
    """Stepper for a method key E (Euler), RK (RK4) or G (Gauss-Legendre)"""
    return Stepper(key, config if config is not None else ImplicitSolveConfig())


def feasible_controls(start, dh, candidates, terminal, stepper, p):
    """Controls whose one-segment step respects the path constraints

    A control is kept if the step ends with m >= m_p and v > 0, or v >= 0 on
    the segment ending at the terminal altitude. Steps whose stages leave the
    feasible region or whose implicit stages do not converge are dropped.

    Args:
        start (RocketState): segment start
        dh (float): segment length
        candidates (list): controls in [u_min, 0]
        terminal (bool): the segment ends at hT
        stepper (Stepper): integrator
        p (ModelParams): model constants

    Returns:
        list: feasible subset of candidates, in input order
    """
    candidates = list(candidates)
    if not candidates:
        return []
    res = stepper.step_batch(start.h, start.m, start.v, np.asarray(candidates, dtype=float), dh, p)
    keep = step_admissible(res, terminal, p)
    return [u for u, flag in zip(candidates, keep) if flag]


def step_admissible(res, terminal, p):
    """Feasibility mask of a BatchStep"""
    with np.errstate(invalid="ignore"):
        speed_ok = res.v_next >= 0 if terminal else res.v_next > 0
        return res.ok & (res.m_next >= p.m_payload) & speed_ok
