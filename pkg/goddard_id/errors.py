"""Exceptions raised by goddard_id"""

__all__ = [
    "GoddardError",
    "UsageError",
    "DomainError",
    "InfeasibleStepError",
    "ImplicitSolveError",
    "InfeasibleProblemError",
    "DeadCellError",
    "RolloutError",
    "GridRangeError",
    "RunSpecError",
    "ProfileLoadError",
    "SpanMismatchError",
    "FileConflictError",
]


class GoddardError(Exception):
    """Base class of all goddard_id errors"""
    pass


class UsageError(GoddardError, ValueError):
    """Invalid arguments, counts or run options"""
    pass


class DomainError(GoddardError, ValueError):
    """Dynamics evaluated outside their domain (v <= 0 or m <= 0)"""
    pass


class InfeasibleStepError(GoddardError):
    """A stepper stage left the feasible region (v <= 0 or m < m_p)"""
    pass


class ImplicitSolveError(GoddardError):
    """Fixed-point iteration of implicit stages did not converge"""

    def __init__(self, residual, n_iter):
        self.residual = residual
        self.n_iter = n_iter
        super().__init__(f"Implicit stages did not converge after {n_iter} iterations, residual {residual:.3e}")


class InfeasibleProblemError(GoddardError):
    """No initial cell has a feasible control sequence at this discretization"""
    pass


class DeadCellError(GoddardError):
    """A dead cell was used where a live one is required"""
    pass


class RolloutError(DeadCellError):
    """Rollout could not continue at the given segment"""

    def __init__(self, segment, reason):
        self.segment = segment
        super().__init__(f"Rollout failed at segment {segment}: {reason}")


class GridRangeError(GoddardError):
    """A produced trajectory left the range of the speed grid"""
    pass


class RunSpecError(UsageError):
    """Malformed run name"""
    pass


class ProfileLoadError(GoddardError):
    """Malformed profile CSV"""

    def __init__(self, message, row=None):
        self.row = row
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)


class SpanMismatchError(GoddardError):
    """Altitude spans of two profiles do not match"""
    pass


class FileConflictError(GoddardError):
    """Directory name conflict with existed files"""
    pass
