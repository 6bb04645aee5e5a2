from .tableau import ButcherTableau, EULER, RK4, GAUSS_LEGENDRE_2, TABLEAUS
from .steppers import (ImplicitSolveConfig, StepResult, BatchStep, Stepper, euler_step, rk_step, batch_step,
                       fixed_point_stages, feasible_controls, step_admissible, get_stepper)
from .grids import UniformGrid, GridWeights, Grids, locate, nearest, default_grids
from .diagram import (SegmentPlan, TransitionModel, ValueTable, Policy, cell_distribution, build_transitions, solve,
                      expected_profile, segment_utilities)
from .liftoff import LaunchDecision, lift_off, solve_launch
from .rollout import (Trajectory, Subarc, SUBARC_KINDS, initial_state, start_boundary, simulate, launch,
                      subarc_classify, pilot_max_speed, check_speed_range)

__all__ = [
    "ButcherTableau",
    "EULER",
    "RK4",
    "GAUSS_LEGENDRE_2",
    "TABLEAUS",

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

    "UniformGrid",
    "GridWeights",
    "Grids",
    "locate",
    "nearest",
    "default_grids",

    "SegmentPlan",
    "TransitionModel",
    "ValueTable",
    "Policy",
    "cell_distribution",
    "build_transitions",
    "solve",
    "expected_profile",
    "segment_utilities",

    "LaunchDecision",
    "lift_off",
    "solve_launch",

    "Trajectory",
    "Subarc",
    "SUBARC_KINDS",
    "initial_state",
    "start_boundary",
    "simulate",
    "launch",
    "subarc_classify",
    "pilot_max_speed",
    "check_speed_range",
]
