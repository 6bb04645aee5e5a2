"""Command line interface of goddard-id"""
import argparse
import logging
import sys

from goddard_id.version import __version__
from goddard_id.errors import (GoddardError, UsageError, InfeasibleProblemError, DeadCellError, GridRangeError,
                               InfeasibleStepError, ImplicitSolveError, ProfileLoadError, SpanMismatchError,
                               FileConflictError)
from goddard_id.logger import get_logger
from goddard_id.models.dynamics import ModelParams
from goddard_id.solver.steppers import ImplicitSolveConfig
from goddard_id.solver.tableau import TABLEAUS
from goddard_id.parser.runspec import RunSpec, parse_runspec
from goddard_id.parser.profile import load_reference, check_span, write_trajectory
from goddard_id.analysis.convergence import convergence_study
from goddard_id.analysis.sweep import sweep_table
from goddard_id.pipeline import solve_run, write_run
from goddard_id.utils.io import staged_outputs
from goddard_id.utils.text import FLOAT_FORMAT

__all__ = [
    "EXIT_OK",
    "EXIT_USAGE",
    "EXIT_INFEASIBLE",
    "EXIT_IO",
    "build_parser",
    "main",
]

logger = logging.getLogger('goddard_id')

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INFEASIBLE = 2
EXIT_IO = 3

# flag -> ModelParams field
PARAM_FLAGS = {
    "--beta": "beta",
    "--s-rho0": "s_rho0",
    "--cd": "c_d",
    "--c": "c",
    "--u-min": "u_min",
    "--h0": "h0",
    "--ht": "hT",
    "--m-payload": "m_payload",
    "--v-eps": "v_eps",
    "--v-max": "v_max",
}


class _ArgumentParser(argparse.ArgumentParser):
    """ArgumentParser raising UsageError instead of exiting"""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: {message}")


def _add_common(parser):
    parser.add_argument("--verbose", action="store_true", help="log debug messages")
    parser.add_argument("--log", metavar="FILE", default=None, help="also write the log to FILE")


def _add_model(parser):
    group = parser.add_argument_group("model constants (defaults reproduce the bounded-thrust instance)")
    for flag, field in PARAM_FLAGS.items():
        group.add_argument(flag, dest=field, type=float, default=None, metavar="X",
                           help=f"override {field} (default {getattr(ModelParams(), field)})")
    group.add_argument("--implicit-tol", type=float, default=ImplicitSolveConfig.tol,
                       help="residual tolerance of implicit stages")
    group.add_argument("--implicit-max-iter", type=int, default=ImplicitSolveConfig.max_iter,
                       help="iteration cap of implicit stages")
    group.add_argument("--damping", type=float, default=ImplicitSolveConfig.damping,
                       help="relaxation of the implicit fixed point, in (0, 1]")
    parser.add_argument("--v-start", type=float, default=None,
                        help="start the rollout in flight at h0 with this speed instead of lifting off from rest")
    parser.add_argument("-t", "--threads", type=int, default=1, help="worker processes building the tables")


def build_parser():
    """Argument parser of the goddard-id command"""
    parser = _ArgumentParser(prog="goddard-id",
                             description="Bounded-thrust Goddard rocket solved as a segmented influence diagram")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="command", parser_class=_ArgumentParser)
    sub.required = True

    run = sub.add_parser("run", help="solve one run and write its profiles")
    run.add_argument("name", nargs="?", default=None, help="run name <nv>.<nu>.<nm>.<METHOD>.<dh>")
    run.add_argument("--nv", type=int, help="speed states")
    run.add_argument("--nu", type=int, help="control states")
    run.add_argument("--nm", type=int, help="mass states")
    run.add_argument("--method", choices=list(TABLEAUS), help="stepper")
    run.add_argument("--dh", type=float, help="segment length")
    run.add_argument("-r", "--reference", default=None, help="reference profile CSV with columns h,u,v,m")
    run.add_argument("-o", "--out", default=".", help="output directory")
    run.add_argument("--expected", action="store_true", help="also write the expected profile through the tables")
    _add_model(run)
    _add_common(run)

    conv = sub.add_parser("convergence", help="order-of-convergence study of a stepper")
    conv.add_argument("--method", choices=list(TABLEAUS), required=True, help="stepper")
    conv.add_argument("--steps", type=int, nargs="+", default=[2, 4, 8, 16], help="increasing step counts")
    conv.add_argument("-o", "--out", default=None, help="also write the table to this CSV")
    _add_common(conv)

    parse = sub.add_parser("parse", help="echo a parsed run name")
    parse.add_argument("name", help="run name <nv>.<nu>.<nm>.<METHOD>.<dh>")
    _add_common(parse)

    sweep = sub.add_parser("sweep", help="solve several runs and compare them with one reference")
    sweep.add_argument("names", nargs="+", help="run names")
    sweep.add_argument("-r", "--reference", required=True, help="reference profile CSV with columns h,u,v,m")
    sweep.add_argument("-o", "--out", default=".", help="output directory")
    _add_model(sweep)
    _add_common(sweep)

    return parser


def _run_spec(args):
    fields = [args.nv, args.nu, args.nm, args.method, args.dh]
    if args.name is not None:
        if any(x is not None for x in fields):
            raise UsageError("give either a run name or --nv/--nu/--nm/--method/--dh, not both")
        return parse_runspec(args.name)
    if any(x is None for x in fields):
        raise UsageError("a run name or all of --nv, --nu, --nm, --method, --dh is required")
    return RunSpec(*fields)


def _params(args):
    return ModelParams.from_mapping({field: getattr(args, field) for field in PARAM_FLAGS.values()})


def _config(args):
    return ImplicitSolveConfig(args.implicit_tol, args.implicit_max_iter, args.damping)


def _cmd_run(args):
    spec = _run_spec(args)
    p = _params(args)
    reference = load_reference(args.reference) if args.reference is not None else None
    if reference is not None:
        check_span(reference.trajectory, p.h0, p.hT)
    result = solve_run(spec, p, threads=args.threads, v_start=args.v_start, config=_config(args),
                       progress=args.verbose)
    write_run(result, args.out, reference=reference, expected=args.expected)
    return EXIT_OK


def _cmd_convergence(args):
    report = convergence_study(args.method, n_steps=args.steps)
    sys.stdout.write(report.table.to_string(index=False, float_format=lambda x: f"{x:.6e}") + "\n")
    sys.stdout.write(f"fitted order: {report.slope:.4f}\n")
    if args.out is not None:
        report.table.to_csv(args.out, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return EXIT_OK


def _cmd_parse(args):
    spec = parse_runspec(args.name)
    for key in ("nv", "nu", "nm", "method", "dh"):
        sys.stdout.write(f"{key}: {getattr(spec, key)!r}\n" if key == "dh" else f"{key}: {getattr(spec, key)}\n")
    sys.stdout.write(f"name: {spec.name}\n")
    return EXIT_OK


def _cmd_sweep(args):
    specs = [parse_runspec(name) for name in args.names]
    p = _params(args)
    reference = load_reference(args.reference)
    check_span(reference.trajectory, p.h0, p.hT)
    results = [solve_run(spec, p, threads=args.threads, v_start=args.v_start, config=_config(args)) for spec in specs]
    table = sweep_table([r.trajectory for r in results], reference.trajectory)
    with staged_outputs(args.out) as stage:
        for r in results:
            write_trajectory(r.trajectory, stage.path(f"{r.name}.trajectory.csv"))
        table.to_csv(stage.path("sweep.compare.csv"), index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    logger.info(f"Compared {len(results)} runs with {reference.label}")
    return EXIT_OK


COMMANDS = {
    "run": _cmd_run,
    "convergence": _cmd_convergence,
    "parse": _cmd_parse,
    "sweep": _cmd_sweep,
}


def main(argv=None):
    """Entry point of goddard-id, returns the exit status

    0 success, 1 usage or parse error, 2 infeasible discretization, 3 IO error
    """
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        sys.stderr.write(f"{e}\n")
        return EXIT_USAGE
    except SystemExit as e:
        # --help and --version
        return e.code if isinstance(e.code, int) else EXIT_OK

    try:
        get_logger('goddard_id', fname=args.log, verbosity=args.verbose)
        return COMMANDS[args.command](args)
    except (InfeasibleProblemError, DeadCellError, GridRangeError, InfeasibleStepError, ImplicitSolveError) as e:
        logger.error(str(e))
        return EXIT_INFEASIBLE
    except (ProfileLoadError, SpanMismatchError, FileConflictError, OSError) as e:
        logger.error(str(e))
        return EXIT_IO
    except (UsageError, ValueError, GoddardError) as e:
        logger.error(str(e))
        return EXIT_USAGE


if __name__ == '__main__':
    sys.exit(main())
