import argparse
import sys
from pathlib import Path
from typing import List, Optional

from src.config.settings import settings
from src.domain.dt.models.dt_case import ALIASES, CASES, DtCase
from src.domain.fock.services.check_service import CHECKS
from src.domain.identities.models.report import IdentityReport
from src.domain.identities.services.identity_service import IDENTITY_IDS
from src.domain.partitions.models.partition import LegTriple
from src.domain.series.models.window import Window, to_twice
from src.infrastructure.cli.controllers import METHODS, CommandsController
from src.infrastructure.cli.dependencies import get_services
from src.infrastructure.serialization.json_codec import dumps, encode_report
from src.infrastructure.serialization.text_codec import render_text
from src.utils.exceptions import VertexError
from src.utils.logger import Logger

logger = Logger(__name__)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


# Flags whose values may start with "-" ("-;-;-", "-3/2").
ATTACHED_FLAGS = ("--legs", "--pmin", "--pmax")


def attach_values(argv: List[str]) -> List[str]:
    """Rewrites `--legs VALUE` as `--legs=VALUE` so argparse never reads VALUE as an option."""
    out: List[str] = []
    tokens = iter(argv)
    for token in tokens:
        if token in ATTACHED_FLAGS:
            value = next(tokens, None)
            out.append(token if value is None else f"{token}={value}")
        else:
            out.append(token)
    return out


def _window(args: argparse.Namespace, required: bool = False) -> Window:
    """--pmin/--pmax in p units; when omitted the window is [-2N, 2N]."""
    if args.pmin is None or args.pmax is None:
        if required:
            raise VertexError("--pmin and --pmax are both required for this command.")
        return Window.from_p(-2 * args.qmax, 2 * args.qmax)
    return Window.from_p(args.pmin, args.pmax)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vertex-trace",
        description="Exact checks of topological vertex, Fock space trace and DT series identities.",
    )
    parser.add_argument("--format", choices=("text", "json"), default="text")
    parser.add_argument("--jobs", type=int, default=None, help="worker processes (default: DEFAULT_JOBS)")
    parser.add_argument("--out", type=Path, default=None, help="write the report to a file instead of stdout")
    parser.add_argument("--version", action="version", version=settings.TOOL_VERSION)
    commands = parser.add_subparsers(dest="command", required=True)

    identity = commands.add_parser("identity", help="verify one of the generating-function identities")
    identity.add_argument("--id", type=int, choices=IDENTITY_IDS, required=True)
    identity.add_argument("--qmax", type=int, required=True)
    identity.add_argument("--pmin", required=True)
    identity.add_argument("--pmax", required=True)
    identity.add_argument("--awin", type=int, default=None, help="a-window radius for identity 5")
    identity.add_argument("--box-ratio", type=int, default=None, metavar="SIZE",
                          help="also compare the lambda-terms with box counting for |lambda| <= SIZE")

    vertex = commands.add_parser("vertex", help="compute a topological vertex")
    vertex.add_argument("--legs", required=True)
    vertex.add_argument("--method", choices=METHODS, default="both")
    vertex.add_argument("--pmax", required=True)

    enumerate3d = commands.add_parser("enumerate3d", help="count 3D partitions by renormalized volume")
    enumerate3d.add_argument("--legs", required=True)
    enumerate3d.add_argument("--budget", type=int, required=True)

    fock = commands.add_parser("fock", help="run a Fock space check")
    fock.add_argument("--check", choices=CHECKS, required=True)
    fock.add_argument("--emax", type=int, required=True)
    fock.add_argument("--qmax", type=int, required=True)
    fock.add_argument("--awin", type=int, required=True)
    fock.add_argument("--pmin", default=None)
    fock.add_argument("--pmax", default=None)

    bo = commands.add_parser("bo", help="check the one- and two-point correlators")
    bo.add_argument("--point", choices=("one", "two"), required=True)
    bo.add_argument("--qmax", type=int, required=True)
    bo.add_argument("--pmin", default=None)
    bo.add_argument("--pmax", default=None)

    dt = commands.add_parser("dt", help="build a DT series of the elliptic fibration")
    dt.add_argument("--case", choices=CASES + tuple(ALIASES), required=True)
    dt.add_argument("--genus", type=int, default=0)
    dt.add_argument("--qmax", type=int, required=True)
    dt.add_argument("--pmin", default=None)
    dt.add_argument("--pmax", default=None)
    dt.add_argument("--check-quotients", action="store_true")
    return parser


def dispatch(args: argparse.Namespace, controller: CommandsController) -> IdentityReport:
    if args.command == "identity":
        return controller.identity(args.id, args.qmax, _window(args, required=True), args.jobs, args.awin,
                                   args.box_ratio)
    if args.command == "vertex":
        return controller.vertex(LegTriple.parse(args.legs), args.method, to_twice(args.pmax), args.jobs)
    if args.command == "enumerate3d":
        return controller.enumerate3d(LegTriple.parse(args.legs), args.budget, args.jobs)
    if args.command == "fock":
        return controller.fock(args.check, args.emax, args.qmax, _window(args), args.awin)
    if args.command == "bo":
        return controller.bo(args.point, args.qmax, _window(args))
    case = DtCase.parse(args.case, args.genus)
    return controller.dt(case, args.qmax, _window(args), args.check_quotients)


def main(argv: Optional[List[str]] = None) -> int:
    """
    Runs one subcommand and writes its report.

    Returns:
        int: 0 when every requested check passes, 1 on a failed check, 2 on a usage error.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(attach_values(sys.argv[1:] if argv is None else list(argv)))
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_PASS

    try:
        if args.jobs is not None and args.jobs < 1:
            raise VertexError("--jobs must be at least 1.")
        report = dispatch(args, CommandsController(get_services()))
    except VertexError as exc:
        logger.error("%s failed: %s", args.command, exc.message)
        print(f"error: {exc.message}", file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        logger.error("%s failed: %s", args.command, exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    if args.format == "json":
        output = dumps(encode_report(report, settings.TOOL_VERSION)) + "\n"
    else:
        output = render_text(report, settings.TOOL_VERSION)
    if args.out is not None:
        args.out.write_text(output)
    else:
        sys.stdout.write(output)
    return EXIT_PASS if report.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
