"""
Command line entry point: python -m dualgraph.main <command> FILE [options]
"""
from typing import List, Optional
import argparse
import logging
import sys

from dualgraph.analyzer import ReportBuilder, render_json, render_text
from dualgraph.config import configure_logging, get_settings
from dualgraph.errors import DualGraphError, InputError, InvalidCycle
from dualgraph.flat_morphism import FiniteFlatMorphism
from dualgraph.graph_core import Cycle, fundamental_cycles
from dualgraph.loader import (
    COVERING, COVERING_MORPHISM, GRAPH, MORPHISM, DocumentLoader,
)

logger = logging.getLogger("dualgraph.main")

COMMANDS = ("validate", "homology", "lift", "push", "pull", "dims", "morphism-check", "functorial-check")

# document kinds each command accepts
ACCEPTED_KINDS = {
    "homology": (GRAPH,),
    "lift": (MORPHISM,),
    "push": (MORPHISM,),
    "pull": (MORPHISM,),
    "dims": (COVERING,),
    "morphism-check": (MORPHISM, COVERING_MORPHISM),
    "functorial-check": (COVERING_MORPHISM,),
}


def seed_value(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}")
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("file", help="JSON input file")
    common.add_argument("--format", choices=("text", "json"), default="text", help="report format")
    common.add_argument("--no-matrices", action="store_true", help="leave matrices out of the report")

    parser = argparse.ArgumentParser(
        prog="dualgraph",
        description="Homology of dual graphs, finite flat graph morphisms and weight dimensions of wide open curves",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("validate", parents=[common], help="check a graph, morphism, covering or covering morphism")
    sub.add_parser("homology", parents=[common], help="boundary maps, H_1 basis and H^1 classes of a graph")
    lift = sub.add_parser("lift", parents=[common], help="lift target cycles along a morphism")
    lift.add_argument("--seed", type=seed_value, default=None, help="randomise tie-breaking with this seed")
    lift.add_argument("--cycle", default=None, help="comma separated target darts; default: fundamental cycles")
    sub.add_parser("push", parents=[common], help="pushforward matrices on H_1 and H^1")
    sub.add_parser("pull", parents=[common], help="pullback matrices on H_1 and H^1")
    sub.add_parser("dims", parents=[common], help="weight-graded dimensions of a covering")
    sub.add_parser("morphism-check", parents=[common], help="validate a morphism and check its identities")
    sub.add_parser("functorial-check", parents=[common], help="graded push/pull of a covering morphism")
    return parser


def base_cycles(phi: FiniteFlatMorphism, darts_text: Optional[str]) -> List[Cycle]:
    if darts_text is None:
        return fundamental_cycles(phi.target)
    darts = tuple(d.strip() for d in darts_text.split(",") if d.strip())
    try:
        return [Cycle(phi.target, darts)]
    except InvalidCycle as e:
        raise InputError(f"--cycle: {e}") from e


def run(args: argparse.Namespace) -> int:
    loader = DocumentLoader(args.file).load_file(ACCEPTED_KINDS.get(args.command, ()))
    accepted = ACCEPTED_KINDS.get(args.command)
    if accepted is not None and loader.kind not in accepted:
        raise InputError(f"{args.command} needs a {' or '.join(accepted)} document, got a {loader.kind} document")
    subject = loader.load()
    builder = ReportBuilder(include_matrices=not args.no_matrices)

    status = 0
    if args.command == "validate":
        report = builder.validation(loader.kind, subject)
        status = 0 if report.validation.valid else 1
    elif args.command == "homology":
        report = builder.homology(subject)
    elif args.command == "lift":
        report = builder.lift(subject, base_cycles(subject, args.cycle), seed=args.seed)
    elif args.command == "push":
        report = builder.push(subject)
    elif args.command == "pull":
        report = builder.pull(subject)
    elif args.command == "dims":
        report = builder.dims(subject)
    elif args.command == "morphism-check":
        report = builder.morphism_check(loader.kind, subject)
        if not report.validation.valid or not all(c.passed for c in report.checks):
            status = 1
    else:
        report = builder.functorial_check(subject)
        if not all(c.passed for c in report.checks):
            status = 1

    output = render_json(report) + "\n" if args.format == "json" else render_text(report)
    sys.stdout.write(output)
    validation = getattr(report, "validation", None)
    if validation is not None and not validation.valid:
        print("validation failed: " + ", ".join(sorted(validation.axioms())), file=sys.stderr)
    return status


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        configure_logging(get_settings())
        logger.info("running %s on %s", args.command, args.file)
        status = run(args)
        logger.info("%s finished with status %d", args.command, status)
        return status
    except DualGraphError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
