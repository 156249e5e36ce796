"""
Command Line Module

Entry point of the ``padic-k1`` command. Subcommands:

    group-info   order, classes, abelianization, center, p-regular classes
    sk1          H2, H2ab and SK1 of a p-group
    gamma        the integral logarithm of a unit expression
    verify       descent checks on one scenario or a catalog sweep

Exit codes: 0 when nothing failed, 1 when some check failed, 2 on a usage
error. Logs go to stderr so that JSON on stdout stays parseable.
"""

import argparse
import logging
import sys
from collections.abc import Sequence
from pathlib import Path

import structlog
from pydantic import BaseModel, ValidationError

from padic_k1.cli.expression import parse_unit
from padic_k1.coeff.finite_field import make_extension
from padic_k1.coeff.unramified import unramified_ring
from padic_k1.descent.report import CHECKS, INTRODUCTION, catalog_scenarios, full_descent_report
from padic_k1.exceptions import NotAPGroupError, PadicK1Error
from padic_k1.groups.catalog import load_group_file, resolve_group
from padic_k1.groups.group import abelianization, p_regular_classes
from padic_k1.groups.homology import homology_data
from padic_k1.logdet.gamma import assertion_precision, gamma_full
from padic_k1.schemas import DescentScenario, GammaInfo, GroupInfo, Sk1Info
from padic_k1.settings import settings

logger = structlog.get_logger(__name__)

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    """Raised for flag combinations the parser cannot reject by itself."""


def configure_logging(verbose: int) -> None:
    level = logging.WARNING - 10 * min(verbose, 2)
    structlog.configure(
        wrapper_class=structlog.make_filtering_bound_logger(level),
        logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
    )


def _emit(model: BaseModel, fmt: str, out: Path | None = None) -> None:
    if fmt == "json":
        text = model.model_dump_json(indent=2)
    else:
        text = model.render_text()  # type: ignore[attr-defined]
    if out is None:
        print(text)
    else:
        out.write_text(text + "\n")
        logger.info("report_written", path=str(out))


def cmd_group_info(args: argparse.Namespace) -> int:
    group = load_group_file(Path(args.file)) if args.file else resolve_group(args.group)
    invariants, _ = abelianization(group)
    reps = group.classes.representatives
    info = GroupInfo(
        name=group.name,
        order=group.order,
        classes=len(group.classes),
        class_sizes=list(group.classes.sizes),
        representatives=[group.labels[r] for r in reps],
        abelianization=str(invariants),
        center_order=len(group.center),
        p=args.p,
        p_regular_classes=[group.labels[reps[c]] for c in p_regular_classes(group, args.p)],
    )
    _emit(info, args.format)
    return EXIT_PASS


def cmd_sk1(args: argparse.Namespace) -> int:
    group = resolve_group(args.group)
    if not group.is_p_group(args.p):
        msg = f"{group.name} is not a {args.p}-group; SK1 of other groups needs k-conjugacy bookkeeping"
        raise NotAPGroupError(msg)
    data = homology_data(group)
    info = Sk1Info(group=group.name, p=args.p, h2=str(data.h2), h2_ab=str(data.h2_ab), sk1=str(data.sk1))
    _emit(info, args.format)
    return EXIT_PASS


def cmd_gamma(args: argparse.Namespace) -> int:
    group = resolve_group(args.group)
    ring = unramified_ring(make_extension(args.p, args.n), args.N)
    u = parse_unit(args.unit, ring, group)
    value = gamma_full(u)
    reps = group.classes.representatives
    info = GammaInfo(
        group=group.name,
        p=args.p,
        n=args.n,
        N=args.N,
        unit=args.unit,
        values={group.labels[r]: [int(c) for c in value.coeffs[i]] for i, r in enumerate(reps)},
        known_precision=value.known_precision,
        assertion_precision=assertion_precision(args.N, args.p),
    )
    _emit(info, args.format)
    return EXIT_PASS


def _scenarios(args: argparse.Namespace) -> list[DescentScenario]:
    if args.sweep_catalog:
        return catalog_scenarios(
            args.p, args.N, args.seed, args.samples, n_R=args.nR, n_S=args.nS, max_order=args.max_order
        )
    if not args.group:
        msg = "verify needs --group or --sweep-catalog"
        raise UsageError(msg)
    return [
        DescentScenario(
            group=args.group, p=args.p, nR=args.nR, nS=args.nS, N=args.N, seed=args.seed, samples=args.samples
        )
    ]


def cmd_verify(args: argparse.Namespace) -> int:
    if not args.all and not args.claim:
        msg = "verify needs --claim or --all"
        raise UsageError(msg)
    claims = None if args.all else args.claim
    try:
        scenarios = _scenarios(args)
    except ValidationError as exc:
        msg = "; ".join(err["msg"] for err in exc.errors())
        raise UsageError(msg) from exc
    bundle = full_descent_report(scenarios, claims)
    if args.format == "json":
        text = bundle.to_json(timings=args.timings)
    else:
        text = bundle.render_text()
    if args.out:
        Path(args.out).write_text(text + "\n")
        logger.info("report_written", path=args.out)
    else:
        print(text)
    return EXIT_PASS if bundle.passed else EXIT_FAIL


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=("text", "json"), default="text")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    parser.add_argument("--budget", type=int, default=None, help="multiplier for every enumeration cap")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="padic-k1", description="p-adic K1 descent toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    info = sub.add_parser("group-info", help="order, classes and abelianization of a group")
    info.add_argument("group", nargs="?", default="C1")
    info.add_argument("--file", help="presentation file")
    info.add_argument("--p", type=int, default=settings.default_p)
    _common(info)
    info.set_defaults(handler=cmd_group_info)

    sk1 = sub.add_parser("sk1", help="H2, H2ab and SK1 of a p-group")
    sk1.add_argument("group")
    sk1.add_argument("p", type=int)
    _common(sk1)
    sk1.set_defaults(handler=cmd_sk1)

    gamma = sub.add_parser("gamma", help="the integral logarithm of a unit")
    gamma.add_argument("group")
    gamma.add_argument("p", type=int)
    gamma.add_argument("n", type=int, help="residue degree over F_p")
    gamma.add_argument("N", type=int, help="p-adic precision")
    gamma.add_argument("unit", help='unit expression, e.g. "1+3*g"')
    _common(gamma)
    gamma.set_defaults(handler=cmd_gamma)

    verify = sub.add_parser("verify", help="run descent checks")
    verify.add_argument("--claim", action="append", choices=[*CHECKS, INTRODUCTION])
    verify.add_argument("--all", action="store_true")
    verify.add_argument("--group")
    verify.add_argument("--sweep-catalog", action="store_true")
    verify.add_argument("--max-order", type=int, default=27)
    verify.add_argument("--p", type=int, default=settings.default_p)
    verify.add_argument("--nR", type=int, default=1)
    verify.add_argument("--nS", type=int, default=2)
    verify.add_argument("--N", type=int, default=settings.default_precision)
    verify.add_argument("--seed", type=int, default=settings.default_seed)
    verify.add_argument("--samples", type=int, default=settings.default_samples)
    verify.add_argument("--out")
    verify.add_argument("--timings", action="store_true", help="keep runtimes in JSON output")
    _common(verify)
    verify.set_defaults(handler=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_PASS
    configure_logging(args.verbose)
    if args.budget is not None:
        settings.budget = args.budget
    try:
        return args.handler(args)
    except (UsageError, PadicK1Error, ValidationError) as exc:
        logger.error("usage_error", command=args.command, error=str(exc))
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def start() -> None:
    sys.exit(main())


if __name__ == "__main__":
    start()
