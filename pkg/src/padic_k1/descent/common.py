"""Shared plumbing for the descent checks: rings, seeds and report assembly."""

import time
import zlib
from collections.abc import Callable
from typing import Any

import numpy as np
import structlog

from padic_k1.coeff.finite_field import make_extension
from padic_k1.coeff.unramified import UnramifiedRing, unramified_ring
from padic_k1.exceptions import PadicK1Error
from padic_k1.schemas import DescentScenario, Status, VerificationReport, jsonable

logger = structlog.get_logger(__name__)

Witness = dict[str, Any]


def scenario_rings(scenario: DescentScenario) -> tuple[UnramifiedRing, UnramifiedRing]:
    """O_R and O_S at the scenario precision."""
    base = unramified_ring(make_extension(scenario.p, scenario.n_R), scenario.precision)
    top = unramified_ring(make_extension(scenario.p, scenario.n_S), scenario.precision)
    return base, top


def scenario_rng(scenario: DescentScenario, claim: str) -> np.random.Generator:
    """A generator owned by one (scenario, claim) pair."""
    return np.random.default_rng([scenario.seed, zlib.crc32(claim.encode()), zlib.crc32(scenario.group.encode())])


def sub_seed(rng: np.random.Generator) -> int:
    return int(rng.integers(0, 2**31))


def random_ring_element(ring: UnramifiedRing, rng: np.random.Generator) -> list[int]:
    return [int(v) for v in rng.integers(0, ring.modulus, size=ring.n)]


def skipped(claim: str, scenario: DescentScenario, reason: str) -> VerificationReport:
    logger.info("check_skipped", claim=claim, scenario=scenario.label(), reason=reason)
    return VerificationReport(claim=claim, scenario=scenario, status=Status.SKIPPED, reason=reason)


def run_check(
    claim: str,
    scenario: DescentScenario,
    body: Callable[[list[Witness]], int | None | VerificationReport],
) -> VerificationReport:
    """
    Run body, which appends failure witnesses and returns the precision its
    assertions used (or a finished report, for skips). Library errors become
    failures carrying the error as witness.
    """
    start = time.perf_counter()
    witnesses: list[Witness] = []
    precision: int | None = None
    try:
        outcome = body(witnesses)
    except PadicK1Error as exc:
        logger.warning("check_error", claim=claim, scenario=scenario.label(), error=str(exc))
        witnesses.append({"error": f"{type(exc).__name__}: {exc}"})
    else:
        if isinstance(outcome, VerificationReport):
            return outcome
        precision = outcome
    status = Status.FAILED if witnesses else Status.PASSED
    runtime = (time.perf_counter() - start) * 1000
    logger.info("check_finished", claim=claim, scenario=scenario.label(), status=status.value, runtime_ms=runtime)
    return VerificationReport(
        claim=claim,
        scenario=scenario,
        status=status,
        precision_used=precision,
        witnesses=[jsonable(w) for w in witnesses],
        runtime_ms=runtime,
    )
