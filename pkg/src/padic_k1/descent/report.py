"""
Sweeps: every applicable claim on every scenario, merged into one bundle.

Checks are independent and each owns its seed, so they run on a thread pool;
the bundle orders reports by (scenario, claim) whatever the completion order.
The descent statement for the whole unramified tower is reported as the claim
"k1-descent": it passes when the Gamma sequence passes, and carries the
(K, C) = (SK1, 1) case data.
"""

from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor

import structlog

from padic_k1.descent import frobenius, galois, gamma_sequence, residue, sk1, transfer
from padic_k1.descent.common import Witness, run_check, scenario_rings, scenario_rng, skipped, sub_seed
from padic_k1.exceptions import NotAPGroupError, PadicK1Error
from padic_k1.groupring.units import UnitKind, sample_unit
from padic_k1.groups.catalog import catalog_p_groups, resolve_group
from padic_k1.groups.homology import sk1_pgroup
from padic_k1.logdet.commutation import CLAIM as COMMUTATION, commutation_check
from padic_k1.schemas import DescentScenario, ReportBundle, Status, VerificationReport
from padic_k1.settings import settings

logger = structlog.get_logger(__name__)

INTRODUCTION = "k1-descent"

Check = Callable[[DescentScenario], VerificationReport]


def check_commutation(scenario: DescentScenario) -> VerificationReport:
    """The commuting square Tr o Gamma = Gamma_Hom o Det on sampled units of O_R[G]."""
    group = resolve_group(scenario.group)
    if not group.is_p_group(scenario.p):
        return skipped(COMMUTATION, scenario, f"{group.name} is not a {scenario.p}-group")

    def body(witnesses: list[Witness]) -> int | None | VerificationReport:
        base, _ = scenario_rings(scenario)
        rng = scenario_rng(scenario, COMMUTATION)
        kinds = (UnitKind.ONE_PLUS_I, UnitKind.ONE_PLUS_PR, UnitKind.TEICHMULLER_TIMES_GROUP)
        digits = None
        for i in range(max(scenario.samples, 1)):
            u = sample_unit(base, group, kinds[i % len(kinds)], sub_seed(rng))
            report = commutation_check(u, scenario=scenario)
            if report.status is Status.SKIPPED:
                return report
            digits = report.precision_used
            witnesses.extend(report.witnesses)
        return digits

    return run_check(COMMUTATION, scenario, body)


def check_sk1_case(scenario: DescentScenario) -> VerificationReport:
    try:
        return sk1.sk1_descent_case(scenario)
    except NotAPGroupError as exc:
        return skipped(sk1.CLAIM, scenario, str(exc))


CHECKS: dict[str, Check] = {
    frobenius.CLAIM: frobenius.check_one_minus_phi_exact,
    gamma_sequence.CLAIM: gamma_sequence.check_gamma_sequence,
    COMMUTATION: check_commutation,
    transfer.CLAIM: transfer.check_trf_istar,
    sk1.CLAIM: check_sk1_case,
    residue.CLAIM: residue.residue_sequence_check,
    galois.CLAIM: galois.cyclic_galois_cokernel_check,
}


def _run(claim: str, scenario: DescentScenario) -> VerificationReport:
    try:
        return CHECKS[claim](scenario)
    except PadicK1Error as exc:
        logger.warning("check_aborted", claim=claim, scenario=scenario.label(), error=str(exc))
        return VerificationReport(
            claim=claim,
            scenario=scenario,
            status=Status.FAILED,
            witnesses=[{"error": f"{type(exc).__name__}: {exc}"}],
        )


def introduction_report(scenario: DescentScenario, gamma_report: VerificationReport) -> VerificationReport:
    """K1(O_R[G]) -> K1(W(F_p-bar)[G])^phi has kernel SK1 and is onto, given the Gamma sequence."""
    group = resolve_group(scenario.group)
    if gamma_report.status is Status.SKIPPED:
        return skipped(INTRODUCTION, scenario, f"gamma sequence skipped: {gamma_report.reason}")
    try:
        case = sk1.descent_case(sk1_pgroup(group, scenario.p), scenario.p, None)
    except PadicK1Error as exc:
        return skipped(INTRODUCTION, scenario, str(exc))
    if gamma_report.status is Status.FAILED:
        witnesses = [{**case.as_dict(), "reason": "gamma sequence failed"}]
        return VerificationReport(
            claim=INTRODUCTION, scenario=scenario, status=Status.FAILED, witnesses=witnesses
        )
    return VerificationReport(
        claim=INTRODUCTION,
        scenario=scenario,
        status=Status.PASSED,
        precision_used=gamma_report.precision_used,
        witnesses=[case.as_dict()],
    )


def full_descent_report(
    scenarios: Iterable[DescentScenario], claims: Sequence[str] | None = None, workers: int | None = None
) -> ReportBundle:
    """
    Run every requested claim on every scenario.

    Raises:
        KeyError: If a claim name is unknown
    """
    wanted = list(CHECKS) if claims is None else list(claims)
    for claim in wanted:
        if claim not in CHECKS and claim != INTRODUCTION:
            msg = f"unknown claim {claim!r}"
            raise KeyError(msg)
    scenarios = list(scenarios)
    tasks = [(c, s) for s in scenarios for c in wanted if c != INTRODUCTION]
    with ThreadPoolExecutor(max_workers=workers or settings.sweep_workers) as pool:
        reports = list(pool.map(lambda task: _run(*task), tasks))
    if claims is None or INTRODUCTION in wanted:
        by_key = {(r.scenario.key(), r.claim): r for r in reports}
        for s in scenarios:
            gamma_report = by_key.get((s.key(), gamma_sequence.CLAIM)) or _run(gamma_sequence.CLAIM, s)
            reports.append(introduction_report(s, gamma_report))
    bundle = ReportBundle(reports=reports)
    logger.info("descent_report", scenarios=len(scenarios), **bundle.counts())
    return bundle


def catalog_scenarios(
    p: int, precision: int, seed: int, samples: int, n_R: int = 1, n_S: int = 2, max_order: int = 27
) -> list[DescentScenario]:
    """The trivial group and every catalog p-group up to max_order."""
    names = ["C1", *catalog_p_groups(p, max_order)]
    return [
        DescentScenario(group=name, p=p, nR=n_R, nS=n_S, N=precision, seed=seed, samples=samples)
        for name in names
    ]
