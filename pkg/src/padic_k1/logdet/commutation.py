"""
Commutation of the integral logarithm with the Hom-description:

    Tr(Gamma(u)) = Gamma_Hom(Det(u)),

together with injectivity of Det on the torsion G^ab x mu_O.
"""

import itertools
import time

import numpy as np
import structlog

from padic_k1.coeff.unramified import UnramifiedRing, teichmuller
from padic_k1.exceptions import BudgetExceededError, PadicK1Error
from padic_k1.groupring.element import GroupRingElement
from padic_k1.groups.group import Group, abelianization
from padic_k1.logdet.characters import character_table
from padic_k1.logdet.det import det_hom, tr_hom
from padic_k1.logdet.gamma import assertion_precision, gamma_full
from padic_k1.logdet.hom import gamma_hom
from padic_k1.schemas import DescentScenario, Status, VerificationReport, jsonable
from padic_k1.settings import settings

logger = structlog.get_logger(__name__)

CLAIM = "commutation"


def _scenario_of(u: GroupRingElement) -> DescentScenario:
    n = u.ring.n
    return DescentScenario(group=u.group.name, p=u.ring.p, nR=n, nS=n, N=u.ring.precision)


def torsion_units(ring: UnramifiedRing, group: Group) -> list[tuple[str, GroupRingElement]]:
    """
    omega * g for omega in mu_O and g running over coset representatives of G^ab.

    Raises:
        BudgetExceededError: If the enumeration exceeds the unit group bound
    """
    _, projection = abelianization(group)
    representatives: dict[int, int] = {}
    for g in range(group.order):
        representatives.setdefault(projection(g), g)
    roots = [a for a in ring.field.elements() if not a.is_zero()]
    bound = settings.cap(settings.unit_group_bound)
    if len(roots) * len(representatives) > bound:
        msg = f"torsion enumeration exceeds {bound} units"
        raise BudgetExceededError(msg)
    out = []
    for a, g in itertools.product(roots, sorted(representatives.values())):
        omega = teichmuller(a, ring.precision)
        out.append((f"w({a})*{group.labels[g]}", GroupRingElement.basis(ring, group, g, omega)))
    return out


def commutation_check(
    u: GroupRingElement, precision: int | None = None, scenario: DescentScenario | None = None
) -> VerificationReport:
    """
    Compare both sides of the commuting square on u, and check that Det
    separates the torsion units.

    Failures are returned in the report rather than raised.
    """
    start = time.perf_counter()
    scenario = scenario or _scenario_of(u)
    p, n_digits = u.ring.p, u.ring.precision
    digits = assertion_precision(n_digits, p) if precision is None else precision
    if digits <= 0:
        return VerificationReport(
            claim=CLAIM,
            scenario=scenario,
            status=Status.SKIPPED,
            reason=f"no digits left to compare at N={n_digits}",
        )
    if not u.group.is_p_group(p):
        return VerificationReport(
            claim=CLAIM, scenario=scenario, status=Status.SKIPPED, reason="group is not a p-group"
        )
    witnesses: list[dict[str, object]] = []
    table = character_table(u.group)
    try:
        left = tr_hom(gamma_full(u), table)
        right = gamma_hom(det_hom(u, table))
    except PadicK1Error as exc:
        witnesses.append({"unit": str(u), "error": f"{type(exc).__name__}: {exc}"})
    else:
        modulus = p**digits
        for chi in table:
            a = left.values[chi.index] % modulus
            b = right.values[chi.index] % modulus
            if not np.array_equal(a, b):
                witnesses.append(
                    {
                        "unit": str(u),
                        "character": chi.index,
                        "trace_of_gamma": a.tolist(),
                        "gamma_of_det": b.tolist(),
                    }
                )
    seen: dict[bytes, str] = {}
    for label, t in torsion_units(u.ring, u.group):
        key = det_hom(t, table).values.astype(np.int64).tobytes()
        if key in seen:
            witnesses.append({"torsion": label, "same_det_as": seen[key]})
        seen.setdefault(key, label)
    status = Status.FAILED if witnesses else Status.PASSED
    runtime = (time.perf_counter() - start) * 1000
    logger.info("commutation_check", group=u.group.name, status=status.value, digits=digits)
    return VerificationReport(
        claim=CLAIM,
        scenario=scenario,
        status=status,
        precision_used=digits,
        witnesses=[jsonable(w) for w in witnesses],
        runtime_ms=runtime,
    )

