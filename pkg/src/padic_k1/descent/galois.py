"""
Kernel and cokernel of 1 - tau on the units of (O_S/p^N)[G].

tau = phi^(n_R) generates Delta = Gal(S/R), cyclic of order m = n_S/n_R. For
an abelian p-group G the units of (O_S/p^N)[G] split as mu_S x (1 + rad),
Delta-equivariantly, so the prime-to-p part of the cokernel of 1 - tau is
the coinvariants (mu_S)_Delta. The kernel is the unit group of
(O_R/p^N)[G], and kernel and cokernel of an endomorphism of a finite group
have the same order.
"""

import numpy as np
import structlog

from padic_k1.coeff.finite_field import FiniteField
from padic_k1.descent.common import Witness, run_check, scenario_rings, scenario_rng, skipped, sub_seed
from padic_k1.groupring.element import GroupRingElement
from padic_k1.groupring.finite import FiniteGroupRing
from padic_k1.groupring.transfer import i_star
from padic_k1.groupring.units import UnitKind, sample_unit
from padic_k1.groups.abelian import AbelianInvariants
from padic_k1.groups.catalog import resolve_group
from padic_k1.groups.group import Group
from padic_k1.schemas import DescentScenario, VerificationReport
from padic_k1.settings import settings

logger = structlog.get_logger(__name__)

CLAIM = "cyclic-cokernel"

_KINDS = (UnitKind.ONE_PLUS_I, UnitKind.ONE_PLUS_PR, UnitKind.TEICHMULLER_TIMES_GROUP)


def tau(u: GroupRingElement, times: int) -> GroupRingElement:
    """phi**times applied coefficientwise."""
    return GroupRingElement(u.ring, u.group, u.ring.frobenius_vectors(u.coeffs, times), u.known_precision)


def prime_to_p_part(a: AbelianInvariants, p: int) -> AbelianInvariants:
    return AbelianInvariants.from_cyclic_orders(q for q in a.prime_power_orders() if q % p)


def mu_coinvariants(field: FiniteField, n_R: int) -> AbelianInvariants:
    """(mu_S)_Delta: mu_S is cyclic of order q_S - 1 and tau raises to the power q_R."""
    q_S, q_R = field.order, field.p**n_R
    zeta = next(a for a in field.elements() if not a.is_zero() and a.multiplicative_order() == q_S - 1)
    image = (zeta ** (q_R - 1)).multiplicative_order()
    return AbelianInvariants.from_cyclic_orders([(q_S - 1) // image])


def base_unit_count(q_R: int, precision: int, group: Group) -> int:
    """|(O_R/p^N)[G]^x| for a p-group G: the local ring minus its maximal ideal."""
    size = q_R ** (precision * group.order)
    return size - size // q_R


def _exhaustive(finite: FiniteGroupRing, scenario: DescentScenario, witnesses: list[Witness]) -> None:
    units = finite.units
    images = finite.encode(finite.ring.frobenius_vectors(finite.decode(units), scenario.n_R))
    fixed = units[images == units]
    image = np.unique(finite.multiply(units, finite.invert(images)))
    kernel = finite.quotient_invariants(np.array([finite.one], dtype=np.int64), whole=fixed)
    cokernel = finite.quotient_invariants(image)
    mu = mu_coinvariants(finite.ring.field, scenario.n_R)
    expected_kernel = base_unit_count(scenario.p**scenario.n_R, scenario.precision, finite.group)
    data = {"units": len(units), "kernel": str(kernel), "cokernel": str(cokernel), "mu_coinvariants": str(mu)}
    logger.info("cyclic_cokernel", group=finite.group.name, m=scenario.degree, **data)
    if len(fixed) * len(image) != len(units):
        witnesses.append({**data, "reason": "|ker| * |im| differs from the unit count"})
    if len(fixed) != expected_kernel:
        witnesses.append({**data, "reason": f"kernel has {len(fixed)} units, base ring has {expected_kernel}"})
    if kernel.order != cokernel.order:
        witnesses.append({**data, "reason": "kernel and cokernel orders differ"})
    if prime_to_p_part(cokernel, scenario.p) != mu:
        witnesses.append({**data, "reason": "prime-to-p cokernel differs from the mu coinvariants"})
    if scenario.degree == 1 and (len(image) != 1 or len(fixed) != len(units)):
        witnesses.append({**data, "reason": "tau is the identity but 1 - tau is not trivial"})


def _sampled(scenario: DescentScenario, group: Group, witnesses: list[Witness]) -> None:
    base, top = scenario_rings(scenario)
    rng = scenario_rng(scenario, CLAIM)
    m, n_R = scenario.degree, scenario.n_R
    for i in range(scenario.samples):
        kind = _KINDS[i % len(_KINDS)]
        u = sample_unit(top, group, kind, sub_seed(rng))
        v = u * tau(u, n_R).inverse()
        norm = GroupRingElement.one(top, group)
        for j in range(m):
            norm = norm * tau(v, j * n_R)
        if norm != 1:
            witnesses.append({"unit": str(u), "reason": "norm of u/tau(u) is not 1"})
        w = i_star(sample_unit(base, group, kind, sub_seed(rng)), top)
        if tau(w, n_R) != w:
            witnesses.append({"unit": str(w), "reason": "tau moves a unit defined over the base"})
    logger.info("cyclic_cokernel_sampled", group=group.name, m=m, samples=scenario.samples)


def cyclic_galois_cokernel_check(scenario: DescentScenario) -> VerificationReport:
    """
    Exhaustive when (O_S/p^N)[G] fits the unit group bound, sampled otherwise.

    Groups that are not abelian p-groups are skipped: there 1 - tau is not a
    homomorphism on the unit group.
    """
    group = resolve_group(scenario.group)
    if not (group.is_abelian() and group.is_p_group(scenario.p)):
        return skipped(CLAIM, scenario, f"{group.name} is not an abelian {scenario.p}-group")

    def body(witnesses: list[Witness]) -> int:
        _, top = scenario_rings(scenario)
        finite = FiniteGroupRing(top, group, settings.cap(settings.unit_group_bound))
        if finite.size <= finite.bound:
            _exhaustive(finite, scenario, witnesses)
        else:
            _sampled(scenario, group, witnesses)
        return scenario.precision

    return run_check(CLAIM, scenario, body)
