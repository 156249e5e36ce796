"""
Exactness of 1 -> SK1' -> Wh(O[G]) -> O[C_G] -> 1 for a p-group, odd p,
with O the completed maximal unramified extension.

Over a finite O_R the cokernel of Gamma is G^ab through omega, so
surjectivity is checked along the tower: a sampled target t gets a unit u
over the extension of O_R of degree ord(omega(t)), and Gamma(u) = t is
re-evaluated independently. Kernel: a sampled unit is corrected by a unit of
opposite Gamma; the product must then be torsion, which is certified by
log Det vanishing to the digits that Gamma = 0 forces.
"""

import numpy as np
import structlog

from padic_k1.coeff.series import scaled_log
from padic_k1.descent.common import Witness, run_check, scenario_rings, scenario_rng, skipped, sub_seed
from padic_k1.descent.preimage import GammaSolver, p_level
from padic_k1.groupring.element import ClassFunctionElement, GroupRingElement
from padic_k1.groupring.units import UnitKind, sample_unit
from padic_k1.groups.catalog import resolve_group
from padic_k1.logdet.characters import CharacterTable, character_table
from padic_k1.logdet.det import det_hom, value_ring
from padic_k1.logdet.gamma import assertion_precision, gamma_full
from padic_k1.schemas import DescentScenario, VerificationReport

logger = structlog.get_logger(__name__)

CLAIM = "gamma-seq"

_KERNEL_KINDS = (UnitKind.ONE_PLUS_I, UnitKind.ONE_PLUS_PR, UnitKind.TEICHMULLER_TIMES_GROUP)


def log_det_vanishes(v: GroupRingElement, table: CharacterTable, digits: int) -> bool:
    """Whether log Det(v)(chi) = 0 modulo p^digits for every irreducible chi."""
    lam = value_ring(v)
    f = det_hom(v, table)
    k = lam.teichmuller_exponent
    powered = np.stack([lam.power(x, k) for x in f.values])
    log = scaled_log(powered, lam, lam.base.precision)
    if log.known_precision < digits + log.shift:
        return False
    return not np.any(log.value % lam.p ** (digits + log.shift))


def check_gamma_sequence(scenario: DescentScenario) -> VerificationReport:
    """Surjectivity of Gamma along the unramified tower and torsion kernel, at finite precision."""
    group = resolve_group(scenario.group)
    p = scenario.p
    if p == 2:
        return skipped(CLAIM, scenario, "p = 2 carries a <-1> cokernel; odd p only")
    if not group.is_p_group(p):
        return skipped(CLAIM, scenario, f"{group.name} is not a {p}-group")
    digits = assertion_precision(scenario.precision, p)
    if digits <= 0:
        return skipped(CLAIM, scenario, f"N={scenario.precision} leaves no digits after Gamma")

    def body(witnesses: list[Witness]) -> int:
        ring, _ = scenario_rings(scenario)
        rng = scenario_rng(scenario, CLAIM)
        solver = GammaSolver(ring, group, digits, sub_seed(rng))
        shape = (len(group.classes), ring.n)
        top = ring.n
        for _ in range(scenario.samples):
            target = ClassFunctionElement(ring, group, rng.integers(0, p**digits, size=shape).astype(object))
            found = solver.preimage(target)
            top = max(top, found.unit.ring.n)
            if not gamma_full(found.unit).equal_to(found.target, digits):
                witnesses.append(
                    {"target": target.coeffs.tolist(), "degree": found.unit.ring.n, "unit": str(found.unit)}
                )
        logger.info("gamma_surjectivity_checked", group=group.name, degree_from=ring.n, degree_reached=top)
        # Gamma(v) = 0 mod p^P' forces log Det(v) = 0 mod p^(P' - m), p^m >= e
        level = p_level(group.exponent, p)
        wide = ring.with_precision(scenario.precision + level + 1)
        wide_digits = assertion_precision(wide.precision, p)
        certified = wide_digits - level
        wide_basis = GammaSolver(wide, group, wide_digits, sub_seed(rng)).basis(wide.n)
        table = character_table(group)
        for i in range(max(scenario.samples // 2, 1)):
            u = sample_unit(wide, group, _KERNEL_KINDS[i % len(_KERNEL_KINDS)], sub_seed(rng))
            v = u * wide_basis.preimage(-gamma_full(u))
            if not log_det_vanishes(v, table, certified):
                witnesses.append({"kernel_unit": str(v), "digits": certified})
        return digits

    return run_check(CLAIM, scenario, body)
