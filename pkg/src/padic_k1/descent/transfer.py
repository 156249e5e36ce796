"""
trf o i_* = multiplication by n = [S : R] on K1(O_R[G]).

The composite is checked through both invariants that detect K1 classes:
Det on every irreducible character and, for p-groups, the integral
logarithm. The same transfer matrices also check that Gamma commutes with
transfer, Gamma_R(trf(u)) = Tr_{S/R} Gamma_S(u).
"""

import structlog

from padic_k1.descent.common import Witness, run_check, scenario_rings, scenario_rng, sub_seed
from padic_k1.groupring.element import ClassFunctionElement, GroupRingElement
from padic_k1.groupring.transfer import i_star, transfer_matrix
from padic_k1.groupring.units import UnitKind, sample_unit
from padic_k1.groups.catalog import resolve_group
from padic_k1.groups.group import Group
from padic_k1.logdet.characters import character_table
from padic_k1.logdet.commutation import torsion_units
from padic_k1.logdet.det import det_hom, det_hom_matrix
from padic_k1.logdet.gamma import assertion_precision, gamma_full, gamma_matrix, relative_trace
from padic_k1.logdet.hom import HomElement
from padic_k1.schemas import DescentScenario, VerificationReport

logger = structlog.get_logger(__name__)

CLAIM = "trf-istar"


def _kinds(group: Group, p: int) -> tuple[UnitKind, ...]:
    if group.is_p_group(p):
        return (UnitKind.ONE_PLUS_I, UnitKind.ONE_PLUS_PR, UnitKind.TEICHMULLER_TIMES_GROUP)
    return (UnitKind.ONE_PLUS_PR, UnitKind.TEICHMULLER_TIMES_GROUP)


def _power(f: HomElement, n: int) -> HomElement:
    out = f
    for _ in range(n - 1):
        out = out * f
    return out


def _agree(left: ClassFunctionElement, right: ClassFunctionElement, digits: int) -> tuple[bool, int]:
    prec = min(digits, left.known_precision, right.known_precision)
    return left.equal_to(right, prec), prec


def check_trf_istar(scenario: DescentScenario) -> VerificationReport:
    """Det(trf(i_* u)) = Det(u)^n, Gamma(trf(i_* u)) = n Gamma(u) and Gamma o trf = Tr o Gamma."""
    group = resolve_group(scenario.group)
    p, n = scenario.p, scenario.degree

    def body(witnesses: list[Witness]) -> int:
        base, top = scenario_rings(scenario)
        rng = scenario_rng(scenario, CLAIM)
        table = character_table(group)
        kinds = _kinds(group, p)
        with_gamma = group.is_p_group(p) and assertion_precision(scenario.precision, p) > 0
        digits = assertion_precision(scenario.precision, p) if with_gamma else scenario.precision
        used = digits

        units: list[tuple[str, GroupRingElement]] = []
        for i in range(scenario.samples):
            kind = kinds[i % len(kinds)]
            units.append((kind.value, sample_unit(base, group, kind, sub_seed(rng))))
        units += torsion_units(base, group)

        for label, u in units:
            m = transfer_matrix(i_star(u, top), base)
            if not det_hom_matrix(m, table).equal_to(_power(det_hom(u, table), n)):
                witnesses.append({"unit": label, "value": str(u), "invariant": "Det"})
            if with_gamma:
                ok, prec = _agree(gamma_matrix(m), gamma_full(u).scale(n), digits)
                used = min(used, prec)
                if not ok:
                    witnesses.append({"unit": label, "value": str(u), "invariant": "Gamma", "digits": prec})

        if with_gamma and n > 1:
            for i in range(max(scenario.samples // 2, 1)):
                kind = kinds[i % len(kinds)]
                u = sample_unit(top, group, kind, sub_seed(rng))
                ok, prec = _agree(gamma_matrix(transfer_matrix(u, base)), relative_trace(gamma_full(u), base), digits)
                used = min(used, prec)
                if not ok:
                    witnesses.append({"unit": kind.value, "value": str(u), "invariant": "Gamma o trf", "digits": prec})
        logger.debug("transfer_checked", group=group.name, degree=n, units=len(units), gamma=with_gamma)
        return used

    return run_check(CLAIM, scenario, body)
