"""
The residue sequence 0 -> O[C_G] -> K1(O[G]) -> K1(kappa[G]) -> 1 at level N.

K1(kappa[G]) is computed by brute force as kappa[G]^x modulo the subgroup
generated by (1 + ab)(1 + ba)^-1; for the semilocal rings kappa[G] this is
all of the relations. Reduction O/p^N[G]^x -> kappa[G]^x is checked onto,
and the kernel 1 + p^k O[G] is checked to map under the logarithm onto a
free Z/p^(N-k) module with one generator per class and residue basis vector.
"""

from dataclasses import dataclass

import numpy as np
import structlog

from padic_k1.coeff.linalg import local_smith_form
from padic_k1.coeff.unramified import UnramifiedRing
from padic_k1.descent.common import Witness, run_check, scenario_rings, scenario_rng
from padic_k1.exceptions import ConsistencyError, PrecisionExhaustedError
from padic_k1.groupring.element import GroupRingElement, convolve
from padic_k1.groupring.finite import FiniteGroupRing
from padic_k1.groups.abelian import AbelianInvariants
from padic_k1.groups.catalog import resolve_group
from padic_k1.groups.group import Group
from padic_k1.logdet.logarithm import gr_log
from padic_k1.schemas import DescentScenario, VerificationReport
from padic_k1.settings import settings

logger = structlog.get_logger(__name__)

CLAIM = "residue-seq"


@dataclass(frozen=True)
class ResidueK1:
    """
    K1 of a finite group ring kappa[G].

    Attributes:
        invariants (AbelianInvariants): K1(kappa[G])
        units (int): |kappa[G]^x|
        relations (int): Order of the relation subgroup
    """

    invariants: AbelianInvariants
    units: int
    relations: int


def residue_k1(kappa: FiniteGroupRing) -> ResidueK1:
    """
    Brute-force K1(kappa[G]) over all pairs (a, b) with 1 + ab a unit.

    Raises:
        BudgetExceededError: If kappa[G] is too large to enumerate
    """
    units = kappa.units
    everything = np.arange(kappa.size, dtype=np.int64)
    relations: set[int] = set()
    for a in everything:
        x = kappa.add(kappa.one, kappa.multiply(a, everything))
        y = kappa.add(kappa.one, kappa.multiply(everything, a))
        mask = np.isin(x, units)
        relations.update(kappa.multiply(x[mask], kappa.invert(y[mask])).tolist())
    subgroup = kappa.closure(sorted(relations))
    invariants = kappa.quotient_invariants(subgroup)
    logger.info(
        "residue_k1", group=kappa.group.name, units=len(units), relations=len(subgroup), k1=str(invariants)
    )
    return ResidueK1(invariants, len(units), len(subgroup))


Matrices = tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]


def _matrix_entries(codes: np.ndarray, size: int) -> Matrices:
    a, b, c, d = (codes // size**k % size for k in (3, 2, 1, 0))
    return a, b, c, d


def _matrix_codes(entries: Matrices, size: int) -> np.ndarray:
    a, b, c, d = entries
    return ((a * size + b) * size + c) * size + d


def _matrix_product(kappa: FiniteGroupRing, left: Matrices, right: Matrices) -> Matrices:
    a, b, c, d = left
    e, f, g, h = right
    mul, add = kappa.multiply, kappa.add
    return (
        add(mul(a, e), mul(b, g)),
        add(mul(a, f), mul(b, h)),
        add(mul(c, e), mul(d, g)),
        add(mul(c, f), mul(d, h)),
    )


def gl2_index(kappa: FiniteGroupRing) -> int:
    """
    [GL_2 : E_2] over a commutative kappa[G], by enumerating every 2 x 2 matrix.

    E_2 is generated by the elementary matrices; for a semilocal commutative
    ring the index is |K1| = |kappa[G]^x|.
    """
    size = kappa.size
    codes = np.arange(size**4, dtype=np.int64)
    a, b, c, d = (kappa.decode(x) for x in _matrix_entries(codes, size))
    det = kappa.encode(convolve(kappa.ring, kappa.group, a, d) - convolve(kappa.ring, kappa.group, b, c))
    general = codes[np.isin(det, kappa.units)]
    one, zero = kappa.one, 0
    gens = [(one, r, zero, one) for r in range(1, size)] + [(one, zero, r, one) for r in range(1, size)]
    identity = _matrix_codes((one, zero, zero, one), size)
    members = {int(identity)}
    frontier = np.array([identity], dtype=np.int64)
    while frontier.size:
        entries = _matrix_entries(frontier, size)
        products = np.concatenate(
            [_matrix_codes(_matrix_product(kappa, entries, tuple(np.int64(x) for x in g)), size) for g in gens]
        )
        fresh = set(products.tolist()) - members
        members |= fresh
        frontier = np.array(sorted(fresh), dtype=np.int64)
    logger.info("gl2_index", group=kappa.group.name, general=len(general), elementary=len(members))
    return len(general) // len(members)


def _k1_witnesses(kappa: FiniteGroupRing, k1: ResidueK1) -> list[Witness]:
    out: list[Witness] = []
    if k1.invariants.order * k1.relations != k1.units:
        out.append({"k1": str(k1.invariants), "units": k1.units, "relations": k1.relations})
    if kappa.group.is_abelian() and k1.relations != 1:
        out.append({"reason": "relation subgroup of a commutative ring is not trivial", "relations": k1.relations})
    if kappa.group.order == 1:
        expected = AbelianInvariants.from_cyclic_orders([kappa.ring.field.order - 1])
        if k1.invariants != expected:
            out.append({"k1": str(k1.invariants), "expected": str(expected)})
    if kappa.group.is_abelian() and kappa.size**4 <= settings.cap(settings.residue_pair_bound):
        index = gl2_index(kappa)
        if index != k1.invariants.order:
            out.append({"k1": str(k1.invariants), "gl2_over_e2": index})
    return out


def _reduction_failures(kappa: FiniteGroupRing, base: UnramifiedRing, rng: np.random.Generator, samples: int) -> int:
    """Residue units x whose lifts to O/p^N[G] do not multiply with lifts of x^-1 into 1 + pO[G]."""
    if kappa.size <= kappa.bound:
        x, y = kappa.decode(kappa.units), kappa.decode(kappa.inverses)
    else:
        coords = rng.integers(0, kappa.ring.p, size=(samples, kappa.group.order, kappa.ring.n)).astype(object)
        found = [GroupRingElement(kappa.ring, kappa.group, c) for c in coords]
        found = [e for e in found if e.is_unit()]
        if not found:
            return 0
        x = np.stack([e.coeffs for e in found])
        y = np.stack([e.inverse().coeffs for e in found])
    product = convolve(base, kappa.group, x, y) % base.p
    one = GroupRingElement.one(kappa.ring, kappa.group).coeffs
    return int(np.sum(np.any(product != one, axis=(-2, -1))))


def kernel_invariants(ring: UnramifiedRing, group: Group, rng: np.random.Generator) -> list[int]:
    """
    Invariants over Z/p^N of the span of classproj(Log(1 + p^k y)) for sampled y,
    k = 1 for odd p and k = 2 for p = 2.

    Raises:
        PrecisionExhaustedError: If the logarithm loses digits below p^N
        ConsistencyError: If a logarithm is not integral
    """
    p, precision = ring.p, ring.precision
    k = 2 if p == 2 else 1
    size = len(group.classes) * ring.n
    wide = ring.with_precision(precision + 2)
    columns = []
    for _ in range(size + 16):
        y = rng.integers(0, ring.modulus, size=(group.order, ring.n)).astype(object)
        u = GroupRingElement.one(wide, group) + GroupRingElement(wide, group, y * p**k)
        log = gr_log(u, precision)
        if log.known_precision < precision:
            msg = f"Log kept {log.known_precision} of {precision} digits"
            raise PrecisionExhaustedError(msg)
        scaled = log.value.classproj().coeffs
        if np.any(scaled % p**log.shift):
            msg = "Log of a unit congruent to 1 is not integral"
            raise ConsistencyError(msg)
        columns.append(((scaled // p**log.shift) % ring.modulus).reshape(-1))
    return local_smith_form(np.stack(columns, axis=1), p, precision).module_invariants()


def _kernel_witnesses(base: UnramifiedRing, group: Group, rng: np.random.Generator) -> list[Witness]:
    p, precision = base.p, base.precision
    k = 2 if p == 2 else 1
    if precision <= k:
        logger.info("kernel_rank_skipped", precision=precision, p=p)
        return []
    invariants = kernel_invariants(base, group, rng)
    expected = [precision - k] * (len(group.classes) * base.n)
    if invariants != expected:
        return [{"kernel_invariants": invariants, "expected": expected}]
    return []


def residue_sequence_check(scenario: DescentScenario) -> VerificationReport:
    """Brute-force K1(kappa[G]), surjectivity of reduction and the rank of its kernel."""
    group = resolve_group(scenario.group)

    def body(witnesses: list[Witness]) -> int:
        base, _ = scenario_rings(scenario)
        rng = scenario_rng(scenario, CLAIM)
        kappa = FiniteGroupRing(base.with_precision(1), group, settings.cap(settings.residue_enumeration_bound))
        pair_bound = settings.cap(settings.residue_pair_bound)
        if kappa.size <= pair_bound:
            witnesses.extend(_k1_witnesses(kappa, residue_k1(kappa)))
        else:
            logger.info("residue_k1_skipped", size=kappa.size, bound=pair_bound)
        failures = _reduction_failures(kappa, base, rng, scenario.samples)
        if failures:
            witnesses.append({"reduction_failures": failures})
        witnesses.extend(_kernel_witnesses(base, group, rng))
        return scenario.precision

    return run_check(CLAIM, scenario, body)
