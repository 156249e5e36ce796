"""
Units with prescribed integral logarithm.

Over a finite unramified O the image of Gamma is the kernel of
omega: O[C_G] -> G^ab, sum a_C C -> prod rep(C)^Tr(a_C). Gamma is additive
on K1, so once units b_j are found whose Gamma values generate that kernel
modulo p^P, every target in it is hit by a product prod b_j^(c_j) with
exponents from a local Smith form solve.

A target with omega(t) of order p^m is not in the image over O. Passing to
the unramified extension of degree p^m multiplies every trace by p^m, which
kills the obstruction, and the target is solved there. Results are
re-verified by an independent evaluation of Gamma.
"""

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import structlog

from padic_k1.coeff.finite_field import make_extension
from padic_k1.coeff.linalg import IntMatrix, local_smith_form
from padic_k1.coeff.unramified import UnramifiedRing, ring_embedding, trace, unramified_ring
from padic_k1.exceptions import ConsistencyError
from padic_k1.groupring.element import ClassFunctionElement, GroupRingElement
from padic_k1.groupring.units import UnitKind, sample_unit
from padic_k1.groups.abelian import AbelianInvariants
from padic_k1.groups.group import Group, GroupHomomorphism, abelianization
from padic_k1.logdet.gamma import gamma_full

logger = structlog.get_logger(__name__)

_KINDS = (UnitKind.ONE_PLUS_I, UnitKind.ONE_PLUS_PR)


def p_level(e: int, p: int) -> int:
    """Smallest m with p^m >= e."""
    m, power = 0, 1
    while power < e:
        power *= p
        m += 1
    return m


def image_exponent(invariants: AbelianInvariants, size: int, precision: int, p: int) -> int:
    """
    log_p of the order of ker(omega) modulo p^precision.

    O[C_G]/p^P has p^(P * size) elements and omega maps it onto G^ab/p^P.
    """
    lost = sum(min(p_level(d, p), precision) for d in invariants.divisors)
    return precision * size - lost


def omega(target: ClassFunctionElement, projection: GroupHomomorphism) -> int:
    """
    omega(t) in G^ab for the integer lift of t with coordinates in [0, p^N).

    Args:
        target (ClassFunctionElement): An element of O[C_G]
        projection (GroupHomomorphism): G -> G^ab

    Returns:
        int: Index of omega(t) in the quotient group
    """
    quotient = projection.target
    exponent = quotient.exponent
    ring = target.ring.with_precision(max(target.ring.precision, p_level(exponent, target.ring.p)))
    acc = quotient.identity
    for rep, row in zip(target.group.classes.representatives, target.coeffs, strict=True):
        tr = trace(ring.element([int(c) for c in row])) % exponent
        acc = quotient.mul(acc, quotient.power(projection(rep), tr))
    return acc


def extend_scalars(c: ClassFunctionElement, ring: UnramifiedRing) -> ClassFunctionElement:
    """
    Coefficientwise image of O_R[C_G] in O_S[C_G].

    Raises:
        NoEmbeddingError: If O_R does not embed in O_S
    """
    embedding = ring_embedding(c.ring, ring.with_precision(c.ring.precision))
    coeffs = (embedding.matrix @ np.asarray(c.coeffs, dtype=object).T).T % embedding.target.modulus
    return ClassFunctionElement(embedding.target, c.group, coeffs, c.known_precision)


@dataclass(frozen=True)
class GammaBasis:
    """
    Units whose Gamma values generate ker(omega) modulo p^precision.

    Attributes:
        ring (UnramifiedRing): Coefficient ring of the units
        group (Group): The group G
        units (tuple[GroupRingElement, ...]): The generating units
        columns (IntMatrix): Gamma(units[j]) flattened in column j
        precision (int): Digits the columns are known to
    """

    ring: UnramifiedRing
    group: Group
    units: tuple[GroupRingElement, ...]
    columns: IntMatrix
    precision: int

    def exponents(self, target: ClassFunctionElement) -> list[int]:
        """
        Raises:
            ConsistencyError: If the target is outside the span
        """
        p = self.ring.p
        rhs = np.asarray(target.coeffs, dtype=object).reshape(-1) % p**self.precision
        solution = local_smith_form(
            self.columns, p, self.precision, track_columns=True, rhs=rhs
        ).solve()
        if solution is None:
            msg = "Gamma target is outside the span of the basis units"
            raise ConsistencyError(msg)
        return [int(c) % p**self.precision for c in solution[:, 0]]

    def preimage(self, target: ClassFunctionElement) -> GroupRingElement:
        """A unit u with Gamma(u) = target modulo p^precision."""
        u = GroupRingElement.one(self.ring, self.group)
        for b, c in zip(self.units, self.exponents(target), strict=True):
            if c:
                u = u * b**c
        return u


def _scalar_units(ring: UnramifiedRing, group: Group) -> list[GroupRingElement]:
    out = []
    for i in range(ring.n):
        coords = [0] * ring.n
        coords[i] = ring.p
        out.append(GroupRingElement.basis(ring, group, group.identity, ring.element(coords) + 1))
    return out


def gamma_basis(
    ring: UnramifiedRing, group: Group, precision: int, seed: int, attempts: int | None = None
) -> GammaBasis:
    """
    Collect units until their Gamma values span ker(omega) modulo p^precision.

    A candidate is kept when it enlarges the span.

    Raises:
        ConsistencyError: If the span stays deficient after all attempts
    """
    p = ring.p
    size = len(group.classes) * ring.n
    invariants, _ = abelianization(group)
    goal = image_exponent(invariants, size, precision, p)
    attempts = attempts or 8 * size + 16
    units: list[GroupRingElement] = []
    columns: list[IntMatrix] = []
    reached = 0
    candidates = iter(_scalar_units(ring, group))
    used = 0
    for attempt in range(attempts):
        if reached >= goal:
            break
        used = attempt + 1
        candidate = next(candidates, None)
        if candidate is None:
            candidate = sample_unit(ring, group, _KINDS[attempt % len(_KINDS)], seed + attempt)
        column = np.asarray(gamma_full(candidate).coeffs, dtype=object).reshape(-1) % p**precision
        trial = np.stack([*columns, column], axis=1)
        grown = sum(local_smith_form(trial, p, precision).module_invariants())
        if grown > reached:
            units.append(candidate)
            columns.append(column)
            reached = grown
    if reached < goal:
        msg = f"Gamma images of {attempts} units reach p^{reached} of p^{goal} elements mod p^{precision}"
        raise ConsistencyError(msg)
    logger.debug("gamma_basis", group=group.name, degree=ring.n, units=len(units), attempts=used)
    return GammaBasis(ring, group, tuple(units), np.stack(columns, axis=1), precision)


@dataclass(frozen=True)
class GammaPreimage:
    """
    A unit u with Gamma(u) = target, both over the ring u lives in.

    Attributes:
        unit (GroupRingElement): The constructed unit
        target (ClassFunctionElement): The target, extended to unit.ring
        degree_growth (int): [O_S : O_R] for the extension the unit needed
    """

    unit: GroupRingElement
    target: ClassFunctionElement
    degree_growth: int = 1


@dataclass
class GammaSolver:
    """
    Gamma preimages for targets over O_R, moving up the p-power tower of
    unramified extensions whenever omega obstructs.

    Attributes:
        ring (UnramifiedRing): O_R
        group (Group): The group G
        precision (int): Digits every preimage is asserted to
        seed (int): Seed for the unit samples of each basis
    """

    ring: UnramifiedRing
    group: Group
    precision: int
    seed: int
    _bases: dict[int, GammaBasis] = field(default_factory=dict, init=False, repr=False)

    @cached_property
    def projection(self) -> GroupHomomorphism:
        return abelianization(self.group)[1]

    def basis(self, degree: int) -> GammaBasis:
        """The basis over the unramified ring of the given degree, built once."""
        if degree not in self._bases:
            ring = self.ring
            if degree != ring.n:
                ring = unramified_ring(make_extension(ring.p, degree), ring.precision)
            self._bases[degree] = gamma_basis(ring, self.group, self.precision, self.seed + degree)
        return self._bases[degree]

    def extension_degree(self, target: ClassFunctionElement) -> int:
        """Degree over Z_p of the smallest tower ring where the target lies in the image."""
        obstruction = omega(target, self.projection)
        return self.ring.n * self.projection.target.element_orders[obstruction]

    def preimage(self, target: ClassFunctionElement) -> GammaPreimage:
        """
        Raises:
            ConsistencyError: If no basis can be assembled or the solve fails
        """
        degree = self.extension_degree(target)
        basis = self.basis(degree)
        lifted = target
        if degree != self.ring.n:
            lifted = extend_scalars(target, basis.ring)
            logger.info(
                "gamma_tower_extended",
                group=self.group.name,
                degree_from=self.ring.n,
                degree_to=degree,
            )
        return GammaPreimage(basis.preimage(lifted), lifted, degree // self.ring.n)
