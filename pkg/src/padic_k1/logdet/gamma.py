"""
The integral logarithm.

For a p-group G, Gamma sends K1(O[G]) onto O[C_G]:

    Gamma_I(u) = classproj((p - Psi) Log u) / p      for u in 1 + I(O[G])
    Gamma_R(x) = (p - phi) Log(x / w(x)) / p         for x in O^x

and Gamma(u) = Gamma_I(u / aug(u)) + Gamma_R(aug(u)) placed on the identity
class. Series are evaluated one digit beyond the ring so that the final
division by p is exact; a result is guaranteed to one digit less than its
argument.

Example:
    ```python
    ring = unramified_ring(make_extension(3, 1), 3)
    assert gamma_R(ring.from_int(4)) == ring.from_int(5)
    ```
"""

import itertools
from dataclasses import dataclass

import numpy as np
import structlog

from padic_k1.coeff.linalg import local_smith_form
from padic_k1.coeff.logexp import scalar_log
from padic_k1.coeff.series import scaled_log
from padic_k1.coeff.unramified import RingElement, UnramifiedRing, ring_embedding, ring_frobenius, teichmuller
from padic_k1.exceptions import ConsistencyError, DomainError, NotAUnitError, PrecisionExhaustedError
from padic_k1.groupring.element import ClassFunctionElement, GroupRingElement, psi_operator
from padic_k1.groupring.transfer import GroupRingMatrix, GroupRingMatrixAlgebra
from padic_k1.groups.group import Group
from padic_k1.logdet.logarithm import gr_log

logger = structlog.get_logger(__name__)


def assertion_precision(precision: int, p: int) -> int:
    """N - 1 - floor(log_p N), the digits every Gamma-level identity is asserted at."""
    loss, power = 0, p
    while power <= precision:
        loss += 1
        power *= p
    return precision - 1 - loss


def gamma_R(x: RingElement) -> RingElement:
    """
    Raises:
        NotAUnitError: If x is not a unit
        PrecisionExhaustedError: If x carries a single digit
    """
    if not x.is_unit():
        msg = "gamma_R needs a unit"
        raise NotAUnitError(msg)
    ring = x.ring
    precision = ring.precision
    omega = teichmuller(x.residue(), precision)
    principal = x * omega.inverse()
    work = ring.with_precision(precision + 1)
    log = scalar_log(work.element(principal.coeffs))
    twisted = (log * ring.p - ring_frobenius(log)).divide_by_p()
    known = min(x.known_precision, precision) - 1
    if known <= 0:
        msg = "gamma_R has no guaranteed digits at this precision"
        raise PrecisionExhaustedError(msg)
    return ring.element(twisted.coeffs, known)


def on_identity_class(value: RingElement, group: Group) -> ClassFunctionElement:
    """The class function carrying value on the identity class and zero elsewhere."""
    coeffs = np.zeros((len(group.classes), value.ring.n), dtype=object)
    coeffs[group.classes.class_of[group.identity]] = value.coeffs
    return ClassFunctionElement(value.ring, group, coeffs, value.known_precision)


def divided_class_projection(
    scaled: GroupRingElement, shift: int, known: int, target: UnramifiedRing
) -> ClassFunctionElement:
    """
    classproj((p - Psi) L) / p^(shift + 1) for L = p^shift * Log, known to
    the given number of digits.

    Raises:
        PrecisionExhaustedError: If no digit survives the division
        ConsistencyError: If the projection is not divisible as it must be
    """
    p = target.p
    if known <= shift + 1:
        msg = "integral logarithm has no guaranteed digits left"
        raise PrecisionExhaustedError(msg)
    twisted = p * scaled - psi_operator(scaled)
    projected = twisted.classproj().coeffs % p**known
    divisor = p ** (shift + 1)
    if np.any(projected % divisor):
        msg = "class projection of (p - Psi)Log is not divisible by p"
        raise ConsistencyError(msg)
    digits = min(known - shift - 1, target.precision)
    logger.debug("integral_log", group=scaled.group.name, shift=shift, digits=digits)
    return ClassFunctionElement(target, scaled.group, projected // divisor, digits)


def gamma_I(u: GroupRingElement) -> ClassFunctionElement:
    """
    Gamma on 1 + I(O[G]).

    Raises:
        DomainError: If aug(u) != 1 or Log does not converge at u
    """
    if u.aug() != 1:
        msg = "gamma_I needs an argument of augmentation 1"
        raise DomainError(msg)
    log = gr_log(u, u.ring.precision + 1)
    return divided_class_projection(log.value, log.shift, log.value.known_precision, u.ring)


def gamma_full(u: GroupRingElement) -> ClassFunctionElement:
    """
    Gamma on O[G]^x through the scalar section of the augmentation.

    Raises:
        NotAUnitError: If u is not a unit
    """
    a = u.aug()
    if not a.is_unit() or not u.is_unit():
        msg = "gamma_full needs a unit"
        raise NotAUnitError(msg)
    return gamma_I(u * a.inverse()) + on_identity_class(gamma_R(a), u.group)


def scalar_determinant(rows: list[list[RingElement]]) -> RingElement:
    """
    Determinant over the local ring O by elimination on unit pivots, falling
    back to the Leibniz expansion when no column has a unit.
    """
    size = len(rows)
    matrix = [list(r) for r in rows]
    det = matrix[0][0].ring.one
    for c in range(size):
        pivot = next((r for r in range(c, size) if matrix[r][c].is_unit()), None)
        if pivot is None:
            return _leibniz(rows)
        if pivot != c:
            matrix[c], matrix[pivot] = matrix[pivot], matrix[c]
            det = -det
        det = det * matrix[c][c]
        inv = matrix[c][c].inverse()
        for r in range(c + 1, size):
            factor = matrix[r][c] * inv
            matrix[r] = [a - factor * b for a, b in zip(matrix[r], matrix[c], strict=True)]
    return det


def _leibniz(rows: list[list[RingElement]]) -> RingElement:
    size = len(rows)
    total = rows[0][0].ring.zero
    for perm in itertools.permutations(range(size)):
        inversions = sum(1 for i in range(size) for j in range(i + 1, size) if perm[i] > perm[j])
        term = rows[0][0].ring.one
        for i, j in enumerate(perm):
            term = term * rows[i][j]
        total = total - term if inversions % 2 else total + term
    return total


def gamma_matrix(m: GroupRingMatrix) -> ClassFunctionElement:
    """
    Gamma of the K1 class of an invertible matrix over O[G]: the trace of
    Log(A^-1 M) for A the augmented matrix, plus Gamma_R(det A).

    Raises:
        NotAUnitError: If the matrix is not invertible
    """
    if not m.is_invertible():
        msg = "gamma_matrix needs an invertible matrix"
        raise NotAUnitError(msg)
    ring, group, k = m.ring, m.group, m.size
    a = m.augmented()
    x = a.inverse() * m
    algebra = GroupRingMatrixAlgebra(ring, group, k)
    log = scaled_log(x.entries, algebra, ring.precision + 1)
    work = ring.with_precision(ring.precision + 1 + log.shift)
    trace = sum(log.value[i, i] for i in range(k)) % work.modulus
    known = min(log.known_precision, m.known_precision + log.shift - (0 if algebra.commutative else 1))
    scaled = GroupRingElement(work, group, trace, max(known, 1))
    part_i = divided_class_projection(scaled, log.shift, known, ring)
    identity = group.identity
    rows = [[ring.element(a.entries[i, j, identity].tolist()) for j in range(k)] for i in range(k)]
    return part_i + on_identity_class(gamma_R(scalar_determinant(rows)), group)


def relative_trace(c: ClassFunctionElement, base: UnramifiedRing) -> ClassFunctionElement:
    """
    Coefficientwise trace from O_S[C_G] down to O_R[C_G].

    Raises:
        NoEmbeddingError: If O_R does not embed in O_S
        ConsistencyError: If a trace falls outside the image of O_R
    """
    source = base.with_precision(c.ring.precision)
    degree = c.ring.n // source.n
    total = np.zeros_like(c.coeffs, dtype=object)
    for i in range(degree):
        total = total + c.ring.frobenius_vectors(c.coeffs, source.n * i).astype(object)
    total = total % c.ring.modulus
    embedding = ring_embedding(source, c.ring)
    solution = local_smith_form(
        embedding.matrix, c.ring.p, c.ring.precision, track_columns=True, rhs=total.T
    ).solve()
    if solution is None:
        msg = "relative trace is not defined over the base ring"
        raise ConsistencyError(msg)
    return ClassFunctionElement(source, c.group, solution.T, c.known_precision)


@dataclass(frozen=True)
class WhiteheadClass:
    """
    A unit of O[G] modulo G^ab x mu_O, normalized to augmentation in 1 + pO.

    Attributes:
        representative (GroupRingElement): The unit as given
        teichmuller_part (RingElement): w(aug(u)), split off
        normalized (GroupRingElement): u / w(aug(u))
    """

    representative: GroupRingElement
    teichmuller_part: RingElement
    normalized: GroupRingElement

    @classmethod
    def of(cls, u: GroupRingElement) -> "WhiteheadClass":
        """
        Raises:
            NotAUnitError: If u is not a unit
        """
        if not u.is_unit():
            msg = "Whitehead classes are represented by units"
            raise NotAUnitError(msg)
        omega = teichmuller(u.aug().residue(), u.ring.precision)
        return cls(u, omega, u * omega.inverse())

    def gamma(self) -> ClassFunctionElement:
        """Gamma_Wh: Gamma vanishes on G^ab x mu, so it is defined on classes."""
        return gamma_full(self.normalized)
