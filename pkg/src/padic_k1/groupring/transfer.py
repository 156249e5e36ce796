"""
Coefficient extension and transfer between O_R[G] and O_S[G].

O_S is free over O_R on the powers 1, t, ..., t^(d-1) of the generator t of
O_S, d = [S : R]. Multiplication by a unit of O_S[G] on O_S[G] = O_R[G]^d
is written in that basis as a d x d matrix over O_R[G].
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np
import structlog

from padic_k1.coeff.linalg import IntMatrix, inverse_mod, rank_mod_p, solve_mod_p
from padic_k1.coeff.series import TruncatedAlgebra
from padic_k1.coeff.unramified import ALL_DIGITS, RingEmbedding, UnramifiedRing, known_digits, ring_embedding
from padic_k1.exceptions import NoEmbeddingError, NotAUnitError
from padic_k1.groupring.element import GroupRingElement, convolve, left_regular_matrix
from padic_k1.groups.group import Group

logger = structlog.get_logger(__name__)


@dataclass(frozen=True)
class RelativeBasis:
    """The O_R-basis x_R^i t^j of O_S, indexed by j * n_R + i."""

    source: UnramifiedRing
    target: UnramifiedRing

    def __post_init__(self) -> None:
        if self.target.n % self.source.n or self.target.precision != self.source.precision:
            msg = f"{self.target} is not an unramified extension of {self.source}"
            raise NoEmbeddingError(msg)

    @property
    def degree(self) -> int:
        return self.target.n // self.source.n

    @cached_property
    def embedding(self) -> RingEmbedding:
        return ring_embedding(self.source, self.target)

    @cached_property
    def generator_powers(self) -> IntMatrix:
        """Coordinates of t^j, shape (d, n_S)."""
        t, power, rows = self.target.generator, self.target.one, []
        for _ in range(self.degree):
            rows.append(power.coeffs)
            power = power * t
        return np.array(rows, dtype=object)

    @cached_property
    def matrix(self) -> IntMatrix:
        emb = self.embedding.matrix.astype(object)
        cols = []
        for j in range(self.degree):
            images = self.target.mul_vectors(emb.T, np.broadcast_to(self.generator_powers[j], emb.T.shape))
            cols += [images[i] for i in range(self.source.n)]
        return np.array(cols, dtype=object).T

    @cached_property
    def inverse(self) -> IntMatrix:
        return inverse_mod(self.matrix, self.target.p, self.target.precision).astype(object)

    def coordinates(self, values: IntMatrix) -> IntMatrix:
        """O_S coordinates (..., n_S) to relative coordinates (..., d, n_R)."""
        flat = (np.asarray(values, dtype=object) @ self.inverse.T) % self.target.modulus
        return flat.reshape(*flat.shape[:-1], self.degree, self.source.n)

def i_star(x: GroupRingElement, target: UnramifiedRing) -> GroupRingElement:
    """
    Coefficientwise inclusion O_R[G] -> O_S[G].

    Raises:
        NoEmbeddingError: If the residue field of O_R does not embed
    """
    target = target.with_precision(x.ring.precision)
    embedding = ring_embedding(x.ring, target)
    coeffs = (x.coeffs.astype(object) @ embedding.matrix.T.astype(object)) % target.modulus
    return GroupRingElement(target, x.group, coeffs, x.known_precision)


@dataclass(frozen=True, eq=False)
class GroupRingMatrix:
    """
    A square matrix over O[G].

    Attributes:
        entries (IntMatrix): Shape (k, k, |G|, n)
    """

    ring: UnramifiedRing
    group: Group
    entries: IntMatrix
    known_precision: int = ALL_DIGITS

    def __post_init__(self) -> None:
        arr = np.asarray(self.entries, dtype=object) % self.ring.modulus
        k = arr.shape[0]
        if arr.shape != (k, k, self.group.order, self.ring.n):
            msg = f"matrix entries have shape {arr.shape}"
            raise ValueError(msg)
        object.__setattr__(self, "entries", arr)
        object.__setattr__(self, "known_precision", known_digits(self.known_precision, self.ring.precision))

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def identity(cls, ring: UnramifiedRing, group: Group, size: int) -> "GroupRingMatrix":
        out = np.zeros((size, size, group.order, ring.n), dtype=object)
        for i in range(size):
            out[i, i, group.identity, 0] = 1
        return cls(ring, group, out)

    def entry(self, i: int, j: int) -> GroupRingElement:
        return GroupRingElement(self.ring, self.group, self.entries[i, j], self.known_precision)

    def __mul__(self, other: "GroupRingMatrix") -> "GroupRingMatrix":
        return GroupRingMatrix(
            self.ring,
            self.group,
            matrix_product(self.ring, self.group, self.entries, other.entries),
            min(self.known_precision, other.known_precision),
        )

    def __sub__(self, other: "GroupRingMatrix") -> "GroupRingMatrix":
        return GroupRingMatrix(
            self.ring, self.group, self.entries - other.entries, min(self.known_precision, other.known_precision)
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GroupRingMatrix):
            return NotImplemented
        return other.group is self.group and bool(np.array_equal(self.entries, other.entries))

    __hash__ = None  # type: ignore[assignment]

    def augmented(self) -> "GroupRingMatrix":
        """The image under O[G] -> O, placed back on the identity."""
        out = np.zeros_like(self.entries)
        out[:, :, self.group.identity] = self.entries.sum(axis=2)
        return GroupRingMatrix(self.ring, self.group, out, self.known_precision)

    @cached_property
    def regular_matrix(self) -> IntMatrix:
        k, block = self.size, self.group.order * self.ring.n
        out = np.zeros((k * block, k * block), dtype=np.int64)
        for i in range(k):
            for j in range(k):
                out[i * block : (i + 1) * block, j * block : (j + 1) * block] = left_regular_matrix(
                    self.ring, self.group, self.entries[i, j]
                )
        return out

    def is_invertible(self) -> bool:
        return rank_mod_p(self.regular_matrix, self.ring.p) == self.regular_matrix.shape[0]

    def inverse(self) -> "GroupRingMatrix":
        """
        Raises:
            NotAUnitError: If the matrix is singular modulo the radical
        """
        if not self.is_invertible():
            msg = "matrix over the group ring is not invertible"
            raise NotAUnitError(msg)
        k, g, n = self.size, self.group.order, self.ring.n
        columns = []
        for j in range(k):
            target = np.zeros(k * g * n, dtype=np.int64)
            target[(j * g + self.group.identity) * n] = 1
            columns.append(solve_mod_p(self.regular_matrix, target, self.ring.p).reshape(k, g, n))  # type: ignore[union-attr]
        y = GroupRingMatrix(self.ring, self.group, np.stack(columns, axis=1), self.known_precision)
        two = GroupRingMatrix.identity(self.ring, self.group, k)
        two = GroupRingMatrix(self.ring, self.group, 2 * two.entries)
        for _ in range(max(1, self.ring.precision.bit_length())):
            y = y * (two - self * y)
        return y


def matrix_product(ring: UnramifiedRing, group: Group, a: IntMatrix, b: IntMatrix) -> IntMatrix:
    """Product of (k, k, |G|, n) arrays of group ring entries."""
    terms = convolve(ring, group, np.asarray(a)[:, :, None], np.asarray(b)[None, :, :])
    return terms.astype(object).sum(axis=1) % ring.modulus


class GroupRingMatrixAlgebra(TruncatedAlgebra):
    """M_k(O[G]) as a series algebra on (k, k, |G|, n) arrays."""

    def __init__(self, ring: UnramifiedRing, group: Group, size: int) -> None:
        self.ring = ring
        self.group = group
        self.size = size
        self.p = ring.p
        self.commutative = size == 1 and group.is_abelian()

    def multiply(self, a: IntMatrix, b: IntMatrix, precision: int) -> IntMatrix:
        return matrix_product(self.ring.with_precision(precision), self.group, a, b)

    def identity(self) -> IntMatrix:
        return GroupRingMatrix.identity(self.ring, self.group, self.size).entries

    def power_cap(self) -> int:
        return self.size * self.group.order * self.ring.n + 1


def transfer_matrix(u: GroupRingElement, base: UnramifiedRing) -> GroupRingMatrix:
    """
    Multiplication by u on O_S[G] = O_R[G]^d as a d x d matrix over O_R[G].

    Raises:
        NoEmbeddingError: If O_S is not an extension of O_R
        NotAUnitError: If u is not a unit
    """
    if not u.is_unit():
        msg = "transfer needs a unit"
        raise NotAUnitError(msg)
    basis = RelativeBasis(base.with_precision(u.ring.precision), u.ring)
    d = basis.degree
    shifted = u.ring.mul_vectors(
        u.coeffs[:, None, :], basis.generator_powers.astype(u.ring.dtype)[None, :, :]
    )
    rel = basis.coordinates(shifted)  # (G, j, i, n_R)
    entries = np.transpose(rel, (2, 1, 0, 3))
    logger.debug("transfer_matrix", degree=d, group=u.group.name)
    return GroupRingMatrix(basis.source, u.group, entries, u.known_precision)
