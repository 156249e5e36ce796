"""
Group Ring Module

Elements of O[G] for a truncated unramified ring O are integer arrays of
shape (|G|, n): row g holds the O-coordinates of the coefficient of g.
Products are convolutions along the multiplication table, vectorized over
any leading axes, so the same kernel serves single elements, batches and
matrices over O[G].

Example:
    ```python
    ring = unramified_ring(make_extension(3, 1), 3)
    c4 = load_group("C4")
    g = GroupRingElement.basis(ring, c4, c4.generators["a"])
    one = GroupRingElement.one(ring, c4)
    assert (one + g) * (one - g) == one - g * g
    ```
"""

from collections.abc import Sequence
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import structlog

from padic_k1.coeff.linalg import IntMatrix, rank_mod_p, solve_mod_p
from padic_k1.coeff.series import TruncatedAlgebra
from padic_k1.coeff.unramified import ALL_DIGITS, RingElement, UnramifiedRing, known_digits
from padic_k1.exceptions import NotAUnitError, NotCentralError
from padic_k1.groups.group import Group, abelianization

logger = structlog.get_logger(__name__)


def convolve(ring: UnramifiedRing, group: Group, a: IntMatrix, b: IntMatrix) -> IntMatrix:
    """
    Group ring product of coordinate arrays (..., |G|, n), broadcasting over
    the leading axes.
    """
    g, n = group.order, ring.n
    a = np.asarray(a) % ring.modulus
    b = np.asarray(b) % ring.modulus
    prod = ring.mul_vectors(a[..., :, None, :], b[..., None, :, :])
    lead = prod.shape[:-3]
    flat = prod.reshape(-1, g * g, n)
    out = np.zeros((flat.shape[0], g, n), dtype=flat.dtype)
    rows = np.arange(flat.shape[0])[:, None]
    np.add.at(out, (rows, group.table.ravel()[None, :]), flat)
    return (out % ring.modulus).reshape(*lead, g, n)


def left_regular_matrix(ring: UnramifiedRing, group: Group, coeffs: IntMatrix) -> IntMatrix:
    """
    Matrix over F_p of left multiplication by the residue of an element on
    k[G], with basis x^j h ordered by (h, j).
    """
    g, n, p = group.order, ring.n, ring.p
    basis = np.eye(n, dtype=np.int64)
    # blocks[g][i, j]: coordinate i of a_g * x^j
    blocks = np.swapaxes(ring.mul_vectors(np.asarray(coeffs)[:, None, :] % p, basis[None, :, :]), 1, 2) % p
    out = np.zeros((g * n, g * n), dtype=np.int64)
    for h in range(g):
        for x in range(g):
            k = group.mul(x, h)
            out[k * n : (k + 1) * n, h * n : (h + 1) * n] = blocks[x]
    return out


@dataclass(frozen=True, eq=False)
class GroupRingElement:
    """
    An element of O[G].

    Attributes:
        ring (UnramifiedRing): The coefficient ring O
        group (Group): The group G
        coeffs (IntMatrix): Coordinates, shape (|G|, n)
        known_precision (int): Guaranteed p-adic digits, at most the ring
            precision; the default keeps all of them

    Raises:
        PrecisionExhaustedError: If known_precision is not positive
    """

    ring: UnramifiedRing
    group: Group
    coeffs: IntMatrix
    known_precision: int = ALL_DIGITS

    def __post_init__(self) -> None:
        arr = np.asarray(self.coeffs, dtype=object) % self.ring.modulus
        if arr.shape != (self.group.order, self.ring.n):
            msg = f"coefficient array has shape {arr.shape}, expected {(self.group.order, self.ring.n)}"
            raise ValueError(msg)
        object.__setattr__(self, "coeffs", arr.astype(self.ring.dtype))
        object.__setattr__(self, "known_precision", known_digits(self.known_precision, self.ring.precision))

    @classmethod
    def zero(cls, ring: UnramifiedRing, group: Group) -> "GroupRingElement":
        return cls(ring, group, np.zeros((group.order, ring.n), dtype=np.int64))

    @classmethod
    def one(cls, ring: UnramifiedRing, group: Group) -> "GroupRingElement":
        return cls.basis(ring, group, group.identity)

    @classmethod
    def basis(
        cls, ring: UnramifiedRing, group: Group, g: int, coefficient: RingElement | int = 1
    ) -> "GroupRingElement":
        """The element r*g."""
        value = ring.from_int(coefficient) if isinstance(coefficient, int) else coefficient
        coeffs = np.zeros((group.order, ring.n), dtype=object)
        coeffs[g] = value.coeffs
        return cls(ring, group, coeffs, value.known_precision)

    @classmethod
    def from_terms(
        cls, ring: UnramifiedRing, group: Group, terms: Sequence[tuple[RingElement | int, int]]
    ) -> "GroupRingElement":
        """Sum of r_i * g_i over (r_i, g_i) pairs."""
        acc = cls.zero(ring, group)
        for r, g in terms:
            acc = acc + cls.basis(ring, group, g, r)
        return acc

    def _like(self, coeffs: IntMatrix, known: int | None = None) -> "GroupRingElement":
        return GroupRingElement(self.ring, self.group, coeffs, self.known_precision if known is None else known)

    def _check(self, other: "GroupRingElement") -> None:
        if other.group is not self.group or other.ring.field != self.ring.field:
            msg = "group ring elements over different rings or groups"
            raise ValueError(msg)

    def _coerce(self, other: "GroupRingElement | RingElement | int") -> "GroupRingElement":
        if isinstance(other, GroupRingElement):
            self._check(other)
            return other
        return GroupRingElement.basis(self.ring, self.group, self.group.identity, other)

    def __add__(self, other: "GroupRingElement | RingElement | int") -> "GroupRingElement":
        o = self._coerce(other)
        return self._like(
            self.coeffs.astype(object) + o.coeffs.astype(object),
            min(self.known_precision, o.known_precision),
        )

    __radd__ = __add__

    def __neg__(self) -> "GroupRingElement":
        return self._like(-self.coeffs.astype(object))

    def __sub__(self, other: "GroupRingElement | RingElement | int") -> "GroupRingElement":
        return self + (-self._coerce(other))

    def __rsub__(self, other: "RingElement | int") -> "GroupRingElement":
        return self._coerce(other) - self

    def __mul__(self, other: "GroupRingElement | RingElement | int") -> "GroupRingElement":
        o = self._coerce(other)
        return self._like(
            convolve(self.ring, self.group, self.coeffs, o.coeffs),
            min(self.known_precision, o.known_precision),
        )

    def __rmul__(self, other: "RingElement | int") -> "GroupRingElement":
        return self._coerce(other) * self

    def __pow__(self, exponent: int) -> "GroupRingElement":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result, base = GroupRingElement.one(self.ring, self.group), self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int | RingElement):
            other = self._coerce(other)
        if not isinstance(other, GroupRingElement):
            return NotImplemented
        return other.group is self.group and bool(np.array_equal(self.coeffs, other.coeffs))

    __hash__ = None  # type: ignore[assignment]

    def coefficient(self, g: int) -> RingElement:
        return self.ring.element(self.coeffs[g].tolist(), self.known_precision)

    def aug(self) -> RingElement:
        """The augmentation sum_g r_g."""
        total = self.coeffs.astype(object).sum(axis=0) % self.ring.modulus
        return self.ring.element([int(c) for c in total], self.known_precision)

    def classproj(self) -> "ClassFunctionElement":
        """Map every group element to its conjugacy class."""
        out = np.zeros((len(self.group.classes), self.ring.n), dtype=object)
        np.add.at(out, np.array(self.group.classes.class_of), self.coeffs.astype(object))
        return ClassFunctionElement(self.ring, self.group, out, self.known_precision)

    def psi(self) -> "GroupRingElement":
        return psi_operator(self)

    @cached_property
    def regular_matrix(self) -> IntMatrix:
        return left_regular_matrix(self.ring, self.group, self.coeffs)

    def is_unit(self) -> bool:
        """A unit iff its image in k[G] acts invertibly on k[G]."""
        return rank_mod_p(self.regular_matrix, self.ring.p) == self.group.order * self.ring.n

    def inverse(self) -> "GroupRingElement":
        """
        Invert by lifting the inverse in k[G] with y <- y(2 - xy).

        Raises:
            NotAUnitError: If the residue is not invertible in k[G]
        """
        g, n = self.group.order, self.ring.n
        target = np.zeros(g * n, dtype=np.int64)
        target[self.group.identity * n] = 1
        residue = solve_mod_p(self.regular_matrix, target, self.ring.p)
        if residue is None or not self.is_unit():
            msg = "group ring element is not a unit"
            raise NotAUnitError(msg)
        y = self._like(residue.reshape(g, n))
        two = 2 * GroupRingElement.one(self.ring, self.group)
        for _ in range(max(1, self.ring.precision.bit_length())):
            y = y * (two - self * y)
        return y

    def __str__(self) -> str:
        terms = []
        for g in range(self.group.order):
            value = self.coefficient(g)
            if not value.is_zero():
                body = str(value).split(" (mod")[0]
                terms.append(f"({body})*{self.group.labels[g]}")
        return " + ".join(terms) if terms else "0"


@dataclass(frozen=True, eq=False)
class ClassFunctionElement:
    """
    An element of O[C_G], one coefficient per conjugacy class.

    Attributes:
        coeffs (IntMatrix): Coordinates, shape (#classes, n)
    """

    ring: UnramifiedRing
    group: Group
    coeffs: IntMatrix
    known_precision: int = ALL_DIGITS

    def __post_init__(self) -> None:
        arr = np.asarray(self.coeffs, dtype=object) % self.ring.modulus
        object.__setattr__(self, "coeffs", arr)
        object.__setattr__(self, "known_precision", known_digits(self.known_precision, self.ring.precision))

    @classmethod
    def zero(cls, ring: UnramifiedRing, group: Group) -> "ClassFunctionElement":
        return cls(ring, group, np.zeros((len(group.classes), ring.n), dtype=object))

    def __add__(self, other: "ClassFunctionElement") -> "ClassFunctionElement":
        return ClassFunctionElement(
            self.ring, self.group, self.coeffs + other.coeffs, min(self.known_precision, other.known_precision)
        )

    def __neg__(self) -> "ClassFunctionElement":
        return ClassFunctionElement(self.ring, self.group, -self.coeffs, self.known_precision)

    def __sub__(self, other: "ClassFunctionElement") -> "ClassFunctionElement":
        return self + (-other)

    def scale(self, factor: int) -> "ClassFunctionElement":
        return ClassFunctionElement(self.ring, self.group, self.coeffs * factor, self.known_precision)

    def coefficient(self, c: int) -> RingElement:
        return self.ring.element([int(v) for v in self.coeffs[c]], self.known_precision)

    def equal_to(self, other: "ClassFunctionElement", precision: int | None = None) -> bool:
        """Agreement modulo p^precision, the smaller known precision by default."""
        prec = min(self.known_precision, other.known_precision) if precision is None else precision
        return not np.any((self.coeffs - other.coeffs) % self.ring.p**prec)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ClassFunctionElement):
            return NotImplemented
        return self.group is other.group and bool(np.array_equal(self.coeffs, other.coeffs))

    __hash__ = None  # type: ignore[assignment]

    def __str__(self) -> str:
        reps = self.group.classes.representatives
        parts = [
            f"[{self.group.labels[reps[c]]}]: {str(self.coefficient(c)).split(' (mod')[0]}"
            for c in range(len(reps))
        ]
        return "{" + ", ".join(parts) + "}"


def aug(x: GroupRingElement) -> RingElement:
    return x.aug()


def classproj(x: GroupRingElement) -> ClassFunctionElement:
    return x.classproj()


def is_unit(x: GroupRingElement) -> bool:
    return x.is_unit()


def invert(x: GroupRingElement) -> GroupRingElement:
    return x.inverse()


def psi_operator(x: GroupRingElement) -> GroupRingElement:
    """Psi(sum r_g g) = sum phi(r_g) g^p."""
    ring, group = x.ring, x.group
    twisted = ring.frobenius_vectors(x.coeffs).astype(object)
    out = np.zeros_like(twisted)
    np.add.at(out, group.element_power_map(ring.p), twisted)
    return GroupRingElement(ring, group, out, x.known_precision)


def phi_operator(c: ClassFunctionElement) -> ClassFunctionElement:
    """Phi(sum r_C C) = sum phi(r_C) C^p, through the class power map."""
    ring, group = c.ring, c.group
    twisted = ring.frobenius_vectors(c.coeffs).astype(object)
    out = np.zeros_like(twisted)
    np.add.at(out, np.array(group.power_map_on_classes(ring.p)), twisted)
    return ClassFunctionElement(ring, group, out, c.known_precision)


def a_ideal_membership(x: GroupRingElement) -> bool:
    """Whether x maps to zero in O[G^ab]."""
    _, projection = abelianization(x.group)
    image = np.zeros((projection.target.order, x.ring.n), dtype=object)
    np.add.at(image, np.array(projection.images), x.coeffs.astype(object))
    return not np.any(image % x.ring.modulus)


def in_augmentation_ideal(x: GroupRingElement) -> bool:
    return x.aug().is_zero()


def in_one_minus_z_ideal(x: GroupRingElement, z: int) -> bool:
    """
    Whether x lies in (1 - z)O[G] for z central of prime order, tested as the
    kernel of multiplication by 1 + z + ... + z^(p-1).

    Raises:
        NotCentralError: If z is not central
    """
    group = x.group
    if z not in group.center or z == group.identity:
        msg = f"{group.labels[z]} is not a nontrivial central element"
        raise NotCentralError(msg)
    norm = GroupRingElement.from_terms(
        x.ring, group, [(1, group.power(z, i)) for i in range(group.element_orders[z])]
    )
    return (x * norm) == GroupRingElement.zero(x.ring, group)


class GroupRingAlgebra(TruncatedAlgebra):
    """O[G] as a series algebra on (|G|, n) arrays."""

    def __init__(self, ring: UnramifiedRing, group: Group) -> None:
        self.ring = ring
        self.group = group
        self.p = ring.p
        self.commutative = group.is_abelian()

    def multiply(self, a: IntMatrix, b: IntMatrix, precision: int) -> IntMatrix:
        ring = self.ring.with_precision(precision)
        return convolve(ring, self.group, a, b).astype(object)

    def identity(self) -> IntMatrix:
        return GroupRingElement.one(self.ring, self.group).coeffs.astype(object)

    def power_cap(self) -> int:
        return self.group.order * self.ring.n + 1
