"""
Unramified Ring Module

This module implements the truncated Witt vectors O = W(F_{p^n})/p^N as
(Z/p^N)[x]/(F) where F is the field modulus read with integer coefficients.
Elements carry a known precision: the number of p-adic digits that are
guaranteed for the value they stand for.

The canonical Frobenius lift sends x to the unique root of F congruent to
x^p, found by Newton iteration, and is applied to coordinates through a
precomputed matrix. Ring-level kernels that operate on many coefficients at
once (group rings, matrices, series) call the vectorized helpers on
UnramifiedRing directly.

Example:
    ```python
    ring = unramified_ring(make_extension(3, 2), 4)
    g = ring.generator
    assert (ring_frobenius(g) - g**3).valuation() >= 1
    ```
"""

import sys
import threading
from collections.abc import Sequence
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Final

import numpy as np
import structlog

from padic_k1.coeff.finite_field import (
    TOWER,
    FieldElement,
    FiniteField,
    solve_artin_schreier,
)
from padic_k1.coeff.linalg import IntMatrix, local_smith_form
from padic_k1.exceptions import NotAUnitError, PrecisionExhaustedError, ZeroInputError

logger = structlog.get_logger(__name__)

_INT64_LIMIT: Final = 1 << 62

# default known precision: everything the ring holds
ALL_DIGITS: Final = sys.maxsize


def known_digits(known: int, precision: int) -> int:
    """
    Clamp a known precision to the ring precision.

    Raises:
        PrecisionExhaustedError: If known is not positive
    """
    if known <= 0:
        msg = f"known precision must be positive, got {known}"
        raise PrecisionExhaustedError(msg)
    return min(known, precision)


@dataclass(frozen=True)
class UnramifiedRing:
    """
    The ring W(field)/p^precision with power basis 1, x, ..., x^(n-1).
    """

    field: FiniteField
    precision: int

    def __post_init__(self) -> None:
        if self.precision < 1:
            msg = f"precision must be at least 1, got {self.precision}"
            raise ValueError(msg)

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def n(self) -> int:
        return self.field.n

    @property
    def modulus(self) -> int:
        return self.p**self.precision

    @property
    def lifted_modulus(self) -> tuple[int, ...]:
        return self.field.modulus

    @cached_property
    def dtype(self) -> type:
        if self.n * self.modulus**2 * 4 < _INT64_LIMIT:
            return np.int64
        return object

    @cached_property
    def _product_map(self) -> IntMatrix:
        n = self.n
        out = np.zeros((n * n, 2 * n - 1), dtype=self.dtype)
        for i in range(n):
            for j in range(n):
                out[i * n + j, i + j] = 1
        return out

    @cached_property
    def reduction_matrix(self) -> IntMatrix:
        """Row d holds the coordinates of x^(n+d) modulo F."""
        n, m = self.n, self.modulus
        rows = []
        current = [(-c) % m for c in self.lifted_modulus[:n]]
        for _ in range(max(n - 1, 0)):
            rows.append(current)
            top = current[-1]
            shifted = [0, *current[:-1]]
            current = [(s + top * c) % m for s, c in zip(shifted, rows[0], strict=True)]
        if not rows:
            return np.zeros((0, n), dtype=self.dtype)
        return np.array(rows, dtype=self.dtype)

    def mul_vectors(self, a: IntMatrix, b: IntMatrix) -> IntMatrix:
        """Multiply coordinate arrays of shape (..., n), broadcasting."""
        m, n = self.modulus, self.n
        a = np.asarray(a).astype(self.dtype)
        b = np.asarray(b).astype(self.dtype)
        prod = a[..., :, None] * b[..., None, :]
        shape = prod.shape[:-2]
        poly = (prod.reshape(*shape, n * n) @ self._product_map) % m
        if n == 1:
            return poly
        return (poly[..., :n] + poly[..., n:] @ self.reduction_matrix) % m

    @cached_property
    def frobenius_image(self) -> "RingElement":
        """The canonical lift phi(x): the root of F congruent to x^p."""
        x = self.generator
        root = x**self.p
        steps = max(1, (self.precision - 1).bit_length() + 1)
        for _ in range(steps):
            value, slope = self._modulus_and_derivative_at(root)
            root -= value * slope.inverse()
        return RingElement(self, root.coeffs, self.precision)

    def _modulus_and_derivative_at(self, y: "RingElement") -> tuple["RingElement", "RingElement"]:
        value, slope = self.zero, self.zero
        for c in reversed(self.lifted_modulus):
            slope = slope * y + value
            value = value * y + c
        return value, slope

    @cached_property
    def frobenius_matrix(self) -> IntMatrix:
        """Column i holds the coordinates of phi(x^i)."""
        cols, power = [], self.one
        image = self.frobenius_image
        for _ in range(self.n):
            cols.append(power.coeffs)
            power = power * image
        return np.array(cols, dtype=self.dtype).T.reshape(self.n, self.n)

    def frobenius_vectors(self, a: IntMatrix, times: int = 1) -> IntMatrix:
        """Apply phi**times to coordinate arrays of shape (..., n)."""
        out = np.asarray(a).astype(self.dtype)
        for _ in range(times % self.n if self.n > 1 else 0):
            out = (out @ self.frobenius_matrix.T) % self.modulus
        return out

    @property
    def zero(self) -> "RingElement":
        return self.element([0])

    @property
    def one(self) -> "RingElement":
        return self.element([1])

    @property
    def generator(self) -> "RingElement":
        if self.n == 1:
            return self.element([-self.lifted_modulus[0]])
        return self.element([0, 1])

    def element(self, coeffs: Sequence[int], known_precision: int | None = None) -> "RingElement":
        m = self.modulus
        values = [int(c) % m for c in coeffs]
        if len(values) > self.n:
            head = np.array(values[: self.n], dtype=object)
            for d, c in enumerate(values[self.n :]):
                head = head + c * self.reduction_matrix[d].astype(object)
            values = [int(v) % m for v in head]
        values += [0] * (self.n - len(values))
        prec = self.precision if known_precision is None else min(known_precision, self.precision)
        return RingElement(self, tuple(values), prec)

    def from_int(self, value: int) -> "RingElement":
        return self.element([value])

    def lift(self, value: FieldElement) -> "RingElement":
        """Coordinatewise lift of a residue element, exact at full precision."""
        if value.field != self.field:
            value = self.field.embed(value)
        return self.element(value.coeffs)

    def with_precision(self, precision: int) -> "UnramifiedRing":
        return unramified_ring(self.field, precision)

    def __str__(self) -> str:
        return f"W({self.field})/{self.p}^{self.precision}"


@lru_cache(maxsize=None)
def unramified_ring(field: FiniteField, precision: int) -> UnramifiedRing:
    return UnramifiedRing(field, precision)


@dataclass(frozen=True)
class RingElement:
    """
    An element of an UnramifiedRing with its guaranteed p-adic precision.
    """

    ring: UnramifiedRing
    coeffs: tuple[int, ...]
    known_precision: int

    def _coerce(self, other: "RingElement | int") -> "RingElement":
        if isinstance(other, int):
            return self.ring.from_int(other)
        if other.ring.field != self.ring.field:
            msg = f"ring mismatch: {self.ring} and {other.ring}"
            raise ValueError(msg)
        return other

    def _array(self) -> IntMatrix:
        return np.array(self.coeffs, dtype=self.ring.dtype)

    def __add__(self, other: "RingElement | int") -> "RingElement":
        o = self._coerce(other)
        return self.ring.element(
            [a + b for a, b in zip(self.coeffs, o.coeffs, strict=True)],
            min(self.known_precision, o.known_precision),
        )

    __radd__ = __add__

    def __neg__(self) -> "RingElement":
        return self.ring.element([-a for a in self.coeffs], self.known_precision)

    def __sub__(self, other: "RingElement | int") -> "RingElement":
        return self + (-self._coerce(other))

    def __rsub__(self, other: int) -> "RingElement":
        return self._coerce(other) - self

    def __mul__(self, other: "RingElement | int") -> "RingElement":
        o = self._coerce(other)
        prod = self.ring.mul_vectors(self._array(), o._array())
        return self.ring.element(prod.tolist(), min(self.known_precision, o.known_precision))

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "RingElement":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result, base = self.ring.element([1], self.known_precision), self
        while exponent > 0:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = self.ring.from_int(other)
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.ring.field == other.ring.field and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.ring.field, self.coeffs))

    def residue(self) -> FieldElement:
        return self.ring.field.element(self.coeffs)

    def is_unit(self) -> bool:
        return not self.residue().is_zero()

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def valuation(self) -> int:
        """Largest v with all coordinates divisible by p^v, capped at the precision."""
        v = self.ring.precision
        for c in self.coeffs:
            if c:
                k = 0
                while c % self.ring.p == 0:
                    c //= self.ring.p
                    k += 1
                v = min(v, k)
        return v

    def inverse(self) -> "RingElement":
        """
        Newton inversion y <- y(2 - a y) from the residue field inverse.

        Raises:
            NotAUnitError: If the residue is zero
        """
        res = self.residue()
        if res.is_zero():
            msg = "element is not a unit"
            raise NotAUnitError(msg)
        y = self.ring.lift(res.inverse())
        for _ in range(max(1, self.ring.precision.bit_length() + 1)):
            y = y * (2 - self * y)
        return RingElement(self.ring, y.coeffs, self.known_precision)

    def divide_by_p(self, times: int = 1) -> "RingElement":
        """
        Exact division by p**times; the top digits become unknown.

        Raises:
            ValueError: If the element is not divisible
            PrecisionExhaustedError: If no guaranteed digit remains
        """
        d = self.ring.p**times
        if any(c % d for c in self.coeffs):
            msg = f"element is not divisible by {self.ring.p}^{times}"
            raise ValueError(msg)
        prec = self.known_precision - times
        if prec <= 0:
            msg = "division by p exhausted the known precision"
            raise PrecisionExhaustedError(msg)
        return self.ring.element([c // d for c in self.coeffs], prec)

    def __str__(self) -> str:
        terms = [
            f"{c}" if i == 0 else (f"{c}*x" if i == 1 else f"{c}*x^{i}")
            for i, c in enumerate(self.coeffs)
            if c
        ]
        body = " + ".join(terms) if terms else "0"
        return f"{body} (mod {self.ring.p}^{self.known_precision})"


def ring_frobenius(value: RingElement, times: int = 1) -> RingElement:
    """Apply the canonical Frobenius lift times times."""
    ring = value.ring
    image = ring.frobenius_vectors(value._array(), times)  # noqa: SLF001
    return ring.element(image.tolist(), value.known_precision)


def teichmuller(value: FieldElement, precision: int) -> RingElement:
    """
    The root of unity of order dividing p^n - 1 lifting value.

    Raises:
        ZeroInputError: If value is zero
    """
    if value.is_zero():
        msg = "zero has no Teichmuller lift"
        raise ZeroInputError(msg)
    ring = unramified_ring(value.field, precision)
    q = value.field.order
    current = ring.lift(value)
    for _ in range(precision):
        current = current**q
    return current


def trace(value: RingElement) -> int:
    """Absolute trace to Z/p^N, as the sum of Galois conjugates."""
    acc, current = value.ring.zero, value
    for _ in range(value.ring.n):
        acc += current
        current = ring_frobenius(current)
    return acc.coeffs[0]


def norm(value: RingElement) -> int:
    """Absolute norm to Z/p^N."""
    acc, current = value.ring.one, value
    for _ in range(value.ring.n):
        acc *= current
        current = ring_frobenius(current)
    return acc.coeffs[0]


@dataclass(frozen=True)
class RingEmbedding:
    """
    The injective map O_K -> O_L lifting a residue field embedding.
    """

    source: UnramifiedRing
    target: UnramifiedRing
    image: RingElement

    def __call__(self, value: RingElement) -> RingElement:
        if value.ring.field != self.source.field:
            msg = f"embedding expects an element of {self.source}"
            raise ValueError(msg)
        acc = self.target.zero
        for c in reversed(value.coeffs):
            acc = acc * self.image + c
        return self.target.element(acc.coeffs, value.known_precision)

    @cached_property
    def matrix(self) -> IntMatrix:
        """Column i holds the target coordinates of the image of x^i."""
        cols, power = [], self.target.one
        for _ in range(self.source.n):
            cols.append(power.coeffs)
            power = power * self.image
        return np.array(cols, dtype=object).T.reshape(self.target.n, self.source.n)

    def preimage(self, value: RingElement) -> RingElement | None:
        """Pull back an element of the image, or None if it is not in it."""
        smith = local_smith_form(
            self.matrix,
            self.target.p,
            self.target.precision,
            track_columns=True,
            rhs=np.array(value.coeffs, dtype=object),
        )
        solution = smith.solve()
        if solution is None:
            return None
        return self.source.element([int(c) for c in solution[:, 0]], value.known_precision)


_RING_EMBEDDINGS: dict[tuple[UnramifiedRing, UnramifiedRing], RingEmbedding] = {}
_RING_LOCK = threading.Lock()


def ring_embedding(source: UnramifiedRing, target: UnramifiedRing) -> RingEmbedding:
    """
    Hensel-lift the registered field embedding to the unramified rings.

    Raises:
        NoEmbeddingError: If the residue fields do not embed
    """
    key = (source, target)
    with _RING_LOCK:
        cached = _RING_EMBEDDINGS.get(key)
    if cached is not None:
        return cached
    field_image = TOWER.embedding(source.field, target.field).image
    root = target.lift(field_image)
    for _ in range(max(1, target.precision.bit_length() + 1)):
        value, slope = RingElement(target, target.zero.coeffs, target.precision), target.zero
        for c in reversed(source.lifted_modulus):
            slope = slope * root + value
            value = value * root + c
        root -= value * slope.inverse()
    embedding = RingEmbedding(source, target, root)
    with _RING_LOCK:
        return _RING_EMBEDDINGS.setdefault(key, embedding)


def solve_one_minus_frobenius(value: RingElement) -> RingElement:
    """
    Find s with s - phi(s) = value mod p^N, digit by digit.

    Each p-adic digit is an Artin-Schreier equation over the residue field; the
    ring is enlarged whenever one of them forces a degree p extension, and the
    returned element lives in the final ring.
    """
    ring = value.ring
    target = value
    solution = ring.zero
    for k in range(ring.precision):
        residual = target - (solution - ring_frobenius(solution))
        digit = ring.field.element([c // ring.p**k for c in residual.coeffs])
        piece, field = solve_artin_schreier(digit)
        if field != ring.field:
            bigger = unramified_ring(field, ring.precision)
            embedding = ring_embedding(ring, bigger)
            target, solution, ring = embedding(target), embedding(solution), bigger
        solution += ring.lift(piece) * ring.p**k
    check = target - (solution - ring_frobenius(solution))
    if not check.is_zero():
        msg = "digitwise (1 - phi) solve left a residual"
        raise RuntimeError(msg)
    logger.debug("one_minus_frobenius_solved", ring=str(ring))
    return RingElement(ring, solution.coeffs, value.known_precision)
