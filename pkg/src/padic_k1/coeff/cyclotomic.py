"""
Cyclotomic Value Ring Module

Character values of a group of exponent e live in Z[zeta_e]. Tensoring with
the unramified ring O gives Lambda = O[x]/(Phi_e(x)), free over O with basis
1, x, ..., x^(m-1) where m = phi(e). Elements are integer arrays of shape
(m, n): row j holds the O-coordinates of the coefficient of x^j.

The Frobenius lift on Lambda acts as the canonical lift on O and sends x to
x^c, where c = 1 mod the p-part of e and c = p mod the prime-to-p part. It is
an automorphism reducing to the p-th power map modulo the maximal ideals.

Example:
    ```python
    lam = cyclotomic_extend(unramified_ring(make_extension(3, 1), 2), 4)
    fi = lam.frobenius(lam.zeta)
    assert lam.equal(lam.mul(fi, fi), -lam.identity())
    ```
"""

from collections.abc import Sequence
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np
import sympy
from sympy.abc import x as sym_x
from sympy.ntheory.modular import crt

from padic_k1.coeff.linalg import IntMatrix
from padic_k1.coeff.series import TruncatedAlgebra
from padic_k1.coeff.unramified import UnramifiedRing


@lru_cache(maxsize=None)
def cyclotomic_coefficients(e: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_e, constant term first."""
    coeffs = sympy.Poly(sympy.cyclotomic_poly(e, sym_x), sym_x).all_coeffs()
    return tuple(int(c) for c in reversed(coeffs))


@lru_cache(maxsize=None)
def cyclotomic_reduction(e: int) -> tuple[tuple[int, ...], ...]:
    """Row d holds the integer coordinates of x^(m+d) modulo Phi_e."""
    phi = cyclotomic_coefficients(e)
    m = len(phi) - 1
    first = [-c for c in phi[:m]]
    rows: list[list[int]] = []
    current = first
    for _ in range(max(m - 1, 0)):
        rows.append(current)
        top = current[-1]
        current = [s + top * c for s, c in zip([0, *current[:-1]], first, strict=True)]
    return tuple(tuple(r) for r in rows)


def reduce_cyclotomic(poly: Sequence[int], e: int) -> tuple[int, ...]:
    """Reduce an integer polynomial in zeta_e to the power basis of Z[zeta_e]."""
    phi = cyclotomic_coefficients(e)
    m = len(phi) - 1
    rem = [int(c) for c in poly] + [0] * max(0, m - len(poly))
    for d in range(len(rem) - 1, m - 1, -1):
        c = rem[d]
        if c:
            for j, f in enumerate(phi):
                rem[d - m + j] -= c * f
    return tuple(rem[:m])


@lru_cache(maxsize=None)
def cyclotomic_product_tensor(e: int) -> IntMatrix:
    """T with x^i * x^j = sum_l T[i, j, l] x^l in the power basis of Z[zeta_e]."""
    m = len(cyclotomic_coefficients(e)) - 1
    out = np.zeros((m, m, m), dtype=np.int64)
    for i in range(m):
        for j in range(m):
            out[i, j] = reduce_cyclotomic([0] * (i + j) + [1], e)
    return out


def cyclotomic_power_map(e: int, c: int) -> IntMatrix:
    """Integer matrix of the ring automorphism x -> x^c of Z[zeta_e]."""
    m = len(cyclotomic_coefficients(e)) - 1
    cols = []
    for j in range(m):
        exponent = (j * c) % e
        poly = [0] * exponent + [1]
        cols.append(reduce_cyclotomic(poly, e))
    return np.array(cols, dtype=object).T.reshape(m, m)


def frobenius_exponent(e: int, p: int) -> int:
    """The c with x -> x^c inducing the Frobenius lift on zeta_e."""
    e_p, rest = 1, e
    while rest % p == 0:
        rest //= p
        e_p *= p
    if rest == 1:
        return 1
    if e_p == 1:
        return p % e
    return int(crt([e_p, rest], [1, p % rest])[0]) % e


@dataclass(frozen=True)
class CyclotomicRing(TruncatedAlgebra):
    """
    Lambda = O[x]/(Phi_e) truncated at the precision of O.
    """

    base: UnramifiedRing
    e: int

    @property
    def p(self) -> int:  # type: ignore[override]
        return self.base.p

    @property
    def commutative(self) -> bool:  # type: ignore[override]
        return True

    @property
    def rank(self) -> int:
        return len(cyclotomic_coefficients(self.e)) - 1

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rank, self.base.n)

    @cached_property
    def frobenius_exponent(self) -> int:
        return frobenius_exponent(self.e, self.p)

    @cached_property
    def teichmuller_exponent(self) -> int:
        """An exponent prime to p killing the residue field units of Lambda."""
        rest = self.e
        while rest % self.p == 0:
            rest //= self.p
        order = 1 if rest == 1 else int(sympy.n_order(self.p, rest))
        return self.p ** (self.base.n * order) - 1

    @cached_property
    def _power_matrix(self) -> IntMatrix:
        return cyclotomic_power_map(self.e, self.frobenius_exponent)

    @cached_property
    def _inverse_power_matrix(self) -> IntMatrix:
        inverse = pow(self.frobenius_exponent, -1, self.e) if self.e > 1 else 1
        return cyclotomic_power_map(self.e, inverse)

    @cached_property
    def _reduction(self) -> IntMatrix:
        rows = cyclotomic_reduction(self.e)
        if not rows:
            return np.zeros((0, self.rank), dtype=object)
        return np.array(rows, dtype=object)

    def with_precision(self, precision: int) -> "CyclotomicRing":
        return cyclotomic_extend(self.base.with_precision(precision), self.e)

    def identity(self) -> IntMatrix:
        out = np.zeros(self.shape, dtype=object)
        out[0, 0] = 1
        return out

    def power_cap(self) -> int:
        return self.rank * self.base.n * self.base.precision + 2

    def multiply(self, a: IntMatrix, b: IntMatrix, precision: int) -> IntMatrix:
        ring = self.base.with_precision(precision)
        mod = ring.modulus
        m, n = self.shape
        a = np.asarray(a, dtype=object) % mod
        b = np.asarray(b, dtype=object) % mod
        pair = ring.mul_vectors(a[..., :, None, :], b[..., None, :, :]).astype(object)
        lead = pair.shape[:-3]
        full = np.zeros((*lead, 2 * m - 1, n), dtype=object)
        for i in range(m):
            full[..., i : i + m, :] += pair[..., i, :, :]
        low = full[..., :m, :]
        if m > 1:
            high = full[..., m:, :]
            low = low + np.swapaxes(np.swapaxes(high, -1, -2) @ self._reduction, -1, -2)
        return low % mod

    def mul(self, a: IntMatrix, b: IntMatrix) -> IntMatrix:
        return self.multiply(a, b, self.base.precision)

    def frobenius(self, a: IntMatrix, *, inverse: bool = False) -> IntMatrix:
        """Apply the Frobenius lift F, or its inverse, to an element."""
        arr = np.asarray(a, dtype=object) % self.base.modulus
        times = self.base.n - 1 if inverse else 1
        coeff = self.base.frobenius_vectors(arr, times).astype(object)
        matrix = self._inverse_power_matrix if inverse else self._power_matrix
        return (matrix @ coeff) % self.base.modulus

    def from_cyclotomic_integer(self, values: Sequence[int]) -> IntMatrix:
        """Embed an element of Z[zeta_e] given in the power basis."""
        out = np.zeros(self.shape, dtype=object)
        for j, v in enumerate(values):
            out[j, 0] = int(v) % self.base.modulus
        return out

    @property
    def zeta(self) -> IntMatrix:
        if self.rank == 1:
            return self.from_cyclotomic_integer(reduce_cyclotomic([0, 1], self.e))
        out = np.zeros(self.shape, dtype=object)
        out[1, 0] = 1
        return out

    def power(self, a: IntMatrix, exponent: int) -> IntMatrix:
        result = self.identity()
        base = np.asarray(a, dtype=object)
        while exponent > 0:
            if exponent & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            exponent >>= 1
        return result

    def inverse(self, a: IntMatrix) -> IntMatrix:
        """
        Invert a unit of Lambda through the finite unit group exponent.

        The residue ring Lambda/p is finite; a^(|units| - 1) is an inverse mod p
        and Newton's iteration lifts it.
        """
        residue_units = self.teichmuller_exponent * self.p ** (self.rank * self.base.n)
        y = self.multiply(self.power(a, residue_units - 1), self.identity(), 1)
        two = 2 * self.identity()
        for _ in range(self.base.precision.bit_length() + 1):
            y = self.mul(y, (two - self.mul(a, y)) % self.base.modulus)
        return y

    def equal(self, a: IntMatrix, b: IntMatrix, precision: int | None = None) -> bool:
        mod = self.p ** (self.base.precision if precision is None else precision)
        diff = (np.asarray(a, dtype=object) - np.asarray(b, dtype=object)) % mod
        return not np.any(diff)


@lru_cache(maxsize=None)
def cyclotomic_extend(ring: UnramifiedRing, e: int) -> CyclotomicRing:
    """
    Adjoin a primitive e-th root of unity to the unramified ring.

    Raises:
        ValueError: If e < 1
    """
    if e < 1:
        msg = f"cyclotomic order must be positive, got {e}"
        raise ValueError(msg)
    return CyclotomicRing(ring, e)
