"""
Truncated logarithm and exponential series over finite Z_p-algebras.

An algebra here is anything that can multiply integer coordinate arrays at a
requested p-adic precision: the unramified ring itself, group rings over it,
matrix rings over those, and cyclotomic value rings. Elements are passed as
exact integer arrays; the series track the valuation of every term exactly,
so the working precision is chosen up front and the result carries the
number of digits it guarantees.

The logarithm of an element of 1 + J can have denominators when J is only
topologically nilpotent, so scaled_log returns p^D * Log(x) for the smallest
shift D that makes every term integral.
"""

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import structlog

from padic_k1.coeff.linalg import IntMatrix
from padic_k1.exceptions import DomainError

logger = structlog.get_logger(__name__)


class TruncatedAlgebra(ABC):
    """
    A free Z_p-algebra of finite rank whose elements are integer arrays.
    """

    p: int
    commutative: bool = True

    @abstractmethod
    def multiply(self, a: IntMatrix, b: IntMatrix, precision: int) -> IntMatrix:
        """Product of two elements reduced mod p^precision."""

    @abstractmethod
    def identity(self) -> IntMatrix:
        """The unit element as an integer array."""

    def power_cap(self) -> int:
        """Upper bound for the nilpotency index of the radical mod p."""
        return 256


def valuation_of_int(value: int, p: int) -> int:
    if value == 0:
        return math.inf  # type: ignore[return-value]
    v = 0
    while value % p == 0:
        value //= p
        v += 1
    return v


def array_valuation(a: IntMatrix, p: int, cap: int) -> int:
    """Minimum p-adic valuation of the entries, at most cap."""
    v = cap
    for c in np.asarray(a, dtype=object).ravel():
        c = int(c)
        if c:
            v = min(v, valuation_of_int(c, p))
            if v == 0:
                return 0
    return v


def _legendre(k: int, p: int) -> int:
    total, power = 0, p
    while power <= k:
        total += k // power
        power *= p
    return total


@dataclass(frozen=True)
class GrowthBound:
    """
    Lower bound for the valuation of the k-th power of an element.

    Attributes:
        base (int): Valuation of the element itself (at least 0)
        index (int): Smallest L with y^L = 0 mod p
    """

    base: int
    index: int

    def at(self, k: int) -> int:
        if k <= 0:
            return 0
        return max(self.base * k, k // self.index)

    @property
    def rate(self) -> Fraction:
        if self.base >= 1:
            return Fraction(self.base)
        return Fraction(1, self.index)


def growth_bound(y: IntMatrix, algebra: TruncatedAlgebra, precision: int) -> GrowthBound:
    """
    Measure how fast powers of y gain p-adic valuation.

    Raises:
        DomainError: If y is not topologically nilpotent
    """
    p = algebra.p
    base = array_valuation(y, p, precision)
    if base >= 1:
        return GrowthBound(base, 1)
    power = np.asarray(y)
    for index in range(2, algebra.power_cap() + 1):
        power = algebra.multiply(power, y, 1)
        if not np.any(np.asarray(power, dtype=object) % p):
            return GrowthBound(0, index)
    msg = "series argument is not topologically nilpotent"
    raise DomainError(msg)


@dataclass(frozen=True)
class ScaledLog:
    """
    p**shift * Log(x), reduced mod p**(precision + shift).

    Attributes:
        shift (int): The scaling exponent D
        value (IntMatrix): Coordinates of p^D Log(x)
        precision (int): Digits of Log(x) requested
        known_precision (int): Guaranteed digits of value, counted from p^0
    """

    shift: int
    value: IntMatrix
    precision: int
    known_precision: int


def _log_terms(bound: GrowthBound, p: int, precision: int) -> int:
    """Number of terms after which y^k/k vanishes mod p^precision."""
    k = 1
    while True:
        low = max(bound.base * k, k / bound.index - 1) - math.log(k, p)
        increasing = bound.base >= 1 or k > bound.index / math.log(p)
        if increasing and low >= precision:
            return k
        k += 1


def scaled_log(x: IntMatrix, algebra: TruncatedAlgebra, precision: int) -> ScaledLog:
    """
    Compute p^D * Log(x) with per-term valuation bookkeeping.

    Args:
        x (IntMatrix): Exact integer coordinates of an element of 1 + radical
        algebra (TruncatedAlgebra): The algebra x lives in
        precision (int): Digits of Log(x) wanted

    Raises:
        DomainError: If x - 1 is not topologically nilpotent
    """
    p = algebra.p
    one = np.asarray(algebra.identity(), dtype=object)
    y = np.asarray(x, dtype=object) - one
    bound = growth_bound(y, algebra, precision + 1)
    terms = _log_terms(bound, p, precision)
    shift = max(
        [0] + [valuation_of_int(k, p) - bound.at(k) for k in range(1, terms + 1)]
    )
    top = max(valuation_of_int(k, p) for k in range(1, terms + 1))
    out_prec = precision + shift
    work = out_prec + top
    out_mod, work_mod = p**out_prec, p**work
    acc = np.zeros_like(one)
    power = y % work_mod
    for k in range(1, terms + 1):
        if k > 1:
            power = np.asarray(algebra.multiply(power, y % work_mod, work), dtype=object)
        e = valuation_of_int(k, p)
        unit_inv = pow(k // p**e, -1, out_mod)
        if shift >= e:
            term = power * p ** (shift - e)
        else:
            drop = p ** (e - shift)
            if np.any(power % drop):
                msg = "logarithm term is not divisible as its valuation bound predicts"
                raise DomainError(msg)
            term = power // drop
        sign = 1 if k % 2 else -1
        acc = (acc + sign * term * unit_inv) % out_mod
    loss = 0
    if not algebra.commutative:
        for k in range(2, terms + 1):
            e = valuation_of_int(k, p)
            if e:
                loss = max(loss, e - max(bound.at(k - 1) - 1, 0))
    logger.debug("scaled_log", shift=shift, terms=terms, working_precision=work, loss=loss)
    return ScaledLog(shift, acc, precision, out_prec - loss)


def exp_series(a: IntMatrix, algebra: TruncatedAlgebra, precision: int) -> tuple[IntMatrix, int]:
    """
    Compute Exp(a) mod p^precision.

    Returns:
        tuple: Coordinates of Exp(a) and the number of guaranteed digits

    Raises:
        DomainError: If the series does not converge integrally on a
    """
    p = algebra.p
    one = np.asarray(algebra.identity(), dtype=object)
    a = np.asarray(a, dtype=object)
    bound = growth_bound(a, algebra, precision + 1)
    if bound.rate <= Fraction(1, p - 1):
        msg = "exponential series does not converge on this argument"
        raise DomainError(msg)
    k = 1
    while True:
        low = max(bound.base * k, k / bound.index - 1) - (k - 1) / (p - 1)
        if low >= precision:
            break
        k += 1
    terms = k
    for j in range(1, terms + 1):
        if bound.at(j) < _legendre(j, p):
            msg = "exponential series has a non-integral term on this argument"
            raise DomainError(msg)
    top = _legendre(terms, p)
    work_mod, out_mod = p ** (precision + top), p**precision
    acc = one % out_mod
    power = one
    for j in range(1, terms + 1):
        power = np.asarray(algebra.multiply(power, a % work_mod, precision + top), dtype=object)
        e = _legendre(j, p)
        unit = math.factorial(j) // p**e
        term = (power // p**e) * pow(unit, -1, out_mod)
        acc = (acc + term) % out_mod
    loss = 0
    if not algebra.commutative:
        for j in range(2, terms + 1):
            e = _legendre(j, p)
            loss = max(loss, e - max(bound.at(j - 1) - 1, 0))
    return acc, precision - loss
