"""Scalar p-adic logarithm and exponential on the unramified ring."""

import numpy as np

from padic_k1.coeff.finite_field import FiniteField
from padic_k1.coeff.linalg import IntMatrix
from padic_k1.coeff.series import TruncatedAlgebra, exp_series, scaled_log
from padic_k1.coeff.unramified import RingElement, unramified_ring
from padic_k1.exceptions import DomainError


class ScalarAlgebra(TruncatedAlgebra):
    """The unramified ring W(field) itself, as a series algebra."""

    def __init__(self, field: FiniteField) -> None:
        self.field = field
        self.p = field.p
        self.commutative = True

    def multiply(self, a: IntMatrix, b: IntMatrix, precision: int) -> IntMatrix:
        ring = unramified_ring(self.field, precision)
        return ring.mul_vectors(np.asarray(a) % ring.modulus, np.asarray(b) % ring.modulus)

    def identity(self) -> IntMatrix:
        out = np.zeros(self.field.n, dtype=object)
        out[0] = 1
        return out

    def power_cap(self) -> int:
        return 2


def scalar_log(value: RingElement) -> RingElement:
    """
    Log(x) = sum (-1)^(k+1) (x-1)^k / k for x = 1 mod p.

    The result is known to as many digits as x. On the commutative ring O
    every term (x-1)^k / k has valuation at least v(x-1), the series is
    summed with extra working digits for the division by k, and a change of
    x by p^N moves Log(x) by p^N. The N - floor(log_p N) digits of the group
    ring logarithm come from its noncommutative terms and do not apply here.

    Raises:
        DomainError: If x is not congruent to 1 mod p
    """
    ring = value.ring
    if (value - 1).valuation() < 1:
        msg = "scalar_log needs an argument congruent to 1 mod p"
        raise DomainError(msg)
    result = scaled_log(np.array(value.coeffs, dtype=object), ScalarAlgebra(ring.field), ring.precision)
    return ring.element(
        [int(c) for c in result.value],
        min(value.known_precision, result.known_precision - result.shift),
    )


def scalar_exp(value: RingElement) -> RingElement:
    """
    Exp(a) = sum a^k / k! for a = 0 mod p (mod 4 when p = 2).

    Raises:
        DomainError: If the series does not converge on a
    """
    ring = value.ring
    if value.valuation() < 1:
        msg = "scalar_exp needs an argument divisible by p"
        raise DomainError(msg)
    coords, known = exp_series(np.array(value.coeffs, dtype=object), ScalarAlgebra(ring.field), ring.precision)
    return ring.element([int(c) for c in coords], min(value.known_precision, known))
