"""Logarithm and exponential on O[G]."""

from dataclasses import dataclass

import structlog

from padic_k1.coeff.series import exp_series, scaled_log
from padic_k1.exceptions import PrecisionExhaustedError
from padic_k1.groupring.element import GroupRingAlgebra, GroupRingElement

logger = structlog.get_logger(__name__)


@dataclass(frozen=True)
class GroupRingLog:
    """
    p**shift * Log(u) as an element of O/p^(precision + shift)[G].

    Attributes:
        shift (int): The scaling exponent D making every series term integral
        value (GroupRingElement): p^D Log(u), with its guaranteed digits
        series_digits (int): Digits of p^D Log(u) guaranteed by the series
            truncation alone, for an exact argument
    """

    shift: int
    value: GroupRingElement
    series_digits: int

    @property
    def known_precision(self) -> int:
        """Guaranteed digits of Log(u) itself."""
        return self.value.known_precision - self.shift


def gr_log(u: GroupRingElement, precision: int | None = None) -> GroupRingLog:
    """
    Log(u) for u in 1 + J, J inside the radical of O[G].

    Args:
        u (GroupRingElement): Exact representative of the argument
        precision (int | None): Digits of Log(u) to compute; defaults to the
            precision of the coefficient ring

    Raises:
        DomainError: If u - 1 is not topologically nilpotent
    """
    digits = u.ring.precision if precision is None else precision
    algebra = GroupRingAlgebra(u.ring, u.group)
    result = scaled_log(u.coeffs, algebra, digits)
    ring = u.ring.with_precision(digits + result.shift)
    # a change of u by p^N moves Log(u) by p^N; products of noncommuting
    # perturbations cost one more digit
    input_digits = u.known_precision + result.shift - (0 if algebra.commutative else 1)
    known = min(result.known_precision, input_digits)
    if known <= result.shift:
        msg = "logarithm has no guaranteed digits left"
        raise PrecisionExhaustedError(msg)
    value = GroupRingElement(ring, u.group, result.value, known)
    logger.debug("gr_log", shift=result.shift, known=known, group=u.group.name)
    return GroupRingLog(result.shift, value, result.known_precision)


def gr_exp(a: GroupRingElement) -> GroupRingElement:
    """
    Exp(a) for a in the ideal where the series converges integrally.

    Raises:
        DomainError: If the series does not converge on a
        PrecisionExhaustedError: If the noncommutative loss eats every digit
    """
    algebra = GroupRingAlgebra(a.ring, a.group)
    coords, known = exp_series(a.coeffs, algebra, a.ring.precision)
    if known <= 0:
        msg = "exponential has no guaranteed digits left"
        raise PrecisionExhaustedError(msg)
    return GroupRingElement(a.ring, a.group, coords, min(known, a.known_precision))
