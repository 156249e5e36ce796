"""
Hom-description side of the integral logarithm.

A HomElement is a function on the irreducible characters with values in
Lambda = O[zeta_e], either multiplicative (Det images, units of Lambda) or
additive (Tr images). The Galois action is F~(f)(chi) = F(f(chi^(F^-1))) and

    Gamma_Hom(f) = (1/p)(p - F~ psi_p)(log o f),

with log(f) taken as log(f^K)/K for K prime to p killing the residue units.
"""

from dataclasses import dataclass

import numpy as np
import structlog

from padic_k1.coeff.cyclotomic import CyclotomicRing
from padic_k1.coeff.linalg import IntMatrix
from padic_k1.coeff.series import scaled_log
from padic_k1.coeff.unramified import ALL_DIGITS, known_digits
from padic_k1.exceptions import DomainError, PrecisionExhaustedError
from padic_k1.logdet.adams import AdamsOperation, adams_on_characters, galois_permutation
from padic_k1.logdet.characters import CharacterTable

logger = structlog.get_logger(__name__)


@dataclass(frozen=True, eq=False)
class HomElement:
    """
    A map from the irreducible characters to Lambda.

    Attributes:
        lam (CyclotomicRing): The value ring
        table (CharacterTable): The characters, in table order
        values (IntMatrix): Shape (#characters, m, n)
        multiplicative (bool): True for Hom(R_G, Lambda^x)
        known_precision (int): Guaranteed digits of every value
    """

    lam: CyclotomicRing
    table: CharacterTable
    values: IntMatrix
    multiplicative: bool
    known_precision: int = ALL_DIGITS

    def __post_init__(self) -> None:
        arr = np.asarray(self.values, dtype=object) % self.lam.base.modulus
        expected = (len(self.table), *self.lam.shape)
        if arr.shape != expected:
            msg = f"hom values have shape {arr.shape}, expected {expected}"
            raise ValueError(msg)
        object.__setattr__(self, "values", arr)
        object.__setattr__(self, "known_precision", known_digits(self.known_precision, self.lam.base.precision))

    def _known(self, other: "HomElement") -> int:
        return min(self.known_precision, other.known_precision)

    def __mul__(self, other: "HomElement") -> "HomElement":
        if not (self.multiplicative and other.multiplicative):
            msg = "pointwise products are defined on multiplicative hom elements"
            raise TypeError(msg)
        return HomElement(self.lam, self.table, self.lam.mul(self.values, other.values), True, self._known(other))

    def __add__(self, other: "HomElement") -> "HomElement":
        if self.multiplicative or other.multiplicative:
            msg = "sums are defined on additive hom elements"
            raise TypeError(msg)
        return HomElement(self.lam, self.table, self.values + other.values, False, self._known(other))

    def __neg__(self) -> "HomElement":
        return HomElement(self.lam, self.table, -self.values, self.multiplicative, self.known_precision)

    def __sub__(self, other: "HomElement") -> "HomElement":
        return self + (-other)

    def value(self, i: int) -> IntMatrix:
        return self.values[i]

    def equal_to(self, other: "HomElement", precision: int | None = None) -> bool:
        """Agreement of all values modulo p^precision, the known precision by default."""
        prec = self._known(other) if precision is None else precision
        return self.lam.equal(self.values, other.values, prec)


def hom_frobenius(f: HomElement) -> HomElement:
    """F~(f)(chi_i) = F(f(chi_sigma(i))) with chi_sigma(i) = chi_i^(F^-1)."""
    sigma = list(galois_permutation(f.table, f.lam.p))
    values = f.lam.frobenius(f.values[sigma])
    return HomElement(f.lam, f.table, values, f.multiplicative, f.known_precision)


def gamma_hom(f: HomElement, adams: AdamsOperation | None = None) -> HomElement:
    """
    Gamma_Hom on a multiplicative hom element.

    Raises:
        DomainError: If f is additive, if log does not converge on its
            values, or if the result is not integral
        PrecisionExhaustedError: If no guaranteed digit survives
    """
    if not f.multiplicative:
        msg = "gamma_hom needs a multiplicative hom element"
        raise DomainError(msg)
    lam, table, p = f.lam, f.table, f.lam.p
    adams = adams or adams_on_characters(table.group, table, p)
    precision = lam.base.precision
    work = lam.with_precision(precision + 1)
    k = lam.teichmuller_exponent
    powered = np.stack([work.power(v, k) for v in f.values])
    log = scaled_log(powered, work, precision + 1)
    shift = log.shift
    scaled_ring = lam.with_precision(precision + 1 + shift)
    modulus = scaled_ring.base.modulus
    g = log.value * pow(k, -1, modulus) % modulus
    pulled = np.tensordot(adams.matrix[list(adams.galois)].astype(object), g, axes=(1, 0)) % modulus
    numerator = (p * g - scaled_ring.frobenius(pulled)) % modulus
    known = min(log.known_precision, f.known_precision + shift)
    if known <= shift + 1:
        msg = "gamma_hom has no guaranteed digits left"
        raise PrecisionExhaustedError(msg)
    numerator = numerator % p**known
    divisor = p ** (shift + 1)
    if np.any(numerator % divisor):
        msg = "(p - F psi_p) log f is not divisible by p"
        raise DomainError(msg)
    digits = min(known - shift - 1, precision)
    logger.debug("gamma_hom", group=table.group.name, shift=shift, digits=digits)
    return HomElement(lam, table, numerator // divisor, False, digits)
