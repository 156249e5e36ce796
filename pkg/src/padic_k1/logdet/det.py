"""
Trace and determinant maps into Hom(R_G, Lambda).

Representations are never built. Tr(a)(chi) is linear in the class sums of a;
det rho_chi(u) is the top elementary symmetric function of the eigenvalues of
rho_chi(u), recovered from the power sums chi(u^i) = Tr(u^i)(chi) by Newton's
identities. The divisions by i <= chi(1) are carried out with v_p(chi(1)!)
guard digits and checked to be exact.
"""

from fractions import Fraction

import numpy as np
import structlog

from padic_k1.coeff.cyclotomic import CyclotomicRing, cyclotomic_extend, cyclotomic_product_tensor
from padic_k1.coeff.linalg import IntMatrix
from padic_k1.coeff.series import valuation_of_int
from padic_k1.exceptions import NewtonDivisionFailureError, NotAUnitError
from padic_k1.groupring.element import ClassFunctionElement, GroupRingElement
from padic_k1.groupring.transfer import GroupRingMatrix
from padic_k1.logdet.characters import Character, CharacterTable, character_table
from padic_k1.logdet.hom import HomElement

logger = structlog.get_logger(__name__)


def value_ring(x: GroupRingElement | ClassFunctionElement) -> CyclotomicRing:
    """Lambda for the coefficient ring of x and the exponent of its group."""
    return cyclotomic_extend(x.ring, x.group.exponent)


def _class_sums(a: GroupRingElement | ClassFunctionElement) -> IntMatrix:
    return a.classproj().coeffs if isinstance(a, GroupRingElement) else a.coeffs


def _trace_values(sums: IntMatrix, values: IntMatrix, modulus: int) -> IntMatrix:
    # sum_C a_C chi(C): values (..., #classes, m), sums (#classes, n)
    out = np.tensordot(np.asarray(values, dtype=object), np.asarray(sums, dtype=object), axes=(-2, 0))
    return out % modulus


def tr_eval(a: GroupRingElement | ClassFunctionElement, chi: Character) -> IntMatrix:
    """tr(rho_chi(a)) as an element of Lambda, shape (m, n)."""
    lam = value_ring(a)
    values = np.array(chi.values, dtype=object)
    return _trace_values(_class_sums(a), values, lam.base.modulus)


def tr_hom(a: GroupRingElement | ClassFunctionElement, table: CharacterTable | None = None) -> HomElement:
    """Tr(a) evaluated against every irreducible character."""
    table = table or character_table(a.group)
    lam = value_ring(a)
    values = _trace_values(_class_sums(a), table.values, lam.base.modulus)
    return HomElement(lam, table, values, False, a.known_precision)


def _exact_product(a: list[Fraction], b: list[Fraction], e: int) -> list[Fraction]:
    tensor = cyclotomic_product_tensor(e)
    m = len(a)
    out = [Fraction(0)] * m
    for i in range(m):
        if a[i]:
            for j in range(m):
                if b[j]:
                    for k in range(m):
                        if tensor[i, j, k]:
                            out[k] += a[i] * b[j] * int(tensor[i, j, k])
    return out


def det_character(chi: Character, g: int) -> tuple[int, ...]:
    """
    det rho_chi(g), a root of unity in Z[zeta_e], from chi(g^i) for i <= chi(1).

    Raises:
        NewtonDivisionFailureError: If the recovered value is not integral
    """
    group, e, d = chi.group, chi.exponent, chi.degree
    power_sums = [[Fraction(v) for v in chi.value(group.power(g, i))] for i in range(1, d + 1)]
    elementary = [[Fraction(1)] + [Fraction(0)] * (len(power_sums[0]) - 1)]
    for k in range(1, d + 1):
        acc = [Fraction(0)] * len(elementary[0])
        for i in range(1, k + 1):
            term = _exact_product(elementary[k - i], power_sums[i - 1], e)
            sign = 1 if i % 2 else -1
            acc = [s + sign * t for s, t in zip(acc, term, strict=True)]
        elementary.append([s / k for s in acc])
    top = elementary[d]
    if any(c.denominator != 1 for c in top):
        msg = "determinant of a character value is not a cyclotomic integer"
        raise NewtonDivisionFailureError(msg)
    return tuple(int(c) for c in top)


def _newton_determinant(power_sums: list[IntMatrix], lam: CyclotomicRing) -> IntMatrix:
    p, modulus = lam.p, lam.base.modulus
    elementary = [lam.identity()]
    for k in range(1, len(power_sums) + 1):
        acc = np.zeros(lam.shape, dtype=object)
        for i in range(1, k + 1):
            term = lam.mul(elementary[k - i], power_sums[i - 1])
            acc = acc + term if i % 2 else acc - term
        acc %= modulus
        v = valuation_of_int(k, p)
        if np.any(acc % p**v):
            msg = f"Newton identity at step {k} is not divisible by {p}^{v}"
            raise NewtonDivisionFailureError(msg)
        elementary.append((acc // p**v) * pow(k // p**v, -1, modulus) % modulus)
    return elementary[-1]


def _guard_digits(degree: int, p: int) -> int:
    return sum(valuation_of_int(k, p) for k in range(2, degree + 1))


def det_eval(u: GroupRingElement, chi: Character) -> IntMatrix:
    """
    det rho_chi(u) in Lambda, shape (m, n).

    Raises:
        NotAUnitError: If u is not a unit
        NewtonDivisionFailureError: If a Newton division is not exact
    """
    if not u.is_unit():
        msg = "Det is evaluated on units"
        raise NotAUnitError(msg)
    return _det_values(u, [chi])[0]


def _newton_values(
    class_sums: list[IntMatrix], characters: list[Character], size: int, wide_lam: CyclotomicRing, modulus: int
) -> list[IntMatrix]:
    # class_sums[i - 1] holds the class sums of tr(x^i); a size x size matrix
    # over O[G] gives a representation of degree size * chi(1)
    out = []
    for chi in characters:
        values = np.array(chi.values, dtype=object)
        count = size * chi.degree
        sums = [_trace_values(s, values, wide_lam.base.modulus) for s in class_sums[:count]]
        out.append(_newton_determinant(sums, wide_lam) % modulus)
    return out


def _det_values(u: GroupRingElement, characters: list[Character]) -> list[IntMatrix]:
    top = max(chi.degree for chi in characters)
    wide = u.ring.with_precision(u.ring.precision + _guard_digits(top, u.ring.p))
    lifted = GroupRingElement(wide, u.group, u.coeffs.astype(object), wide.precision)
    class_sums = []
    current = lifted
    for _ in range(top):
        class_sums.append(current.classproj().coeffs)
        current = current * lifted
    wide_lam = cyclotomic_extend(wide, u.group.exponent)
    return _newton_values(class_sums, characters, 1, wide_lam, u.ring.modulus)


def det_hom_matrix(m: GroupRingMatrix, table: CharacterTable | None = None) -> HomElement:
    """
    Det of an invertible matrix over O[G], on every irreducible character.

    Raises:
        NotAUnitError: If the matrix is not invertible
    """
    if not m.is_invertible():
        msg = "Det is evaluated on invertible matrices"
        raise NotAUnitError(msg)
    table = table or character_table(m.group)
    top = m.size * max(table.degrees)
    wide = m.ring.with_precision(m.ring.precision + _guard_digits(top, m.ring.p))
    lifted = GroupRingMatrix(wide, m.group, m.entries, wide.precision)
    class_sums = []
    current = lifted
    for _ in range(top):
        diagonal = [current.entry(k, k).classproj().coeffs for k in range(m.size)]
        class_sums.append(sum(diagonal) % wide.modulus)
        current = current * lifted
    wide_lam = cyclotomic_extend(wide, m.group.exponent)
    values = _newton_values(class_sums, list(table), m.size, wide_lam, m.ring.modulus)
    lam = cyclotomic_extend(m.ring, m.group.exponent)
    return HomElement(lam, table, np.stack(values), True, m.known_precision)


def det_hom(u: GroupRingElement, table: CharacterTable | None = None) -> HomElement:
    """
    Det(u) on every irreducible character.

    Raises:
        NotAUnitError: If u is not a unit
    """
    if not u.is_unit():
        msg = "Det is evaluated on units"
        raise NotAUnitError(msg)
    table = table or character_table(u.group)
    lam = value_ring(u)
    values = np.stack(_det_values(u, list(table)))
    logger.debug("det_hom", group=u.group.name, characters=len(table))
    return HomElement(lam, table, values, True, u.known_precision)
