"""
Finite Field Module

This module implements exact arithmetic in F_{p^n} = F_p[x]/(f) together with
a lazily growing tower of extensions. Fields are value objects identified by
their characteristic and modulus; embeddings between them live in a shared,
lock-protected registry so that solving an equation in a bigger field keeps a
verified route back to the field it started from.

The default modulus of F_{p^n} is the lexicographically smallest monic
irreducible polynomial, reading coefficients from x^(n-1) down to the
constant term.

Example:
    ```python
    f9 = make_extension(3, 2)
    theta = f9.generator
    s, field = solve_artin_schreier(f9.one)
    assert field.n == 6 and s - s**3 == field.embed(f9.one)
    ```
"""

import itertools
import threading
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from functools import cached_property
from typing import Final

import numpy as np
import structlog
import sympy
from sympy.abc import x as sym_x

from padic_k1.coeff.linalg import IntMatrix, solve_mod_p
from padic_k1.coeff.polynomials import (
    Poly,
    is_irreducible_mod_p,
    poly_mulmod,
    poly_powmod,
    poly_trim,
)
from padic_k1.exceptions import CompositePError, NoEmbeddingError, ZeroInputError
from padic_k1.settings import settings

logger = structlog.get_logger(__name__)

_ROOT_SEARCH_LIMIT: Final = 10_000


@dataclass(frozen=True)
class FiniteField:
    """
    The field F_p[x]/(modulus) of order p**n.

    Attributes:
        p (int): Characteristic
        n (int): Degree over F_p
        modulus (Poly): Monic irreducible polynomial, constant term first
    """

    p: int
    n: int
    modulus: Poly

    @property
    def order(self) -> int:
        return self.p**self.n

    @property
    def zero(self) -> "FieldElement":
        return self.element(())

    @property
    def one(self) -> "FieldElement":
        return self.element((1,))

    @property
    def generator(self) -> "FieldElement":
        """The class of x."""
        return self.element(poly_trim((0, 1), self.p) if self.n > 1 else (-self.modulus[0],))

    def element(self, coeffs: Sequence[int]) -> "FieldElement":
        reduced = [int(c) % self.p for c in coeffs]
        if len(reduced) > self.n:
            reduced = list(
                poly_mulmod(poly_trim(reduced, self.p), (1,), self.modulus, self.p)
            )
        reduced += [0] * (self.n - len(reduced))
        return FieldElement(self, tuple(reduced))

    def from_int(self, value: int) -> "FieldElement":
        return self.element((value,))

    def element_from_index(self, index: int) -> "FieldElement":
        """Element whose base-p digits, constant term first, spell index."""
        digits = []
        for _ in range(self.n):
            index, d = divmod(index, self.p)
            digits.append(d)
        return self.element(digits)

    def elements(self) -> Iterator["FieldElement"]:
        for index in range(self.order):
            yield self.element_from_index(index)

    @cached_property
    def frobenius_matrix(self) -> IntMatrix:
        """Matrix over F_p whose column j holds the coordinates of (x^j)^p."""
        cols = []
        for j in range(self.n):
            image = poly_powmod(_monomial(j), self.p, self.modulus, self.p)
            cols.append(list(image) + [0] * (self.n - len(image)))
        return np.array(cols, dtype=np.int64).T.reshape(self.n, self.n)

    @cached_property
    def artin_schreier_matrix(self) -> IntMatrix:
        """Matrix of the F_p-linear map s -> s - s^p."""
        return (np.eye(self.n, dtype=np.int64) - self.frobenius_matrix) % self.p

    def embed(self, value: "FieldElement") -> "FieldElement":
        """Map value into this field along the registered tower."""
        if value.field == self:
            return value
        return TOWER.embedding(value.field, self)(value)

    def __str__(self) -> str:
        return f"F_{self.p}^{self.n}"


@dataclass(frozen=True)
class FieldElement:
    """
    An element of a FiniteField, stored as n coordinates over F_p.
    """

    field: FiniteField
    coeffs: tuple[int, ...]

    def _coerce(self, other: "FieldElement | int") -> "FieldElement":
        if isinstance(other, int):
            return self.field.from_int(other)
        if other.field != self.field:
            msg = f"field mismatch: {self.field} and {other.field}"
            raise ValueError(msg)
        return other

    def __add__(self, other: "FieldElement | int") -> "FieldElement":
        o = self._coerce(other)
        return self.field.element([a + b for a, b in zip(self.coeffs, o.coeffs, strict=True)])

    __radd__ = __add__

    def __neg__(self) -> "FieldElement":
        return self.field.element([-a for a in self.coeffs])

    def __sub__(self, other: "FieldElement | int") -> "FieldElement":
        return self + (-self._coerce(other))

    def __rsub__(self, other: int) -> "FieldElement":
        return self._coerce(other) - self

    def __mul__(self, other: "FieldElement | int") -> "FieldElement":
        o = self._coerce(other)
        f = self.field
        return f.element(poly_mulmod(self.coeffs, o.coeffs, f.modulus, f.p))

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "FieldElement":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        f = self.field
        return f.element(poly_powmod(self.coeffs, exponent, f.modulus, f.p))

    def __truediv__(self, other: "FieldElement | int") -> "FieldElement":
        return self * self._coerce(other).inverse()

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def inverse(self) -> "FieldElement":
        """
        Raises:
            ZeroInputError: If the element is zero
        """
        if self.is_zero():
            msg = "zero has no inverse"
            raise ZeroInputError(msg)
        return self ** (self.field.order - 2)

    def multiplicative_order(self) -> int:
        if self.is_zero():
            msg = "zero has no multiplicative order"
            raise ZeroInputError(msg)
        order = self.field.order - 1
        for prime in sympy.factorint(order):
            while order % prime == 0 and (self ** (order // prime)).coeffs == self.field.one.coeffs:
                order //= prime
        return order

    def __str__(self) -> str:
        terms = [
            f"{c}" if i == 0 else (f"{c}*x" if i == 1 else f"{c}*x^{i}")
            for i, c in enumerate(self.coeffs)
            if c
        ]
        return " + ".join(terms) if terms else "0"


def field_frobenius(value: FieldElement) -> FieldElement:
    """Return value**p, computed with the field's Frobenius matrix."""
    f = value.field
    image = f.frobenius_matrix @ np.array(value.coeffs, dtype=np.int64) % f.p
    return f.element(image.tolist())


def _monomial(j: int) -> Poly:
    return (0,) * j + (1,)


def _smallest_irreducible(p: int, n: int) -> Poly:
    for tail in itertools.product(range(p), repeat=n):
        coeffs = (*reversed(tail), 1)
        if n > 1 and coeffs[0] == 0:
            continue
        if sympy.Poly(list(reversed(coeffs)), sym_x, modulus=p).is_irreducible:
            return coeffs
    msg = f"no irreducible polynomial of degree {n} over F_{p}"
    raise RuntimeError(msg)


_FIELDS: dict[tuple[int, int], FiniteField] = {}
_FIELDS_LOCK = threading.Lock()


def make_extension(p: int, n: int, modulus: Sequence[int] | None = None) -> FiniteField:
    """
    Construct F_{p^n}, verifying irreducibility of the modulus.

    Args:
        p (int): Characteristic, must be prime
        n (int): Degree, at least 1
        modulus (Sequence[int] | None): Optional explicit monic modulus,
            constant term first; the smallest irreducible is used otherwise

    Raises:
        CompositePError: If p is not prime
        ValueError: If n < 1 or the given modulus is not monic irreducible
    """
    if not sympy.isprime(p):
        msg = f"characteristic {p} is not prime"
        raise CompositePError(msg)
    if n < 1:
        msg = f"extension degree must be positive, got {n}"
        raise ValueError(msg)
    if modulus is not None:
        poly = poly_trim(modulus, p)
        if len(poly) != n + 1 or poly[-1] != 1 or not is_irreducible_mod_p(poly, p):
            msg = f"modulus {tuple(modulus)} is not monic irreducible of degree {n}"
            raise ValueError(msg)
        return FiniteField(p, n, poly)
    with _FIELDS_LOCK:
        cached = _FIELDS.get((p, n))
        if cached is not None:
            return cached
        poly = _smallest_irreducible(p, n)
        if not is_irreducible_mod_p(poly, p):
            msg = f"modulus {poly} failed the irreducibility check"
            raise RuntimeError(msg)
        field = FiniteField(p, n, poly)
        _FIELDS[(p, n)] = field
    logger.debug("field_created", p=p, n=n, modulus=poly)
    return field


@dataclass(frozen=True)
class FieldEmbedding:
    """
    A field homomorphism fixing F_p, given by the image of the generator.
    """

    source: FiniteField
    target: FiniteField
    image: FieldElement

    def __call__(self, value: FieldElement) -> FieldElement:
        if value.field != self.source:
            msg = f"embedding expects an element of {self.source}"
            raise ValueError(msg)
        acc = self.target.zero
        for c in reversed(value.coeffs):
            acc = acc * self.image + c
        return acc

    def then(self, other: "FieldEmbedding") -> "FieldEmbedding":
        return FieldEmbedding(self.source, other.target, other(self.image))


class FieldTower:
    """
    Registry of embeddings between finite fields.

    Registration is idempotent: the first embedding stored for a pair wins,
    and every lookup composes registered links before falling back to root
    finding.
    """

    def __init__(self) -> None:
        self._links: dict[FiniteField, dict[FiniteField, FieldEmbedding]] = {}
        self._lock = threading.Lock()
        self.logger = logger.bind(service="field_tower")

    def register(self, embedding: FieldEmbedding) -> FieldEmbedding:
        with self._lock:
            targets = self._links.setdefault(embedding.source, {})
            return targets.setdefault(embedding.target, embedding)

    def _find_chain(self, source: FiniteField, target: FiniteField) -> FieldEmbedding | None:
        with self._lock:
            frontier: list[FieldEmbedding] = list(self._links.get(source, {}).values())
            seen = {source}
            while frontier:
                nxt: list[FieldEmbedding] = []
                for emb in frontier:
                    if emb.target == target:
                        return emb
                    if emb.target in seen:
                        continue
                    seen.add(emb.target)
                    nxt.extend(emb.then(e) for e in self._links.get(emb.target, {}).values())
                frontier = nxt
        return None

    def embedding(self, source: FiniteField, target: FiniteField) -> FieldEmbedding:
        """
        Return an embedding source -> target, computing one if none is known.

        Raises:
            NoEmbeddingError: If the degrees or characteristics are incompatible
        """
        if source == target:
            return FieldEmbedding(source, target, target.generator)
        if source.p != target.p or target.n % source.n != 0:
            msg = f"{source} does not embed into {target}"
            raise NoEmbeddingError(msg)
        chain = self._find_chain(source, target)
        if chain is not None:
            return chain
        image = find_root(source.modulus, target)
        self.logger.debug("embedding_found", source=str(source), target=str(target))
        return self.register(FieldEmbedding(source, target, image))


TOWER = FieldTower()


def find_root(poly: Sequence[int], field: FiniteField) -> FieldElement:
    """
    Find a root in field of a polynomial over F_p that splits there.

    Uses equal-degree splitting with a deterministic sequence of shifts, so the
    root returned is reproducible.
    """
    current = [field.from_int(c) for c in poly]
    while len(current) > 2:
        for index in range(1, _ROOT_SEARCH_LIMIT):
            factor = _split(current, field.element_from_index(index), field)
            if 1 < len(factor) < len(current):
                rest = _lpoly_divmod(current, factor)[0]
                current = factor if len(factor) <= len(rest) else rest
                break
        else:
            msg = f"root search failed in {field}"
            raise NoEmbeddingError(msg)
    root = -current[0] / current[1]
    if not _lpoly_eval(list(map(field.from_int, poly)), root).is_zero():
        msg = f"root check failed in {field}"
        raise RuntimeError(msg)
    return root


_LPoly = list[FieldElement]


def _lpoly_trim(a: _LPoly) -> _LPoly:
    out = list(a)
    while out and out[-1].is_zero():
        out.pop()
    return out


def _lpoly_eval(a: _LPoly, value: FieldElement) -> FieldElement:
    acc = value.field.zero
    for c in reversed(a):
        acc = acc * value + c
    return acc


def _lpoly_mul(a: _LPoly, b: _LPoly) -> _LPoly:
    if not a or not b:
        return []
    zero = a[0].field.zero
    out = [zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x.is_zero():
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return _lpoly_trim(out)


def _lpoly_divmod(a: _LPoly, b: _LPoly) -> tuple[_LPoly, _LPoly]:
    b = _lpoly_trim(b)
    rem = _lpoly_trim(a)
    if len(rem) < len(b):
        return [], rem
    lead_inv = b[-1].inverse()
    quot = [b[0].field.zero] * (len(rem) - len(b) + 1)
    for shift in range(len(rem) - len(b), -1, -1):
        coef = rem[shift + len(b) - 1] * lead_inv
        quot[shift] = coef
        if not coef.is_zero():
            for j, c in enumerate(b):
                rem[shift + j] = rem[shift + j] - coef * c
    return _lpoly_trim(quot), _lpoly_trim(rem[: len(b) - 1])


def _lpoly_powmod(a: _LPoly, exponent: int, f: _LPoly) -> _LPoly:
    one = f[0].field.one
    result = [one]
    base = _lpoly_divmod(a, f)[1]
    while exponent > 0:
        if exponent & 1:
            result = _lpoly_divmod(_lpoly_mul(result, base), f)[1]
        base = _lpoly_divmod(_lpoly_mul(base, base), f)[1]
        exponent >>= 1
    return result


def _lpoly_gcd(a: _LPoly, b: _LPoly) -> _LPoly:
    x, y = _lpoly_trim(a), _lpoly_trim(b)
    while y:
        x, y = y, _lpoly_divmod(x, y)[1]
    if not x:
        return x
    inv = x[-1].inverse()
    return [c * inv for c in x]


def _split(poly: _LPoly, shift: FieldElement, field: FiniteField) -> _LPoly:
    """gcd of poly with a random-looking splitting polynomial."""
    if field.p == 2:
        term = _lpoly_divmod([field.zero, shift], poly)[1]
        acc = term
        for _ in range(field.n - 1):
            term = _lpoly_divmod(_lpoly_mul(term, term), poly)[1]
            acc = _lpoly_add(acc, term)
        splitter = acc
    else:
        power = _lpoly_powmod([shift, field.one], (field.order - 1) // 2, poly)
        splitter = _lpoly_add(power, [-field.one])
    return _lpoly_gcd(poly, splitter)


def _lpoly_add(a: _LPoly, b: _LPoly) -> _LPoly:
    size = max(len(a), len(b))
    zero = (a or b)[0].field.zero
    return _lpoly_trim(
        [(a[i] if i < len(a) else zero) + (b[i] if i < len(b) else zero) for i in range(size)]
    )


def solve_artin_schreier(a: FieldElement) -> tuple[FieldElement, FiniteField]:
    """
    Solve s - s**p = a, extending the field by degree p when needed.

    The F_p-linear map s -> s - s^p has kernel F_p, so the solution is unique up
    to adding a prime-field constant; the returned one has zero constant term
    in the field's basis whenever that coordinate is free.

    Returns:
        tuple: The solution and the field that contains it
    """
    field = a.field
    solution = solve_mod_p(field.artin_schreier_matrix, np.array(a.coeffs), field.p)
    if solution is not None:
        return field.element(solution.tolist()), field
    degree = field.n * field.p
    if degree > settings.cap(settings.max_field_degree):
        msg = f"extension to degree {degree} exceeds the field degree cap"
        raise NoEmbeddingError(msg)
    bigger = make_extension(field.p, degree)
    lifted = TOWER.embedding(field, bigger)(a)
    logger.info("tower_extended", p=field.p, source_degree=field.n, target_degree=degree)
    solution = solve_mod_p(bigger.artin_schreier_matrix, np.array(lifted.coeffs), field.p)
    if solution is None:
        msg = f"Artin-Schreier equation unsolvable in {bigger}"
        raise RuntimeError(msg)
    return bigger.element(solution.tolist()), bigger
