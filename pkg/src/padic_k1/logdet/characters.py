"""
Character Table Module

Irreducible characters by the Burnside-Dixon method. The normalized central
characters w(C) = |C| chi(g_C) / chi(1) are the common eigenvectors of the
class multiplication matrices; they are found over F_l for a prime l = 1 mod
the exponent e with l > 2 sqrt|G|, where every character value reduces and
degrees are determined by their squares. Values are then lifted to Z[zeta_e]
from the eigenvalue multiplicities of rho(g) and checked by exact
orthogonality.

Tables are cached per group.
"""

import math
import threading
from collections.abc import Iterator
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import structlog
import sympy

from padic_k1.coeff.cyclotomic import cyclotomic_product_tensor, reduce_cyclotomic
from padic_k1.coeff.linalg import IntMatrix, nullspace_mod_p
from padic_k1.exceptions import BudgetExceededError, ConsistencyError
from padic_k1.groups.group import Group
from padic_k1.settings import settings

logger = structlog.get_logger(__name__)


@dataclass(frozen=True, eq=False)
class Character:
    """
    An irreducible character with values in Z[zeta_e].

    Attributes:
        group (Group): The group
        exponent (int): e, the exponent of the group
        values (tuple[tuple[int, ...], ...]): Power basis coordinates of the
            value on every conjugacy class
        index (int): Position in its character table
    """

    group: Group
    exponent: int
    values: tuple[tuple[int, ...], ...]
    index: int

    @property
    def degree(self) -> int:
        return self.values[self.group.classes.class_of[self.group.identity]][0]

    def value(self, g: int) -> tuple[int, ...]:
        return self.values[self.group.classes.class_of[g]]

    def is_trivial(self) -> bool:
        return all(v[0] == 1 and not any(v[1:]) for v in self.values)

    def __str__(self) -> str:
        return f"chi{self.index}({', '.join(_format_value(v) for v in self.values)})"


def _format_value(value: tuple[int, ...]) -> str:
    terms = []
    for j, c in enumerate(value):
        if c:
            terms.append(str(c) if j == 0 else f"{c}*z" if j == 1 else f"{c}*z^{j}")
    return "+".join(terms) if terms else "0"


@dataclass(frozen=True, eq=False)
class CharacterTable:
    """
    The irreducible characters of a group, trivial character first.

    Attributes:
        prime (int): The auxiliary prime l used for the eigenvector splitting
    """

    group: Group
    exponent: int
    prime: int
    characters: tuple[Character, ...]

    def __len__(self) -> int:
        return len(self.characters)

    def __iter__(self) -> Iterator[Character]:
        return iter(self.characters)

    def __getitem__(self, i: int) -> Character:
        return self.characters[i]

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(c.degree for c in self.characters)

    @cached_property
    def values(self) -> IntMatrix:
        """Integer array of shape (#characters, #classes, m)."""
        return np.array([c.values for c in self.characters], dtype=np.int64)

    def pairing(self, left: IntMatrix, right: IntMatrix) -> IntMatrix:
        """
        sum_C |C| f(C) g(C^-1) for class functions with Z[zeta_e] values.

        Args:
            left (IntMatrix): Shape (a, #classes, m)
            right (IntMatrix): Shape (b, #classes, m)

        Returns:
            IntMatrix: Shape (a, b, m), not yet divided by |G|
        """
        sizes = np.array(self.group.classes.sizes, dtype=np.int64)
        flipped = np.asarray(right, dtype=np.int64)[:, list(self.group.inverse_class())]
        weighted = np.asarray(left, dtype=np.int64) * sizes[None, :, None]
        pairs = np.einsum("aki,bkj->abij", weighted, flipped)
        return np.einsum("abij,ijl->abl", pairs, cyclotomic_product_tensor(self.exponent))


_TABLES: dict[Group, CharacterTable] = {}
_TABLE_LOCK = threading.Lock()


def auxiliary_prime(order: int, exponent: int) -> int:
    """Smallest prime l = 1 mod exponent with l > 2 sqrt(order)."""
    ell = 1 + exponent
    while not (sympy.isprime(ell) and ell * ell > 4 * order):
        ell += exponent
    return ell


def class_constants(group: Group) -> IntMatrix:
    """a[i, j, k] = #{(x, y) in C_i x C_j : xy = g_k}."""
    r = len(group.classes)
    class_of = np.array(group.classes.class_of, dtype=np.int64)
    inverses = np.array(group.inverses, dtype=np.int64)
    out = np.zeros((r, r, r), dtype=np.int64)
    for k, z in enumerate(group.classes.representatives):
        partners = group.table[inverses, z]
        np.add.at(out[:, :, k], (class_of, class_of[partners]), 1)
    return out


def _eigenspaces(matrix: IntMatrix, basis: IntMatrix, ell: int) -> list[IntMatrix]:
    image = (matrix @ basis) % ell
    pieces = []
    for eigenvalue in range(ell):
        null = nullspace_mod_p((image - eigenvalue * basis) % ell, ell)
        if null.shape[1]:
            pieces.append((basis @ null) % ell)
    return pieces


def _central_characters(constants: IntMatrix, ell: int) -> list[IntMatrix]:
    r = constants.shape[0]
    queue = [np.eye(r, dtype=np.int64)]
    done = []
    while queue:
        basis = queue.pop()
        if basis.shape[1] == 1:
            done.append(basis[:, 0])
            continue
        for i in range(r):
            pieces = _eigenspaces(constants[i], basis, ell)
            if len(pieces) > 1:
                queue.extend(pieces)
                break
        else:
            msg = f"class algebra does not split over F_{ell}"
            raise ConsistencyError(msg)
    return done


def _lift_values(group: Group, residues: list[int], degree: int, ell: int, zeta: int) -> tuple[tuple[int, ...], ...]:
    e = group.exponent
    class_of = group.classes.class_of
    lifted = []
    for g in group.classes.representatives:
        o = group.element_orders[g]
        step = e // o
        powers = [residues[class_of[group.power(g, t)]] for t in range(o)]
        poly = [0] * e
        total = 0
        o_inv = pow(o, -1, ell)
        for j in range(o):
            m = o_inv * sum(v * pow(zeta, -step * j * t, ell) for t, v in enumerate(powers)) % ell
            if m > degree:
                msg = "eigenvalue multiplicity exceeds the character degree"
                raise ConsistencyError(msg)
            poly[step * j] += m
            total += m
        if total != degree:
            msg = "eigenvalue multiplicities do not add up to the degree"
            raise ConsistencyError(msg)
        lifted.append(reduce_cyclotomic(poly, e))
    return tuple(lifted)


def _build_table(group: Group) -> CharacterTable:
    order, e = group.order, group.exponent
    ell = auxiliary_prime(order, e)
    zeta = pow(sympy.primitive_root(ell), (ell - 1) // e, ell)
    data = group.classes
    sizes = data.sizes
    inverse_class = group.inverse_class()
    identity_class = data.class_of[group.identity]
    rows = []
    for w in _central_characters(class_constants(group), ell):
        w = w * pow(int(w[identity_class]), -1, ell) % ell
        norm = sum(int(w[k]) * int(w[inverse_class[k]]) * pow(sizes[k], -1, ell) for k in range(len(data))) % ell
        target = order * pow(norm, -1, ell) % ell
        degree = next((d for d in range(1, math.isqrt(order) + 1) if d * d % ell == target), None)
        if degree is None:
            msg = "no character degree matches the central character"
            raise ConsistencyError(msg)
        residues = [degree * int(w[k]) * pow(sizes[k], -1, ell) % ell for k in range(len(data))]
        rows.append(_lift_values(group, residues, degree, ell, zeta))
    rows.sort(key=lambda v: (v[identity_class][0], any(c != (1,) + (0,) * (len(c) - 1) for c in v), v))
    table = CharacterTable(
        group, e, ell, tuple(Character(group, e, values, i) for i, values in enumerate(rows))
    )
    _check_orthogonality(table)
    return table


def _check_orthogonality(table: CharacterTable) -> None:
    gram = table.pairing(table.values, table.values)
    expected = np.zeros_like(gram)
    expected[:, :, 0] = table.group.order * np.eye(len(table), dtype=np.int64)
    if len(table) != len(table.group.classes) or not np.array_equal(gram, expected):
        msg = f"character table of {table.group.name} fails orthogonality"
        raise ConsistencyError(msg)


def character_table(group: Group) -> CharacterTable:
    """
    The irreducible characters of group, computed once per group.

    Raises:
        BudgetExceededError: If the group is above the character order bound
        ConsistencyError: If the computed table is not orthonormal
    """
    with _TABLE_LOCK:
        cached = _TABLES.get(group)
    if cached is not None:
        return cached
    bound = settings.cap(settings.character_order_bound)
    if group.order > bound:
        msg = f"character tables are limited to order {bound}"
        raise BudgetExceededError(msg)
    table = _build_table(group)
    logger.info("character_table", group=group.name, characters=len(table), prime=table.prime)
    with _TABLE_LOCK:
        return _TABLES.setdefault(group, table)
