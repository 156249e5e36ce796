"""
Exhaustive arithmetic in the finite rings (O/p^N)[G].

Elements are coded as integers: the base-p^N digits of a code are the
flattened (|G|, n) coordinates. Codes make unit groups, subgroup closures
and quotient invariants plain numpy set operations.
"""

from collections.abc import Iterable
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import structlog

from padic_k1.coeff.linalg import IntMatrix
from padic_k1.coeff.unramified import UnramifiedRing
from padic_k1.exceptions import BudgetExceededError
from padic_k1.groupring.element import GroupRingElement, convolve
from padic_k1.groups.abelian import AbelianInvariants
from padic_k1.groups.group import Group

logger = structlog.get_logger(__name__)

Codes = np.ndarray


@dataclass(frozen=True, eq=False)
class FiniteGroupRing:
    """
    (O/p^N)[G] with every element addressable by its code.

    Attributes:
        ring (UnramifiedRing): O/p^N
        group (Group): G
        bound (int): Largest ring size that may be enumerated
    """

    ring: UnramifiedRing
    group: Group
    bound: int

    @property
    def size(self) -> int:
        return self.ring.modulus ** (self.group.order * self.ring.n)

    @cached_property
    def _weights(self) -> IntMatrix:
        return np.array([self.ring.modulus**i for i in range(self.group.order * self.ring.n)], dtype=np.int64)

    def encode(self, coeffs: IntMatrix) -> Codes:
        arr = np.asarray(coeffs, dtype=object) % self.ring.modulus
        flat = arr.reshape(*arr.shape[:-2], -1).astype(np.int64)
        return flat @ self._weights

    def decode(self, codes: Codes | int) -> IntMatrix:
        arr = np.asarray(codes, dtype=np.int64)
        digits = (arr[..., None] // self._weights) % self.ring.modulus
        return digits.reshape(*arr.shape, self.group.order, self.ring.n)

    def element(self, code: int) -> GroupRingElement:
        return GroupRingElement(self.ring, self.group, self.decode(code).astype(object))

    def multiply(self, a: Codes | int, b: Codes | int) -> Codes:
        return self.encode(convolve(self.ring, self.group, self.decode(a), self.decode(b)))

    def add(self, a: Codes | int, b: Codes | int) -> Codes:
        return self.encode(self.decode(a) + self.decode(b))

    def power(self, codes: Codes, exponent: int) -> Codes:
        result = np.full(np.shape(codes), self.one, dtype=np.int64)
        base = np.asarray(codes, dtype=np.int64)
        while exponent:
            if exponent & 1:
                result = self.multiply(result, base)
            base = self.multiply(base, base)
            exponent >>= 1
        return result

    @cached_property
    def one(self) -> int:
        return int(self.encode(GroupRingElement.one(self.ring, self.group).coeffs))

    @cached_property
    def units(self) -> Codes:
        """
        Sorted codes of the unit group.

        Raises:
            BudgetExceededError: If the ring is larger than the bound
        """
        if self.size > self.bound:
            msg = f"|{self.ring}[{self.group.name}]| = {self.size} exceeds {self.bound}"
            raise BudgetExceededError(msg)
        codes = np.arange(self.size, dtype=np.int64)
        p = self.ring.p
        if self.group.is_p_group(p):
            # local ring: a unit iff the augmentation is a unit of O
            aug = self.decode(codes).sum(axis=-2) % p
            mask = np.any(aug != 0, axis=-1)
        else:
            mask = np.array([self.element(int(c)).is_unit() for c in codes])
        units = codes[mask]
        logger.debug("unit_group", ring=str(self.ring), group=self.group.name, units=len(units))
        return units

    @cached_property
    def inverses(self) -> Codes:
        """inverses[i] is the inverse of units[i]."""
        return self.power(self.units, len(self.units) - 1)

    def invert(self, codes: Codes) -> Codes:
        return self.inverses[np.searchsorted(self.units, codes)]

    def closure(self, generators: Iterable[int]) -> Codes:
        """Sorted codes of the subgroup of the unit group generated by the given units."""
        members = {self.one}
        kept: list[int] = []
        for gen in generators:
            if int(gen) in members:
                continue
            kept.append(int(gen))
            frontier = np.array(sorted(members), dtype=np.int64)
            while frontier.size:
                products = np.concatenate([self.multiply(frontier, g) for g in kept])
                fresh = set(products.tolist()) - members
                members |= fresh
                frontier = np.array(sorted(fresh), dtype=np.int64)
        return np.array(sorted(members), dtype=np.int64)

    def quotient_invariants(self, subgroup: Codes, whole: Codes | None = None) -> AbelianInvariants:
        """Invariants of whole/subgroup, whole the unit group by default; the quotient must be abelian."""
        whole = self.units if whole is None else whole
        order = len(whole) // len(subgroup)

        def count(k: int) -> int:
            return int(np.isin(self.power(whole, k), subgroup).sum()) // len(subgroup)

        return AbelianInvariants.from_torsion_counter(order, count)
