"""
Finite abelian groups described by their invariant factors.

AbelianInvariants is the common currency for abelianizations, Schur
multipliers, SK1 values and the K and C groups of the descent case table.
Invariants are kept in the normal form d_1 | d_2 | ... | d_k with every
d_i > 1, so two descriptions are equal exactly when the groups are
isomorphic.
"""

import math
from collections.abc import Callable, Iterable
from dataclasses import dataclass
from itertools import combinations

import sympy
from sympy.matrices.normalforms import invariant_factors


def _prime_power_parts(orders: Iterable[int]) -> dict[int, list[int]]:
    parts: dict[int, list[int]] = {}
    for d in orders:
        for prime, exp in sympy.factorint(int(d)).items():
            parts.setdefault(int(prime), []).append(int(exp))
    return parts


@dataclass(frozen=True)
class AbelianInvariants:
    """
    Invariant factors of a finite abelian group.

    Attributes:
        divisors (tuple[int, ...]): d_1 | d_2 | ... | d_k, each greater than 1
    """

    divisors: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        for a, b in zip(self.divisors, self.divisors[1:], strict=False):
            if b % a != 0:
                msg = f"invariants {self.divisors} do not form a divisibility chain"
                raise ValueError(msg)
        if any(d <= 1 for d in self.divisors):
            msg = f"invariants {self.divisors} must exceed 1"
            raise ValueError(msg)

    @classmethod
    def from_cyclic_orders(cls, orders: Iterable[int]) -> "AbelianInvariants":
        """Normalize a direct sum of cyclic groups of the given orders."""
        parts = _prime_power_parts(o for o in orders if o > 1)
        length = max((len(v) for v in parts.values()), default=0)
        divisors = [1] * length
        for prime, exps in parts.items():
            for i, e in enumerate(sorted(exps, reverse=True)):
                divisors[length - 1 - i] *= prime**e
        return cls(tuple(d for d in divisors if d > 1))

    @classmethod
    def from_prime_counts(cls, counts: dict[int, list[int]]) -> "AbelianInvariants":
        """
        Build from, per prime p, the list c_j = #{i : a_i >= j} for j = 1, 2, ...
        """
        orders: list[int] = []
        for prime, per_level in counts.items():
            padded = [*per_level, 0]
            for j in range(len(per_level)):
                orders += [prime ** (j + 1)] * (padded[j] - padded[j + 1])
        return cls.from_cyclic_orders(orders)

    @classmethod
    def from_torsion_counter(cls, order: int, count: Callable[[int], int]) -> "AbelianInvariants":
        """
        Recover the invariants of an abelian group of the given order.

        Args:
            order (int): Group order
            count (Callable[[int], int]): k -> #{x : x^k = 1}
        """
        counts: dict[int, list[int]] = {}
        for prime, exp in sympy.factorint(order).items():
            prime, exp = int(prime), int(exp)
            logs = [0]
            for j in range(1, exp + 1):
                logs.append(round(math.log(count(prime**j), prime)))
                if logs[-1] == logs[-2]:
                    break
            counts[prime] = [logs[j] - logs[j - 1] for j in range(1, len(logs))]
        return cls.from_prime_counts(counts)

    @property
    def order(self) -> int:
        return math.prod(self.divisors)

    @property
    def exponent(self) -> int:
        return self.divisors[-1] if self.divisors else 1

    def is_trivial(self) -> bool:
        return not self.divisors

    def prime_power_orders(self) -> list[int]:
        """Orders of the cyclic prime-power summands, sorted."""
        out: list[int] = []
        for prime, exps in _prime_power_parts(self.divisors).items():
            out += [prime**e for e in exps]
        return sorted(out)

    def torsion(self, k: int) -> "AbelianInvariants":
        """The subgroup A[k] of elements killed by k."""
        return AbelianInvariants.from_cyclic_orders(math.gcd(d, k) for d in self.divisors)

    def modulo(self, k: int) -> "AbelianInvariants":
        """The quotient A/kA."""
        return AbelianInvariants.from_cyclic_orders(math.gcd(d, k) for d in self.divisors)

    def level_counts(self, p: int) -> list[int]:
        """#{summands of the p-part of order at least p^j}, j = 1, 2, ..."""
        exps = [round(math.log(q, p)) for q in self.prime_power_orders() if q % p == 0]
        top = max(exps, default=0)
        return [sum(1 for e in exps if e >= j) for j in range(1, top + 1)]

    def embeds_in(self, other: "AbelianInvariants") -> bool:
        """Whether a group with these invariants can be a subgroup of other."""
        primes = {q for d in self.divisors + other.divisors for q in sympy.factorint(d)}
        for prime in primes:
            mine, theirs = self.level_counts(prime), other.level_counts(prime)
            theirs += [0] * max(0, len(mine) - len(theirs))
            if any(a > b for a, b in zip(mine, theirs, strict=False)):
                return False
        return True

    def exterior_square(self) -> "AbelianInvariants":
        """
        Invariants of A wedge A, the Schur multiplier of A.

        Uses the cyclic decomposition sum_{i<j} Z/gcd(d_i, d_j) and normalizes
        the resulting diagonal relation matrix with Smith normal form.
        """
        entries = [math.gcd(a, b) for a, b in combinations(self.divisors, 2)]
        entries = [e for e in entries if e > 1]
        if not entries:
            return AbelianInvariants()
        factors = invariant_factors(sympy.diag(*entries), domain=sympy.ZZ)
        return AbelianInvariants(tuple(int(abs(f)) for f in factors if abs(f) > 1))

    def __str__(self) -> str:
        if not self.divisors:
            return "1"
        return " x ".join(f"Z/{d}" for d in self.divisors)
