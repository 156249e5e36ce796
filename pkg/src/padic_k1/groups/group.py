"""
Group Module

This module defines the finite group type used throughout the package: a
group is a verified multiplication table over element indices 0..|G|-1,
together with conjugacy data, inverses, element orders and power maps that
are computed eagerly at construction. Groups are immutable afterwards and
safe to share between threads.

Example:
    ```python
    g = group_from_table([[0, 1], [1, 0]], name="C2")
    assert g.order == 2 and len(g.classes.classes) == 2
    ```
"""

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import numpy.typing as npt
import structlog
import sympy

from padic_k1.exceptions import NotAGroupError, NotCentralError
from padic_k1.groups.abelian import AbelianInvariants
from padic_k1.settings import settings

logger = structlog.get_logger(__name__)

Table = npt.NDArray[np.int64]


@dataclass(frozen=True)
class ConjugacyData:
    """
    Conjugacy classes of a group.

    Attributes:
        classes (tuple[tuple[int, ...], ...]): Sorted element indices per class
        class_of (tuple[int, ...]): Class index of each element
        representatives (tuple[int, ...]): Smallest element of each class
    """

    classes: tuple[tuple[int, ...], ...]
    class_of: tuple[int, ...]
    representatives: tuple[int, ...]

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.classes)

    def __len__(self) -> int:
        return len(self.classes)


class Group:
    """
    A finite group given by its multiplication table.

    Attributes:
        table (Table): table[a, b] is the index of the product ab
        identity (int): Index of the identity element
        name (str): Display name
        labels (tuple[str, ...]): Display label of every element
        generators (dict[str, int]): Named generators, when known
        relators (tuple[tuple[int, ...], ...]): Defining relators over the
            named generators in order, as signed 1-based indices; empty when
            the group came from a bare table
    """

    def __init__(
        self,
        table: Sequence[Sequence[int]] | Table,
        *,
        name: str = "",
        labels: Sequence[str] | None = None,
        generators: dict[str, int] | None = None,
        relators: Sequence[tuple[int, ...]] = (),
    ) -> None:
        self.table: Table = np.array(table, dtype=np.int64)
        self.name = name or f"G{len(self.table)}"
        self.logger = logger.bind(service="group", group=self.name)
        self._verify()
        order = self.order
        self.identity = int(next(i for i in range(order) if np.array_equal(self.table[i], np.arange(order))))
        self.inverses: tuple[int, ...] = tuple(
            int(np.nonzero(self.table[a] == self.identity)[0][0]) for a in range(order)
        )
        self.labels: tuple[str, ...] = tuple(labels) if labels else tuple(f"e{i}" for i in range(order))
        self.generators: dict[str, int] = dict(generators or {})
        self.relators: tuple[tuple[int, ...], ...] = tuple(relators)
        self.element_orders: tuple[int, ...] = tuple(self._order_of(a) for a in range(order))
        self.classes: ConjugacyData = self._conjugacy_classes()
        self.logger.debug("group_built", order=order, classes=len(self.classes))

    @property
    def order(self) -> int:
        return len(self.table)

    def _verify(self) -> None:
        t = self.table
        n = len(t)
        if t.ndim != 2 or t.shape != (n, n) or n == 0:
            msg = "multiplication table must be a nonempty square array"
            raise NotAGroupError(msg)
        expected = np.arange(n)
        if np.any(np.sort(t, axis=1) != expected) or np.any(np.sort(t, axis=0) != expected[:, None]):
            msg = "multiplication table is not a Latin square"
            raise NotAGroupError(msg)
        if not any(np.array_equal(t[i], expected) for i in range(n)):
            msg = "multiplication table has no identity"
            raise NotAGroupError(msg)
        if n <= settings.verify_order_bound:
            rows = range(n)
        else:
            rows = np.random.default_rng(0).choice(n, size=16, replace=False).tolist()
        for a in rows:
            left = t[t[a]][:, :]  # (ab)c over all b, c
            right = t[a][t]  # a(bc)
            if not np.array_equal(left, right):
                msg = f"multiplication table is not associative at element {a}"
                raise NotAGroupError(msg)

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return self.inverses[a]

    def product(self, elements: Iterable[int]) -> int:
        acc = self.identity
        for e in elements:
            acc = int(self.table[acc, e])
        return acc

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        result, base = self.identity, a
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def conjugate(self, g: int, x: int) -> int:
        """x g x^-1."""
        return self.mul(self.mul(x, g), self.inv(x))

    def commutator(self, a: int, b: int) -> int:
        """a b a^-1 b^-1."""
        return self.product((a, b, self.inv(a), self.inv(b)))

    def _order_of(self, a: int) -> int:
        k, current = 1, a
        while current != self.identity:
            current = self.mul(current, a)
            k += 1
        return k

    @cached_property
    def exponent(self) -> int:
        return int(np.lcm.reduce(np.array(self.element_orders, dtype=np.int64)))

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def is_p_group(self, p: int) -> bool:
        factors = sympy.factorint(self.order)
        return self.order == 1 or set(factors) == {p}

    def _conjugacy_classes(self) -> ConjugacyData:
        n = self.order
        class_of = [-1] * n
        classes: list[tuple[int, ...]] = []
        inv = np.array(self.inverses)
        for g in range(n):
            if class_of[g] >= 0:
                continue
            orbit = np.unique(self.table[self.table[:, g], inv])
            for h in orbit:
                class_of[int(h)] = len(classes)
            classes.append(tuple(int(h) for h in orbit))
        data = ConjugacyData(tuple(classes), tuple(class_of), tuple(c[0] for c in classes))
        if sum(data.sizes) != n:
            msg = "conjugacy classes do not partition the group"
            raise NotAGroupError(msg)
        return data

    def subgroup_generated(self, gens: Iterable[int]) -> tuple[int, ...]:
        gens = [int(g) for g in gens]
        seen = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for h in frontier:
                for g in gens:
                    k = self.mul(h, g)
                    if k not in seen:
                        seen.add(k)
                        nxt.append(k)
            frontier = nxt
        return tuple(sorted(seen))

    @cached_property
    def generating_set(self) -> tuple[int, ...]:
        """A small generating set, chosen greedily by descending element order."""
        if self.generators:
            named = tuple(sorted(set(self.generators.values())))
            if len(self.subgroup_generated(named)) == self.order:
                return named
        gens: list[int] = []
        current = {self.identity}
        for g in sorted(range(self.order), key=lambda a: (-self.element_orders[a], a)):
            if g not in current:
                gens.append(g)
                current = set(self.subgroup_generated(gens))
            if len(current) == self.order:
                break
        return tuple(gens)

    def centralizer(self, g: int) -> tuple[int, ...]:
        col = self.table[:, g]
        row = self.table[g, :]
        return tuple(int(x) for x in np.nonzero(col == row)[0])

    @cached_property
    def center(self) -> tuple[int, ...]:
        return tuple(c[0] for c in self.classes.classes if len(c) == 1)

    @cached_property
    def derived_subgroup(self) -> tuple[int, ...]:
        comms = {self.commutator(a, b) for a in range(self.order) for b in range(self.order)}
        return self.subgroup_generated(comms)

    def power_map_on_classes(self, k: int) -> tuple[int, ...]:
        """
        The class of g^k for every class of g.

        Raises:
            NotAGroupError: If members of one class disagree
        """
        class_of = self.classes.class_of
        images = []
        for cls in self.classes.classes:
            targets = {class_of[self.power(g, k)] for g in cls}
            if len(targets) != 1:
                msg = "power map is not constant on a conjugacy class"
                raise NotAGroupError(msg)
            images.append(targets.pop())
        return tuple(images)

    def inverse_class(self) -> tuple[int, ...]:
        return self.power_map_on_classes(-1)

    def element_power_map(self, k: int) -> npt.NDArray[np.int64]:
        return np.array([self.power(g, k) for g in range(self.order)], dtype=np.int64)

    def quotient(self, normal: Sequence[int], name: str = "") -> tuple["Group", npt.NDArray[np.int64]]:
        """
        The quotient by a normal subgroup and the projection onto it.

        Raises:
            NotAGroupError: If the subgroup is not normal
        """
        normal_set = set(normal)
        for h in normal_set:
            for x in range(self.order):
                if self.conjugate(h, x) not in normal_set:
                    msg = "subgroup is not normal"
                    raise NotAGroupError(msg)
        coset_of = [-1] * self.order
        reps: list[int] = []
        for g in range(self.order):
            if coset_of[g] < 0:
                for h in normal_set:
                    coset_of[self.mul(g, h)] = len(reps)
                reps.append(g)
        table = [[coset_of[self.mul(a, b)] for b in reps] for a in reps]
        labels = [self.labels[r] for r in reps]
        quotient = Group(table, name=name or f"{self.name}/N", labels=labels)
        return quotient, np.array(coset_of, dtype=np.int64)

    def __repr__(self) -> str:
        return f"Group({self.name}, order={self.order})"


@dataclass(frozen=True)
class GroupHomomorphism:
    """A map between groups given on element indices."""

    source: Group
    target: Group
    images: tuple[int, ...]

    def __call__(self, g: int) -> int:
        return self.images[g]

    def is_homomorphism(self) -> bool:
        s, t = self.source, self.target
        return all(
            self.images[s.mul(a, b)] == t.mul(self.images[a], self.images[b])
            for a in range(s.order)
            for b in range(s.order)
        )

    def is_surjective(self) -> bool:
        return set(self.images) == set(range(self.target.order))


def group_from_table(table: Sequence[Sequence[int]] | Table, name: str = "") -> Group:
    """
    Build and verify a group from its multiplication table.

    Raises:
        NotAGroupError: If the table fails the group axioms
    """
    return Group(table, name=name)


def conjugacy_classes(group: Group) -> ConjugacyData:
    return group.classes


def center(group: Group) -> tuple[int, ...]:
    return group.center


def derived_subgroup(group: Group) -> tuple[int, ...]:
    return group.derived_subgroup


def centralizer(group: Group, g: int) -> tuple[int, ...]:
    return group.centralizer(g)


def power_map_on_classes(group: Group, k: int) -> tuple[int, ...]:
    return group.power_map_on_classes(k)


def abelianization(group: Group) -> tuple[AbelianInvariants, GroupHomomorphism]:
    """
    G^ab = G/[G, G] with its invariants and the verified projection.
    """
    quotient, coset_of = group.quotient(group.derived_subgroup, name=f"{group.name}^ab")
    projection = GroupHomomorphism(group, quotient, tuple(int(c) for c in coset_of))
    if not (projection.is_homomorphism() and projection.is_surjective()):
        msg = "abelianization projection failed verification"
        raise NotAGroupError(msg)
    invariants = AbelianInvariants.from_torsion_counter(
        quotient.order,
        lambda k: sum(1 for a in range(quotient.order) if quotient.power(a, k) == quotient.identity),
    )
    return invariants, projection


def p_regular_classes(group: Group, p: int) -> tuple[int, ...]:
    """Indices of the classes whose elements have order prime to p."""
    return tuple(
        i
        for i, rep in enumerate(group.classes.representatives)
        if group.element_orders[rep] % p != 0
    )


def central_order_p_element(group: Group, p: int) -> int | None:
    """The smallest central element of order p, if any."""
    for z in group.center:
        if group.element_orders[z] == p:
            return z
    return None


def omega_set(group: Group, z: int) -> tuple[int, ...]:
    """
    The elements g conjugate to zg.

    Raises:
        NotCentralError: If z is not central of prime order
    """
    order = group.element_orders[z]
    if z not in group.center or not sympy.isprime(order):
        msg = f"element {z} is not central of prime order"
        raise NotCentralError(msg)
    class_of = group.classes.class_of
    return tuple(g for g in range(group.order) if class_of[g] == class_of[group.mul(z, g)])
