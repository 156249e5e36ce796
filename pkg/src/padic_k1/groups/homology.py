"""
Schur multipliers and SK1 of p-adic group rings.

H2(G) is read off the Cayley complex of a finite presentation: the complex
is the universal cover of the presentation 2-complex, so its second homology
is pi_2 of the presentation complex and

    H2(G) = ker(relator exponent sums) / (image of the 2-cycles of the cover).

Cycles of the cover are kernels of an integer matrix whose cokernel is free,
so they are computed exactly modulo p^k with a local Smith form. Commuting
pairs (x, y) give the tori x^y, whose classes span H2ab(G), and
SK1(Z_p[G]) = H2(G)/H2ab(G) for a p-group G.

An independent computation through 2-cocycles over Z/p^k serves as the
cross-check oracle on small groups.
"""

from collections import deque
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np
import structlog
import sympy

from padic_k1.coeff.linalg import IntMatrix, integer_kernel, local_smith_form
from padic_k1.exceptions import (
    BudgetExceededError,
    ConsistencyError,
    EnumerationBudgetExceededError,
    NotAPGroupError,
    PrecisionExhaustedError,
)
from padic_k1.groups.abelian import AbelianInvariants
from padic_k1.groups.group import Group
from padic_k1.groups.presentation import CosetTable, Word
from padic_k1.settings import settings

logger = structlog.get_logger(__name__)


def _inverse_word(word: Word) -> Word:
    return tuple(-s for s in reversed(word))


def _tree_words(group: Group, gens: tuple[int, ...]) -> list[Word]:
    words: list[Word | None] = [None] * group.order
    words[group.identity] = ()
    queue = deque([group.identity])
    while queue:
        h = queue.popleft()
        for i, s in enumerate(gens):
            t = group.mul(h, s)
            if words[t] is None:
                words[t] = (*words[h], i + 1)  # type: ignore[misc]
                queue.append(t)
    return [w if w is not None else () for w in words]


def _enumerated_order(gen_count: int, relators: list[Word], bound: int) -> int | None:
    table = CosetTable(gen_count, bound)
    try:
        table.enumerate(relators)
    except EnumerationBudgetExceededError:
        return None
    return len(table.compact())


def derived_presentation(group: Group) -> tuple[tuple[int, ...], tuple[Word, ...]]:
    """
    A presentation over the group's generating set, built from the closing
    edges of a spanning tree of the Cayley graph and pruned greedily: short
    relators are added until coset enumeration recovers the group order.
    """
    gens = group.generating_set
    words = _tree_words(group, gens)
    candidates: list[Word] = [
        (i + 1,) * group.element_orders[s] for i, s in enumerate(gens)
    ]
    for g in range(group.order):
        for i, s in enumerate(gens):
            h = group.mul(g, s)
            if words[h] != (*words[g], i + 1):
                candidates.append((*words[g], i + 1, *_inverse_word(words[h])))
    candidates.sort(key=len)
    bound = 16 * group.order + 64
    chosen: list[Word] = []
    for relator in candidates:
        chosen.append(relator)
        if _enumerated_order(len(gens), chosen, bound) == group.order:
            break
    logger.debug("derived_presentation", group=group.name, relators=len(chosen))
    return gens, tuple(chosen)


@dataclass(frozen=True)
class CayleyComplex:
    """
    The Cayley 2-complex of a presentation.

    Edges are (h, i) for h in G and generator i, joining h to h*s_i; cells
    are (x, r) for x in G and relator r, attached along r read from x.
    """

    group: Group
    generators: tuple[int, ...]
    relators: tuple[Word, ...]

    @classmethod
    def of(cls, group: Group) -> "CayleyComplex":
        if group.relators and group.generators:
            return cls(group, tuple(group.generators.values()), group.relators)
        gens, relators = derived_presentation(group)
        return cls(group, gens, relators)

    @property
    def edge_count(self) -> int:
        return self.group.order * len(self.generators)

    @property
    def cell_count(self) -> int:
        return self.group.order * len(self.relators)

    def walk(self, word: Word, start: int) -> tuple[IntMatrix, int]:
        """The 1-chain traced by a word from a vertex, and the end vertex."""
        chain = np.zeros(self.edge_count, dtype=np.int64)
        gens, g = self.generators, self.group
        v = start
        for letter in word:
            i = abs(letter) - 1
            if letter > 0:
                chain[v * len(gens) + i] += 1
                v = g.mul(v, gens[i])
            else:
                v = g.mul(v, g.inv(gens[i]))
                chain[v * len(gens) + i] -= 1
        return chain, v

    @cached_property
    def boundary(self) -> IntMatrix:
        """The cellular boundary C2 -> C1 of the cover."""
        out = np.zeros((self.edge_count, self.cell_count), dtype=np.int64)
        for x in range(self.group.order):
            for j, r in enumerate(self.relators):
                out[:, x * len(self.relators) + j] = self.walk(r, x)[0]
        return out

    @cached_property
    def exponent_sums(self) -> IntMatrix:
        """The boundary C2 -> C1 of the presentation complex."""
        out = np.zeros((len(self.generators), len(self.relators)), dtype=np.int64)
        for j, r in enumerate(self.relators):
            for s in r:
                out[abs(s) - 1, j] += 1 if s > 0 else -1
        return out

    def project_cells(self, chains: IntMatrix) -> IntMatrix:
        """Sum cell coefficients over the group, C2 of the cover -> Z^R."""
        g, r = self.group.order, len(self.relators)
        return chains.reshape(g, r, -1).sum(axis=0)


@dataclass(frozen=True)
class HomologyData:
    """
    Attributes:
        h2 (AbelianInvariants): The Schur multiplier H2(G)
        h2_ab (AbelianInvariants): The image of H2 of abelian subgroups
        sk1 (AbelianInvariants): H2(G)/H2ab(G)
    """

    h2: AbelianInvariants
    h2_ab: AbelianInvariants
    sk1: AbelianInvariants


def _cokernel_orders(matrix: IntMatrix, p: int, k: int) -> list[int]:
    rows = matrix.shape[0]
    smith = local_smith_form(matrix, p, k)
    vals = smith.valuations[: min(matrix.shape)] + [k] * (rows - min(matrix.shape))
    if any(v >= k for v in vals):
        msg = f"homology exponent reached {p}^{k}; the module is not finite"
        raise PrecisionExhaustedError(msg)
    return [p**v for v in vals if v > 0]


def _image_orders(relations: IntMatrix, generators: IntMatrix, p: int, k: int) -> list[int]:
    """Cyclic orders of the subgroup of Z^r/relations spanned by generators."""
    smith = local_smith_form(relations, p, k, rhs=generators)
    if smith.rhs is None:
        return []
    rows = relations.shape[0]
    vals = smith.valuations[: min(relations.shape)] + [k] * (rows - min(relations.shape))
    scale = np.array([p ** (k - v) for v in vals], dtype=object)[:, None]
    embedded = (smith.rhs.astype(object) * scale) % p**k
    return [p**e for e in local_smith_form(embedded, p, k).module_invariants()]


def _commuting_tori(complex_: CayleyComplex) -> IntMatrix:
    """1-cycles of x y x^-1 y^-1 for x a class representative and y in C(x)."""
    group = complex_.group
    words = _tree_words(group, complex_.generators)
    loops = []
    for x in group.classes.representatives:
        for y in group.centralizer(x):
            if x == y or group.identity in (x, y):
                continue
            word = (*words[x], *words[y], *_inverse_word(words[x]), *_inverse_word(words[y]))
            loops.append(complex_.walk(word, group.identity)[0])
    if not loops:
        return np.zeros((complex_.edge_count, 0), dtype=np.int64)
    return np.stack(loops, axis=1)


def _homology_at_prime(complex_: CayleyComplex, p: int) -> tuple[list[int], list[int], list[int]]:
    group = complex_.group
    k = sympy.multiplicity(p, group.order) + 1
    modulus = p**k
    relator_kernel = integer_kernel(complex_.exponent_sums)
    if relator_kernel.shape[1] == 0:
        return [], [], []
    tori = _commuting_tori(complex_)
    cover = local_smith_form(
        complex_.boundary, p, k, track_columns=True, rhs=tori if tori.shape[1] else None
    )
    if any(0 < v < k for v in cover.valuations):
        msg = "cover boundary has torsion cokernel; the complex is not simply connected"
        raise ConsistencyError(msg)
    cycles = cover.kernel_generators()
    fillings = cover.solve() if tori.shape[1] else np.zeros((complex_.cell_count, 0), dtype=object)
    if fillings is None:
        msg = "a commuting loop does not bound in the Cayley complex"
        raise ConsistencyError(msg)
    projected = np.hstack(
        [complex_.project_cells(cycles.astype(object)), complex_.project_cells(fillings.astype(object))]
    ) % modulus
    coords = local_smith_form(relator_kernel, p, k, track_columns=True, rhs=projected).solve()
    if coords is None:
        msg = "projected cycles leave the relator kernel"
        raise ConsistencyError(msg)
    relations, torus_classes = coords[:, : cycles.shape[1]], coords[:, cycles.shape[1] :]
    h2 = _cokernel_orders(relations, p, k)
    sk1 = _cokernel_orders(np.hstack([relations, torus_classes]), p, k)
    h2_ab = _image_orders(relations, torus_classes, p, k) if torus_classes.shape[1] else []
    return h2, h2_ab, sk1


def _check_budget(group: Group, cells: int) -> None:
    if group.order > settings.cap(settings.homology_order_bound):
        msg = f"group order {group.order} exceeds the homology bound {settings.homology_order_bound}"
        raise BudgetExceededError(msg)
    if cells > settings.cap(settings.homology_cell_budget):
        msg = f"homology linear system has {cells} cells, over budget"
        raise BudgetExceededError(msg)


@lru_cache(maxsize=64)
def homology_data(group: Group) -> HomologyData:
    """
    H2, H2ab and their quotient for a finite group.

    Raises:
        BudgetExceededError: If the group or its Cayley complex is too large
        ConsistencyError: If the subgroup and quotient orders do not match
    """
    _check_budget(group, 0)
    complex_ = CayleyComplex.of(group)
    _check_budget(group, complex_.edge_count * complex_.cell_count + complex_.cell_count**2)
    h2: list[int] = []
    h2_ab: list[int] = []
    sk1: list[int] = []
    for p in sympy.primefactors(group.order):
        a, b, c = _homology_at_prime(complex_, int(p))
        h2, h2_ab, sk1 = h2 + a, h2_ab + b, sk1 + c
    data = HomologyData(
        AbelianInvariants.from_cyclic_orders(h2),
        AbelianInvariants.from_cyclic_orders(h2_ab),
        AbelianInvariants.from_cyclic_orders(sk1),
    )
    if data.h2_ab.order * data.sk1.order != data.h2.order or not data.h2_ab.embeds_in(data.h2):
        msg = f"H2ab {data.h2_ab} and SK1 {data.sk1} do not fit in H2 {data.h2}"
        raise ConsistencyError(msg)
    logger.info("homology", group=group.name, h2=str(data.h2), h2_ab=str(data.h2_ab), sk1=str(data.sk1))
    return data


def schur_multiplier(group: Group) -> AbelianInvariants:
    return homology_data(group).h2


def h2_ab_part(group: Group) -> AbelianInvariants:
    return homology_data(group).h2_ab


def sk1_pgroup(group: Group, p: int) -> AbelianInvariants:
    """
    SK1(Z_p[G]) = H2(G)/H2ab(G) for a p-group G.

    Raises:
        NotAPGroupError: If G is not a p-group
        BudgetExceededError: If G is too large for the homology computation
    """
    if not group.is_p_group(p):
        msg = f"{group.name} is not a {p}-group; use k-conjugacy bookkeeping instead"
        raise NotAPGroupError(msg)
    return homology_data(group).sk1


def _cocycle_system(group: Group, symmetric: bool) -> IntMatrix:
    n = group.order
    t = group.table
    ys, zs = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    ys, zs = ys.ravel(), zs.ravel()
    blocks = []
    for x in group.generating_set:
        rows = np.arange(n * n)
        block = np.zeros((n * n, n * n), dtype=np.int64)
        np.add.at(block, (rows, ys * n + zs), 1)
        np.add.at(block, (rows, t[x, ys] * n + zs), -1)
        np.add.at(block, (rows, x * n + t[ys, zs]), 1)
        np.add.at(block, (rows, x * n + ys), -1)
        blocks.append(block)
    if symmetric:
        pairs = [(a, b) for a in range(n) for b in range(a + 1, n) if t[a, b] == t[b, a]]
        sym = np.zeros((len(pairs), n * n), dtype=np.int64)
        for i, (a, b) in enumerate(pairs):
            sym[i, a * n + b] += 1
            sym[i, b * n + a] -= 1
        blocks.append(sym)
    return np.vstack(blocks)


def _cocycle_invariants(group: Group, p: int, *, symmetric: bool) -> list[int]:
    n = group.order
    k = sympy.multiplicity(p, n)
    if k == 0:
        return []
    rows = len(group.generating_set) * n * n
    _check_budget(group, rows * n * n)
    system = _cocycle_system(group, symmetric)
    vals = local_smith_form(system, p, k).valuations
    vals = vals + [k] * (n * n - len(vals))
    # s_j = log_p |Hom(H2, Z/p^j)| from |Z^2(G, Z/p^j)| = p^(s_j + j|G|)
    s = [sum(min(v, j) for v in vals) - j * n for j in range(k + 1)]
    at_least = [s[j] - s[j - 1] for j in range(1, k + 1)]
    return list(AbelianInvariants.from_prime_counts({p: at_least}).divisors)


def schur_multiplier_by_cocycles(group: Group) -> AbelianInvariants:
    """H2(G) from the sizes of the 2-cocycle modules Z^2(G, Z/p^j)."""
    orders: list[int] = []
    for p in sympy.primefactors(group.order):
        orders += _cocycle_invariants(group, int(p), symmetric=False)
    return AbelianInvariants.from_cyclic_orders(orders)


def sk1_by_cocycles(group: Group, p: int) -> AbelianInvariants:
    """
    H2(G)/H2ab(G) from cocycles symmetric on commuting pairs.

    Raises:
        NotAPGroupError: If G is not a p-group
    """
    if not group.is_p_group(p):
        msg = f"{group.name} is not a {p}-group"
        raise NotAPGroupError(msg)
    return AbelianInvariants.from_cyclic_orders(_cocycle_invariants(group, p, symmetric=True))
