"""
Named groups.

Every entry is a finite presentation enumerated on demand, so the same
coset-enumeration path serves the catalog and user presentation files.
Recognized names:

    C1, C<n>                 cyclic groups
    D<n>                     dihedral group of order 2n (D4 has order 8)
    Q<2^k>                   generalized quaternion group, k >= 3
    S3, S4, A4, Heis3        small nonabelian groups
    SD16, M16, C4sC4         nonabelian groups of order 16
    Bog128                   class 2 group of order 128 with SK1(Z_2[G]) != 1
    X1xX2x...                direct products of recognized factors

Example:
    ```python
    g = load_group("C2xQ8")
    assert g.order == 16
    ```
"""

import re
from functools import lru_cache
from itertools import product
from pathlib import Path

import structlog
import sympy
from sympy.utilities.iterables import partitions

from padic_k1.exceptions import CompositePError, NotAGroupError, UnknownGroupError
from padic_k1.groups.group import Group
from padic_k1.groups.presentation import (
    Presentation,
    group_from_presentation,
    load_presentation,
    parse_presentation,
)

logger = structlog.get_logger(__name__)

_FIXED: dict[str, str] = {
    "S3": "gens 2\na^3\nb^2\nb a b^-1 a",
    "S4": "gens 2\na^4\nb^2\n(a b)^3",
    "A4": "gens 2\na^3\nb^2\n(a b)^3",
    "Heis3": "gens 3\na^3\nb^3\nc^3\nc^-1 a^-1 b^-1 a b\na c a^-1 c^-1\nb c b^-1 c^-1",
    "SD16": "gens 2\na^8\nb^2\nb a b^-1 a^-3",
    "M16": "gens 2\na^8\nb^2\nb a b^-1 a^-5",
    "C4sC4": "gens 2\na^4\nb^4\nb a b^-1 a",
    # class 2, [x, y] = [a, b]; the order 256 cover without that relator has
    # [a, b][x, y] central in its derived subgroup but not a commutator
    "Bog128": "\n".join(
        [
            "gens 4 a b x y",
            "a^2", "b^2", "x^2", "y^2",
            "a x a^-1 x^-1",
            "a y a^-1 y^-1",
            "x y x^-1 y^-1 b a b^-1 a^-1",
            *(f"a b a^-1 b^-1 {g} b a b^-1 a^-1 {g}^-1" for g in "abxy"),
            *(f"b x b^-1 x^-1 {g} x b x^-1 b^-1 {g}^-1" for g in "abxy"),
            *(f"b y b^-1 y^-1 {g} y b y^-1 b^-1 {g}^-1" for g in "abxy"),
        ]
    ),  # fmt: skip
}

_CYCLIC = re.compile(r"C(\d+)")
_DIHEDRAL = re.compile(r"D(\d+)")
_QUATERNION = re.compile(r"Q(\d+)")


def _expand_powers(text: str) -> str:
    """Rewrite "(w)^e" relator lines into repeated words."""
    def repeat(match: re.Match[str]) -> str:
        return " ".join([match.group(1)] * int(match.group(2)))

    return re.sub(r"\(([^()]*)\)\^(\d+)", repeat, text)


def _factor_presentation(name: str) -> Presentation:
    if name in _FIXED:
        return parse_presentation(_expand_powers(_FIXED[name]))
    if match := _CYCLIC.fullmatch(name):
        n = int(match.group(1))
        if n < 1:
            msg = f"cyclic group order must be positive, got {name}"
            raise UnknownGroupError(msg)
        return Presentation(("a",), ((1,) * n,))
    if match := _DIHEDRAL.fullmatch(name):
        n = int(match.group(1))
        if n < 2:
            msg = f"dihedral group D{n} is not in the catalog"
            raise UnknownGroupError(msg)
        return parse_presentation(f"gens 2\na^{n}\nb^2\nb a b^-1 a")
    if match := _QUATERNION.fullmatch(name):
        order = int(match.group(1))
        k = order.bit_length() - 1
        if order != 1 << k or k < 3:
            msg = f"generalized quaternion order must be a power of 2 >= 8, got {name}"
            raise UnknownGroupError(msg)
        half = order // 4
        return parse_presentation(f"gens 2\na^{2 * half}\na^{half} b^-2\nb a b^-1 a")
    msg = f"unknown group {name!r}"
    raise UnknownGroupError(msg)


def direct_product_presentation(factors: list[Presentation]) -> Presentation:
    """Concatenate generators, shift relators and add cross commutators."""
    generators: list[str] = []
    relators: list[tuple[int, ...]] = []
    blocks: list[range] = []
    for factor in factors:
        offset = len(generators)
        blocks.append(range(offset + 1, offset + factor.generator_count + 1))
        generators += [chr(ord("a") + offset + i) for i in range(factor.generator_count)]
        relators += [
            tuple(s + offset if s > 0 else s - offset for s in r) for r in factor.relators
        ]
    for i, first in enumerate(blocks):
        for second in blocks[i + 1 :]:
            relators += [(x, y, -x, -y) for x, y in product(first, second)]
    return Presentation(tuple(generators), tuple(relators))


def catalog_presentation(name: str) -> Presentation:
    """
    Raises:
        UnknownGroupError: If some factor of the name is not recognized
    """
    factors = name.split("x")
    if not all(factors):
        msg = f"malformed group name {name!r}"
        raise UnknownGroupError(msg)
    if len(factors) == 1:
        return _factor_presentation(name)
    return direct_product_presentation([_factor_presentation(f) for f in factors])


def verify_conjugacy(group: Group) -> None:
    """
    Check the class data against brute-force conjugation.

    Raises:
        NotAGroupError: If a class is not closed or sizes do not add up
    """
    class_of = group.classes.class_of
    for g in range(group.order):
        for x in range(group.order):
            if class_of[group.conjugate(g, x)] != class_of[g]:
                msg = f"class of {group.labels[g]} is not closed under conjugation"
                raise NotAGroupError(msg)
    if sum(group.classes.sizes) != group.order:
        msg = "class sizes do not sum to the group order"
        raise NotAGroupError(msg)


@lru_cache(maxsize=128)
def load_group(name: str) -> Group:
    """
    Enumerate and verify a catalog group.

    Raises:
        UnknownGroupError: If the name is not recognized
        EnumerationBudgetExceededError: If the presentation is too large
    """
    group = group_from_presentation(catalog_presentation(name), name=name)
    verify_conjugacy(group)
    logger.info("group_loaded", group=name, order=group.order, classes=len(group.classes))
    return group


def load_group_file(path: Path) -> Group:
    group = group_from_presentation(load_presentation(path), name=path.stem)
    verify_conjugacy(group)
    return group


def resolve_group(spec: str) -> Group:
    """A catalog name, or a presentation file when the path exists."""
    path = Path(spec)
    if path.suffix and path.is_file():
        return load_group_file(path)
    return load_group(spec)


CATALOG_NAMES: tuple[str, ...] = (
    "C1", "C2", "C3", "C4", "C5", "C7", "C8", "C9", "C16",
    "C2xC2", "C3xC3", "C2xC4", "C2xC2xC2", "C4xC4", "C3xC9",
    "S3", "A4", "S4", "D4", "Q8", "Heis3",
    "D8", "Q16", "SD16", "M16", "C4sC4", "C2xD4", "C2xQ8", "Bog128",
)  # fmt: skip


def abelian_p_group_names(p: int, max_order: int) -> list[str]:
    """Every abelian p-group of order at most max_order, as a product name."""
    if not sympy.isprime(p):
        msg = f"{p} is not prime"
        raise CompositePError(msg)
    names = []
    n = 1
    while p**n <= max_order:
        for partition in partitions(n):
            parts = sorted(k for k, mult in partition.items() for _ in range(mult))
            names.append("x".join(f"C{p**e}" for e in parts))
        n += 1
    return names


def catalog_p_groups(p: int, max_order: int) -> list[str]:
    """
    Nontrivial p-groups of order at most max_order: the catalog entries first,
    then every abelian p-group the catalog does not list.
    """
    out = []
    for name in CATALOG_NAMES:
        group = load_group(name)
        if 1 < group.order <= max_order and group.is_p_group(p):
            out.append(name)
    out += [name for name in abelian_p_group_names(p, max_order) if name not in out]
    return out
