from pathlib import Path

import pytest

from padic_k1.exceptions import (
    BadPresentationError,
    CompositePError,
    EnumerationBudgetExceededError,
    NotAGroupError,
    NotAPGroupError,
    UnknownGroupError,
)
from padic_k1.groups import (
    AbelianInvariants,
    Group,
    abelianization,
    conjugacy_classes,
    group_from_presentation,
    group_from_table,
    homology_data,
    load_group,
    p_regular_classes,
    parse_presentation,
    resolve_group,
    schur_multiplier,
    sk1_pgroup,
)
from padic_k1.groups.catalog import abelian_p_group_names, catalog_p_groups
from padic_k1.groups.homology import schur_multiplier_by_cocycles, sk1_by_cocycles
from padic_k1.settings import settings


@pytest.mark.parametrize(
    ("name", "order", "classes"),
    [("C1", 1, 1), ("S3", 6, 3), ("D4", 8, 5), ("Q8", 8, 5), ("A4", 12, 4), ("Heis3", 27, 11), ("C2xQ8", 16, 10)],
)
def test_catalog_orders_and_classes(name: str, order: int, classes: int) -> None:
    group = load_group(name)
    assert group.order == order
    assert len(group.classes) == classes
    assert sum(group.classes.sizes) == order


def test_unknown_group() -> None:
    with pytest.raises(UnknownGroupError):
        load_group("Z7")


def test_table_must_be_latin_square() -> None:
    with pytest.raises(NotAGroupError):
        group_from_table([[0, 1], [0, 1]])


def test_abelianization(q8: Group) -> None:
    invariants, projection = abelianization(q8)
    assert invariants == AbelianInvariants((2, 2))
    assert projection(q8.identity) == projection(q8.center[-1])
    assert abelianization(load_group("S3"))[0] == AbelianInvariants((2,))


def test_p_regular_classes() -> None:
    s3 = load_group("S3")
    assert len(p_regular_classes(s3, 3)) == 2
    assert len(p_regular_classes(s3, 2)) == 2
    assert len(p_regular_classes(load_group("C9"), 3)) == 1


def test_catalog_p_groups() -> None:
    names = catalog_p_groups(3, 27)
    assert {"C3", "C9", "C3xC3", "Heis3", "C3xC9"} <= set(names)
    assert "C2" not in names
    assert "S3" not in names
    assert {"C27", "C3xC3xC3"} <= set(names)
    assert set(abelian_p_group_names(2, 8)) == {"C2", "C4", "C2xC2", "C8", "C2xC4", "C2xC2xC2"}
    with pytest.raises(CompositePError):
        abelian_p_group_names(4, 16)


def test_abelian_invariants_normal_form() -> None:
    a = AbelianInvariants.from_cyclic_orders([2, 3, 4])
    assert a.divisors == (2, 12)
    assert a.order == 24
    assert a.torsion(2) == AbelianInvariants((2, 2))
    assert a.modulo(4) == AbelianInvariants((2, 4))
    assert str(AbelianInvariants()) == "1"
    with pytest.raises(ValueError, match="divisibility"):
        AbelianInvariants((4, 6))


def test_exterior_square() -> None:
    assert AbelianInvariants((2, 2, 2)).exterior_square() == AbelianInvariants((2, 2, 2))
    assert AbelianInvariants((9,)).exterior_square().is_trivial()


@pytest.mark.parametrize(
    ("name", "h2"),
    [("C4", ()), ("C2xC2", (2,)), ("Q8", ()), ("D4", (2,)), ("C3xC3", (3,)), ("C2xC2xC2", (2, 2, 2))],
)
def test_schur_multiplier(name: str, h2: tuple[int, ...]) -> None:
    group = load_group(name)
    data = homology_data(group)
    assert data.h2 == AbelianInvariants(h2)
    assert schur_multiplier(group) == data.h2
    assert schur_multiplier_by_cocycles(group) == data.h2


@pytest.mark.parametrize(("name", "p"), [("C2xC2", 2), ("D4", 2), ("Q8", 2), ("C3xC3", 3)])
def test_sk1_of_small_p_groups_is_trivial(name: str, p: int) -> None:
    group = load_group(name)
    assert sk1_pgroup(group, p).is_trivial()
    assert sk1_by_cocycles(group, p).is_trivial()
    assert homology_data(group).h2_ab == homology_data(group).h2


def test_sk1_needs_a_p_group() -> None:
    with pytest.raises(NotAPGroupError):
        sk1_pgroup(load_group("S3"), 3)


@pytest.mark.parametrize(
    ("p", "max_order"),
    [(2, 16), (3, 9), pytest.param(3, 27, marks=pytest.mark.slow), pytest.param(2, 32, marks=pytest.mark.slow)],
)
def test_homology_matches_the_cocycle_count(p: int, max_order: int) -> None:
    for name in catalog_p_groups(p, max_order):
        group = load_group(name)
        data = homology_data(group)
        assert schur_multiplier_by_cocycles(group) == data.h2, name
        assert sk1_by_cocycles(group, p) == data.sk1, name


@pytest.mark.parametrize(("p", "max_order"), [(2, 32), (3, 27), (5, 25)])
def test_abelian_homology_is_the_exterior_square(p: int, max_order: int) -> None:
    for name in abelian_p_group_names(p, max_order):
        group = load_group(name)
        invariants, _ = abelianization(group)
        data = homology_data(group)
        assert data.h2 == invariants.exterior_square() == data.h2_ab, name
        assert sk1_pgroup(group, p).is_trivial(), name


# Bog128 with [x, y] and [a, b] left independent
_BOG128_COVER = "\n".join(
    [
        "gens 4 a b x y",
        "a^2", "b^2", "x^2", "y^2",
        "a x a^-1 x^-1",
        "a y a^-1 y^-1",
        *(
            f"{c} {g} {c_inv} {g}^-1"
            for c, c_inv in (
                ("a b a^-1 b^-1", "b a b^-1 a^-1"),
                ("b x b^-1 x^-1", "x b x^-1 b^-1"),
                ("b y b^-1 y^-1", "y b y^-1 b^-1"),
                ("x y x^-1 y^-1", "y x y^-1 x^-1"),
            )
            for g in "abxy"
        ),
    ]
)  # fmt: skip


def test_bog128_is_a_central_quotient_by_a_non_commutator() -> None:
    cover = group_from_presentation(parse_presentation(_BOG128_COVER), bound=200_000, name="cover")
    assert cover.order == 256
    gens = cover.generators
    z = cover.mul(cover.commutator(gens["a"], gens["b"]), cover.commutator(gens["x"], gens["y"]))
    assert z != cover.identity
    assert z in cover.center
    assert z in cover.derived_subgroup
    assert z not in {cover.commutator(g, h) for g in range(cover.order) for h in range(cover.order)}
    quotient, _ = cover.quotient((cover.identity, z), name="Bog128")
    group = load_group("Bog128")
    assert quotient.order == group.order == 128
    assert abelianization(group)[0] == AbelianInvariants((2, 2, 2, 2))


@pytest.mark.slow
def test_sk1_of_bog128_is_nontrivial(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setattr(settings, "budget", 2)
    group = load_group("Bog128")
    data = homology_data(group)
    sk1 = sk1_pgroup(group, 2)
    assert not sk1.is_trivial()
    assert sk1 == data.sk1
    assert data.h2_ab.order * sk1.order == data.h2.order


DIHEDRAL = """
# dihedral group of order 8
gens 2 r s
r^4
s^2
s r s^-1 r
"""


def test_presentation_file(tmp_path: Path) -> None:
    path = tmp_path / "dihedral.txt"
    path.write_text(DIHEDRAL, encoding="utf-8")
    group = resolve_group(str(path))
    assert group.name == "dihedral"
    assert group.order == 8
    assert len(group.classes) == 5
    assert set(group.generators) == {"r", "s"}


@pytest.mark.parametrize("text", ["", "generators 2\na^2", "gens 2 a\na^2", "gens 1\nb^2"])
def test_bad_presentations(text: str) -> None:
    with pytest.raises(BadPresentationError):
        parse_presentation(text)


def test_coset_enumeration_budget() -> None:
    with pytest.raises(EnumerationBudgetExceededError):
        group_from_presentation(parse_presentation("gens 1\na^100"), bound=10)


def test_class_sizes_of_s3() -> None:
    data = conjugacy_classes(load_group("S3"))
    assert sorted(data.sizes) == [1, 2, 3]
    assert all(data.class_of[rep] == i for i, rep in enumerate(data.representatives))
