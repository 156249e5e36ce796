import numpy as np
import pytest

from padic_k1.coeff import UnramifiedRing, make_extension, unramified_ring
from padic_k1.descent.galois import tau
from padic_k1.exceptions import CompositePError, PrecisionExhaustedError
from padic_k1.groupring import (
    ClassFunctionElement,
    GroupRingElement,
    UnitKind,
    i_star,
    phi_operator,
    psi_operator,
    sample_unit,
    transfer_matrix,
)
from padic_k1.groups import Group, abelianization, load_group
from padic_k1.logdet import (
    HomElement,
    adams_on_characters,
    assertion_precision,
    character_table,
    commutation_check,
    det_eval,
    det_hom,
    det_hom_matrix,
    galois_permutation,
    gamma_full,
    hom_frobenius,
    torsion_units,
    value_ring,
)
from padic_k1.schemas import Status


def _first(value: np.ndarray) -> int:
    return int(np.asarray(value).ravel()[0])


@pytest.mark.parametrize(("name", "degrees"), [("C3", [1, 1, 1]), ("S3", [1, 1, 2]), ("Q8", [1, 1, 1, 1, 2])])
def test_character_degrees(name: str, degrees: list[int]) -> None:
    table = character_table(load_group(name))
    assert sorted(table.degrees) == degrees
    assert table[0].is_trivial()


def test_quaternion_character_on_the_center(q8: Group) -> None:
    table = character_table(q8)
    minus_one = next(z for z in q8.center if z != q8.identity)
    chi = next(c for c in table if c.degree == 2)
    value = chi.value(minus_one)
    assert value[0] == -2
    assert not any(value[1:])


def test_det_on_cyclic_group_of_order_two(z3: UnramifiedRing, c2: Group) -> None:
    g = next(iter(c2.generators.values()))
    u = GroupRingElement.one(z3, c2) + 3 * GroupRingElement.basis(z3, c2, g)
    table = character_table(c2)
    values = det_hom(u, table).values
    assert _first(values[0]) == 4
    assert _first(values[1]) == 27 - 2
    assert _first(det_eval(u, table[1])) == 25


def test_adams_operations_at_three(c2: Group, c3: Group) -> None:
    # psi^3 fixes every character of C2 and sends every character of C3 to the trivial one
    assert np.array_equal(adams_on_characters(c2, character_table(c2), 3).matrix, np.eye(2, dtype=np.int64))
    matrix = adams_on_characters(c3, character_table(c3), 3).matrix
    assert np.all(matrix[:, 0] == 1)
    assert not np.any(matrix[:, 1:])
    assert galois_permutation(character_table(c2), 3) == (0, 1)


def test_adams_needs_a_prime(c2: Group) -> None:
    with pytest.raises(CompositePError):
        adams_on_characters(c2, character_table(c2), 4)


def test_gamma_of_a_scalar(z3: UnramifiedRing, c3: Group) -> None:
    value = gamma_full(GroupRingElement.one(z3, c3) * 4)
    identity_class = c3.classes.class_of[c3.identity]
    for c in range(len(c3.classes)):
        assert value.coefficient(c) == (5 if c == identity_class else 0)


def test_gamma_is_multiplicative(z3: UnramifiedRing, c3: Group) -> None:
    u = sample_unit(z3, c3, UnitKind.ONE_PLUS_I, seed=1)
    v = sample_unit(z3, c3, UnitKind.ONE_PLUS_PR, seed=2)
    assert gamma_full(u * v).equal_to(gamma_full(u) + gamma_full(v), 1)


def test_commutation_on_cyclic_group(z3: UnramifiedRing, c3: Group) -> None:
    for seed, kind in enumerate([UnitKind.ONE_PLUS_I, UnitKind.ONE_PLUS_PR]):
        report = commutation_check(sample_unit(z3, c3, kind, seed=seed))
        assert report.status is Status.PASSED, report.witnesses
        assert report.precision_used == 1


def test_commutation_skips_without_digits(z3: UnramifiedRing, c3: Group) -> None:
    report = commutation_check(sample_unit(z3, c3, UnitKind.ONE_PLUS_I, seed=0), precision=0)
    assert report.status is Status.SKIPPED
    assert report.reason


def test_det_of_transfer_is_a_power(z3: UnramifiedRing, w9: UnramifiedRing, c3: Group) -> None:
    u = sample_unit(z3, c3, UnitKind.ONE_PLUS_I, seed=5)
    table = character_table(c3)
    left = det_hom_matrix(transfer_matrix(i_star(u, w9), z3), table)
    d = det_hom(u, table)
    assert left.equal_to(d * d)


_KINDS = (UnitKind.ONE_PLUS_I, UnitKind.ONE_PLUS_PR, UnitKind.TEICHMULLER_TIMES_GROUP, UnitKind.ONE_PLUS_A)


@pytest.fixture
def z3_n4() -> UnramifiedRing:
    return unramified_ring(make_extension(3, 1), 4)


@pytest.mark.parametrize(
    "name", ["C1", "C3", "C9", "S3", "A4", "S4", "D4", "Q8", "Heis3", "C3xC3", "C2xQ8", "SD16"]
)
def test_one_character_per_class(name: str) -> None:
    group = load_group(name)
    table = character_table(group)
    assert len(table) == len(group.classes)
    assert sum(d * d for d in table.degrees) == group.order


@pytest.mark.parametrize("name", ["C3", "C9", "C3xC3", pytest.param("Heis3", marks=pytest.mark.slow)])
def test_gamma_is_a_homomorphism_on_sampled_pairs(z3_n4: UnramifiedRing, name: str) -> None:
    group = load_group(name)
    digits = assertion_precision(z3_n4.precision, 3)
    for i in range(50):
        u = sample_unit(z3_n4, group, _KINDS[i % 3], seed=2 * i)
        v = sample_unit(z3_n4, group, _KINDS[(i + 1) % 3], seed=2 * i + 1)
        assert gamma_full(u * v).equal_to(gamma_full(u) + gamma_full(v), digits), i


@pytest.mark.parametrize("name", ["C3", "C9", "C3xC3", pytest.param("Heis3", marks=pytest.mark.slow)])
def test_gamma_vanishes_on_torsion_units(name: str) -> None:
    group = load_group(name)
    ring = unramified_ring(make_extension(3, 2), 4)
    zero = ClassFunctionElement.zero(ring, group)
    digits = assertion_precision(ring.precision, 3)
    units = torsion_units(ring, group)
    assert len(units) == 8 * abelianization(group)[0].order
    for label, t in units:
        assert gamma_full(t).equal_to(zero, digits), label


@pytest.mark.parametrize("name", ["C3", "C4", "Q8", "S3"])
def test_det_is_galois_equivariant(w9: UnramifiedRing, name: str) -> None:
    group = load_group(name)
    table = character_table(group)
    for seed in range(4):
        u = sample_unit(w9, group, _KINDS[1 + seed % 2], seed)
        assert det_hom(tau(u, 1), table).equal_to(hom_frobenius(det_hom(u, table)))


@pytest.mark.parametrize(("name", "degree"), [("Heis3", 1), ("C9", 2), ("C3xC3", 2)])
def test_class_projection_intertwines_psi_and_phi(name: str, degree: int) -> None:
    group = load_group(name)
    ring = unramified_ring(make_extension(3, degree), 3)
    rng = np.random.default_rng(degree)
    for _ in range(50):
        x = GroupRingElement(ring, group, rng.integers(0, ring.modulus, size=(group.order, ring.n)).astype(object))
        assert psi_operator(x).classproj().equal_to(phi_operator(x.classproj()))


@pytest.mark.parametrize(
    ("name", "samples"),
    [
        ("C3", 4),
        ("C9", 4),
        ("C3xC3", 4),
        *(pytest.param(name, 50, marks=pytest.mark.slow) for name in ("C3", "C9", "C3xC3", "Heis3")),
    ],
)
def test_trace_of_gamma_is_gamma_of_det(z3_n4: UnramifiedRing, name: str, samples: int) -> None:
    group = load_group(name)
    for i in range(samples):
        report = commutation_check(sample_unit(z3_n4, group, _KINDS[i % len(_KINDS)], seed=i))
        assert report.status is Status.PASSED, report.witnesses
        assert report.precision_used == 2


def test_hom_element_rejects_exhausted_precision(z3: UnramifiedRing, c3: Group) -> None:
    table = character_table(c3)
    lam = value_ring(GroupRingElement.one(z3, c3))
    values = np.zeros((len(table), *lam.shape), dtype=object)
    assert HomElement(lam, table, values, True).known_precision == 3
    assert HomElement(lam, table, values, True, 9).known_precision == 3
    with pytest.raises(PrecisionExhaustedError):
        HomElement(lam, table, values, True, 0)
