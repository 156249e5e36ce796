import numpy as np
import pytest

from padic_k1.coeff import UnramifiedRing, make_extension, unramified_ring
from padic_k1.exceptions import BudgetExceededError, NotAPGroupError, NotAUnitError, PrecisionExhaustedError
from padic_k1.groupring import (
    ClassFunctionElement,
    FiniteGroupRing,
    GroupRingElement,
    GroupRingMatrix,
    UnitKind,
    i_star,
    sample_unit,
    transfer_matrix,
)
from padic_k1.groups import AbelianInvariants, Group, load_group


def _generator(group: Group) -> int:
    return next(iter(group.generators.values()))


def test_unit_and_inverse(z3: UnramifiedRing, c2: Group) -> None:
    one = GroupRingElement.one(z3, c2)
    g = GroupRingElement.basis(z3, c2, _generator(c2))
    u = one + 3 * g
    assert u.is_unit()
    assert u.aug() == 4
    assert u * u.inverse() == 1
    assert u**-1 == u.inverse()


def test_zero_divisor_is_not_a_unit(z3: UnramifiedRing, c2: Group) -> None:
    # (1 + g)(1 - g) = 0 and 2 is a unit mod 3
    x = GroupRingElement.one(z3, c2) + GroupRingElement.basis(z3, c2, _generator(c2))
    assert x.aug().is_unit()
    assert not x.is_unit()
    with pytest.raises(NotAUnitError):
        x.inverse()


def test_class_projection(z3: UnramifiedRing, q8: Group) -> None:
    x = GroupRingElement.zero(z3, q8)
    for g in range(q8.order):
        x = x + GroupRingElement.basis(z3, q8, g, g + 1)
    projected = x.classproj()
    for c, members in enumerate(q8.classes.classes):
        assert projected.coefficient(c) == sum(g + 1 for g in members)


@pytest.mark.parametrize("kind", list(UnitKind))
def test_sampled_units(kind: UnitKind) -> None:
    ring = unramified_ring(make_extension(2, 1), 4)
    group = load_group("D4")
    u = sample_unit(ring, group, kind, seed=7)
    assert u.is_unit()
    assert u == sample_unit(ring, group, kind, seed=7)


def test_ideal_samples_need_a_p_group(z3: UnramifiedRing) -> None:
    with pytest.raises(NotAPGroupError):
        sample_unit(z3, load_group("C2"), UnitKind.ONE_PLUS_I, seed=0)


def test_inclusion_then_transfer(z3: UnramifiedRing, w9: UnramifiedRing, c3: Group) -> None:
    u = sample_unit(z3, c3, UnitKind.ONE_PLUS_I, seed=3)
    lifted = i_star(u, w9)
    assert lifted.ring.n == 2
    assert lifted.aug().coeffs == (u.aug().coeffs[0], 0)
    m = transfer_matrix(lifted, z3)
    assert m.size == 2
    # multiplication by an element of O_R[G] is diagonal over O_R[G]
    assert m.entry(0, 0) == u
    assert m.entry(1, 1) == u
    assert m.entry(0, 1) == 0


@pytest.mark.parametrize(
    ("p", "group", "units", "k1"),
    [(2, "C2", 2, (2,)), (3, "C3", 18, (3, 6)), (2, "C2xC2", 8, (2, 2, 2))],
)
def test_finite_unit_groups(p: int, group: str, units: int, k1: tuple[int, ...]) -> None:
    kappa = FiniteGroupRing(unramified_ring(make_extension(p, 1), 1), load_group(group), 1 << 12)
    assert len(kappa.units) == units
    one = np.array([kappa.one], dtype=np.int64)
    assert kappa.quotient_invariants(one) == AbelianInvariants(k1)
    assert np.all(kappa.multiply(kappa.units, kappa.inverses) == kappa.one)


def test_residue_units_of_unramified_quotient() -> None:
    ring = unramified_ring(make_extension(3, 2), 2)
    finite = FiniteGroupRing(ring, load_group("C1"), 1 << 12)
    assert finite.size == 81
    assert len(finite.units) == 72


def test_finite_ring_respects_its_bound() -> None:
    kappa = FiniteGroupRing(unramified_ring(make_extension(3, 1), 2), load_group("C3"), 100)
    with pytest.raises(BudgetExceededError):
        _ = kappa.units


def test_closure_of_a_generator() -> None:
    kappa = FiniteGroupRing(unramified_ring(make_extension(3, 1), 1), load_group("C3"), 1 << 12)
    assert kappa.encode(kappa.element(0).coeffs) == 0
    minus_one = int(kappa.encode(-GroupRingElement.one(kappa.ring, kappa.group).coeffs))
    assert len(kappa.closure([minus_one])) == 2


def test_known_precision_is_clamped_and_never_invented(z3: UnramifiedRing, c3: Group) -> None:
    coeffs = np.zeros((3, 1), dtype=object)
    assert GroupRingElement(z3, c3, coeffs).known_precision == 3
    assert GroupRingElement(z3, c3, coeffs, 7).known_precision == 3
    assert GroupRingElement(z3, c3, coeffs, 2).known_precision == 2
    assert ClassFunctionElement(z3, c3, coeffs, 1).known_precision == 1
    for exhausted in (0, -1):
        with pytest.raises(PrecisionExhaustedError):
            GroupRingElement(z3, c3, coeffs, exhausted)
        with pytest.raises(PrecisionExhaustedError):
            ClassFunctionElement(z3, c3, coeffs, exhausted)
        with pytest.raises(PrecisionExhaustedError):
            GroupRingMatrix(z3, c3, np.zeros((1, 1, 3, 1), dtype=object), exhausted)
