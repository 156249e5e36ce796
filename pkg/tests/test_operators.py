import numpy as np
import pytest

from padic_k1.coeff import UnramifiedRing, field_frobenius, make_extension
from padic_k1.exceptions import CompositePError, DomainError, NotAUnitError, NotCentralError
from padic_k1.groupring import (
    GroupRingElement,
    a_ideal_membership,
    classproj,
    in_augmentation_ideal,
    in_one_minus_z_ideal,
    phi_operator,
    psi_operator,
)
from padic_k1.groups import (
    AbelianInvariants,
    Group,
    central_order_p_element,
    h2_ab_part,
    k_conjugacy_bookkeeping,
    load_group,
    omega_set,
)
from padic_k1.logdet import (
    WhiteheadClass,
    character_table,
    det_character,
    det_hom,
    gr_exp,
    hom_frobenius,
    tr_eval,
)


def _generator(group: Group) -> int:
    return next(iter(group.generators.values()))


def _element_of_order(group: Group, order: int) -> int:
    return next(g for g in range(group.order) if group.element_orders[g] == order)


def test_field_frobenius_is_the_cube_map() -> None:
    x = make_extension(3, 2).generator
    assert field_frobenius(x) == x**3
    assert field_frobenius(field_frobenius(x)) == x


def test_exp_is_a_homomorphism_on_a_commutative_ring(z3: UnramifiedRing, c3: Group) -> None:
    a = 3 * GroupRingElement.basis(z3, c3, _generator(c3))
    assert gr_exp(a) * gr_exp(-a) == 1
    with pytest.raises(DomainError):
        gr_exp(GroupRingElement.basis(z3, c3, _generator(c3)))


def test_psi_and_phi_follow_the_power_map(z3: UnramifiedRing, c3: Group) -> None:
    g = GroupRingElement.basis(z3, c3, _generator(c3))
    one = GroupRingElement.one(z3, c3)
    assert psi_operator(g) == one
    assert phi_operator(classproj(g)) == classproj(one)


def test_ideals_of_the_quaternion_ring(z3: UnramifiedRing, q8: Group) -> None:
    z = central_order_p_element(q8, 2)
    assert z is not None
    assert z in q8.center
    assert z != q8.identity
    assert central_order_p_element(q8, 3) is None
    one = GroupRingElement.one(z3, q8)
    one_minus_z = one - GroupRingElement.basis(z3, q8, z)
    i = _element_of_order(q8, 4)
    assert a_ideal_membership(one_minus_z)
    assert in_augmentation_ideal(one_minus_z)
    assert not in_augmentation_ideal(one)
    assert not a_ideal_membership(one - GroupRingElement.basis(z3, q8, i))
    assert in_one_minus_z_ideal(one_minus_z, z)
    assert not in_one_minus_z_ideal(one, z)
    with pytest.raises(NotCentralError):
        in_one_minus_z_ideal(one, i)


def test_omega_set_of_the_quaternions(q8: Group) -> None:
    z = central_order_p_element(q8, 2)
    assert z is not None
    assert set(omega_set(q8, z)) == {g for g in range(8) if q8.element_orders[g] == 4}
    with pytest.raises(NotCentralError):
        omega_set(q8, _element_of_order(q8, 4))


def test_h2_ab_part() -> None:
    assert h2_ab_part(load_group("C2xC2")) == AbelianInvariants((2,))
    assert h2_ab_part(load_group("C3xC3")) == AbelianInvariants((3,))
    assert h2_ab_part(load_group("Q8")) == AbelianInvariants()


def test_k_conjugacy_of_s3_at_three() -> None:
    s3 = load_group("S3")
    classes = k_conjugacy_bookkeeping(s3, 3)
    assert len(classes) == 2
    transposition = next(c for c in classes if c.representative != s3.identity)
    assert transposition.galois_exponents == (1,)
    assert len(transposition.normalizer) == 2
    assert len(transposition.centralizer) == 2


@pytest.mark.parametrize(("degree", "count"), [(1, 2), (2, 3)])
def test_k_conjugacy_fuses_galois_conjugates(c3: Group, degree: int, count: int) -> None:
    classes = k_conjugacy_bookkeeping(c3, 2, degree)
    assert len(classes) == count
    for c in classes:
        assert len(c.normalizer) == 3
        assert len(c.centralizer) == 3


def test_k_conjugacy_needs_a_prime(c3: Group) -> None:
    with pytest.raises(CompositePError):
        k_conjugacy_bookkeeping(c3, 4)


def test_trace_of_degree_one_characters(z3: UnramifiedRing, c2: Group) -> None:
    u = GroupRingElement.one(z3, c2) + 3 * GroupRingElement.basis(z3, c2, _generator(c2))
    table = character_table(c2)
    assert int(np.asarray(tr_eval(u, table[0])).ravel()[0]) == 4
    assert int(np.asarray(tr_eval(u, table[1])).ravel()[0]) == 25


def test_det_of_the_quaternion_representation(q8: Group) -> None:
    chi = next(c for c in character_table(q8) if c.degree == 2)
    for g in (_element_of_order(q8, 4), central_order_p_element(q8, 2)):
        assert g is not None
        value = det_character(chi, g)
        assert value[0] == 1
        assert not any(value[1:])


def test_hom_frobenius_fixes_rational_values(z3: UnramifiedRing, c2: Group) -> None:
    u = GroupRingElement.one(z3, c2) + 3 * GroupRingElement.basis(z3, c2, _generator(c2))
    d = det_hom(u, character_table(c2))
    assert hom_frobenius(d).equal_to(d)


def test_whitehead_class_splits_off_the_teichmuller_part(z3: UnramifiedRing, c2: Group) -> None:
    g = GroupRingElement.basis(z3, c2, _generator(c2))
    u = (GroupRingElement.one(z3, c2) + 3 * g) * 2
    w = WhiteheadClass.of(u)
    assert w.normalized == -u
    assert w.normalized.aug().residue() == z3.field.one
    with pytest.raises(NotAUnitError):
        WhiteheadClass.of(GroupRingElement.one(z3, c2) + g)
