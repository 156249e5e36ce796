import numpy as np
import pytest

from padic_k1.coeff import UnramifiedRing, make_extension, unramified_ring
from padic_k1.descent import GammaSolver, check_gamma_sequence, extend_scalars, gamma_basis, omega
from padic_k1.descent.preimage import image_exponent
from padic_k1.exceptions import ConsistencyError
from padic_k1.groupring import ClassFunctionElement
from padic_k1.groups import AbelianInvariants, Group, abelianization, central_order_p_element, load_group
from padic_k1.logdet import gamma_full
from padic_k1.schemas import DescentScenario, Status


@pytest.fixture
def heis3() -> Group:
    return load_group("Heis3")


def _point(ring: UnramifiedRing, group: Group, values: dict[int, int]) -> ClassFunctionElement:
    """The class function with the given integer values on the classes of the given elements."""
    coeffs = np.zeros((len(group.classes), ring.n), dtype=object)
    for g, v in values.items():
        coeffs[group.classes.class_of[g], 0] += v
    return ClassFunctionElement(ring, group, coeffs)


def _generator(group: Group) -> int:
    return next(iter(group.generators.values()))


def test_image_exponent() -> None:
    assert image_exponent(AbelianInvariants(), 4, 3, 3) == 12
    assert image_exponent(AbelianInvariants((3, 3)), 11, 2, 3) == 20
    assert image_exponent(AbelianInvariants((9,)), 9, 1, 3) == 8


def test_omega_reads_traces_into_the_abelianization(heis3: Group) -> None:
    ring = unramified_ring(make_extension(3, 2), 3)
    _, projection = abelianization(heis3)
    a = heis3.generators["a"]
    z = central_order_p_element(heis3, 3)
    assert z is not None
    quotient = projection.target
    assert omega(_point(ring, heis3, {z: 1}), projection) == quotient.identity
    # Tr(1) = 2 on W(F_9)
    assert omega(_point(ring, heis3, {a: 1}), projection) == quotient.power(projection(a), 2)
    assert omega(_point(ring, heis3, {a: 3}), projection) == quotient.identity


def test_basis_over_the_base_misses_the_abelianization(z3_wide: UnramifiedRing, c3: Group) -> None:
    basis = gamma_basis(z3_wide, c3, 2, seed=5)
    target = _point(z3_wide, c3, {_generator(c3): 1})
    with pytest.raises(ConsistencyError):
        basis.exponents(target)
    inside = _point(z3_wide, c3, {_generator(c3): 3, c3.identity: 1})
    assert gamma_full(basis.preimage(inside)).equal_to(inside, 2)


def test_obstructed_target_is_solved_one_step_up_the_tower(z3_wide: UnramifiedRing, c3: Group) -> None:
    solver = GammaSolver(z3_wide, c3, 2, seed=7)
    target = _point(z3_wide, c3, {_generator(c3): 1, c3.identity: 2})
    found = solver.preimage(target)
    assert found.degree_growth == 3
    assert found.unit.ring.n == 3
    assert found.target.equal_to(extend_scalars(target, found.unit.ring))
    assert gamma_full(found.unit).equal_to(found.target, 2)


def test_unobstructed_target_stays_in_the_base(z3_wide: UnramifiedRing, c3: Group) -> None:
    solver = GammaSolver(z3_wide, c3, 2, seed=7)
    found = solver.preimage(_point(z3_wide, c3, {_generator(c3): 6, c3.identity: 4}))
    assert found.degree_growth == 1
    assert found.unit.ring == z3_wide
    assert gamma_full(found.unit).equal_to(found.target, 2)


def test_extension_degree_on_the_heisenberg_group(z3: UnramifiedRing, heis3: Group) -> None:
    solver = GammaSolver(z3, heis3, 1, seed=3)
    z = central_order_p_element(heis3, 3)
    assert z is not None
    assert solver.extension_degree(_point(z3, heis3, {z: 1})) == 1
    assert solver.extension_degree(_point(z3, heis3, {heis3.generators["a"]: 1})) == 3


def test_heisenberg_preimage_of_a_commutator_target(z3: UnramifiedRing, heis3: Group) -> None:
    z = central_order_p_element(heis3, 3)
    assert z is not None
    solver = GammaSolver(z3, heis3, 1, seed=3)
    target = _point(z3, heis3, {z: 1, heis3.identity: 2})
    found = solver.preimage(target)
    assert found.degree_growth == 1
    assert gamma_full(found.unit).equal_to(target, 1)


@pytest.mark.parametrize(("group", "precision"), [("C1", 3), ("C3", 4)])
def test_gamma_sequence_passes(group: str, precision: int) -> None:
    scenario = DescentScenario(group=group, p=3, nR=1, nS=2, N=precision, seed=2, samples=3)
    report = check_gamma_sequence(scenario)
    assert report.status is Status.PASSED, report.witnesses
    assert report.precision_used == precision - 2


def test_gamma_sequence_skips_other_primes() -> None:
    report = check_gamma_sequence(DescentScenario(group="C2", p=3, N=4))
    assert report.status is Status.SKIPPED
