import itertools

import numpy as np
import pytest
import sympy

from padic_k1.coeff import (
    RingElement,
    UnramifiedRing,
    cyclotomic_extend,
    make_extension,
    ring_embedding,
    ring_frobenius,
    scalar_exp,
    scalar_log,
    solve_artin_schreier,
    solve_one_minus_frobenius,
    teichmuller,
    unramified_ring,
)
from padic_k1.exceptions import DomainError, NotAUnitError
from padic_k1.logdet import assertion_precision, gamma_R


def test_log_of_four(z3_wide: UnramifiedRing) -> None:
    assert scalar_log(z3_wide.from_int(4)) == 48


def test_gamma_of_four(z3: UnramifiedRing) -> None:
    assert gamma_R(z3.from_int(4)) == 5
    assert gamma_R(z3.from_int(4)).known_precision == 2


def test_log_needs_principal_unit(z3: UnramifiedRing) -> None:
    with pytest.raises(DomainError):
        scalar_log(z3.from_int(2))


def test_inverse(w9: UnramifiedRing) -> None:
    x = w9.element([2, 4])
    assert x * x.inverse() == 1
    with pytest.raises(NotAUnitError):
        w9.from_int(3).inverse()


def test_teichmuller_roots_of_unity(w9: UnramifiedRing) -> None:
    for a in w9.field.elements():
        if a.is_zero():
            continue
        omega = teichmuller(a, w9.precision)
        assert omega.residue() == a
        assert omega**8 == 1


def test_frobenius_has_order_n(w9: UnramifiedRing) -> None:
    x = w9.element([5, 7])
    assert ring_frobenius(x) != x
    assert ring_frobenius(ring_frobenius(x)) == x
    assert ring_frobenius(x, 2) == x


def test_one_minus_frobenius_is_onto(w9: UnramifiedRing) -> None:
    value = w9.element([1, 2])
    s = solve_one_minus_frobenius(value)
    target = value if s.ring == w9 else ring_embedding(w9, s.ring)(value)
    assert s - ring_frobenius(s) == target


def test_field_sizes() -> None:
    assert make_extension(3, 2).order == 9
    assert make_extension(2, 3).order == 8


@pytest.mark.parametrize(("precision", "p", "expected"), [(3, 3, 1), (8, 2, 4), (5, 5, 3), (4, 3, 2)])
def test_assertion_precision(precision: int, p: int, expected: int) -> None:
    assert assertion_precision(precision, p) == expected


def _random_element(ring: UnramifiedRing, rng: np.random.Generator) -> RingElement:
    return ring.element([int(c) for c in rng.integers(0, ring.modulus, size=ring.n)])


@pytest.mark.parametrize(
    ("p", "n", "precision"), list(itertools.product((3, 5), (1, 2, 4), (2, 3, 4)))
)
def test_one_minus_frobenius_on_its_image(p: int, n: int, precision: int) -> None:
    ring = unramified_ring(make_extension(p, n), precision)
    rng = np.random.default_rng(100 * p + 10 * n + precision)
    for _ in range(100):
        s = _random_element(ring, rng)
        value = s - ring_frobenius(s)
        found = solve_one_minus_frobenius(value)
        assert found.ring == ring
        assert found - ring_frobenius(found) == value
        # solutions differ by a constant of Z/p^N
        difference = found - s
        assert ring_frobenius(difference) == difference


def test_kernel_of_one_minus_frobenius_is_the_prime_ring() -> None:
    ring = unramified_ring(make_extension(3, 2), 2)
    elements = [ring.element([a, b]) for a, b in itertools.product(range(9), repeat=2)]
    fixed = [x for x in elements if x == ring_frobenius(x)]
    assert len(fixed) == 9
    assert all(x.coeffs[1] == 0 for x in fixed)


def test_one_minus_frobenius_climbs_the_tower_for_a_trace_one_target() -> None:
    ring = unramified_ring(make_extension(3, 1), 2)
    found = solve_one_minus_frobenius(ring.one)
    # Tr(1) = m must vanish mod 9
    assert found.ring.n == 9
    assert found - ring_frobenius(found) == ring_embedding(ring, found.ring)(ring.one)


@pytest.mark.parametrize(("p", "n"), [(2, 3), (3, 1), (3, 2), (3, 4), (5, 2)])
def test_frobenius_lifts_the_p_power_map(p: int, n: int) -> None:
    ring = unramified_ring(make_extension(p, n), 3)
    rng = np.random.default_rng(n)
    for _ in range(20):
        x = _random_element(ring, rng)
        assert (ring_frobenius(x) - x**p).valuation() >= 1


@pytest.mark.parametrize(("p", "n"), [(3, 1), (3, 2), (5, 2)])
def test_log_and_exp_are_inverse(p: int, n: int) -> None:
    ring = unramified_ring(make_extension(p, n), 4)
    rng = np.random.default_rng(p + n)
    for _ in range(20):
        a = p * _random_element(ring, rng)
        assert scalar_log(scalar_exp(a)) == a
        assert scalar_exp(scalar_log(1 + a)) == 1 + a


@pytest.mark.parametrize(("p", "small", "large"), [(2, 2, 4), (3, 1, 2), (3, 2, 4), (5, 1, 3)])
def test_embeddings_commute_with_frobenius(p: int, small: int, large: int) -> None:
    source = unramified_ring(make_extension(p, small), 3)
    embedding = ring_embedding(source, unramified_ring(make_extension(p, large), 3))
    rng = np.random.default_rng(large)
    for _ in range(20):
        x = _random_element(source, rng)
        assert embedding(ring_frobenius(x)) == ring_frobenius(embedding(x))


def test_artin_schreier_extends_by_degree_p() -> None:
    s, field = solve_artin_schreier(make_extension(3, 1).one)
    assert field.n == 3
    assert s - s**3 == field.one
    f9 = make_extension(3, 2)
    x = f9.generator
    t, same = solve_artin_schreier(x - x**3)
    assert same == f9
    assert t - t**3 == x - x**3


@pytest.mark.parametrize(("e", "rank"), [(1, 1), (4, 2), (9, 6), (12, 4)])
def test_cyclotomic_extend(z3: UnramifiedRing, e: int, rank: int) -> None:
    lam = cyclotomic_extend(z3, e)
    assert lam is cyclotomic_extend(z3, e)
    assert lam.rank == rank
    assert lam.equal(lam.power(lam.zeta, e), lam.identity())
    for q in sympy.primefactors(e):
        assert not lam.equal(lam.power(lam.zeta, e // q), lam.identity())


def test_cyclotomic_frobenius_fixes_p_power_roots(z3: UnramifiedRing) -> None:
    lam = cyclotomic_extend(z3, 4)
    assert lam.equal(lam.frobenius(lam.zeta), lam.power(lam.zeta, 3))
    lam = cyclotomic_extend(z3, 9)
    assert lam.equal(lam.frobenius(lam.zeta), lam.zeta)
    lam = cyclotomic_extend(z3, 12)
    # c = 1 mod 3 and c = 3 mod 4
    assert lam.equal(lam.frobenius(lam.zeta), lam.power(lam.zeta, 7))
    with pytest.raises(ValueError, match="positive"):
        cyclotomic_extend(z3, 0)
