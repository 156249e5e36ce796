import pytest

from padic_k1.coeff import make_extension, unramified_ring
from padic_k1.descent import (
    CHECKS,
    INTRODUCTION,
    catalog_scenarios,
    check_one_minus_phi_exact,
    cyclic_galois_cokernel_check,
    descent_case,
    full_descent_report,
    gl2_index,
    mu_coinvariants,
    residue_k1,
    residue_sequence_check,
    sk1_descent_case,
)
from padic_k1.descent.galois import base_unit_count, prime_to_p_part
from padic_k1.descent.report import check_sk1_case
from padic_k1.exceptions import NotAPGroupError
from padic_k1.groupring import FiniteGroupRing
from padic_k1.groups import AbelianInvariants, load_group
from padic_k1.schemas import DescentScenario, Status

SK1 = AbelianInvariants((3, 9))


def _scenario(group: str, **kwargs: int) -> DescentScenario:
    values = {"p": 3, "nR": 1, "nS": 2, "N": 3, "seed": 11, "samples": 4} | kwargs
    return DescentScenario(group=group, **values)


@pytest.mark.parametrize(
    ("n", "kernel", "cokernel"),
    [(2, (), ()), (3, (3, 3), (3, 3)), (6, (3, 3), (3, 3)), (9, (3, 9), (3, 9)), (None, (3, 9), ())],
)
def test_descent_case_table(n: int | None, kernel: tuple[int, ...], cokernel: tuple[int, ...]) -> None:
    case = descent_case(SK1, 3, n)
    assert case.kernel == AbelianInvariants(kernel)
    assert case.cokernel == AbelianInvariants(cokernel)
    assert case.is_isomorphism == (n == 2)


def test_trivial_sk1_always_descends() -> None:
    for n in (2, 3, 9, None):
        assert descent_case(AbelianInvariants(), 3, n).is_isomorphism


def test_sk1_case_report() -> None:
    report = sk1_descent_case(_scenario("C3xC3", nS=3))
    assert report.status is Status.PASSED
    assert report.witnesses[0]["K"] == "1"
    assert report.witnesses[0]["v"] == 1


def test_sk1_case_needs_a_p_group() -> None:
    with pytest.raises(NotAPGroupError):
        sk1_descent_case(_scenario("S3"))
    assert check_sk1_case(_scenario("S3")).status is Status.SKIPPED


@pytest.mark.parametrize(
    ("p", "n", "group", "k1"),
    [(2, 1, "C2", (2,)), (3, 1, "C3", (3, 6)), (3, 2, "C1", (8,))],
)
def test_residue_k1(p: int, n: int, group: str, k1: tuple[int, ...]) -> None:
    kappa = FiniteGroupRing(unramified_ring(make_extension(p, n), 1), load_group(group), 1 << 12)
    result = residue_k1(kappa)
    assert result.invariants == AbelianInvariants(k1)
    assert result.relations == 1
    assert result.units == result.invariants.order


def test_residue_sequence_on_cyclic_group() -> None:
    report = residue_sequence_check(_scenario("C3", nS=1))
    assert report.status is Status.PASSED, report.witnesses
    assert report.precision_used == 3


def test_mu_coinvariants() -> None:
    assert mu_coinvariants(make_extension(3, 2), 1) == AbelianInvariants((2,))
    # a trivial Galois group leaves all of mu_S
    assert mu_coinvariants(make_extension(3, 2), 2) == AbelianInvariants((8,))
    assert prime_to_p_part(AbelianInvariants((6,)), 3) == AbelianInvariants((2,))
    assert base_unit_count(3, 2, load_group("C1")) == 6


def test_cyclic_cokernel_exhaustive() -> None:
    report = cyclic_galois_cokernel_check(_scenario("C1", N=2))
    assert report.status is Status.PASSED, report.witnesses


def test_cyclic_cokernel_skips_nonabelian_groups() -> None:
    assert cyclic_galois_cokernel_check(_scenario("Heis3")).status is Status.SKIPPED


def test_one_minus_phi_needs_a_nonprime_field() -> None:
    assert check_one_minus_phi_exact(_scenario("C1")).status is Status.SKIPPED
    report = check_one_minus_phi_exact(_scenario("C1", nR=2, nS=2))
    assert report.status is Status.PASSED, report.witnesses


def test_catalog_scenarios() -> None:
    names = [s.group for s in catalog_scenarios(3, 3, 0, 2, max_order=9)]
    assert names == ["C1", "C3", "C9", "C3xC3"]


def test_unknown_claim() -> None:
    with pytest.raises(KeyError):
        full_descent_report([_scenario("C1")], claims=["no-such-claim"])


def test_bundle_is_deterministic() -> None:
    scenarios = [_scenario("C1", N=2), _scenario("C3xC3", nS=3)]
    claims = ["sk1-case", "cyclic-cokernel"]
    first = full_descent_report(scenarios, claims, workers=1)
    second = full_descent_report(list(reversed(scenarios)), claims, workers=3)
    assert first.to_json() == second.to_json()
    assert "runtime_ms" not in first.to_json()
    assert "runtime_ms" in first.to_json(timings=True)
    assert first.passed


def test_claim_registry() -> None:
    assert set(CHECKS) == {
        "lemma-sur",
        "gamma-seq",
        "commutation",
        "trf-istar",
        "sk1-case",
        "residue-seq",
        "cyclic-cokernel",
    }
    assert INTRODUCTION not in CHECKS


@pytest.mark.slow
def test_descent_on_cyclic_group() -> None:
    bundle = full_descent_report([_scenario("C3")])
    claims = {r.claim: r.status for r in bundle.reports}
    assert set(claims) == {*CHECKS, INTRODUCTION}
    assert bundle.passed, bundle.render_text()
    assert claims[INTRODUCTION] is Status.PASSED


@pytest.mark.parametrize(("p", "group", "index"), [(2, "C1", 1), (3, "C1", 2), (2, "C2", 2)])
def test_gl2_modulo_elementary_matrices(p: int, group: str, index: int) -> None:
    kappa = FiniteGroupRing(unramified_ring(make_extension(p, 1), 1), load_group(group), 1 << 12)
    assert gl2_index(kappa) == index
