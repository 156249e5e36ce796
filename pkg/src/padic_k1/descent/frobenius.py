"""
Exactness of 0 -> Z_p -> O -> O -> 0 with the middle map 1 - phi.

Surjectivity needs Artin-Schreier extensions of the residue field, so the
solver may climb the tower; the largest degree reached is logged. The kernel
is enumerated outright when O/p^N is small and sampled otherwise.
"""

import itertools

import numpy as np
import structlog

from padic_k1.coeff.unramified import ring_embedding, ring_frobenius, solve_one_minus_frobenius
from padic_k1.descent.common import Witness, random_ring_element, run_check, scenario_rings, scenario_rng, skipped
from padic_k1.schemas import DescentScenario, VerificationReport
from padic_k1.settings import settings

logger = structlog.get_logger(__name__)

CLAIM = "lemma-sur"


def check_one_minus_phi_exact(scenario: DescentScenario) -> VerificationReport:
    """
    Verify that 1 - phi is onto O (after tower extension) with kernel Z/p^N.

    Over Z_p the Frobenius is the identity, the residue field is not closed
    under Artin-Schreier extensions, and the scenario is skipped.
    """
    if scenario.n_R == 1:
        return skipped(CLAIM, scenario, "phi is the identity on Z_p; the residue field must be non-prime")

    def body(witnesses: list[Witness]) -> int:
        ring, _ = scenario_rings(scenario)
        rng = scenario_rng(scenario, CLAIM)
        top_degree = ring.n
        for _ in range(scenario.samples):
            r = ring.element(random_ring_element(ring, rng))
            s = solve_one_minus_frobenius(r)
            image = ring_embedding(ring, s.ring)(r) if s.ring != ring else r
            if s - ring_frobenius(s) != image:
                witnesses.append({"target": list(r.coeffs), "solution": list(s.coeffs), "degree": s.ring.n})
            top_degree = max(top_degree, s.ring.n)
        logger.info("tower_growth", base_degree=ring.n, top_degree=top_degree)
        constants = [ring.from_int(int(c)) for c in rng.integers(0, ring.modulus, size=max(scenario.samples, 1))]
        for c in constants:
            if ring_frobenius(c) != c:
                witnesses.append({"constant": list(c.coeffs), "reason": "phi moves an element of Z_p"})
        size = ring.modulus**ring.n
        if size <= settings.cap(settings.unit_group_bound):
            everything = np.array(list(itertools.product(range(ring.modulus), repeat=ring.n)), dtype=object)
            fixed = everything[np.all(ring.frobenius_vectors(everything) % ring.modulus == everything, axis=1)]
            if len(fixed) != ring.modulus or np.any(fixed[:, 1:]):
                witnesses.append({"kernel_size": len(fixed), "expected": ring.modulus})
        return ring.precision

    return run_check(CLAIM, scenario, body)
