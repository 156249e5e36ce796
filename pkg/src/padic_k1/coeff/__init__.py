from padic_k1.coeff.cyclotomic import CyclotomicRing, cyclotomic_extend
from padic_k1.coeff.finite_field import (
    TOWER,
    FieldElement,
    FieldEmbedding,
    FiniteField,
    field_frobenius,
    make_extension,
    solve_artin_schreier,
)
from padic_k1.coeff.logexp import scalar_exp, scalar_log
from padic_k1.coeff.unramified import (
    RingElement,
    RingEmbedding,
    UnramifiedRing,
    norm,
    ring_embedding,
    ring_frobenius,
    solve_one_minus_frobenius,
    teichmuller,
    trace,
    unramified_ring,
)

__all__ = [
    "TOWER",
    "CyclotomicRing",
    "FieldElement",
    "FieldEmbedding",
    "FiniteField",
    "RingElement",
    "RingEmbedding",
    "UnramifiedRing",
    "cyclotomic_extend",
    "field_frobenius",
    "make_extension",
    "norm",
    "ring_embedding",
    "ring_frobenius",
    "scalar_exp",
    "scalar_log",
    "solve_artin_schreier",
    "solve_one_minus_frobenius",
    "teichmuller",
    "trace",
    "unramified_ring",
]
