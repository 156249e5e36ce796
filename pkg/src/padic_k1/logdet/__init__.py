from padic_k1.logdet.adams import AdamsOperation, adams_on_characters, galois_permutation
from padic_k1.logdet.characters import Character, CharacterTable, character_table
from padic_k1.logdet.commutation import commutation_check, torsion_units
from padic_k1.logdet.det import det_character, det_eval, det_hom, det_hom_matrix, tr_eval, tr_hom, value_ring
from padic_k1.logdet.gamma import (
    WhiteheadClass,
    assertion_precision,
    gamma_full,
    gamma_I,
    gamma_matrix,
    gamma_R,
    relative_trace,
)
from padic_k1.logdet.hom import HomElement, gamma_hom, hom_frobenius
from padic_k1.logdet.logarithm import GroupRingLog, gr_exp, gr_log

__all__ = [
    "AdamsOperation",
    "Character",
    "CharacterTable",
    "GroupRingLog",
    "HomElement",
    "WhiteheadClass",
    "adams_on_characters",
    "assertion_precision",
    "character_table",
    "commutation_check",
    "det_character",
    "det_eval",
    "det_hom",
    "det_hom_matrix",
    "galois_permutation",
    "gamma_I",
    "gamma_R",
    "gamma_full",
    "gamma_hom",
    "gamma_matrix",
    "gr_exp",
    "gr_log",
    "hom_frobenius",
    "relative_trace",
    "tr_eval",
    "tr_hom",
    "torsion_units",
    "value_ring",
]
