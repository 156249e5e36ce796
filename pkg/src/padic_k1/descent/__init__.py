from padic_k1.descent.frobenius import check_one_minus_phi_exact
from padic_k1.descent.galois import cyclic_galois_cokernel_check, mu_coinvariants
from padic_k1.descent.gamma_sequence import check_gamma_sequence, log_det_vanishes
from padic_k1.descent.preimage import GammaBasis, GammaPreimage, GammaSolver, extend_scalars, gamma_basis, omega
from padic_k1.descent.report import (
    CHECKS,
    INTRODUCTION,
    catalog_scenarios,
    check_commutation,
    full_descent_report,
    introduction_report,
)
from padic_k1.descent.residue import ResidueK1, gl2_index, kernel_invariants, residue_k1, residue_sequence_check
from padic_k1.descent.sk1 import DescentCase, descent_case, sk1_descent_case
from padic_k1.descent.transfer import check_trf_istar

__all__ = [
    "CHECKS",
    "INTRODUCTION",
    "DescentCase",
    "GammaBasis",
    "GammaPreimage",
    "GammaSolver",
    "ResidueK1",
    "catalog_scenarios",
    "check_commutation",
    "check_gamma_sequence",
    "check_one_minus_phi_exact",
    "check_trf_istar",
    "cyclic_galois_cokernel_check",
    "extend_scalars",
    "descent_case",
    "full_descent_report",
    "gl2_index",
    "gamma_basis",
    "introduction_report",
    "kernel_invariants",
    "log_det_vanishes",
    "mu_coinvariants",
    "omega",
    "residue_k1",
    "residue_sequence_check",
    "sk1_descent_case",
]
