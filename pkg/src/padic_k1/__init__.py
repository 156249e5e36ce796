from padic_k1.coeff import UnramifiedRing, make_extension, unramified_ring
from padic_k1.descent import full_descent_report
from padic_k1.groupring import GroupRingElement, i_star, transfer_matrix
from padic_k1.groups import AbelianInvariants, Group, resolve_group, sk1_pgroup
from padic_k1.logdet import det_hom, gamma_full, gamma_hom, gr_log
from padic_k1.schemas import DescentScenario, ReportBundle, VerificationReport

__all__ = [
    "AbelianInvariants",
    "DescentScenario",
    "Group",
    "GroupRingElement",
    "ReportBundle",
    "UnramifiedRing",
    "VerificationReport",
    "det_hom",
    "full_descent_report",
    "gamma_full",
    "gamma_hom",
    "gr_log",
    "i_star",
    "make_extension",
    "resolve_group",
    "sk1_pgroup",
    "transfer_matrix",
    "unramified_ring",
]
