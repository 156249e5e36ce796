from padic_k1.groups.abelian import AbelianInvariants
from padic_k1.groups.catalog import load_group, resolve_group
from padic_k1.groups.group import (
    ConjugacyData,
    Group,
    GroupHomomorphism,
    abelianization,
    center,
    central_order_p_element,
    centralizer,
    conjugacy_classes,
    derived_subgroup,
    group_from_table,
    omega_set,
    p_regular_classes,
    power_map_on_classes,
)
from padic_k1.groups.homology import h2_ab_part, homology_data, schur_multiplier, sk1_pgroup
from padic_k1.groups.kconj import KConjugacyClass, k_conjugacy_bookkeeping
from padic_k1.groups.presentation import Presentation, group_from_presentation, parse_presentation

__all__ = [
    "AbelianInvariants",
    "ConjugacyData",
    "Group",
    "GroupHomomorphism",
    "KConjugacyClass",
    "Presentation",
    "abelianization",
    "center",
    "central_order_p_element",
    "centralizer",
    "conjugacy_classes",
    "derived_subgroup",
    "group_from_presentation",
    "group_from_table",
    "h2_ab_part",
    "homology_data",
    "k_conjugacy_bookkeeping",
    "load_group",
    "omega_set",
    "p_regular_classes",
    "parse_presentation",
    "power_map_on_classes",
    "resolve_group",
    "schur_multiplier",
    "sk1_pgroup",
]
