from padic_k1.groupring.element import (
    ClassFunctionElement,
    GroupRingAlgebra,
    GroupRingElement,
    a_ideal_membership,
    aug,
    classproj,
    in_augmentation_ideal,
    in_one_minus_z_ideal,
    invert,
    is_unit,
    phi_operator,
    psi_operator,
)
from padic_k1.groupring.finite import FiniteGroupRing
from padic_k1.groupring.transfer import GroupRingMatrix, RelativeBasis, i_star, transfer_matrix
from padic_k1.groupring.units import UnitKind, sample_unit

__all__ = [
    "ClassFunctionElement",
    "FiniteGroupRing",
    "GroupRingAlgebra",
    "GroupRingElement",
    "GroupRingMatrix",
    "RelativeBasis",
    "UnitKind",
    "a_ideal_membership",
    "aug",
    "classproj",
    "i_star",
    "in_augmentation_ideal",
    "in_one_minus_z_ideal",
    "invert",
    "is_unit",
    "phi_operator",
    "psi_operator",
    "sample_unit",
    "transfer_matrix",
]
