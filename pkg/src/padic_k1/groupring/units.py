"""Seeded unit samplers for O[G]."""

from enum import Enum

import numpy as np

from padic_k1.coeff.unramified import UnramifiedRing, teichmuller
from padic_k1.exceptions import NotAPGroupError
from padic_k1.groupring.element import GroupRingElement
from padic_k1.groups.group import Group


class UnitKind(str, Enum):
    ONE_PLUS_I = "one_plus_I"
    ONE_PLUS_A = "one_plus_A"
    ONE_PLUS_PR = "one_plus_pR"
    TEICHMULLER_TIMES_GROUP = "teichmuller_times_group"


def _random_coefficients(rng: np.random.Generator, ring: UnramifiedRing, count: int) -> np.ndarray:
    return rng.integers(0, ring.modulus, size=(count, ring.n)).astype(object)


def _require_p_group(group: Group, ring: UnramifiedRing, kind: UnitKind) -> None:
    if not group.is_p_group(ring.p):
        msg = f"{kind.value} samples need a {ring.p}-group, got {group.name}"
        raise NotAPGroupError(msg)


def sample_unit(
    ring: UnramifiedRing, group: Group, kind: UnitKind | str, seed: int
) -> GroupRingElement:
    """
    A deterministic unit of the requested shape.

    one_plus_I is 1 + sum b_g (g - 1) and one_plus_A is 1 + sum r_i h_i (c_i - 1)
    with c_i commutators; both need G to be a p-group so that the ideal lies
    in the radical. one_plus_pR is 1 + p*y, teichmuller_times_group is w*g.

    Raises:
        NotAPGroupError: For ideal-shaped kinds over a group that is not a p-group
    """
    kind = UnitKind(kind)
    rng = np.random.default_rng(seed)
    one = GroupRingElement.one(ring, group)
    n = group.order
    if kind is UnitKind.ONE_PLUS_PR:
        y = GroupRingElement(ring, group, _random_coefficients(rng, ring, n))
        return one + ring.p * y
    if kind is UnitKind.TEICHMULLER_TIMES_GROUP:
        coords = [0] * ring.n
        while not any(coords):
            coords = rng.integers(0, ring.p, size=ring.n).tolist()
        residue = ring.field.element(coords)
        g = int(rng.integers(0, n))
        return GroupRingElement.basis(ring, group, g, teichmuller(residue, ring.precision))
    _require_p_group(group, ring, kind)
    if kind is UnitKind.ONE_PLUS_I:
        b = _random_coefficients(rng, ring, n)
        coeffs = b.copy()
        coeffs[group.identity] = 0
        coeffs[group.identity] = -coeffs.sum(axis=0)
        return one + GroupRingElement(ring, group, coeffs)
    commutators = sorted(set(group.derived_subgroup) - {group.identity})
    acc = GroupRingElement.zero(ring, group)
    for c in commutators[:4]:
        h = int(rng.integers(0, n))
        r = ring.element([int(v) for v in rng.integers(0, ring.modulus, size=ring.n)])
        term = GroupRingElement.basis(ring, group, h, r)
        acc = acc + term * (GroupRingElement.basis(ring, group, c) - one)
    return one + acc
