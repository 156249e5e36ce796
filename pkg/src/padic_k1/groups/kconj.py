"""K-conjugacy classes of p-regular elements."""

from dataclasses import dataclass

import structlog
import sympy

from padic_k1.exceptions import CompositePError
from padic_k1.groups.group import Group, p_regular_classes

logger = structlog.get_logger(__name__)


@dataclass(frozen=True)
class KConjugacyClass:
    """
    One K-conjugacy class for K unramified of residue degree f over Q_p.

    Attributes:
        representative (int): g_i, the smallest element of the class
        galois_exponents (tuple[int, ...]): The powers a with
            g -> g^a induced by Gal(K(zeta_n)/K), n the order of g_i
        classes (tuple[int, ...]): Conjugacy classes fused into this one
        normalizer (tuple[int, ...]): N_i = {x : x g_i x^-1 = g_i^a}
        centralizer (tuple[int, ...]): Z_i, the centralizer of g_i
    """

    representative: int
    galois_exponents: tuple[int, ...]
    classes: tuple[int, ...]
    normalizer: tuple[int, ...]
    centralizer: tuple[int, ...]


def galois_exponents(n: int, q: int) -> tuple[int, ...]:
    """The cyclic subgroup generated by q in (Z/n)^x."""
    if n == 1:
        return (1,)
    out, a = [1], q % n
    while a != 1:
        out.append(a)
        a = a * q % n
    return tuple(sorted(out))


def k_conjugacy_bookkeeping(group: Group, p: int, residue_degree: int = 1) -> list[KConjugacyClass]:
    """
    Representatives of the K-conjugacy classes of p-regular elements with
    their N_i and Z_i.

    Args:
        group (Group): The finite group
        p (int): Residue characteristic
        residue_degree (int): f with K/Q_p unramified of degree f, so the
            Galois group of K(zeta_n)/K is generated by q = p^f mod n

    Raises:
        CompositePError: If p is not prime
    """
    if not sympy.isprime(p):
        msg = f"{p} is not prime"
        raise CompositePError(msg)
    q = p**residue_degree
    class_of = group.classes.class_of
    seen: set[int] = set()
    out: list[KConjugacyClass] = []
    for c in p_regular_classes(group, p):
        if c in seen:
            continue
        g = group.classes.representatives[c]
        exponents = galois_exponents(group.element_orders[g], q)
        fused = tuple(sorted({class_of[group.power(g, a)] for a in exponents}))
        seen.update(fused)
        images = {group.power(g, a) for a in exponents}
        normalizer = tuple(x for x in range(group.order) if group.conjugate(g, x) in images)
        out.append(KConjugacyClass(g, exponents, fused, normalizer, group.centralizer(g)))
    logger.debug("k_conjugacy", group=group.name, p=p, classes=len(out))
    return out
