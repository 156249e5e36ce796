"""Adams operations on virtual characters and the Galois action on the table."""

from dataclasses import dataclass

import numpy as np
import structlog
import sympy

from padic_k1.coeff.cyclotomic import frobenius_exponent
from padic_k1.coeff.linalg import IntMatrix
from padic_k1.exceptions import CompositePError, ConsistencyError
from padic_k1.groups.group import Group
from padic_k1.logdet.characters import CharacterTable

logger = structlog.get_logger(__name__)


@dataclass(frozen=True, eq=False)
class AdamsOperation:
    """
    psi^p on R_G in the basis of irreducible characters.

    Attributes:
        matrix (IntMatrix): Row i holds the coordinates of psi^p(chi_i)
        adjoint (IntMatrix): psi_p, the adjoint of psi^p for the character
            pairing; the irreducibles are orthonormal so this is the transpose
        galois (tuple[int, ...]): sigma with chi_sigma(i) = chi_i^(F^-1)
    """

    p: int
    table: CharacterTable
    matrix: IntMatrix
    adjoint: IntMatrix
    galois: tuple[int, ...]


def adams_on_characters(group: Group, table: CharacterTable, p: int) -> AdamsOperation:
    """
    Decompose psi^p(chi)(g) = chi(g^p) into irreducibles.

    Raises:
        CompositePError: If p is not prime
        ConsistencyError: If an inner product is not an integer
    """
    if not sympy.isprime(p):
        msg = f"{p} is not a prime"
        raise CompositePError(msg)
    powered = table.values[:, list(group.power_map_on_classes(p))]
    gram = table.pairing(powered, table.values)
    if np.any(gram[:, :, 1:]) or np.any(gram[:, :, 0] % group.order):
        msg = "Adams operation does not decompose integrally"
        raise ConsistencyError(msg)
    matrix = gram[:, :, 0] // group.order
    return AdamsOperation(p, table, matrix, matrix.T.copy(), galois_permutation(table, p))


def galois_permutation(table: CharacterTable, p: int) -> tuple[int, ...]:
    """
    sigma with chi_i^(F^-1) = chi_sigma(i), where F sends zeta_e to zeta_e^c.

    Raises:
        ConsistencyError: If a conjugate is not in the table
    """
    group, e = table.group, table.exponent
    inverse = pow(frobenius_exponent(e, p), -1, e) if e > 1 else 1
    classes = list(group.power_map_on_classes(inverse))
    lookup = {c.values: c.index for c in table}
    sigma = []
    for chi in table:
        conjugate = tuple(chi.values[k] for k in classes)
        if conjugate not in lookup:
            msg = "Galois conjugate of a character is missing from the table"
            raise ConsistencyError(msg)
        sigma.append(lookup[conjugate])
    logger.debug("galois_permutation", group=group.name, sigma=sigma)
    return tuple(sigma)
