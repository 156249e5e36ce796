"""
Linear algebra over F_p and over the local rings Z/p^k.

The local Smith form follows the usual modular elimination: at every
valuation level t the remaining block is divisible by p^t, so any entry of
exact valuation t can serve as pivot and clears its row and column with
integral multipliers. Only row and column swaps and unimodular updates are
used, which keeps the column transform invertible over Z/p^k.
"""

from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt
import structlog

logger = structlog.get_logger(__name__)

IntMatrix = npt.NDArray[np.int64] | npt.NDArray[np.object_]

_INT64_SAFE = 1 << 31


def modular_dtype(modulus: int) -> type:
    """Return int64 when products of residues cannot overflow, else object."""
    return np.int64 if modulus < _INT64_SAFE else object


def identity_matrix(size: int, dtype: type) -> IntMatrix:
    out = np.zeros((size, size), dtype=dtype)
    for i in range(size):
        out[i, i] = 1
    return out


def rref_mod_p(matrix: IntMatrix, p: int) -> tuple[IntMatrix, list[int]]:
    """
    Reduced row echelon form over F_p.

    Returns:
        tuple: The reduced matrix and the list of pivot columns, in order
    """
    a = np.array(matrix, dtype=np.int64) % p
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        candidates = np.nonzero(a[r:, c])[0]
        if candidates.size == 0:
            continue
        i = r + int(candidates[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        a[r] = a[r] * pow(int(a[r, c]), -1, p) % p
        factors = a[:, c].copy()
        factors[r] = 0
        a = (a - np.outer(factors, a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def solve_mod_p(matrix: IntMatrix, rhs: IntMatrix, p: int) -> IntMatrix | None:
    """
    Solve matrix @ x = rhs over F_p.

    Free variables are set to zero, so the returned solution is the one
    supported on pivot columns. Returns None when the system is inconsistent.
    """
    a = np.array(matrix, dtype=np.int64) % p
    b = np.array(rhs, dtype=np.int64).reshape(-1, 1) % p
    reduced, pivots = rref_mod_p(np.hstack([a, b]), p)
    cols = a.shape[1]
    if cols in pivots:
        return None
    x = np.zeros(cols, dtype=np.int64)
    for r, c in enumerate(pivots):
        x[c] = reduced[r, cols]
    return x


def nullspace_mod_p(matrix: IntMatrix, p: int) -> IntMatrix:
    """Basis of the right kernel over F_p, one vector per column."""
    a = np.array(matrix, dtype=np.int64) % p
    cols = a.shape[1]
    reduced, pivots = rref_mod_p(a, p)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((cols, len(free)), dtype=np.int64)
    for k, f in enumerate(free):
        basis[f, k] = 1
        for r, c in enumerate(pivots):
            basis[c, k] = (-reduced[r, f]) % p
    return basis


def rank_mod_p(matrix: IntMatrix, p: int) -> int:
    if np.size(matrix) == 0:
        return 0
    return len(rref_mod_p(matrix, p)[1])


def integer_kernel(matrix: IntMatrix) -> IntMatrix:
    """
    A Z-basis of the right kernel of an integer matrix, one vector per column.

    Column reduction with unimodular updates; the columns of the accumulated
    transform past the last pivot span the kernel exactly.
    """
    a = np.array(matrix, dtype=object)
    rows, cols = a.shape
    u = identity_matrix(cols, object)
    c0 = 0
    for i in range(rows):
        while c0 < cols:
            nonzero = [j for j in range(c0, cols) if a[i, j] != 0]
            if not nonzero:
                break
            j = min(nonzero, key=lambda col: abs(a[i, col]))
            if j != c0:
                a[:, [c0, j]] = a[:, [j, c0]]
                u[:, [c0, j]] = u[:, [j, c0]]
            cleared = True
            for col in range(c0 + 1, cols):
                if a[i, col] != 0:
                    q = a[i, col] // a[i, c0]
                    a[:, col] = a[:, col] - q * a[:, c0]
                    u[:, col] = u[:, col] - q * u[:, c0]
                    cleared = cleared and a[i, col] == 0
            if cleared:
                c0 += 1
                break
    return u[:, c0:]


def inverse_mod(matrix: IntMatrix, p: int, precision: int) -> IntMatrix:
    """
    Invert a square matrix over Z/p^precision by Gauss-Jordan elimination.

    Raises:
        ValueError: If the matrix is singular mod p
    """
    modulus = p**precision
    size = len(matrix)
    a = np.array(matrix, dtype=object) % modulus
    inv = identity_matrix(size, object)
    for c in range(size):
        pivot_rows = [r for r in range(c, size) if a[r, c] % p != 0]
        if not pivot_rows:
            msg = "matrix is singular modulo p"
            raise ValueError(msg)
        r = pivot_rows[0]
        if r != c:
            a[[c, r]] = a[[r, c]]
            inv[[c, r]] = inv[[r, c]]
        scale = pow(int(a[c, c]), -1, modulus)
        a[c] = a[c] * scale % modulus
        inv[c] = inv[c] * scale % modulus
        for r2 in range(size):
            if r2 != c and a[r2, c] % modulus:
                f = a[r2, c]
                a[r2] = (a[r2] - f * a[c]) % modulus
                inv[r2] = (inv[r2] - f * inv[c]) % modulus
    return inv.astype(modular_dtype(modulus))


@dataclass
class LocalSmithForm:
    """
    Smith form of an integer matrix over Z/p^k.

    Attributes:
        p (int): Residue characteristic
        k (int): Exponent of the coefficient ring Z/p^k
        valuations (list[int]): Diagonal valuations, one per min(rows, cols)
            position; k marks a zero diagonal entry
        units (list[int]): Unit parts of the nonzero pivots, in pivot order
        column_transform (IntMatrix | None): W with U @ A @ W diagonal, when
            requested
        rhs (IntMatrix | None): The right-hand sides after the row operations
    """

    p: int
    k: int
    valuations: list[int]
    units: list[int]
    column_transform: IntMatrix | None = None
    rhs: IntMatrix | None = None
    consistent_rows: bool = field(default=True)

    @property
    def modulus(self) -> int:
        return self.p**self.k

    def module_invariants(self) -> list[int]:
        """Exponents e with the column span isomorphic to the sum of Z/p^(k-v)."""
        return sorted(self.k - v for v in self.valuations if v < self.k)

    def kernel_generators(self) -> IntMatrix:
        """
        Generators of the right kernel of A over Z/p^k, one per column.

        Requires the column transform to have been tracked.
        """
        if self.column_transform is None:
            msg = "column transform was not tracked"
            raise ValueError(msg)
        w = self.column_transform
        cols = w.shape[1]
        vals = self.valuations + [self.k] * (cols - len(self.valuations))
        gens = [
            (w[:, i] * self.p ** (self.k - v)) % self.modulus
            for i, v in enumerate(vals)
            if v > 0
        ]
        if not gens:
            return np.zeros((cols, 0), dtype=w.dtype)
        return np.stack(gens, axis=1)

    def solve(self) -> IntMatrix | None:
        """
        Solve A @ x = b for every tracked right-hand side column.

        Returns None when some right-hand side is not in the column span.
        """
        if self.rhs is None or self.column_transform is None:
            msg = "solve needs tracked rhs and column transform"
            raise ValueError(msg)
        m = self.modulus
        rank = len(self.units)
        b = self.rhs
        if np.any(b[rank:] % m != 0):
            return None
        cols = self.column_transform.shape[0]
        y = np.zeros((cols, b.shape[1]), dtype=object)
        for i, (v, u) in enumerate(zip(self.valuations, self.units, strict=False)):
            row = b[i]
            if np.any(row % self.p**v != 0):
                return None
            y[i] = (row // self.p**v) * pow(u, -1, m) % m
        w = self.column_transform.astype(object)
        return (w @ y) % m


def local_smith_form(
    matrix: IntMatrix,
    p: int,
    k: int,
    *,
    track_columns: bool = False,
    rhs: IntMatrix | None = None,
) -> LocalSmithForm:
    """
    Diagonalize a matrix over Z/p^k.

    Args:
        matrix (IntMatrix): Integer matrix, reduced internally mod p^k
        p (int): Prime
        k (int): Exponent, at least 1
        track_columns (bool): Accumulate the column transform W
        rhs (IntMatrix | None): Optional right-hand sides, transformed by the
            same row operations

    Returns:
        LocalSmithForm: Valuations, pivot units and the optional transforms
    """
    modulus = p**k
    dtype = modular_dtype(modulus)
    a = (np.array(matrix, dtype=object) % modulus).astype(dtype)
    rows, cols = a.shape
    w = identity_matrix(cols, dtype) if track_columns else None
    b = None
    if rhs is not None:
        b = (np.array(rhs, dtype=object).reshape(rows, -1) % modulus).astype(dtype)
    compact = b is None
    valuations: list[int] = []
    units: list[int] = []
    r0 = 0
    for t in range(k):
        pt, pt1 = p**t, p ** (t + 1)
        since_compact = 0
        while r0 < min(a.shape[0], cols):
            block = a[r0:, r0:]
            hits = np.nonzero(block % pt1 != 0)
            if hits[0].size == 0:
                break
            i, j = r0 + int(hits[0][0]), r0 + int(hits[1][0])
            if i != r0:
                a[[r0, i]] = a[[i, r0]]
                if b is not None:
                    b[[r0, i]] = b[[i, r0]]
            if j != r0:
                a[:, [r0, j]] = a[:, [j, r0]]
                if w is not None:
                    w[:, [r0, j]] = w[:, [j, r0]]
            unit = int(a[r0, r0]) // pt
            unit_inv = pow(unit, -1, modulus)
            col = (a[r0 + 1 :, r0] // pt) * unit_inv % modulus
            if np.any(col):
                a[r0 + 1 :, r0:] = (
                    a[r0 + 1 :, r0:] - col[:, None] * a[r0, r0:][None, :]
                ) % modulus
                if b is not None:
                    b[r0 + 1 :] = (b[r0 + 1 :] - col[:, None] * b[r0][None, :]) % modulus
            row = (a[r0, r0 + 1 :] // pt) * unit_inv % modulus
            if w is not None and np.any(row):
                w[:, r0 + 1 :] = (w[:, r0 + 1 :] - w[:, r0][:, None] * row[None, :]) % modulus
            a[r0, r0 + 1 :] = 0
            valuations.append(t)
            units.append(unit % modulus)
            r0 += 1
            since_compact += 1
            if compact and since_compact >= 64:
                a = _drop_zero_rows(a, r0)
                since_compact = 0
        if compact:
            a = _drop_zero_rows(a, r0)
    diagonal = min(rows, cols)
    valuations += [k] * (diagonal - len(valuations))
    logger.debug(
        "local_smith_form",
        p=p,
        k=k,
        shape=(rows, cols),
        rank=len(units),
    )
    return LocalSmithForm(
        p=p,
        k=k,
        valuations=valuations,
        units=units,
        column_transform=w,
        rhs=b,
    )


def _drop_zero_rows(a: IntMatrix, keep: int) -> IntMatrix:
    tail = a[keep:]
    nonzero = np.any(tail != 0, axis=1)
    if bool(np.all(nonzero)):
        return a
    return np.vstack([a[:keep], tail[nonzero]])
