"""
Dense univariate polynomials over Z/m.

Polynomials are tuples of integers ordered from the constant term upward.
The helpers here back the finite field and unramified ring layers, which
only ever need small degrees, so plain Python integers are used throughout.
"""

from collections.abc import Sequence

Poly = tuple[int, ...]


def poly_trim(a: Sequence[int], m: int) -> Poly:
    """Reduce coefficients mod m and strip trailing zeros."""
    out = [c % m for c in a]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def poly_degree(a: Poly) -> int:
    return len(a) - 1


def poly_add(a: Sequence[int], b: Sequence[int], m: int) -> Poly:
    size = max(len(a), len(b))
    return poly_trim(
        [
            (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
            for i in range(size)
        ],
        m,
    )


def poly_sub(a: Sequence[int], b: Sequence[int], m: int) -> Poly:
    return poly_add(a, [-c for c in b], m)


def poly_scale(a: Sequence[int], c: int, m: int) -> Poly:
    return poly_trim([c * x for x in a], m)


def poly_mul(a: Sequence[int], b: Sequence[int], m: int) -> Poly:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return poly_trim(out, m)


def poly_divmod(a: Sequence[int], b: Sequence[int], m: int) -> tuple[Poly, Poly]:
    """
    Long division by b, whose leading coefficient must be invertible mod m.

    Raises:
        ZeroDivisionError: If b is zero
        ValueError: If the leading coefficient of b is not a unit mod m
    """
    divisor = poly_trim(b, m)
    if not divisor:
        msg = "polynomial division by zero"
        raise ZeroDivisionError(msg)
    lead_inv = pow(divisor[-1], -1, m)
    rem = list(poly_trim(a, m))
    db = len(divisor) - 1
    if len(rem) - 1 < db:
        return (), tuple(rem)
    quot = [0] * (len(rem) - db)
    for shift in range(len(rem) - 1 - db, -1, -1):
        coef = rem[shift + db] * lead_inv % m
        quot[shift] = coef
        if coef:
            for j, c in enumerate(divisor):
                rem[shift + j] = (rem[shift + j] - coef * c) % m
    return poly_trim(quot, m), poly_trim(rem[:db], m)


def poly_mod(a: Sequence[int], b: Sequence[int], m: int) -> Poly:
    return poly_divmod(a, b, m)[1]


def poly_mulmod(a: Sequence[int], b: Sequence[int], f: Sequence[int], m: int) -> Poly:
    return poly_mod(poly_mul(a, b, m), f, m)


def poly_powmod(a: Sequence[int], e: int, f: Sequence[int], m: int) -> Poly:
    """Compute a**e mod (f, m) by square and multiply."""
    result: Poly = poly_mod((1,), f, m)
    base = poly_mod(a, f, m)
    while e > 0:
        if e & 1:
            result = poly_mulmod(result, base, f, m)
        base = poly_mulmod(base, base, f, m)
        e >>= 1
    return result


def poly_gcd(a: Sequence[int], b: Sequence[int], p: int) -> Poly:
    """Monic gcd over the prime field F_p."""
    x, y = poly_trim(a, p), poly_trim(b, p)
    while y:
        x, y = y, poly_mod(x, y, p)
    if not x:
        return ()
    return poly_scale(x, pow(x[-1], -1, p), p)


def is_irreducible_mod_p(f: Sequence[int], p: int) -> bool:
    """
    Rabin-style irreducibility test over F_p.

    A monic f of degree n is irreducible iff gcd(f, x^(p^k) - x) = 1 for every
    k < n and f divides x^(p^n) - x.
    """
    poly = poly_trim(f, p)
    n = poly_degree(poly)
    if n <= 0:
        return False
    if n == 1:
        return True
    x: Poly = (0, 1)
    power = x
    for _ in range(1, n):
        power = poly_powmod(power, p, poly, p)
        if poly_degree(poly_gcd(poly, poly_sub(power, x, p), p)) > 0:
            return False
    power = poly_powmod(power, p, poly, p)
    return poly_sub(power, poly_mod(x, poly, p), p) == ()
