"""Primitive integer vectors of a given squared norm, and their symmetry
orbits under the proper signed permutation group of Z^d.

Enumeration is an exact recursive descent over coordinates with
remaining-sum pruning; the search runs over non-negative coordinate
profiles and expands sign patterns afterwards, so each primitive vector
appears exactly once. Results are reported in lexicographically
descending coordinate order, which makes runs reproducible and lets a
caller partition work by first-coordinate value and merge.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial, gcd, isqrt

from .linalg import vector_gcd

Vec = tuple[int, ...]


class BudgetExceeded(RuntimeError):
    """Search volume above the configured budget; raise instead of hanging."""


#: Default ceiling for the coordinate-descent volume estimate D^((d-1)/2).
#: Calibrated so that d >= 6 refuses D > 10^4 out of the box.
DEFAULT_BUDGET = 10.0**10


@dataclass(frozen=True, slots=True)
class PrimitiveVector:
    """A primitive vector v in Z^d with squared norm D."""

    d: int
    coords: Vec
    D: int

    def __post_init__(self):
        if self.d != len(self.coords):
            raise ValueError("dimension mismatch")
        if self.d < 3:
            raise ValueError("need d >= 3")
        if sum(c * c for c in self.coords) != self.D:
            raise ValueError("squared norm mismatch")
        if vector_gcd(self.coords) != 1:
            raise ValueError("vector is not primitive")


@dataclass(frozen=True, slots=True)
class OrbitInfo:
    """Proper signed-permutation orbit data for a vector."""

    canonical: Vec
    stabilizer_size: int
    orbit_size: int


def group_order(d: int) -> int:
    """Order of the proper signed permutation group in dimension d."""
    return 2 ** (d - 1) * factorial(d)


def is_admissible(d: int, D: int, p: int | None = None) -> bool:
    """Whether (d, D) supports the full construction, optionally at an
    auxiliary odd prime p (which must not divide D).

    d = 3 excludes D = 0, 4, 7 mod 8; d = 4 excludes multiples of 8;
    d >= 5 admits every D.
    """
    if d < 3:
        raise ValueError("need d >= 3")
    if D < 1:
        raise ValueError("need D >= 1")
    if p is not None:
        if p == 2 or p < 3 or not _is_prime(p):
            raise ValueError("auxiliary place must be an odd prime")
        if D % p == 0:
            return False
    if d == 3:
        return D % 8 not in (0, 4, 7)
    if d == 4:
        return D % 8 != 0
    return True


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


# ------------------------------------------------------------- enumeration


def _check_budget(d: int, D: int, budget: float | None):
    limit = DEFAULT_BUDGET if budget is None else budget
    if float(D) ** ((d - 1) / 2.0) > limit:
        raise BudgetExceeded(f"enumeration budget exceeded for d={d}, D={D}")


def _nonneg_profiles(d: int, D: int):
    """All tuples a with a_i >= 0, sum a_i^2 = D, gcd = 1 (zeros ignored)."""
    out = []
    a = [0] * d

    def rec(i: int, rem: int):
        if i == d - 2:
            # closed two-coordinate tail: a_{d-2} loop, a_{d-1} by exact sqrt
            for x in range(isqrt(rem), -1, -1):
                r2 = rem - x * x
                y = isqrt(r2)
                if y * y == r2:
                    a[d - 2] = x
                    a[d - 1] = y
                    g = 0
                    for c in a:
                        g = gcd(g, c)
                    if g == 1:
                        out.append(tuple(a))
            a[d - 2] = 0
            a[d - 1] = 0
            return
        for x in range(isqrt(rem), -1, -1):
            a[i] = x
            rec(i + 1, rem - x * x)
        a[i] = 0

    rec(0, D)
    return out


def _expand_signs(profile: Vec):
    nz = [i for i, c in enumerate(profile) if c]
    base = list(profile)
    k = len(nz)
    for mask in range(1 << k):
        v = base[:]
        for b in range(k):
            if mask >> b & 1:
                v[nz[b]] = -v[nz[b]]
        yield tuple(v)


def enumerate_sphere_coords(d: int, D: int, budget: float | None = None) -> list[Vec]:
    """Primitive vectors with squared norm D, lexicographically descending.

    Low-level variant returning plain tuples; `enumerate_sphere` wraps the
    results. Raises BudgetExceeded when the descent volume estimate passes
    the budget (default refuses d >= 6 with D > 10^4).
    """
    if d < 3:
        raise ValueError("need d >= 3")
    if D < 1:
        raise ValueError("need D >= 1")
    _check_budget(d, D, budget)
    vecs: list[Vec] = []
    for prof in _nonneg_profiles(d, D):
        vecs.extend(_expand_signs(prof))
    vecs.sort(reverse=True)
    return vecs


def enumerate_sphere(d: int, D: int, budget: float | None = None) -> list[PrimitiveVector]:
    """Primitive vectors with squared norm D as validated objects,
    lexicographically descending."""
    return [PrimitiveVector(d, v, D) for v in enumerate_sphere_coords(d, D, budget)]


def enumerate_sphere_prefix(d: int, D: int, first: int, budget: float | None = None) -> list[Vec]:
    """The slice of the sphere with a fixed first coordinate, in the same
    descending order; concatenating slices for first = max..min reproduces
    the full enumeration (parallel determinism contract)."""
    _check_budget(d, D, budget)
    if first * first > D:
        return []
    out = []
    rem = D - first * first
    if d == 3:
        for x in range(isqrt(rem), -1, -1):
            r2 = rem - x * x
            y = isqrt(r2)
            if y * y == r2:
                for sx in ((x, -x) if x else (x,)):
                    for sy in ((y, -y) if y else (y,)):
                        v = (first, sx, sy)
                        if vector_gcd(v) == 1:
                            out.append(v)
    else:
        for tail in enumerate_tail(d - 1, rem):
            v = (first, *tail)
            if vector_gcd(v) == 1:
                out.append(v)
    out.sort(reverse=True)
    return out


def enumerate_tail(d: int, D: int) -> list[Vec]:
    """All integer vectors (not necessarily primitive) with squared norm D."""
    if D == 0:
        return [(0,) * d]
    out = []
    a = [0] * d

    def rec(i: int, rem: int):
        if i == d - 1:
            y = isqrt(rem)
            if y * y == rem:
                a[i] = y
                out.append(tuple(a))
                a[i] = 0
            return
        for x in range(isqrt(rem), -1, -1):
            a[i] = x
            rec(i + 1, rem - x * x)
        a[i] = 0

    rec(0, D)
    res = []
    for prof in out:
        res.extend(_expand_signs(prof))
    return res


# ------------------------------------------------------------------ orbits


def _perm_parity(perm) -> int:
    n = len(perm)
    seen = [False] * n
    parity = 0
    for i in range(n):
        if seen[i]:
            continue
        j = i
        clen = 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            clen += 1
        parity ^= (clen - 1) & 1
    return parity


def canonical_orbit_rep(v: Vec) -> Vec:
    """Lexicographically largest vector in the proper signed-permutation
    orbit of v.

    The candidate is the descending sort of absolute values with positive
    signs; when all absolute values are distinct and nonzero the stabilizer
    is trivial and a parity obstruction can force the final sign flip on
    the smallest entry.
    """
    idx = sorted(range(len(v)), key=lambda i: -abs(v[i]))
    rep = tuple(abs(v[i]) for i in idx)
    negs = sum(1 for c in v if c < 0) & 1
    has_slack = (rep and rep[-1] == 0) or any(
        rep[i] == rep[i + 1] for i in range(len(rep) - 1)
    )
    if has_slack:
        return rep
    # permutation sending position k to the source index idx[k]
    parity = _perm_parity(idx)
    if (parity ^ negs) == 0:
        return rep
    return rep[:-1] + (-rep[-1],)


def stabilizer_size(v: Vec) -> int:
    """Order of the stabilizer of v in the proper signed permutation group.

    Inside the full signed permutation group the stabilizer order is
    z! 2^z prod(m_j!) over the zero count z and the multiplicities m_j of
    nonzero absolute values; it meets the proper subgroup in half of that
    unless it is trivial.
    """
    from collections import Counter

    z = sum(1 for c in v if c == 0)
    counts = Counter(abs(c) for c in v if c)
    full = factorial(z) * 2**z
    for m in counts.values():
        full *= factorial(m)
    if full == 1:
        return 1
    return full // 2


def orbit_info(v: PrimitiveVector | Vec) -> OrbitInfo:
    coords = v.coords if isinstance(v, PrimitiveVector) else tuple(v)
    stab = stabilizer_size(coords)
    order = group_order(len(coords))
    assert order % stab == 0
    return OrbitInfo(canonical_orbit_rep(coords), stab, order // stab)


def proper_signed_permutations(d: int):
    """All proper signed permutation matrices, as row-major tuples.

    Exponential in d; intended for d <= 4 oracles and for expanding orbit
    representatives.
    """
    from itertools import permutations

    out = []
    for perm in permutations(range(d)):
        pparity = _perm_parity(perm)
        for mask in range(1 << d):
            negs = bin(mask).count("1") & 1
            if negs ^ pparity:
                continue
            m = tuple(
                tuple(
                    (-1 if mask >> i & 1 else 1) * (1 if perm[i] == j else 0)
                    for j in range(d)
                )
                for i in range(d)
            )
            out.append(m)
    assert len(out) == group_order(d)
    return out


def apply_matrix(m, v: Vec) -> Vec:
    return tuple(sum(m[i][j] * v[j] for j in range(len(v))) for i in range(len(m)))


def stabilizer_fraction(d: int, D: int, budget: float | None = None) -> Fraction:
    """Exact fraction of sphere vectors with a nontrivial proper stabilizer.

    Counted on non-negative coordinate profiles with sign multiplicities,
    so no full sign expansion is needed. Spheres at large admissible D have
    vanishing fractions; small spotty spheres can give 1.
    """
    _check_budget(d, D, budget)
    total = 0
    fixed = 0
    for prof in _nonneg_profiles(d, D):
        mult = 2 ** sum(1 for c in prof if c)
        total += mult
        if stabilizer_size(prof) > 1:
            fixed += mult
    if total == 0:
        raise ValueError(f"empty sphere for d={d}, D={D}")
    return Fraction(fixed, total)
