"""Exact integer and rational linear algebra on small matrices.

Everything runs on Python ints and fractions.Fraction, so identities
downstream can be asserted as equalities rather than approximations.
Matrices are row-major lists of lists (or tuples of tuples when frozen
into hashable keys); vectors are tuples of ints.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

Vec = tuple[int, ...]


class NotPositiveDefinite(ValueError):
    """Raised when a Gram matrix fails the exact positivity test."""


# --------------------------------------------------------------- basics


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with g = gcd(a, b) >= 0 and s*a + t*b = g."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def vector_gcd(v) -> int:
    g = 0
    for c in v:
        g = gcd(g, c)
    return g


def dot(u, v) -> int:
    return sum(a * b for a, b in zip(u, v, strict=True))


def mat_vec(m, v):
    return tuple(dot(row, v) for row in m)


def mat_mul(a, b):
    n, k, m = len(a), len(b), len(b[0])
    return [[sum(a[i][t] * b[t][j] for t in range(k)) for j in range(m)] for i in range(n)]


def transpose(m):
    return [list(col) for col in zip(*m)]


def identity_matrix(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_det(m) -> int:
    """Fraction-free Bareiss determinant of an integer matrix."""
    a = [list(row) for row in m]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def mat_inv_unimodular(u):
    """Exact inverse of an integer matrix with determinant +-1."""
    n = len(u)
    d = mat_det(u)
    if d not in (1, -1):
        raise ValueError("matrix is not unimodular")
    aug = [[Fraction(u[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
           for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col])
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    out = [[aug[i][n + j] for j in range(n)] for i in range(n)]
    assert all(x.denominator == 1 for row in out for x in row)
    return [[int(x) for x in row] for row in out]


class _Echelon:
    """Incremental rational row echelon used for exact independence tests."""

    def __init__(self, rows=None):
        self.rows = list(rows) if rows else []  # reduced rows, leading pivot first

    def clone(self):
        return _Echelon(self.rows)

    def reduce(self, v):
        r = [Fraction(c) for c in v]
        for row in self.rows:
            p = next(i for i, c in enumerate(row) if c)
            if r[p]:
                f = r[p] / row[p]
                r = [a - f * b for a, b in zip(r, row)]
        return r

    def would_extend(self, v) -> bool:
        return any(self.reduce(v))

    def add(self, v) -> bool:
        r = self.reduce(v)
        if not any(r):
            return False
        self.rows = self.rows + [r]
        return True


# --------------------------------------------------- completion and kernels


def ext_complete(v: Vec) -> Vec:
    """Integer vector w with <w, v> = 1, built from an extended-gcd chain.

    Requires v primitive (gcd of entries 1). The chain stops as soon as the
    running gcd hits 1, which keeps the coefficients small.
    """
    if not any(v):
        raise ValueError("zero vector has no complement")
    if vector_gcd(v) != 1:
        raise ValueError("vector is not primitive")
    d = len(v)
    g = 0
    w = [0] * d
    for i, c in enumerate(v):
        if g == 1:
            break
        g2, s, t = xgcd(g, c)
        w = [s * x for x in w]
        w[i] = t
        g = g2
    assert dot(w, v) == 1
    return tuple(w)


def kernel_basis(v: Vec) -> list[Vec]:
    """Basis of the full sublattice {x in Z^d : <x, v> = 0} for primitive v.

    Runs integer row elimination on the identity, driving v to e_d with
    determinant-one 2x2 blocks; the first d-1 transformed rows span the
    kernel and stack with v into a matrix of determinant +-||v||^2.
    """
    if vector_gcd(v) != 1:
        raise ValueError("vector is not primitive")
    d = len(v)
    if d < 2:
        raise ValueError("need dimension >= 2")
    rows = identity_matrix(d)
    a = list(v)
    for i in range(d - 1):
        p, b = a[d - 1], a[i]
        if b == 0:
            continue
        g, s, t = xgcd(p, b)
        rp = [s * rows[d - 1][k] + t * rows[i][k] for k in range(d)]
        ri = [-(b // g) * rows[d - 1][k] + (p // g) * rows[i][k] for k in range(d)]
        rows[d - 1], rows[i] = rp, ri
        a[d - 1], a[i] = g, 0
    if a[d - 1] == -1:
        # happens only when every other coordinate is zero, so the loop
        # never replaced the seed entry
        rows[d - 1] = [-c for c in rows[d - 1]]
        a[d - 1] = 1
    assert a[d - 1] == 1 and not any(a[:-1])
    return [tuple(r) for r in rows[: d - 1]]


def solve_rational(a, b):
    """Exact solution x of a x = b over the rationals (a square, invertible)."""
    n = len(a)
    m = [[Fraction(a[i][j]) for j in range(n)] + [Fraction(b[i])] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:
            raise ValueError("singular matrix")
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col]:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return tuple(m[i][n] for i in range(n))


# ------------------------------------------------------------ LLL on Grams


def _integral_gso(g):
    """Integral Gram-Schmidt data for a Gram matrix.

    Returns (lam, d) with d[0] = 1, d[i] = det of the leading i x i block,
    and lam[i][j] = d[j+1] * mu_ij for j < i. All divisions are exact.
    """
    n = len(g)
    lam = [[0] * n for _ in range(n)]
    d = [1] * (n + 1)
    for i in range(n):
        for j in range(i + 1):
            u = g[i][j]
            for k in range(j):
                u = (d[k + 1] * u - lam[i][k] * lam[j][k]) // d[k]
            if j < i:
                lam[i][j] = u
            else:
                d[i + 1] = u
    return lam, d


def _round_div(a: int, b: int) -> int:
    """Nearest integer to a/b with b > 0 (ties round up)."""
    return (2 * a + b) // (2 * b)


def lll_reduce_gram(g, delta: Fraction = Fraction(3, 4)):
    """LLL-reduce a positive definite integer Gram matrix, exactly.

    Returns (g_red, u) with u unimodular and g_red = u^T g u. Positivity is
    detected via exact leading principal minors; failure raises
    NotPositiveDefinite. delta defaults to 3/4.
    """
    n = len(g)
    if any(len(row) != n for row in g):
        raise ValueError("matrix is not square")
    if any(g[i][j] != g[j][i] for i in range(n) for j in range(i)):
        raise ValueError("matrix is not symmetric")
    c = [list(row) for row in g]
    h = identity_matrix(n)
    lam, d = _integral_gso(c)
    if any(x <= 0 for x in d):
        raise NotPositiveDefinite("Gram matrix is not positive definite")
    if n == 1:
        return [row[:] for row in c], h

    dn, dd = delta.numerator, delta.denominator

    def size_reduce(k, j):
        q = _round_div(lam[k][j], d[j + 1])
        if q == 0:
            return
        for i in range(n):
            h[i][k] -= q * h[i][j]
        ckk = c[k][k] - 2 * q * c[k][j] + q * q * c[j][j]
        for i in range(n):
            c[k][i] -= q * c[j][i]
        for i in range(n):
            c[i][k] = c[k][i]
        c[k][k] = ckk
        lam[k][j] -= q * d[j + 1]
        for i in range(j):
            lam[k][i] -= q * lam[j][i]

    k = 1
    while k < n:
        size_reduce(k, k - 1)
        # Lovasz condition cleared of denominators:
        # d[k+1]/d[k] >= (delta - mu^2) d[k]/d[k-1]
        if dd * d[k + 1] * d[k - 1] < dn * d[k] * d[k] - dd * lam[k][k - 1] ** 2:
            for i in range(n):
                h[i][k], h[i][k - 1] = h[i][k - 1], h[i][k]
            c[k], c[k - 1] = c[k - 1], c[k]
            for row in c:
                row[k], row[k - 1] = row[k - 1], row[k]
            lam, d = _integral_gso(c)
            k = max(k - 1, 1)
        else:
            for j in range(k - 2, -1, -1):
                size_reduce(k, j)
            k += 1
    return c, h


# ------------------------------------------------------ short vector search


def _gso_fractions(g):
    n = len(g)
    mu = [[Fraction(0)] * n for _ in range(n)]
    bstar = [Fraction(0)] * n
    for i in range(n):
        for j in range(i):
            s = Fraction(g[i][j])
            for k in range(j):
                s -= mu[j][k] * mu[i][k] * bstar[k]
            if bstar[j] == 0:
                raise NotPositiveDefinite("Gram matrix is degenerate")
            mu[i][j] = s / bstar[j]
        bi = Fraction(g[i][i])
        for k in range(i):
            bi -= mu[i][k] ** 2 * bstar[k]
        if bi <= 0:
            raise NotPositiveDefinite("Gram matrix is not positive definite")
        bstar[i] = bi
    return mu, bstar


def _int_range_for(c: Fraction, r2: Fraction):
    """All integers x with (x + c)^2 <= r2, as an inclusive (lo, hi) range."""
    if r2 < 0:
        return 1, 0
    approx = float(r2) ** 0.5
    m = -c
    lo = int(float(m) - approx) - 2
    hi = int(float(m) + approx) + 2
    while (lo + c) ** 2 > r2:
        lo += 1
        if lo > hi:
            return 1, 0
    while (hi + c) ** 2 > r2:
        hi -= 1
    return lo, hi


def qform(g, x) -> int:
    """Evaluate the quadratic form x^T g x."""
    return sum(g[i][j] * x[i] * x[j] for i in range(len(g)) for j in range(len(g)))


def short_vectors(g, bound: int):
    """All nonzero x with x^T g x <= bound, up to sign.

    Returns a sorted list of (x, norm) with the first nonzero coordinate of
    x positive; callers mirror when they need the full sign orbit. Exact
    Fincke-Pohst descent over the rational Gram-Schmidt data.
    """
    n = len(g)
    mu, bstar = _gso_fractions(g)
    x = [0] * n
    found = []

    def descend(i, rem):
        c = Fraction(0)
        for j in range(i + 1, n):
            if x[j]:
                c += mu[j][i] * x[j]
        lo, hi = _int_range_for(c, rem / bstar[i])
        for xi in range(lo, hi + 1):
            x[i] = xi
            nrem = rem - bstar[i] * (xi + c) ** 2
            if nrem < 0:
                x[i] = 0
                continue
            if i == 0:
                if any(x):
                    found.append(tuple(x))
            else:
                descend(i - 1, nrem)
            x[i] = 0

    descend(n - 1, Fraction(bound))
    out = []
    for v in found:
        first = next(cc for cc in v if cc)
        if first < 0:
            continue
        out.append((v, qform(g, v)))
    out.sort(key=lambda t: (t[1], t[0]))
    return out


def successive_minima(g) -> list[int]:
    """The successive minima of a positive definite integer Gram matrix."""
    n = len(g)
    red, _ = lll_reduce_gram(g)
    bound = max(red[i][i] for i in range(n))
    vs = short_vectors(red, bound)
    ech = _Echelon()
    mins = []
    for v, q in vs:
        if ech.add(v):
            mins.append(q)
            if len(mins) == n:
                break
    assert len(mins) == n
    return mins


# ------------------------------------------------------- canonical forms


def _signed_candidates(vs):
    out = []
    for v, q in vs:
        out.append((v, q))
        out.append((tuple(-c for c in v), q))
    return out


def _minima_and_candidates(red):
    """Short-vector pool up to the largest successive minimum of `red`."""
    n = len(red)
    bound = max(red[i][i] for i in range(n))
    vs = short_vectors(red, bound)
    ech = _Echelon()
    mins = []
    for v, q in vs:
        if ech.add(v):
            mins.append(q)
            if len(mins) == n:
                break
    if len(mins) < n:
        raise NotPositiveDefinite("lattice rank defect")
    lam_max = mins[-1]
    cands = _signed_candidates([(v, q) for v, q in vs if q <= lam_max])
    return mins, cands


def _small_det(cols):
    n = len(cols)
    m = [[cols[j][i] for j in range(n)] for i in range(n)]
    return mat_det(m)


def _min_diagonal(n, by_norm, norms):
    """Lexicographically least diagonal realizable by a basis of short vectors."""

    def dfs(chosen, ech, start_idx):
        if len(chosen) == n:
            return [q for _, q in chosen] if abs(_small_det([v for v, _ in chosen])) == 1 else None
        for idx in range(start_idx, len(norms)):
            q = norms[idx]
            for v in by_norm[q]:
                if not ech.would_extend(v):
                    continue
                e2 = ech.clone()
                e2.add(v)
                r = dfs(chosen + [(v, q)], e2, idx)
                if r is not None:
                    return r
        return None

    diag = dfs([], _Echelon(), 0)
    assert diag is not None
    return diag


def _canonical_search(red_key: tuple, want_det: int):
    """Unique minimal Gram matrix over basis changes of determinant want_det.

    The total order: diagonal entries first (ascending), then off-diagonal
    entries column by column, preferring larger (so the first nonzero
    off-diagonal of the winner is non-negative). Deterministic exhaustive
    search with branch-and-bound over bases of short vectors.
    """
    red = [list(r) for r in red_key]
    n = len(red)
    _, cands = _minima_and_candidates(red)
    by_norm: dict[int, list] = {}
    for v, q in cands:
        by_norm.setdefault(q, []).append(v)
    for q in by_norm:
        by_norm[q].sort()
    norms = sorted(by_norm)
    diag = _min_diagonal(n, by_norm, norms)

    gcache = {v: mat_vec(red, v) for v, _ in cands}
    best: dict = {"key": None, "cols": None}

    def dfs(chosen, ech, keyacc):
        k = len(chosen)
        if k == n:
            if _small_det(chosen) != want_det:
                return
            key = tuple(keyacc)
            if best["key"] is None or key < best["key"]:
                best["key"] = key
                best["cols"] = list(chosen)
            return
        opts = []
        for v in by_norm.get(diag[k], ()):
            if not ech.would_extend(v):
                continue
            gv = gcache[v]
            comp = tuple(-dot(chosen[i], gv) for i in range(k))
            opts.append((comp, v))
        opts.sort()
        for comp, v in opts:
            cand = keyacc + list(comp)
            if best["key"] is not None and tuple(cand) > best["key"][: len(cand)]:
                break
            e2 = ech.clone()
            e2.add(v)
            dfs(chosen + [v], e2, cand)

    dfs([], _Echelon(), [])
    assert best["cols"] is not None
    cols = best["cols"]
    t = [[cols[j][i] for j in range(n)] for i in range(n)]
    gcan = mat_mul(transpose(t), mat_mul(red, t))
    return tuple(tuple(row) for row in gcan), tuple(tuple(row) for row in t)


@lru_cache(maxsize=65536)
def _canonical_cached(red_key: tuple, want_det: int):
    return _canonical_search(red_key, want_det)


def canonical_gram(g):
    """Canonical representative of the proper (determinant +1) class of g.

    Returns (g_can, u) with u^T g u = g_can and det u = +1, so equivalent
    inputs related by an orientation-preserving basis change map to the
    same output. Only dimensions up to 4 are supported; there a basis made
    of vectors at the successive minima always exists, which the search
    enumerates exhaustively. Larger dimensions raise ValueError and callers
    fall back to plain LLL reduction.
    """
    n = len(g)
    if n > 4:
        raise ValueError("canonical form supported only up to dimension 4")
    if n == 0:
        raise ValueError("empty matrix")
    red, h = lll_reduce_gram(g)
    if n == 1:
        return (tuple(tuple(row) for row in red), tuple(tuple(r) for r in h))
    red_key = tuple(tuple(row) for row in red)
    want = mat_det(h)
    assert want in (1, -1)
    gcan, t = _canonical_cached(red_key, want)
    u = mat_mul(h, [list(r) for r in t])
    assert mat_det(u) == 1
    return gcan, tuple(tuple(row) for row in u)


@lru_cache(maxsize=65536)
def _automorphisms_cached(gkey: tuple, proper: bool):
    g = [list(r) for r in gkey]
    n = len(g)
    bound = max(g[i][i] for i in range(n))
    cands = _signed_candidates(short_vectors(g, bound))
    by_norm: dict[int, list] = {}
    for v, q in cands:
        by_norm.setdefault(q, []).append(v)
    gcache = {v: mat_vec(g, v) for v, _ in cands}
    out = []

    def dfs(chosen):
        k = len(chosen)
        if k == n:
            dt = _small_det(chosen)
            assert dt in (1, -1)
            if not proper or dt == 1:
                cols = chosen
                out.append(tuple(tuple(cols[j][i] for j in range(n)) for i in range(n)))
            return
        for v in by_norm.get(g[k][k], ()):
            gv = gcache[v]
            if all(dot(chosen[i], gv) == g[i][k] for i in range(k)):
                dfs(chosen + [v])

    dfs([])
    return tuple(sorted(out))


def gram_automorphisms(g, proper: bool = True):
    """All integral isometries t of the form g (t^T g t = g), as row-major
    tuples. With proper=True only determinant +1 elements are returned."""
    gkey = tuple(tuple(row) for row in g)
    return _automorphisms_cached(gkey, proper)
