"""Local invariants of rational quadratic forms: square classes, Hilbert
symbols, diagonalization, Hasse invariants, isotropy tests, and spinor
norms of exact special-orthogonal matrices via constructive reflection
factorization.

Everything runs on exact rationals. The float boundary is never crossed:
symbols are +-1, square classes are labels, factorizations are tuples of
integer vectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .linalg import mat_det

INF = "inf"

_LABELS = {(0, 0): "1", (0, 1): "r", (1, 0): "p", (1, 1): "rp"}
_BITS = {v: k for k, v in _LABELS.items()}


@dataclass(frozen=True)
class SquareClass:
    """Class of a nonzero rational in Q_place modulo squares.

    For an odd prime the classes form the four-element group {1, r, p, rp}
    (r a non-residue unit, p the uniformizer); at the real place the
    classes are {+, -}.
    """

    place: int | str
    label: str

    def __post_init__(self):
        if self.place == INF:
            if self.label not in ("+", "-"):
                raise ValueError("real place labels are + and -")
        elif self.label not in _BITS:
            raise ValueError(f"unknown label {self.label!r}")

    def __mul__(self, other: "SquareClass") -> "SquareClass":
        if self.place != other.place:
            raise ValueError("cannot multiply classes at different places")
        if self.place == INF:
            sign = "+" if self.label == other.label else "-"
            return SquareClass(INF, sign)
        a, b = _BITS[self.label], _BITS[other.label]
        return SquareClass(self.place, _LABELS[(a[0] ^ b[0], a[1] ^ b[1])])


def _check_odd_prime(p: int):
    if p < 3 or p % 2 == 0:
        raise ValueError("place must be an odd prime")
    f = 3
    while f * f <= p:
        if p % f == 0:
            raise ValueError("place must be an odd prime")
        f += 2


def _val_unit(t: Fraction, p: int) -> tuple[int, Fraction]:
    """t = p^k * u with u a p-adic unit; returns (k, u)."""
    k = 0
    num, den = t.numerator, t.denominator
    while num % p == 0:
        num //= p
        k += 1
    while den % p == 0:
        den //= p
        k -= 1
    return k, Fraction(num, den)


def _legendre_unit(u: Fraction, p: int) -> int:
    """Legendre symbol of a p-adic unit, via num * den^{-1} mod p."""
    m = u.numerator % p * pow(u.denominator % p, -1, p) % p
    return 1 if pow(m, (p - 1) // 2, p) == 1 else -1


def smallest_nonresidue(p: int) -> int:
    """Smallest positive quadratic non-residue mod p; represents r."""
    _check_odd_prime(p)
    for r in range(2, p):
        if pow(r, (p - 1) // 2, p) == p - 1:
            return r
    raise AssertionError("unreachable for odd prime p")


def square_class(t, place) -> SquareClass:
    """Square class of a nonzero rational at an odd prime or at "inf"."""
    t = Fraction(t)
    if t == 0:
        raise ValueError("square class of zero is undefined")
    if place == INF:
        return SquareClass(INF, "+" if t > 0 else "-")
    _check_odd_prime(place)
    k, u = _val_unit(t, place)
    res = 0 if _legendre_unit(u, place) == 1 else 1
    return SquareClass(place, _LABELS[(k & 1, res)])


def is_square_at(t, place) -> bool:
    return square_class(t, place).label in ("1", "+")


# --------------------------------------------------------- hilbert symbol


def _mod8_unit(u: Fraction) -> int:
    return u.numerator % 8 * pow(u.denominator % 8, -1, 8) % 8


def hilbert_symbol(a, b, place) -> int:
    """Hilbert symbol (a, b) at an odd prime, at 2, or at "inf".

    Symmetric and bimultiplicative; satisfies the product formula over all
    places (exercised by tests).
    """
    a, b = Fraction(a), Fraction(b)
    if a == 0 or b == 0:
        raise ValueError("hilbert symbol needs nonzero arguments")
    if place == INF:
        return -1 if a < 0 and b < 0 else 1
    if place == 2:
        alpha, u = _val_unit(a, 2)
        beta, w = _val_unit(b, 2)
        mu, mw = _mod8_unit(u), _mod8_unit(w)
        eps_u, eps_w = (mu - 1) // 2 & 1, (mw - 1) // 2 & 1
        om_u, om_w = (mu * mu - 1) // 8 & 1, (mw * mw - 1) // 8 & 1
        e = eps_u * eps_w + alpha * om_w + beta * om_u
        return -1 if e & 1 else 1
    _check_odd_prime(place)
    alpha, u = _val_unit(a, place)
    beta, w = _val_unit(b, place)
    eps_p = (place - 1) // 2 & 1
    s = 1
    if alpha & 1 and beta & 1 and eps_p:
        s = -s
    if beta & 1 and _legendre_unit(u, place) == -1:
        s = -s
    if alpha & 1 and _legendre_unit(w, place) == -1:
        s = -s
    return s


# --------------------------------------------------------- diagonalization


@dataclass(frozen=True)
class DiagonalForm:
    """Rationally congruent diagonal representative of a symmetric form."""

    entries: tuple[Fraction, ...]

    def __post_init__(self):
        if any(e == 0 for e in self.entries):
            raise ValueError("diagonal form entries must be nonzero")


def _frac_matrix(m) -> list[list[Fraction]]:
    rows = [[Fraction(e) for e in row] for row in m]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("matrix must be square")
    for i in range(n):
        for j in range(i):
            if rows[i][j] != rows[j][i]:
                raise ValueError("matrix must be symmetric")
    return rows


def diagonalize_with_transform(m) -> tuple[tuple[Fraction, ...], list[list[Fraction]]]:
    """(entries, S) with S^T M S = diag(entries), S rational invertible."""
    a = _frac_matrix(m)
    n = len(a)
    s = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]

    def add_col(dst, src, c):
        # basis change e_dst += c * e_src, applied symmetrically
        for i in range(n):
            a[i][dst] += c * a[i][src]
        for j in range(n):
            a[dst][j] += c * a[src][j]
        for i in range(n):
            s[i][dst] += c * s[i][src]

    def swap_col(i, j):
        for r in range(n):
            a[r][i], a[r][j] = a[r][j], a[r][i]
        for c in range(n):
            a[i][c], a[j][c] = a[j][c], a[i][c]
        for r in range(n):
            s[r][i], s[r][j] = s[r][j], s[r][i]

    for k in range(n):
        if a[k][k] == 0:
            pivot = next((i for i in range(k + 1, n) if a[i][i] != 0), None)
            if pivot is not None:
                swap_col(k, pivot)
            else:
                off = next((j for j in range(k + 1, n) if a[k][j] != 0), None)
                if off is None:
                    raise ValueError("matrix is singular")
                add_col(k, off, 1)
        for i in range(k + 1, n):
            if a[k][i] != 0:
                add_col(i, k, -a[k][i] / a[k][k])
    return tuple(a[i][i] for i in range(n)), s


def diagonalize(m) -> DiagonalForm:
    """Diagonal form rationally congruent to a nonsingular symmetric M;
    the product of entries equals det(M) up to a square."""
    entries, _ = diagonalize_with_transform(m)
    return DiagonalForm(entries)


def hasse_invariant(m, place) -> int:
    """Product of Hilbert symbols (a_i, a_j) over i < j for any
    diagonalization; a rational congruence invariant at each place."""
    entries = diagonalize(m).entries
    s = 1
    for i in range(len(entries)):
        for j in range(i + 1, len(entries)):
            s *= hilbert_symbol(entries[i], entries[j], place)
    return s


def is_isotropic(m, p: int) -> bool:
    """Whether the form has a nontrivial rational zero over Q_p (p odd).

    Rank 5 and above is always isotropic; below that the standard
    discriminant and Hasse invariant criteria decide.
    """
    _check_odd_prime(p)
    entries = diagonalize(m).entries
    n = len(entries)
    if n < 2:
        raise ValueError("isotropy needs dimension >= 2")
    if n >= 5:
        return True
    disc = Fraction(1)
    for e in entries:
        disc *= e
    eps = hasse_invariant(m, p)
    if n == 2:
        return is_square_at(-disc, p)
    if n == 3:
        return eps == hilbert_symbol(-1, -disc, p)
    return (not is_square_at(disc, p)) or eps == hilbert_symbol(-1, -1, p)


# ------------------------------------------------- reflection factorization


def _bilinear(m, u, v) -> Fraction:
    return sum(u[i] * sum(m[i][j] * v[j] for j in range(len(v))) for i in range(len(u)))


def _apply_reflection_to_columns(m, u, cols):
    """tau_u applied to each column: z - 2 B(u,z)/q(u) * u."""
    q = _bilinear(m, u, u)
    out = []
    for z in cols:
        c = 2 * _bilinear(m, u, z) / q
        out.append([z[i] - c * u[i] for i in range(len(z))])
    return out


def _primitive_int_vector(u) -> tuple[int, ...]:
    l = 1
    for f in u:
        l = l * f.denominator // gcd(l, f.denominator)
    w = [int(f * l) for f in u]
    g = 0
    for c in w:
        g = gcd(g, c)
    return tuple(c // g for c in w)


def _det_rational(rows) -> Fraction:
    n = len(rows)
    l = 1
    for r in rows:
        for e in r:
            l = l * e.denominator // gcd(l, e.denominator)
    num = mat_det([[int(e * l) for e in r] for r in rows])
    return Fraction(num, l**n)


def _mat_mul_frac(a, b):
    n, k, m = len(a), len(b), len(b[0])
    return [
        [sum(a[i][t] * b[t][j] for t in range(k)) for j in range(m)] for i in range(n)
    ]


def _inv_frac(a):
    n = len(a)
    aug = [[Fraction(e) for e in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for c in range(n):
        piv = next((r for r in range(c, n) if aug[r][c] != 0), None)
        if piv is None:
            raise ValueError("matrix is singular")
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [e * inv for e in aug[c]]
        for r in range(n):
            if r != c and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [e - f * p for e, p in zip(aug[r], aug[c])]
    return [row[n:] for row in aug]


def reflection_factorization(g, m) -> list[tuple[int, ...]]:
    """Vectors u_1..u_r, r even, with g = tau_{u_1} ... tau_{u_r} exactly,
    each tau the reflection of the form M in its vector.

    Constructive pivoting moves each basis image onto its basis vector by
    a single reflection when their difference is anisotropic, with the
    standard two-reflection detour otherwise. The pivoting runs in
    coordinates that diagonalize M (where pivots are anisotropic and the
    detour cannot disturb finished pivots) and the vectors are mapped back
    and cleared to primitive integers; the product identity is then
    re-verified against g exactly.
    """
    mf = _frac_matrix(m)
    n = len(mf)
    gf = [[Fraction(e) for e in row] for row in g]
    if len(gf) != n or any(len(r) != n for r in gf):
        raise ValueError("matrix sizes differ")
    gtm = [
        [sum(gf[k][i] * mf[k][l] for k in range(n)) for l in range(n)] for i in range(n)
    ]
    gtmg = [
        [sum(gtm[i][k] * gf[k][j] for k in range(n)) for j in range(n)]
        for i in range(n)
    ]
    if gtmg != mf:
        raise ValueError("matrix does not preserve the form")
    if _det_rational(gf) != 1:
        raise ValueError("matrix must have determinant +1")

    entries, s = diagonalize_with_transform(mf)
    dmat = [
        [entries[i] if i == j else Fraction(0) for j in range(n)] for i in range(n)
    ]
    s_inv = _inv_frac(s)
    h = _mat_mul_frac(s_inv, _mat_mul_frac(gf, s))

    cols = [[h[i][j] for i in range(n)] for j in range(n)]
    used: list[list[Fraction]] = []
    for i in range(n):
        y = [Fraction(int(k == i)) for k in range(n)]
        x = cols[i]
        if x == y:
            continue
        dx = [x[k] - y[k] for k in range(n)]
        if _bilinear(dmat, dx, dx) != 0:
            cols = _apply_reflection_to_columns(dmat, dx, cols)
            used.append(dx)
        else:
            # q(x+y) = 4 q(e_i) != 0 since diagonal entries are nonzero
            sx = [x[k] + y[k] for k in range(n)]
            cols = _apply_reflection_to_columns(dmat, sx, cols)
            cols = _apply_reflection_to_columns(dmat, y, cols)
            used.append(sx)
            used.append(y)
    for j, col in enumerate(cols):
        assert all(col[i] == (1 if i == j else 0) for i in range(n))
    assert len(used) % 2 == 0 and len(used) <= 2 * n

    out = []
    for u in used:
        pulled = [sum(s[i][k] * u[k] for k in range(n)) for i in range(n)]
        out.append(_primitive_int_vector(pulled))
    # exact re-verification in the original coordinates
    prod = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for u in out:
        uf = [Fraction(c) for c in u]
        q = _bilinear(mf, uf, uf)
        refl = [
            [
                (1 if i == j else 0)
                - 2 * uf[i] * sum(mf[k][j] * uf[k] for k in range(n)) / q
                for j in range(n)
            ]
            for i in range(n)
        ]
        prod = _mat_mul_frac(prod, refl)
    assert prod == gf
    return out


def spinor_norm(g, m, place) -> SquareClass:
    """Square class of the product of q-values over a reflection
    factorization; a factorization-independent invariant of g."""
    mf = _frac_matrix(m)
    prod = Fraction(1)
    for u in reflection_factorization(g, m):
        prod *= _bilinear(mf, [Fraction(c) for c in u], [Fraction(c) for c in u])
    return square_class(prod, place)
