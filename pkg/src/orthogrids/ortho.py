"""Orthogonal-complement lattices of primitive vectors, their shapes, and
marked grid points.

For a primitive v in Z^d the construction takes the rank d-1 lattice of
integer vectors orthogonal to v together with the translation class of a
dual vector w with <w, v> = 1 projected into the orthogonal hyperplane.
Everything is exact: Gram matrices stay integral, marked points are
Fractions whose denominators divide the squared norm D of v.

Any two frames for the same v (any basis of the orthogonal lattice, any
valid w) produce equal ShapeClass and GridClass values; that invariance is
the meaning of the records and is fuzzed heavily in the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .linalg import (
    canonical_gram,
    dot,
    ext_complete,
    gram_automorphisms,
    kernel_basis,
    lll_reduce_gram,
    mat_det,
    mat_inv_unimodular,
    mat_vec,
    solve_rational,
)
from .sphere import PrimitiveVector

Vec = tuple[int, ...]
Mat = tuple[tuple[int, ...], ...]


class InternalInvariantError(AssertionError):
    """A mathematically guaranteed property failed; indicates a bug, not
    bad input."""


@dataclass(frozen=True)
class OrthoFrame:
    """A primitive vector v, a basis v_1..v_{d-1} of its orthogonal
    lattice, and a dual vector w with <w, v> = 1.

    The basis is normalized to positive orientation, making the d x d
    matrix with columns v_1, ..., v_{d-1}, w unimodular of determinant +1
    (equivalently det(v_1, ..., v_{d-1}, v) = +D).
    """

    v: Vec
    D: int
    basis: Mat
    w: Vec

    @property
    def g_v(self) -> Mat:
        """Columns v_1, ..., v_{d-1}, w as a d x d integer matrix."""
        d = len(self.v)
        cols = list(self.basis) + [self.w]
        return tuple(tuple(cols[j][i] for j in range(d)) for i in range(d))


def _as_coords(v) -> tuple[Vec, int]:
    if isinstance(v, PrimitiveVector):
        return v.coords, v.D
    coords = tuple(int(c) for c in v)
    pv = PrimitiveVector(len(coords), coords, sum(c * c for c in coords))
    return pv.coords, pv.D


def ortho_frame(v, basis=None, w=None) -> OrthoFrame:
    """Build a frame for v, defaulting or validating basis and w.

    basis must be d-1 integer vectors orthogonal to v spanning the full
    orthogonal lattice; w must satisfy <w, v> = 1. Bases of either
    orientation are accepted and normalized.
    """
    coords, D = _as_coords(v)
    d = len(coords)
    if w is None:
        w = ext_complete(coords)
    else:
        w = tuple(int(c) for c in w)
        if len(w) != d or dot(w, coords) != 1:
            raise ValueError("w must pair to 1 with v")
    if basis is None:
        rows = [list(r) for r in kernel_basis(coords)]
    else:
        rows = [[int(c) for c in r] for r in basis]
        if len(rows) != d - 1 or any(len(r) != d for r in rows):
            raise ValueError("basis must have d-1 vectors of length d")
        for r in rows:
            if dot(r, coords) != 0:
                raise ValueError("basis vector not orthogonal to v")
    det = mat_det([list(r) for r in rows] + [list(coords)])
    if abs(det) != D:
        raise ValueError("basis does not span the full orthogonal lattice")
    if det < 0:
        rows[-1] = [-c for c in rows[-1]]
    frame = OrthoFrame(coords, D, tuple(tuple(r) for r in rows), w)
    if mat_det([list(r) for r in frame.g_v]) != 1:
        raise InternalInvariantError("frame matrix is not orientation-normalized")
    return frame


@dataclass(frozen=True)
class GramForm:
    """Integral Gram matrix of an orthogonal-lattice basis; det M = D and
    the entries of M are coprime (both are theorems for these lattices)."""

    M: Mat
    D: int


def gram_form(frame: OrthoFrame) -> GramForm:
    b = frame.basis
    m = tuple(tuple(dot(bi, bj) for bj in b) for bi in b)
    if mat_det([list(r) for r in m]) != frame.D:
        raise InternalInvariantError("orthogonal lattice covolume mismatch")
    g = 0
    for row in m:
        for e in row:
            g = math.gcd(g, e)
    if g != 1:
        raise InternalInvariantError("gram entries share a common factor")
    return GramForm(m, frame.D)


def projection_coords(frame: OrthoFrame) -> tuple[Fraction, ...]:
    """Coordinates, in the frame basis, of w projected onto the orthogonal
    hyperplane of v. Denominators divide D.

    The projection of w is w - v/D, and its pairing with each basis vector
    equals <w, v_i>, so the coordinates solve M t0 = (<w, v_i>)_i exactly.
    """
    m = gram_form(frame).M
    rhs = tuple(dot(bi, frame.w) for bi in frame.basis)
    t0 = solve_rational([list(r) for r in m], rhs)
    for f in t0:
        if frame.D % f.denominator != 0:
            raise InternalInvariantError("marked point denominator exceeds D")
    return t0


@dataclass(frozen=True)
class ShapeClass:
    """Equivalence class of the orthogonal lattice under proper unimodular
    basis change, as a distinguished Gram matrix with det = D.

    canonical is True when canonical_gram is the exact class canonical
    form (always for dim <= 4); in higher rank the Gram is only
    LLL-reduced and records a class member, not a class invariant.
    """

    dim: int
    D: int
    canonical_gram: Mat
    canonical: bool

    def __post_init__(self):
        if mat_det([list(r) for r in self.canonical_gram]) != self.D:
            raise InternalInvariantError("shape determinant mismatch")

    def normalized_gram(self) -> list[list[float]]:
        """Float Gram scaled to determinant 1."""
        s = float(self.D) ** (-1.0 / self.dim)
        return [[s * e for e in row] for row in self.canonical_gram]


@dataclass(frozen=True)
class GridClass:
    """Shape plus the marked torus point, reduced to a class invariant.

    t is the lexicographic minimum of the marked point over the proper
    automorphism group of canonical_gram (which contains -I, so the
    residual sign ambiguity of the marked point is folded here); t_orbit
    is the full deduped orbit, which downstream statistics unfold to
    restore uniform reference weighting.
    """

    shape: ShapeClass
    t: tuple[Fraction, ...]
    t_orbit: tuple[tuple[Fraction, ...], ...]


def shape_from_frame(frame: OrthoFrame) -> ShapeClass:
    m = gram_form(frame).M
    n = len(m)
    if n <= 4:
        gc, _ = canonical_gram([list(r) for r in m])
        return ShapeClass(n, frame.D, tuple(tuple(r) for r in gc), True)
    gr, _ = lll_reduce_gram([list(r) for r in m])
    return ShapeClass(n, frame.D, tuple(tuple(r) for r in gr), False)


def shape(v) -> ShapeClass:
    return shape_from_frame(ortho_frame(v))


def grid_from_frame(frame: OrthoFrame) -> GridClass:
    m = gram_form(frame).M
    n = len(m)
    t0 = projection_coords(frame)
    if n <= 4:
        gc, u = canonical_gram([list(r) for r in m])
        canonical = True
    else:
        gc, u = lll_reduce_gram([list(r) for r in m])
        canonical = False
    u_inv = mat_inv_unimodular(u)
    t1 = tuple(x % 1 for x in mat_vec(u_inv, t0))
    auts = gram_automorphisms([list(r) for r in gc], proper=True)
    orbit = {tuple(x % 1 for x in mat_vec(a, t1)) for a in auts}
    t_min = min(orbit)
    for f in t_min:
        if frame.D % f.denominator != 0:
            raise InternalInvariantError("marked point denominator exceeds D")
    return GridClass(
        ShapeClass(n, frame.D, tuple(tuple(r) for r in gc), canonical),
        t_min,
        tuple(sorted(orbit)),
    )


def grid(v) -> GridClass:
    return grid_from_frame(ortho_frame(v))


# ---------------------------------------------------------- modular domain


def modular_point_exact(gram2) -> tuple[Fraction, Fraction]:
    """Reduce a rank-2 Gram to the standard fundamental domain and return
    (x, y^2) of the corresponding upper half plane point, exactly.

    The domain is -1/2 < x <= 1/2, x^2 + y^2 >= 1, with the boundary arc
    normalized to x >= 0. Proper basis changes only, so mirror classes map
    to opposite x signs in the interior.
    """
    if isinstance(gram2, ShapeClass):
        gram2 = gram2.canonical_gram
    a = Fraction(gram2[0][0])
    b = Fraction(gram2[0][1])
    c = Fraction(gram2[1][1])
    if Fraction(gram2[1][0]) != b:
        raise ValueError("gram matrix must be symmetric")
    if a <= 0 or a * c - b * b <= 0:
        raise ValueError("gram matrix must be positive definite")
    while True:
        # shear so that -a < 2b <= a (ties land on +a, i.e. x = +1/2)
        k = (2 * b + a) // (2 * a)
        if (2 * b + a) % (2 * a) == 0:
            k -= 1
        b, c = b - k * a, c - 2 * k * b + k * k * a
        if c < a:
            a, b, c = c, -b, a
            continue
        if a == c and b < 0:
            b = -b
        break
    return b / a, (a * c - b * b) / (a * a)


def modular_point(gram2) -> tuple[float, float]:
    """Float (x, y) of the fundamental domain point of a rank-2 Gram or
    dim-2 shape; floating point enters only at this output boundary."""
    x, y2 = modular_point_exact(gram2)
    return float(x), math.sqrt(float(y2))
