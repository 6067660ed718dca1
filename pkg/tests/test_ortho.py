import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _fuzz import random_primitive_vector, random_rebase
from orthogrids.linalg import mat_det
from orthogrids.ortho import (
    GridClass,
    InternalInvariantError,
    ShapeClass,
    grid,
    grid_from_frame,
    gram_form,
    modular_point,
    modular_point_exact,
    ortho_frame,
    projection_coords,
    shape,
    shape_from_frame,
)
from orthogrids.sphere import apply_matrix, proper_signed_permutations


def test_frame_examples():
    f = ortho_frame((0, 0, 1))
    assert gram_form(f).M == ((1, 0), (0, 1))
    assert f.w == (0, 0, 1)
    assert mat_det([list(r) for r in f.g_v]) == 1

    f = ortho_frame((1, 1, 1), basis=[(1, -1, 0), (0, 1, -1)], w=(1, 0, 0))
    assert gram_form(f).M == ((2, -1), (-1, 2))
    assert projection_coords(f) == (Fraction(2, 3), Fraction(1, 3))

    f = ortho_frame((1, 1, 0), basis=[(1, -1, 0), (0, 0, 1)], w=(1, 0, 0))
    assert gram_form(f).M == ((2, 0), (0, 1))
    assert projection_coords(f) == (Fraction(1, 2), Fraction(0))


def test_frame_validation():
    with pytest.raises(ValueError):
        ortho_frame((1, 1, 1), w=(1, 1, 0))  # pairs to 2
    with pytest.raises(ValueError):
        ortho_frame((1, 1, 1), basis=[(1, -1, 0), (1, 0, 1)])  # not orthogonal
    with pytest.raises(ValueError):
        # orthogonal but spans an index-2 sublattice
        ortho_frame((1, 1, 0), basis=[(2, -2, 0), (0, 0, 1)])
    with pytest.raises(ValueError):
        ortho_frame((2, 2, 0))  # imprimitive


def test_orientation_normalized_both_ways():
    # the same basis in either orientation yields det(g_v) = +1
    f1 = ortho_frame((1, 1, 0), basis=[(1, -1, 0), (0, 0, 1)], w=(1, 0, 0))
    f2 = ortho_frame((1, 1, 0), basis=[(-1, 1, 0), (0, 0, 1)], w=(1, 0, 0))
    for f in (f1, f2):
        assert mat_det([list(r) for r in f.g_v]) == 1
    assert grid_from_frame(f1) == grid_from_frame(f2)


def test_trivial_grid():
    g = grid((0, 0, 0, 1))
    assert g.t == (Fraction(0), Fraction(0), Fraction(0))
    assert g.shape.canonical_gram == ((1, 0, 0), (0, 1, 0), (0, 0, 1))


def test_grid_examples():
    g = grid((1, 1, 1))
    assert g.shape.canonical_gram == ((2, 1), (1, 2))
    assert g.shape.D == 3
    assert g.t == (Fraction(1, 3), Fraction(1, 3))
    assert g.t_orbit == (
        (Fraction(1, 3), Fraction(1, 3)),
        (Fraction(2, 3), Fraction(2, 3)),
    )

    g = grid((1, 1, 0))
    assert g.shape.canonical_gram == ((1, 0), (0, 2))
    assert g.t == (Fraction(0), Fraction(1, 2))


def test_shape_rerun_stability():
    rng = random.Random(20408)
    base = shape((3, 4, 12))
    assert base.D == 169
    f0 = ortho_frame((3, 4, 12))
    for _ in range(100):
        assert shape_from_frame(random_rebase(f0, rng)) == base


def test_grid_invariance_fuzz():
    rng = random.Random(7)
    for _ in range(40):
        d = rng.choice([3, 4, 5])
        v = random_primitive_vector(rng, d, 12)
        f0 = ortho_frame(v)
        base = grid_from_frame(f0)
        for _ in range(4):
            assert grid_from_frame(random_rebase(f0, rng)) == base
        for _ in range(3):
            m = rng.choice(proper_signed_permutations(d))
            assert grid(apply_matrix(m, v)) == base


def test_denominators_divide_D():
    rng = random.Random(11)
    for _ in range(60):
        d = rng.choice([3, 4])
        v = random_primitive_vector(rng, d, 20)
        D = sum(c * c for c in v)
        g = grid(v)
        for pt in g.t_orbit:
            for f in pt:
                assert D % f.denominator == 0
                assert 0 <= f < 1


def test_high_rank_fallback_flagged():
    s = shape((1, 1, 1, 1, 1, 0))
    assert s.dim == 5
    assert not s.canonical
    assert s.D == 5
    g = grid((1, 1, 1, 1, 1, 0))
    assert not g.shape.canonical


def test_normalized_gram_det_one():
    import numpy as np

    for v in [(1, 1, 1), (3, 4, 12), (1, 2, 3, 4, 5)]:
        s = shape(v)
        assert abs(np.linalg.det(np.array(s.normalized_gram())) - 1.0) < 1e-12


def test_modular_point_examples():
    assert modular_point([[1, 0], [0, 1]]) == (0.0, 1.0)
    x, y = modular_point([[2, -1], [-1, 2]])
    assert x == 0.5 and abs(y - math.sqrt(3) / 2) < 1e-15
    x, y = modular_point([[1, 0], [0, 2]])
    assert x == 0.0 and abs(y - math.sqrt(2)) < 1e-15
    # mirror classes land at opposite interior x
    assert modular_point_exact([[3, 1], [1, 4]])[0] == Fraction(1, 3)
    assert modular_point_exact([[3, -1], [-1, 4]])[0] == Fraction(-1, 3)


def test_modular_point_boundary_ties():
    # vertical boundary: x = -1/2 is normalized to +1/2
    x, _ = modular_point_exact([[2, -1], [-1, 3]])
    assert x == Fraction(1, 2)
    # unit arc: x >= 0
    x, y2 = modular_point_exact([[5, -2], [-2, 5]])
    assert x * x + y2 == 1 and x >= 0


def test_modular_point_rejects_bad_input():
    with pytest.raises(ValueError):
        modular_point([[1, 2], [2, 1]])  # indefinite
    with pytest.raises(ValueError):
        modular_point([[1, 2], [3, 1]])  # asymmetric


@st.composite
def binary_grams(draw):
    a = draw(st.integers(min_value=1, max_value=30))
    b = draw(st.integers(min_value=-30, max_value=30))
    c = draw(st.integers(min_value=1, max_value=30))
    if a * c - b * b <= 0:
        c = b * b // a + 1 + draw(st.integers(min_value=0, max_value=5))
    return [[a, b], [b, c]]


@given(binary_grams())
@settings(max_examples=200, deadline=None)
def test_modular_point_lands_in_domain(g):
    x, y2 = modular_point_exact(g)
    assert -Fraction(1, 2) < x <= Fraction(1, 2)
    assert x * x + y2 >= 1
    if x * x + y2 == 1:
        assert x >= 0


@given(binary_grams(), st.integers(min_value=-3, max_value=3))
@settings(max_examples=150, deadline=None)
def test_modular_point_is_class_function(g, k):
    # shear the basis and flip orientation twice: same proper class
    a, b, c = g[0][0], g[0][1], g[1][1]
    sheared = [[a, b + k * a], [b + k * a, c + 2 * k * b + k * k * a]]
    assert modular_point_exact(sheared) == modular_point_exact(g)
    rotated = [[c, -b], [-b, a]]
    assert modular_point_exact(rotated) == modular_point_exact(g)


def test_grid_class_value_semantics():
    assert grid((1, 1, 1)) == grid((1, -1, -1))
    s = shape((1, 1, 1))
    assert isinstance(s, ShapeClass)
    assert isinstance(grid((1, 1, 1)), GridClass)
    assert hash(grid((1, 1, 1))) == hash(grid((-1, 1, 1)))


def test_internal_invariant_error_is_distinguishable():
    with pytest.raises(InternalInvariantError):
        ShapeClass(2, 5, ((1, 0), (0, 1)), True)
