from math import pi, sqrt

import numpy as np
import pytest

from plqi.complex import VACUOUS, Complex, facet_angle_margin, locate, locate_many, validate
from plqi.constructions import disc_swap_complexes
from plqi.errors import DimensionTooLow, InvalidComplex, NotInCarrier

from conftest import delaunay_complex, random_rotation

SQUARE = Complex(2, [[0, 0], [1, 0], [0, 1], [1, 1]], ((0, 1, 2), (1, 2, 3)))


def _in_triangle(p, v, tol=1e-12):
    d = []
    for k in range(3):
        a, b = v[k], v[(k + 1) % 3]
        d.append((b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]))
    d = np.array(d)
    return np.all(d >= -tol) or np.all(d <= tol)


def brute_locate(c, p):
    for sid, t in enumerate(c.maximal_simplices):
        if _in_triangle(p, c.vertices[list(t)]):
            return sid
    return -1


def test_square_is_valid():
    assert validate(SQUARE).valid


def test_overlapping_triangles_are_reported():
    c = Complex(2, [[0, 0], [2, 0], [0, 2], [1, 1.5], [1.5, -0.5], [-0.5, 0.5]],
                ((0, 1, 2), (3, 4, 5)))
    rep = validate(c)
    assert not rep.valid
    assert rep.improper_pairs == [(0, 1)]


def test_folded_shared_edge_is_reported():
    # both triangles on the same side of their common edge
    c = Complex(2, [[0, 0], [1, 0], [0, 1], [0.2, 0.5]], ((0, 1, 2), (1, 2, 3)))
    assert validate(c).improper_pairs == [(0, 1)]


def test_t_junction_is_reported():
    # vertex 3 sits in the middle of edge (0, 1) without being shared
    c = Complex(2, [[0, 0], [2, 0], [1, 1], [1, 0], [1, -1]], ((0, 1, 2), (0, 3, 4)))
    assert not validate(c).valid


def test_touching_at_shared_vertex_is_valid():
    c = Complex(2, [[0, 0], [1, 0], [0, 1], [-1, 0], [0, -1]], ((0, 1, 2), (0, 3, 4)))
    assert validate(c).valid


def test_degenerate_and_duplicates_reported():
    c = Complex(2, [[0, 0], [1, 1], [2, 2], [0, 0], [3, 0]], ((0, 1, 2), (1, 3, 4)))
    rep = validate(c)
    assert rep.degenerate == [0]
    assert rep.duplicate_vertices == [(0, 3)]


def test_bad_indices_rejected():
    with pytest.raises(InvalidComplex):
        Complex(2, [[0, 0], [1, 0]], ((0, 1, 2),))
    with pytest.raises(InvalidComplex):
        Complex(2, [[0, 0], [1, 0], [0, 1]], ((0, 0, 1),))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_disc_swap_complexes_validate(n):
    K, Kp = disc_swap_complexes(n)
    assert validate(K).valid
    assert validate(Kp).valid


def test_validate_in_three_dimensions(rng):
    c = delaunay_complex(rng, 25, n=3)
    assert validate(c).valid
    # pushing one vertex through the opposite face breaks validity
    v = c.vertices.copy()
    t = c.maximal_simplices[0]
    v[t[0]] = v[list(t[1:])].mean(axis=0) * 2 - v[t[0]]
    assert not validate(Complex(3, v, c.maximal_simplices)).valid


def test_embedded_triangles_in_3d():
    # two triangles crossing through each other in R^3
    c = Complex(3, [[0, 0, 0], [2, 0, 0], [0, 2, 0], [0.5, 0.5, -1], [0.5, 0.5, 1], [3, 3, 0]],
                ((0, 1, 2), (3, 4, 5)))
    assert not validate(c).valid
    c = Complex(3, [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]], ((0, 1, 2), (0, 1, 3)))
    assert validate(c).valid


def test_locate_tie_break_lowest_index():
    c = Complex(2, [[0, 0], [1, 0], [0, 1], [-1, 0], [0, -1], [1, -1]],
                ((0, 3, 4), (0, 4, 5), (0, 1, 2), (0, 1, 5)))
    assert locate(c, [0, 0]).simplex_id == 0
    assert locate(c, [0.5, 0]).simplex_id == 2
    assert locate(c, [0.25, -0.5]).simplex_id == 1


def test_locate_outside_raises():
    with pytest.raises(NotInCarrier):
        locate(SQUARE, [2, 2])


def test_locate_matches_bruteforce(rng):
    c = delaunay_complex(rng, 80)
    pts = rng.uniform(-1.2, 1.2, (3000, 2))
    got = locate_many(c, pts)
    expected = np.array([brute_locate(c, p) for p in pts])
    assert np.array_equal(got, expected)


def test_locate_returns_member_coords():
    loc = locate(SQUARE, [0.75, 0.75])
    assert loc.simplex_id == 1
    assert loc.coords.weights.min() >= 0
    np.testing.assert_allclose(loc.coords.weights @ SQUARE.simplices[1].vertices, [0.75, 0.75])


def test_facet_angle_margin_examples():
    eq = Complex(2, [[0, 0], [1, 0], [0.5, sqrt(3) / 2]], ((0, 1, 2),))
    assert facet_angle_margin(eq) == pytest.approx(pi / 3)
    right = Complex(2, [[0, 0], [1, 0], [0, 1]], ((0, 1, 2),))
    assert facet_angle_margin(right) == pytest.approx(pi / 4)
    path = Complex(2, [[0, 0], [1, 0], [1, 1]], ((0, 1), (1, 2)))
    assert facet_angle_margin(path) is VACUOUS


def test_facet_angle_margin_obtuse_uses_supplement():
    c = Complex(2, [[0, 0], [1, 0], [-0.9, 0.1]], ((0, 1, 2),))
    angles = []
    v = c.vertices
    for k in range(3):
        a, b = v[(k + 1) % 3] - v[k], v[(k + 2) % 3] - v[k]
        angles.append(np.arccos(a @ b / np.linalg.norm(a) / np.linalg.norm(b)))
    assert facet_angle_margin(c) == pytest.approx(min(min(a, pi - a) for a in angles))


def test_facet_angle_margin_mixed_dims_raises():
    c = Complex(2, [[0, 0], [1, 0], [0, 1], [3, 3]], ((0, 1, 2), (2, 3)))
    with pytest.raises(DimensionTooLow):
        facet_angle_margin(c)


def test_facet_angle_margin_rigid_and_scale_invariant(rng):
    for n in (2, 3):
        c = delaunay_complex(rng, 15, n=n)
        base = facet_angle_margin(c)
        Q = random_rotation(rng, n)
        for lam in (1e-3, 1.0, 7.5, 1e4):
            moved = c.transformed(lam * Q, rng.standard_normal(n))
            assert facet_angle_margin(moved) == pytest.approx(base, abs=1e-9)
