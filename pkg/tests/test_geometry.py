from math import acos, pi, sqrt

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from plqi.errors import DegenerateSimplex, DimensionTooLow, WeightSumViolation
from plqi.geometry import (
    BarycentricCoords,
    Simplex,
    barycentric_coordinates,
    clip_segment,
    degeneracy_measure,
    dihedral_angle,
    point_from_barycentric,
)

from conftest import random_rotation, random_simplex

UNIT = Simplex([[0, 0], [1, 0], [0, 1]])
EQUILATERAL = Simplex([[0, 0], [1, 0], [0.5, sqrt(3) / 2]])
REG_TET = Simplex([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]])


def shoelace(v):
    (x0, y0), (x1, y1), (x2, y2) = v
    return abs((x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0)) / 2


def test_degeneracy_examples():
    assert degeneracy_measure(UNIT) == pytest.approx(0.25, abs=1e-15)
    assert degeneracy_measure(Simplex([[0, 0], [1, 1], [2, 2]])) == 0.0
    assert degeneracy_measure(Simplex([[0, 0], [3, 0]])) == pytest.approx(1.0)


def test_degeneracy_matches_shoelace(rng):
    for _ in range(200):
        v = rng.standard_normal((3, 2))
        s = Simplex(v)
        longest = max(np.linalg.norm(v[i] - v[j]) for i in range(3) for j in range(i))
        assert degeneracy_measure(s) == pytest.approx(shoelace(v) / longest ** 2, rel=1e-9, abs=1e-15)


def test_tetrahedron_measure_matches_determinant(rng):
    for _ in range(50):
        v = rng.standard_normal((4, 3))
        vol = abs(np.linalg.det(v[1:] - v[0])) / 6
        longest = max(np.linalg.norm(v[i] - v[j]) for i in range(4) for j in range(i))
        assert degeneracy_measure(Simplex(v)) == pytest.approx(vol / longest ** 3, rel=1e-9)


def test_barycentric_examples():
    b = barycentric_coordinates([0.2, 0.3], UNIT)
    np.testing.assert_allclose(b.weights, [0.5, 0.2, 0.3], atol=1e-15)
    assert b.residual == pytest.approx(0.0, abs=1e-15)
    for k in range(3):
        np.testing.assert_allclose(barycentric_coordinates(UNIT.vertices[k], UNIT).weights,
                                   np.eye(3)[k], atol=1e-15)
    np.testing.assert_allclose(barycentric_coordinates(REG_TET.centroid, REG_TET).weights,
                               [0.25] * 4, atol=1e-15)


def test_barycentric_of_lower_dim_simplex_reports_residual():
    tri = Simplex([[0, 0, 0], [1, 0, 0], [0, 1, 0]])
    b = barycentric_coordinates([0.2, 0.3, 0.7], tri)
    np.testing.assert_allclose(b.weights, [0.5, 0.2, 0.3], atol=1e-15)
    assert b.residual == pytest.approx(0.7)


def test_barycentric_rejects_degenerate():
    with pytest.raises(DegenerateSimplex):
        barycentric_coordinates([0, 0], Simplex([[0, 0], [1, 1], [2, 2]]))


def test_point_from_barycentric():
    np.testing.assert_array_equal(point_from_barycentric(BarycentricCoords(np.array([1.0, 0, 0])), UNIT), [0, 0])
    np.testing.assert_allclose(point_from_barycentric(BarycentricCoords(np.full(3, 1 / 3)), UNIT),
                               [1 / 3, 1 / 3])
    with pytest.raises(WeightSumViolation):
        point_from_barycentric(BarycentricCoords(np.array([0.5, 0.2, 0.2])), UNIT)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_barycentric_round_trip(rng, n):
    s = random_simplex(rng, n)
    w = rng.dirichlet(np.ones(n + 1), size=1000)
    pts = w @ s.vertices
    for p in pts:
        back = point_from_barycentric(barycentric_coordinates(p, s), s)
        assert np.linalg.norm(back - p) <= 1e-9 * max(1.0, np.linalg.norm(p))


def test_dihedral_examples():
    assert dihedral_angle(UNIT, 1, 2) == pytest.approx(pi / 2, abs=1e-12)
    for i, j in [(0, 1), (0, 2), (1, 2)]:
        assert dihedral_angle(EQUILATERAL, i, j) == pytest.approx(pi / 3, abs=1e-12)
    for i in range(4):
        for j in range(i + 1, 4):
            assert dihedral_angle(REG_TET, i, j) == pytest.approx(acos(1 / 3), abs=1e-12)
            assert dihedral_angle(REG_TET, i, j) == pytest.approx(1.23096, abs=1e-5)


def _normal_dihedral(v, i, j):
    # brute force: angle between inward facet normals, via cross products
    def inward_normal(skip):
        face = [v[k] for k in range(4) if k != skip]
        nrm = np.cross(face[1] - face[0], face[2] - face[0])
        if nrm @ (v[skip] - face[0]) < 0:
            nrm = -nrm
        return nrm / np.linalg.norm(nrm)
    return pi - acos(np.clip(inward_normal(i) @ inward_normal(j), -1, 1))


def test_dihedral_matches_normal_vector_oracle(rng):
    for _ in range(100):
        s = random_simplex(rng, 3)
        for i in range(4):
            for j in range(i + 1, 4):
                assert dihedral_angle(s, i, j) == pytest.approx(_normal_dihedral(s.vertices, i, j), abs=1e-9)


def test_triangle_dihedral_is_interior_angle(rng):
    for _ in range(100):
        v = random_simplex(rng, 2).vertices
        a, b = v[1] - v[0], v[2] - v[0]
        interior = acos(a @ b / np.linalg.norm(a) / np.linalg.norm(b))
        assert dihedral_angle(Simplex(v), 1, 2) == pytest.approx(interior, abs=1e-12)


def test_dihedral_errors():
    with pytest.raises(DimensionTooLow):
        dihedral_angle(Simplex([[0, 0], [1, 0]]), 0, 1)
    with pytest.raises(DegenerateSimplex):
        dihedral_angle(Simplex([[0, 0], [1, 1], [2, 2]]), 0, 1)


def test_dihedral_of_embedded_triangle_uses_its_plane():
    tri = Simplex([[0, 0, 5], [1, 0, 5], [0, 1, 5]])
    assert dihedral_angle(tri, 1, 2) == pytest.approx(pi / 2)


@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 4))
@settings(max_examples=60, deadline=None)
def test_dihedral_rigid_motion_and_symmetry(seed, n):
    rng = np.random.default_rng(seed)
    s = random_simplex(rng, n)
    Q = random_rotation(rng, n)
    moved = Simplex(s.vertices @ Q.T + rng.standard_normal(n) * 10)
    for i in range(n + 1):
        for j in range(i + 1, n + 1):
            a = dihedral_angle(s, i, j)
            assert dihedral_angle(s, j, i) == pytest.approx(a, abs=1e-12)
            assert dihedral_angle(moved, i, j) == pytest.approx(a, abs=1e-9)


def test_clip_segment_examples():
    t0, t1 = clip_segment(UNIT, [-1, 0.5], [2, 0.5])
    assert t0 == pytest.approx(1 / 3, abs=1e-8)
    assert t1 == pytest.approx(1 / 2, abs=1e-8)
    assert clip_segment(UNIT, [2, 2], [3, 5]) is None
    face_mid = (UNIT.vertices[1] + UNIT.vertices[2]) / 2
    t0, t1 = clip_segment(UNIT, UNIT.centroid, face_mid)
    assert t0 == 0.0 and t1 == pytest.approx(1.0)
    # continuing past the face exits at the face parameter
    t0, t1 = clip_segment(UNIT, UNIT.centroid, UNIT.centroid + 2 * (face_mid - UNIT.centroid))
    assert (t0, t1) == (0.0, pytest.approx(0.5, abs=1e-8))


def _in_triangle(p, v, tol=1e-12):
    signs = []
    for k in range(3):
        a, b = v[k], v[(k + 1) % 3]
        signs.append((b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]))
    signs = np.array(signs)
    return bool(np.all(signs >= -tol) or np.all(signs <= tol))


def test_clip_segment_agrees_with_sampled_membership(rng):
    for _ in range(50):
        s = random_simplex(rng, 2)
        a, b = rng.standard_normal((2, 2)) * 2
        ts = np.linspace(0, 1, 1000)
        inside = np.array([_in_triangle(a + t * (b - a), s.vertices) for t in ts])
        res = clip_segment(s, a, b)
        for t, flag in zip(ts, inside):
            if res is None:
                expected = False
            else:
                lo, hi = res
                if min(abs(t - lo), abs(t - hi)) < 1e-6:
                    continue
                expected = lo <= t <= hi
            assert flag == expected


def test_clip_segment_in_lower_dim_simplex():
    tri = Simplex([[0, 0, 0], [1, 0, 0], [0, 1, 0]])
    assert clip_segment(tri, [0.1, 0.1, -1], [0.1, 0.1, 1]) == (pytest.approx(0.5), pytest.approx(0.5))
    t0, t1 = clip_segment(tri, [-1, 0.5, 0], [2, 0.5, 0])
    assert (t0, t1) == (pytest.approx(1 / 3, abs=1e-8), pytest.approx(0.5, abs=1e-8))
    assert clip_segment(tri, [0, 0, 1], [1, 0, 1]) is None
