"""Affine geometry of single simplices.

Barycentric coordinates, a scale-free degeneracy measure, ridge-based dihedral
angles and convex segment clipping. Everything here is pure; a :class:`Simplex`
is an immutable value.
"""
from dataclasses import dataclass
from functools import cached_property
from math import factorial

import numpy as np

from .errors import DegenerateSimplex, DimensionTooLow, WeightSumViolation

DEGENERACY_TOL = 1e-10
WEIGHT_TOL = 1e-9
RESIDUAL_TOL = 1e-9


def as_point(p):
    arr = np.asarray(p, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"a point must be a 1-d coordinate vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("point coordinates must be finite")
    return arr


@dataclass(frozen=True, eq=False)
class Simplex:
    """Ordered vertices of a k-simplex in R^n, stored as a read-only (k+1, n) array."""

    vertices: np.ndarray

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[0] < 1:
            raise ValueError(f"simplex vertices must form a (k+1, n) array, got shape {v.shape}")
        if v.shape[0] - 1 > v.shape[1]:
            raise ValueError(f"a {v.shape[0] - 1}-simplex does not fit in R^{v.shape[1]}")
        if not np.all(np.isfinite(v)):
            raise ValueError("simplex vertices must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    @property
    def dim(self):
        return self.vertices.shape[0] - 1

    @property
    def ambient_dim(self):
        return self.vertices.shape[1]

    @cached_property
    def edges(self):
        """Edge vectors v_i - v_0, shape (k, n)."""
        return self.vertices[1:] - self.vertices[0]

    @cached_property
    def diameter(self):
        v = self.vertices
        if len(v) == 1:
            return 0.0
        diffs = v[:, None, :] - v[None, :, :]
        return float(np.sqrt((diffs ** 2).sum(-1)).max())

    @cached_property
    def centroid(self):
        return self.vertices.mean(axis=0)

    @cached_property
    def _solver(self):
        # maps p - v0 to the affine coefficients of v1..vk (least squares onto the hull)
        return np.linalg.pinv(self.edges.T)

    @cached_property
    def bbox(self):
        return self.vertices.min(axis=0), self.vertices.max(axis=0)

    def require_nondegenerate(self):
        if degeneracy_measure(self) < DEGENERACY_TOL:
            raise DegenerateSimplex(
                f"simplex with vertices {self.vertices.tolist()} is degenerate "
                f"(measure {degeneracy_measure(self):.3e} < {DEGENERACY_TOL})"
            )


@dataclass(frozen=True)
class BarycentricCoords:
    weights: np.ndarray
    residual: float = 0.0


def degeneracy_measure(s):
    """k-volume of ``s`` divided by (longest edge)^k; zero iff affinely dependent.

    A 0-simplex counts as perfectly shaped and returns 1.
    """
    k = s.dim
    if k == 0:
        return 1.0
    longest = s.diameter
    if longest == 0.0:
        return 0.0
    e = s.edges / longest
    gram = e @ e.T
    det = np.linalg.det(gram)
    if det <= 0.0:
        return 0.0
    return float(np.sqrt(det) / factorial(k))


def barycentric_many(points, s):
    """Weights (m, k+1) and hull residuals (m,) for an (m, n) batch of points."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    rel = pts - s.vertices[0]
    if s.dim == 0:
        weights = np.ones((len(pts), 1))
        return weights, np.linalg.norm(rel, axis=1)
    coef = rel @ s._solver.T
    weights = np.empty((len(pts), s.dim + 1))
    weights[:, 1:] = coef
    weights[:, 0] = 1.0 - coef.sum(axis=1)
    proj = coef @ s.edges
    residual = np.linalg.norm(rel - proj, axis=1)
    return weights, residual


def barycentric_coordinates(p, s):
    """Barycentric coordinates of the orthogonal projection of ``p`` onto aff(s).

    Raises
    ------
    DegenerateSimplex
        If ``s`` fails the degeneracy tolerance.
    """
    s.require_nondegenerate()
    w, r = barycentric_many(as_point(p)[None, :], s)
    return BarycentricCoords(weights=w[0], residual=float(r[0]))


def point_from_barycentric(b, s):
    w = np.asarray(b.weights if isinstance(b, BarycentricCoords) else b, dtype=float)
    if w.shape != (s.dim + 1,):
        raise ValueError(f"expected {s.dim + 1} weights, got shape {w.shape}")
    if abs(w.sum() - 1.0) > WEIGHT_TOL:
        raise WeightSumViolation(f"weights sum to {w.sum()!r}, not 1")
    return w @ s.vertices


def contains_many(points, s, tol=WEIGHT_TOL):
    """Boolean membership mask for a batch of points."""
    w, r = barycentric_many(points, s)
    return (w.min(axis=1) >= -tol) & (r <= RESIDUAL_TOL * max(s.diameter, 1.0))


def is_member(b, s):
    return bool(b.weights.min() >= -WEIGHT_TOL and b.residual <= RESIDUAL_TOL * max(s.diameter, 1.0))


def _orthonormal_basis(vectors, n):
    if len(vectors) == 0:
        return np.zeros((0, n))
    q, r = np.linalg.qr(np.asarray(vectors).T)
    rank = int(np.sum(np.abs(np.diag(r)) > 1e-12 * max(1.0, np.abs(r).max())))
    return q[:, :rank].T


def dihedral_angle(s, i, j):
    """Angle along the ridge shared by the facets opposite vertices ``i`` and ``j``.

    The direction into each facet is taken from the ridge centroid towards that
    facet's extra vertex, with the ridge's own directions projected out. For a
    triangle this is the interior angle at the vertex other than ``i`` and ``j``.
    """
    k = s.dim
    if k < 2:
        raise DimensionTooLow(f"dihedral angles need a simplex of dimension >= 2, got {k}")
    if i == j or not (0 <= i <= k and 0 <= j <= k):
        raise ValueError(f"need two distinct vertex indices in 0..{k}, got {i}, {j}")
    s.require_nondegenerate()
    v = s.vertices
    ridge = np.delete(v, [i, j], axis=0)
    center = ridge.mean(axis=0)
    basis = _orthonormal_basis(ridge[1:] - ridge[0], s.ambient_dim)

    def inward(vec):
        vec = vec - basis.T @ (basis @ vec)
        return vec / np.linalg.norm(vec)

    u_i = inward(v[j] - center)
    u_j = inward(v[i] - center)
    return float(np.arccos(np.clip(u_i @ u_j, -1.0, 1.0)))


def clip_segment(s, a, b, tol=WEIGHT_TOL):
    """Parameter interval ``(t0, t1)`` of the segment a + t(b - a), t in [0, 1], inside ``s``.

    Returns ``None`` when the segment misses the simplex.
    """
    s.require_nondegenerate()
    a, b = as_point(a), as_point(b)
    w, _ = barycentric_many(np.vstack([a, b]), s)
    lo, hi = 0.0, 1.0
    wa, dw = w[0], w[1] - w[0]
    for w0, d in zip(wa, dw):
        # w0 + t d >= -tol
        if abs(d) < 1e-15:
            if w0 < -tol:
                return None
            continue
        t = (-tol - w0) / d
        if d > 0:
            lo = max(lo, t)
        else:
            hi = min(hi, t)
        if lo > hi:
            return None

    if s.dim < s.ambient_dim:
        # the segment may leave the affine hull; keep the part within the residual tolerance
        proj = s._solver.T
        def orth(p):
            rel = p - s.vertices[0]
            return rel - (rel @ proj) @ s.edges
        oa, ob = orth(a), orth(b)
        do = ob - oa
        eps = RESIDUAL_TOL * max(s.diameter, 1.0)
        qa, qb, qc = do @ do, 2 * oa @ do, oa @ oa - eps * eps
        if qa < 1e-30:
            if qc > 0:
                return None
        else:
            disc = qb * qb - 4 * qa * qc
            if disc < 0:
                return None
            root = np.sqrt(disc)
            lo = max(lo, (-qb - root) / (2 * qa))
            hi = min(hi, (-qb + root) / (2 * qa))
            if lo > hi:
                return None
    return float(lo), float(hi)
