"""Finite geometric simplicial complexes embedded in R^n.

Only maximal simplices are stored; faces are implied. Geometric validity
(pairwise intersections are common faces) is checked by :func:`validate`, which
reports every violation instead of stopping at the first one.
"""
import enum
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from math import pi

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import cKDTree

from .errors import DimensionTooLow, InvalidComplex, NotInCarrier
from .geometry import (
    DEGENERACY_TOL,
    BarycentricCoords,
    Simplex,
    as_point,
    barycentric_many,
    contains_many,
    degeneracy_measure,
    dihedral_angle,
)

DUPLICATE_TOL = 1e-9
INTERSECTION_TOL = 1e-7


class AngleCondition(enum.Enum):
    """Sentinel for complexes where the facet-angle condition does not apply."""

    VACUOUS = "condition (ii) vacuous"


VACUOUS = AngleCondition.VACUOUS


@dataclass(frozen=True, eq=False)
class Complex:
    ambient_dim: int
    vertices: np.ndarray
    maximal_simplices: tuple

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != self.ambient_dim:
            raise InvalidComplex(
                f"vertices must be an (m, {self.ambient_dim}) array, got shape {v.shape}"
            )
        if not np.all(np.isfinite(v)):
            raise InvalidComplex("vertex coordinates must be finite")
        v.setflags(write=False)
        simplices = []
        for idx in self.maximal_simplices:
            t = tuple(sorted(int(i) for i in idx))
            if not t:
                raise InvalidComplex("empty simplex")
            if len(set(t)) != len(t):
                raise InvalidComplex(f"simplex {list(idx)} repeats a vertex")
            if t[0] < 0 or t[-1] >= len(v):
                raise InvalidComplex(f"simplex {list(idx)} has an index outside 0..{len(v) - 1}")
            if len(t) - 1 > self.ambient_dim:
                raise InvalidComplex(f"simplex {list(idx)} has too many vertices for R^{self.ambient_dim}")
            simplices.append(t)
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "maximal_simplices", tuple(simplices))

    @cached_property
    def simplices(self):
        return tuple(Simplex(self.vertices[list(t)]) for t in self.maximal_simplices)

    @property
    def dims(self):
        return tuple(len(t) - 1 for t in self.maximal_simplices)

    @cached_property
    def _bboxes(self):
        lo = np.array([s.bbox[0] for s in self.simplices])
        hi = np.array([s.bbox[1] for s in self.simplices])
        return lo, hi

    def same_structure(self, other, tol=1e-12):
        return (
            self.ambient_dim == other.ambient_dim
            and self.vertices.shape == other.vertices.shape
            and self.maximal_simplices == other.maximal_simplices
            and bool(np.all(np.abs(self.vertices - other.vertices) <= tol))
        )

    def scaled(self, factor):
        return Complex(self.ambient_dim, self.vertices * factor, self.maximal_simplices)

    def transformed(self, matrix, offset=None):
        v = self.vertices @ np.asarray(matrix, dtype=float).T
        if offset is not None:
            v = v + np.asarray(offset, dtype=float)
        return Complex(self.ambient_dim, v, self.maximal_simplices)


@dataclass
class ValidationReport:
    degenerate: list = field(default_factory=list)
    improper_pairs: list = field(default_factory=list)
    duplicate_vertices: list = field(default_factory=list)

    @property
    def valid(self):
        return not (self.degenerate or self.improper_pairs or self.duplicate_vertices)

    def to_dict(self):
        return {
            "valid": self.valid,
            "degenerate_simplices": list(self.degenerate),
            "improper_pairs": [list(p) for p in self.improper_pairs],
            "duplicate_vertices": [list(p) for p in self.duplicate_vertices],
        }


@dataclass(frozen=True)
class CarrierLocation:
    simplex_id: int
    coords: BarycentricCoords


def _separated_by_facet(c, a, b, shared):
    """True when a facet plane of one full-dimensional simplex, containing the
    shared vertices, has the other simplex's remaining vertices strictly beyond it.

    Then the two simplices meet inside that plane, where the far simplex only
    has the shared face.
    """
    v = c.vertices
    for own, other in ((a, b), (b, a)):
        rest = [i for i in other if i not in shared]
        if not rest:
            continue
        for apex in own:
            if apex in shared:
                continue
            facet = v[[i for i in own if i != apex]]
            base = facet[0]
            _, _, vt = np.linalg.svd(facet[1:] - base) if len(facet) > 1 else (None, None, np.eye(c.ambient_dim))
            normal = vt[-1]
            side = (v[apex] - base) @ normal
            scale = np.linalg.norm(v[apex] - base)
            if side < 0:
                side, normal = -side, -normal
            far = (v[rest] - base) @ normal
            if side > 0 and np.all(far < -DUPLICATE_TOL * scale):
                return True
    return False


def _intersection_is_face(c, a, b, tol):
    """LP test: no point of |a| ∩ |b| carries barycentric mass on a's unshared vertices."""
    shared = sorted(set(a) & set(b))
    only_a = [i for i in a if i not in shared]
    if not only_a or len(shared) == len(b):
        return False
    va = c.vertices[list(a)]
    vb = c.vertices[list(b)]
    center = np.vstack([va, vb]).mean(axis=0)
    scale = max(np.abs(np.vstack([va, vb]) - center).max(), 1e-300)
    va = (va - center) / scale
    vb = (vb - center) / scale
    na, nb = len(a), len(b)
    a_eq = np.zeros((c.ambient_dim + 2, na + nb))
    a_eq[: c.ambient_dim, :na] = va.T
    a_eq[: c.ambient_dim, na:] = -vb.T
    a_eq[c.ambient_dim, :na] = 1.0
    a_eq[c.ambient_dim + 1, na:] = 1.0
    b_eq = np.zeros(c.ambient_dim + 2)
    b_eq[-2:] = 1.0
    cost = np.zeros(na + nb)
    for pos, i in enumerate(a):
        if i in only_a:
            cost[pos] = -1.0
    res = linprog(cost, A_eq=a_eq, b_eq=b_eq, bounds=(0, None), method="highs")
    if res.status == 2:  # infeasible: disjoint
        return True
    if res.status != 0:
        raise RuntimeError(f"intersection LP failed for simplices {a}, {b}: {res.message}")
    return -res.fun <= tol


def validate(c, tol=INTERSECTION_TOL):
    """Collect every well-formedness violation of ``c`` into a :class:`ValidationReport`."""
    report = ValidationReport()
    for sid, s in enumerate(c.simplices):
        if degeneracy_measure(s) < DEGENERACY_TOL:
            report.degenerate.append(sid)

    if len(c.vertices) > 1:
        pairs = cKDTree(c.vertices).query_pairs(DUPLICATE_TOL)
        report.duplicate_vertices.extend(sorted(pairs))

    lo, hi = c._bboxes
    pad = DUPLICATE_TOL * max(1.0, float(np.abs(c.vertices).max(initial=0.0)))
    bad = set(report.degenerate)
    for i, j in combinations(range(len(c.simplices)), 2):
        if i in bad or j in bad:
            continue
        if np.any(lo[i] > hi[j] + pad) or np.any(lo[j] > hi[i] + pad):
            continue
        a, b = c.maximal_simplices[i], c.maximal_simplices[j]
        shared = set(a) & set(b)
        n = c.ambient_dim
        full = len(a) == len(b) == n + 1
        ok = (full and _separated_by_facet(c, a, b, shared)) or _intersection_is_face(c, a, b, tol)
        if not ok:
            report.improper_pairs.append((i, j))
    return report


def locate_many(c, points):
    """Index of the lowest-numbered maximal simplex containing each point, or -1."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    out = np.full(len(pts), -1, dtype=int)
    lo, hi = c._bboxes
    for sid, s in enumerate(c.simplices):
        pending = np.flatnonzero(out < 0)
        if not len(pending):
            break
        pad = 1e-9 * max(s.diameter, 1.0)
        sub = pts[pending]
        near = np.all((sub >= lo[sid] - pad) & (sub <= hi[sid] + pad), axis=1)
        if not near.any():
            continue
        cand = pending[near]
        inside = contains_many(pts[cand], s)
        out[cand[inside]] = sid
    return out


def locate(c, p):
    """Carrier location of ``p``; ties on shared faces go to the lowest simplex index.

    Raises
    ------
    NotInCarrier
        If no maximal simplex contains ``p`` at tolerance.
    """
    p = as_point(p)
    sid = int(locate_many(c, p[None, :])[0])
    if sid < 0:
        raise NotInCarrier(p)
    w, r = barycentric_many(p[None, :], c.simplices[sid])
    return CarrierLocation(sid, BarycentricCoords(w[0], float(r[0])))


def facet_angle_margin(c):
    """Smallest min(angle, pi - angle) over all facet pairs of all maximal simplices.

    Complexes built only from edges (and points) have no facet pairs at all and
    get :data:`VACUOUS` back.
    """
    dims = c.dims
    if max(dims) < 2:
        return VACUOUS
    if min(dims) < 2:
        low = [i for i, d in enumerate(dims) if d < 2]
        raise DimensionTooLow(f"maximal simplices {low} have dimension < 2 in a mixed complex")
    margin = pi / 2
    for s in c.simplices:
        for i, j in combinations(range(s.dim + 1), 2):
            ang = dihedral_angle(s, i, j)
            margin = min(margin, ang, pi - ang)
    return margin
