"""Simplicial maps given by vertex images and their piecewise-linear extension."""
from dataclasses import dataclass, field

import numpy as np

from .complex import Complex, locate_many
from .errors import IncompatibleComplexes, NotBijective, NotInCarrier, NotSimplicial
from .geometry import as_point, barycentric_many


@dataclass(frozen=True, eq=False)
class SimplicialMap:
    source: Complex
    target: Complex
    vertex_images: tuple

    def __post_init__(self):
        images = tuple(int(i) for i in self.vertex_images)
        if len(images) != len(self.source.vertices):
            raise NotSimplicial(
                f"{len(images)} vertex images given for {len(self.source.vertices)} source vertices"
            )
        if images and (min(images) < 0 or max(images) >= len(self.target.vertices)):
            raise NotSimplicial("vertex image index outside the target vertex list")
        object.__setattr__(self, "vertex_images", images)

    def evaluate(self, p):
        return evaluate(self, p)

    def __call__(self, points):
        return evaluate_many(self, points)


@dataclass
class MapReport:
    simplicial: bool
    homeomorphism: bool
    offending: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def to_dict(self):
        return {
            "simplicial": self.simplicial,
            "homeomorphism": self.homeomorphism,
            "offending_simplices": list(self.offending),
            "notes": list(self.notes),
        }


def _image_simplices(m):
    return [tuple(sorted({m.vertex_images[i] for i in t})) for t in m.source.maximal_simplices]


def validate_simplicial(m, require_homeomorphism=False):
    """Check that every maximal source simplex lands on a face of the target.

    Returns a :class:`MapReport` that also says whether the map qualifies as a
    simplicial homeomorphism (bijective on vertices and on maximal simplices).
    With ``require_homeomorphism`` a non-qualifying map raises instead.
    """
    target_sets = [set(t) for t in m.target.maximal_simplices]
    offending = []
    for sid, img in enumerate(_image_simplices(m)):
        if not any(set(img) <= t for t in target_sets):
            offending.append(sid)
    if offending:
        raise NotSimplicial(
            f"images of source simplices {offending} are not faces of the target", offending
        )

    notes = []
    images = m.vertex_images
    collapsed = [
        sid for sid, t in enumerate(m.source.maximal_simplices)
        if len({images[i] for i in t}) < len(t)
    ]
    bijective_vertices = len(images) == len(m.target.vertices) and len(set(images)) == len(images)
    if not bijective_vertices:
        notes.append("vertex images are not a bijection")
    if collapsed:
        notes.append(f"source simplices {collapsed} collapse under the map")
    mapped = sorted(tuple(sorted(images[i] for i in t)) for t in m.source.maximal_simplices)
    bijective_simplices = mapped == sorted(m.target.maximal_simplices) and len(set(mapped)) == len(mapped)
    if not bijective_simplices:
        notes.append("induced map on maximal simplices is not a bijection")
    homeo = bijective_vertices and bijective_simplices and not collapsed
    if require_homeomorphism and not homeo:
        raise NotSimplicial("not a simplicial homeomorphism: " + "; ".join(notes), collapsed)
    return MapReport(simplicial=True, homeomorphism=homeo, notes=notes, offending=collapsed)


def evaluate_many(m, points, simplex_ids=None):
    """Evaluate the PL map on an (k, n) batch; raises NotInCarrier on the first stray point."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    sids = locate_many(m.source, pts) if simplex_ids is None else np.asarray(simplex_ids)
    missing = np.flatnonzero(sids < 0)
    if len(missing):
        raise NotInCarrier(pts[missing[0]])
    out = np.empty((len(pts), m.target.ambient_dim))
    images = np.asarray(m.vertex_images)
    for sid in np.unique(sids):
        rows = np.flatnonzero(sids == sid)
        idx = m.source.maximal_simplices[sid]
        w, _ = barycentric_many(pts[rows], m.source.simplices[sid])
        out[rows] = w @ m.target.vertices[images[list(idx)]]
    return out


def evaluate(m, p):
    return evaluate_many(m, as_point(p)[None, :])[0]


def evaluate_in(m, p, simplex_id):
    """Evaluate using a caller-chosen carrier simplex (for shared-face consistency checks)."""
    return evaluate_many(m, as_point(p)[None, :], simplex_ids=[simplex_id])[0]


def inverse(m):
    report = validate_simplicial(m)
    if not report.homeomorphism:
        raise NotBijective("map is not a simplicial homeomorphism: " + "; ".join(report.notes))
    inv = [0] * len(m.vertex_images)
    for src, img in enumerate(m.vertex_images):
        inv[img] = src
    return SimplicialMap(m.target, m.source, tuple(inv))


def compose(m1, m2):
    """The map "first ``m1``, then ``m2``"; the middle complexes must match structurally."""
    if not m1.target.same_structure(m2.source):
        raise IncompatibleComplexes("target of the first map differs from source of the second")
    return SimplicialMap(m1.source, m2.target, tuple(m2.vertex_images[i] for i in m1.vertex_images))


def identity_map(c):
    return SimplicialMap(c, c, tuple(range(len(c.vertices))))
