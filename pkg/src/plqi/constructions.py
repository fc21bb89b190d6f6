"""Closed-form self-maps of R^n used in the commutator experiments.

The catalog covers affine maps, the disc-swap homeomorphism ``h`` of the unit
ball, the rescaled-disc map built from it, and the cone map that is the
identity in a narrow cone, doubling outside a wider cone and linear along
rays between them. Maps act on single points or on (m, n) batches.
"""
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import _random
from .complex import Complex, locate_many
from .errors import FormatError, InvalidDiscSequence, NoDivergentSequence
from .plmap import SimplicialMap, evaluate_many


def _batch(x):
    arr = np.asarray(x, dtype=float)
    return (arr[None, :], True) if arr.ndim == 1 else (arr, False)


class AnalyticMap:
    """Base class; subclasses implement ``_apply`` on (m, n) arrays and ``to_spec``."""

    kind = None

    def __call__(self, x):
        pts, single = _batch(x)
        out = self._apply(pts)
        return out[0] if single else out

    def _apply(self, pts):
        raise NotImplementedError

    def to_spec(self):
        raise NotImplementedError

    def then(self, other):
        return Compose((self, other))


@dataclass(frozen=True)
class Identity(AnalyticMap):
    kind = "identity"

    def _apply(self, pts):
        return pts.copy()

    def to_spec(self):
        return {"kind": self.kind, "params": {}}


@dataclass(frozen=True)
class Scale(AnalyticMap):
    factor: float
    kind = "scale"

    def _apply(self, pts):
        return self.factor * pts

    def to_spec(self):
        return {"kind": self.kind, "params": {"lambda": self.factor}}


@dataclass(frozen=True)
class Translate(AnalyticMap):
    offset: tuple
    kind = "translate"

    def _apply(self, pts):
        return pts + np.asarray(self.offset, dtype=float)

    def to_spec(self):
        return {"kind": self.kind, "params": {"v": list(map(float, self.offset))}}


@dataclass(frozen=True)
class Negate(AnalyticMap):
    kind = "negate"

    def _apply(self, pts):
        return -pts

    def to_spec(self):
        return {"kind": self.kind, "params": {}}


@dataclass(frozen=True)
class Compose(AnalyticMap):
    """Applies ``maps`` left to right."""

    maps: tuple
    kind = "compose"

    def _apply(self, pts):
        for m in self.maps:
            pts = m(pts)
        return pts

    def to_spec(self):
        return {"kind": self.kind, "params": {"maps": [m.to_spec() for m in self.maps]}}


# ---------------------------------------------------------------- disc swap

def disc_swap_vertices(n):
    """Vertices x_0..x_n on the unit sphere followed by O and O'."""
    if n < 2:
        raise ValueError(f"the disc-swap complexes need n >= 2, got {n}")
    xs = [np.eye(n)[n - 1]]
    for i in range(1, n):
        v = np.zeros(n)
        v[: i - 1] = -1.0
        v[i - 1] = 1.0
        v[n - 1] = -1.0
        xs.append(v / np.linalg.norm(v))
    xs.append(-np.ones(n) / np.sqrt(n))
    origin = np.zeros(n)
    shifted = np.zeros(n)
    shifted[n - 1] = 0.25
    return np.array(xs), origin, shifted


def disc_swap_complexes(n):
    """Complexes K and K' whose i-th simplex swaps x_i for O (resp. O').

    Vertex ``n + 1`` is the moving vertex in both complexes, so the map
    x_i -> x_i, O -> O' is the identity on vertex indices.
    """
    xs, origin, shifted = disc_swap_vertices(n)
    simplices = [tuple(sorted([j for j in range(n + 1) if j != i] + [n + 1])) for i in range(n + 1)]
    K = Complex(n, np.vstack([xs, origin]), tuple(simplices))
    K_prime = Complex(n, np.vstack([xs, shifted]), tuple(simplices))
    return K, K_prime


def disc_swap_pl_map(n):
    K, K_prime = disc_swap_complexes(n)
    return SimplicialMap(K, K_prime, tuple(range(n + 2)))


@dataclass(frozen=True)
class DiscSwapMap(AnalyticMap):
    """h on R^n: the PL map O -> O' on |K| and the identity everywhere else."""

    n: int
    kind = "disc_swap"

    @cached_property
    def pl_map(self):
        return disc_swap_pl_map(self.n)

    def _apply(self, pts):
        out = pts.copy()
        sids = locate_many(self.pl_map.source, pts)
        inside = sids >= 0
        if inside.any():
            out[inside] = evaluate_many(self.pl_map, pts[inside], simplex_ids=sids[inside])
        return out

    def to_spec(self):
        return {"kind": self.kind, "params": {"n": self.n}}


def disc_swap_map(n):
    return DiscSwapMap(n)


# ---------------------------------------------------------------- case I

@dataclass(frozen=True, eq=False)
class DiscSequence:
    centers: np.ndarray
    radii: np.ndarray

    def __post_init__(self):
        c = np.atleast_2d(np.asarray(self.centers, dtype=float))
        r = np.asarray(self.radii, dtype=float).reshape(-1)
        if len(c) != len(r):
            raise InvalidDiscSequence(f"{len(c)} centers but {len(r)} radii")
        if np.any(r <= 0) or not np.all(np.isfinite(r)) or not np.all(np.isfinite(c)):
            raise InvalidDiscSequence("radii must be positive and all values finite")
        if np.any(np.diff(r) <= 0):
            raise InvalidDiscSequence("radii must be strictly increasing")
        for i in range(len(r)):
            gaps = np.linalg.norm(c[i + 1:] - c[i], axis=1) - (r[i + 1:] + r[i])
            if np.any(gaps <= 0):
                j = i + 1 + int(np.argmax(gaps <= 0))
                raise InvalidDiscSequence(f"closed discs {i} and {j} intersect")
        c.setflags(write=False)
        r.setflags(write=False)
        object.__setattr__(self, "centers", c)
        object.__setattr__(self, "radii", r)

    def __len__(self):
        return len(self.radii)


@dataclass(frozen=True, eq=False)
class Case1Map(AnalyticMap):
    """x -> c_m + r_m h((x - c_m)/r_m) on each closed disc, identity elsewhere."""

    n: int
    discs: DiscSequence
    kind = "case1"

    @cached_property
    def _h(self):
        return DiscSwapMap(self.n)

    def _apply(self, pts):
        out = pts.copy()
        for c, r in zip(self.discs.centers, self.discs.radii):
            rel = (pts - c) / r
            mask = np.einsum("ij,ij->i", rel, rel) <= 1.0
            if mask.any():
                out[mask] = c + r * self._h(rel[mask])
        return out

    def to_spec(self):
        discs = [{"center": c.tolist(), "radius": float(r)}
                 for c, r in zip(self.discs.centers, self.discs.radii)]
        return {"kind": self.kind, "params": {"n": self.n, "discs": discs}}


def case1_map(n, ds):
    if not isinstance(ds, DiscSequence):
        ds = DiscSequence(*ds)
    if ds.centers.shape[1] != n:
        raise InvalidDiscSequence(f"disc centers live in R^{ds.centers.shape[1]}, not R^{n}")
    return Case1Map(n, ds)


# ---------------------------------------------------------------- cone map

@dataclass(frozen=True)
class ConeGeometry:
    axis: tuple
    inner_slope: float = 0.25
    outer_slope: float = 0.5

    def __post_init__(self):
        a = np.asarray(self.axis, dtype=float)
        if abs(np.linalg.norm(a) - 1.0) > 1e-9:
            raise ValueError(f"cone axis must be a unit vector, got norm {np.linalg.norm(a)}")
        if not 0 < self.inner_slope < self.outer_slope:
            raise ValueError("need 0 < inner_slope < outer_slope")
        object.__setattr__(self, "axis", tuple(float(x) for x in a))


@dataclass(frozen=True)
class ConeMap(AnalyticMap):
    """Identity on the inner cone, 2x outside the outer cone, linear in between.

    Writing x = h a + rho u with u a unit vector orthogonal to the axis a, a
    point with inner < rho/h <= outer sits at t = (outer h - rho)/((outer - inner) h)
    between x1 = h a + inner h u and x2 = h a + outer h u, and goes to
    t x1 + 2 (1 - t) x2. Both cone boundaries are assigned to the inner side.
    """

    geometry: ConeGeometry
    kind = "cone"

    def _apply(self, pts):
        a = np.asarray(self.geometry.axis)
        r, s = self.geometry.inner_slope, self.geometry.outer_slope
        h = pts @ a
        perp = pts - h[:, None] * a
        rho = np.linalg.norm(perp, axis=1)
        out = 2.0 * pts
        inner = ((h > 0) & (rho <= r * h)) | ((h == 0) & (rho == 0))
        out[inner] = pts[inner]
        mid = (h > 0) & ~inner & (rho <= s * h)
        if mid.any():
            hm, rm = h[mid], rho[mid]
            u = perp[mid] / rm[:, None]
            t = (s * hm - rm) / ((s - r) * hm)
            axial = (2.0 - t) * hm
            radial = (t * r + 2.0 * (1.0 - t) * s) * hm
            out[mid] = axial[:, None] * a + radial[:, None] * u
        return out

    def to_spec(self):
        params = {"axis": list(self.geometry.axis)}
        if (self.geometry.inner_slope, self.geometry.outer_slope) != (0.25, 0.5):
            params["inner_slope"] = self.geometry.inner_slope
            params["outer_slope"] = self.geometry.outer_slope
        return {"kind": self.kind, "params": params}


def cone_map(geom):
    if not isinstance(geom, ConeGeometry):
        geom = ConeGeometry(tuple(geom))
    return ConeMap(geom)


# ---------------------------------------------------------------- experiments

def commutator_series(f, g, points):
    """d(f(g(x)), g(f(x))) for every point."""
    pts, _ = _batch(points)
    return np.linalg.norm(f(g(pts)) - g(f(pts)), axis=1)


@dataclass(frozen=True, eq=False)
class DivergentSequence:
    points: np.ndarray
    images: np.ndarray

    @property
    def displacements(self):
        return np.linalg.norm(self.images - self.points, axis=1)

    def check(self):
        """Names of the monotonicity conditions this sequence violates (empty when sound)."""
        failures = []
        norms = np.linalg.norm(self.points, axis=1)
        image_norms = np.linalg.norm(self.images, axis=1)
        if np.any(np.diff(norms) <= 0):
            failures.append("norms not strictly increasing")
        if np.any(np.diff(image_norms) <= 0):
            failures.append("image norms not strictly increasing")
        if np.any(np.diff(self.displacements) <= 0):
            failures.append("displacements not strictly increasing")
        if np.any(norms[1:] <= image_norms[:-1]):
            failures.append("some point does not clear the previous image")
        return failures


def _directions(n, count, seed):
    rng = _random.rng_for(seed, "directions")
    rand = rng.standard_normal((count, n))
    rand /= np.linalg.norm(rand, axis=1, keepdims=True)
    return np.vstack([np.eye(n), -np.eye(n), rand])


def _divergent_candidates(f, n, budget, seed, directions, start_radius, growth):
    """Yield points whose norms, image norms and displacements keep growing.

    Radial shells R_j = start_radius * growth**j are probed along a fixed set of
    directions; the best probe of each admissible shell is kept when its
    displacement beats m times the unit max(1, first displacement).
    """
    dirs = _directions(n, directions, seed)
    last_norm = last_image_norm = last_disp = -np.inf
    floor = 0.0
    unit = None
    m = 0
    for j in range(budget):
        R = start_radius * growth ** j
        if R <= max(last_norm, last_image_norm):
            continue
        pts = R * dirs
        fx = np.asarray(f(pts), dtype=float)
        disp = np.linalg.norm(fx - pts, axis=1)
        image_norms = np.linalg.norm(fx, axis=1)
        ok = (disp > max(last_disp, floor)) & (image_norms > last_image_norm) & np.isfinite(disp)
        if unit is not None:
            ok &= disp >= (m + 1) * unit
        if not ok.any():
            continue
        best = int(np.argmax(np.where(ok, disp, -np.inf)))
        m += 1
        if unit is None:
            unit = max(1.0, float(disp[best]))
        last_norm, last_image_norm, last_disp = R, float(image_norms[best]), float(disp[best])
        yield pts[best], fx[best]


def divergent_sequence(f, n, count=20, budget=400, seed=0, directions=64,
                       start_radius=1.0, growth=1.25):
    """First ``count`` points of a sequence along which f drifts ever further from the identity.

    Raises
    ------
    NoDivergentSequence
        When the shell search runs out of budget first, which is what happens
        for maps at bounded distance from the identity.
    """
    found = []
    for p, fp in _divergent_candidates(f, n, budget, seed, directions, start_radius, growth):
        found.append((p, fp))
        if len(found) == count:
            seq = DivergentSequence(np.array([p for p, _ in found]), np.array([q for _, q in found]))
            bad = seq.check()
            if bad:
                raise NoDivergentSequence("; ".join(bad))
            return seq
    raise NoDivergentSequence(
        f"only {len(found)} of {count} points with growing displacement within {budget} shells"
    )


@dataclass(frozen=True, eq=False)
class WitnessDiscs:
    discs: DiscSequence
    points: np.ndarray

    def check(self):
        return verify_disc_conditions(self.points, self.discs)


def verify_disc_conditions(points, discs, images=None):
    """Violations of: radii strictly increasing; disc m holds no point and no other
    disc's center; closed discs pairwise disjoint. Empty list when all hold."""
    failures = []
    c, r = discs.centers, discs.radii
    if np.any(np.diff(r) <= 0):
        failures.append("(i) radii not strictly increasing")
    centers = c if images is None else np.asarray(images)
    for m in range(len(r)):
        if np.any(np.linalg.norm(points - c[m], axis=1) <= r[m]):
            failures.append(f"(ii) disc {m} contains a sequence point")
        others = np.delete(centers, m, axis=0)
        if len(others) and np.any(np.linalg.norm(others - c[m], axis=1) <= r[m]):
            failures.append(f"(ii) disc {m} contains another image point")
        for k in range(m + 1, len(r)):
            if np.linalg.norm(c[k] - c[m]) <= r[k] + r[m]:
                failures.append(f"(iii) discs {m} and {k} intersect")
    return failures


def witness_discs(f, n, count=20, budget=400, seed=0, **search):
    """Greedy disc selection around images of a divergent sequence.

    Disc m (1-based) is centred at f(d_m) with radius min(m, |f(d_m) - d_m| / 2).
    A candidate is taken only when it stays out of every earlier disc and a
    radius-m probe disc around its image avoids all earlier points, images and
    discs. All three disc conditions are re-verified on the result.
    """
    points, centers, radii = [], [], []
    for d, fd in _divergent_candidates(f, n, budget, seed,
                                       search.get("directions", 64),
                                       search.get("start_radius", 1.0),
                                       search.get("growth", 1.25)):
        m = len(radii) + 1
        r = min(float(m), 0.5 * float(np.linalg.norm(fd - d)))
        if radii and r <= radii[-1]:
            continue
        if points:
            P, C, Rr = np.array(points), np.array(centers), np.array(radii)
            if np.any(np.linalg.norm(d - C, axis=1) <= Rr):
                continue
            if np.any(np.linalg.norm(fd - C, axis=1) <= m + Rr):
                continue
            if np.any(np.linalg.norm(P - fd, axis=1) <= m):
                continue
        points.append(d)
        centers.append(fd)
        radii.append(r)
        if len(radii) == count:
            break
    if len(radii) < count:
        raise NoDivergentSequence(f"found {len(radii)} of {count} witness discs within budget")
    discs = DiscSequence(np.array(centers), np.array(radii))
    result = WitnessDiscs(discs, np.array(points))
    bad = result.check()
    if bad:
        raise InvalidDiscSequence("; ".join(bad))
    return result


# ---------------------------------------------------------------- specs

def from_spec(spec):
    """Build an :class:`AnalyticMap` from its ``{"kind": ..., "params": ...}`` description."""
    try:
        kind = spec["kind"]
        params = spec.get("params", {}) or {}
    except (TypeError, KeyError) as exc:
        raise FormatError(f"analytic map spec needs 'kind' and 'params': {exc}") from exc
    try:
        if kind == "identity":
            return Identity()
        if kind == "negate":
            return Negate()
        if kind == "scale":
            return Scale(float(params["lambda"]))
        if kind == "translate":
            return Translate(tuple(float(x) for x in params["v"]))
        if kind == "cone":
            return ConeMap(ConeGeometry(tuple(params["axis"]),
                                        float(params.get("inner_slope", 0.25)),
                                        float(params.get("outer_slope", 0.5))))
        if kind == "case1":
            discs = params["discs"]
            ds = DiscSequence(np.array([d["center"] for d in discs], dtype=float),
                              np.array([d["radius"] for d in discs], dtype=float))
            return case1_map(int(params["n"]), ds)
        if kind == "disc_swap":
            return DiscSwapMap(int(params["n"]))
        if kind == "compose":
            return Compose(tuple(from_spec(s) for s in params["maps"]))
    except KeyError as exc:
        raise FormatError(f"{kind} spec is missing parameter {exc}") from exc
    raise FormatError(f"unknown analytic map kind {kind!r}")
