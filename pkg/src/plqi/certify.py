"""Explicit bi-Lipschitz certificates for simplicial homeomorphisms.

A certificate records the measured vertex-ratio bound M, the facet-angle margin
theta over both complexes, and the resulting per-simplex constant

    k = M * N**(d - 1) * sqrt(6)**(d - 2),   N = N1(theta)**2,

with ``k = M`` for complexes of edges. When the source carrier is convex the
same constant holds globally, because a straight segment can be cut into
pieces that each stay in one simplex.
"""
from dataclasses import asdict, dataclass
from itertools import combinations
from math import cos, isfinite, pi, sin, sqrt, tan

import numpy as np

from . import _random
from .complex import VACUOUS, facet_angle_margin, locate_many, validate
from .errors import (
    DegenerateEdge,
    InvalidComplex,
    ParameterRangeError,
    ThetaOutOfRange,
)
from .plmap import validate_simplicial

STRICTNESS = 1e-6
TRIANGLE_SLACK = 1e-9
CONVEXITY_SAMPLES = 1000


@dataclass(frozen=True)
class PLDeltaCertificate:
    n: int
    M_obs: float
    M: float
    theta: float | None
    N1: float | None
    N: float | None
    k_simplex: float
    k_global: float | None
    convex_carrier: bool

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, data):
        return cls(**{k: data.get(k) for k in cls.__dataclass_fields__})


def vertex_ratio_bound(m):
    """Largest max(r, 1/r) over edge length ratios r of the maximal source simplices."""
    src, tgt = m.source.vertices, m.target.vertices
    img = m.vertex_images
    worst = 1.0
    for t in m.source.maximal_simplices:
        for i, j in combinations(t, 2):
            d = np.linalg.norm(src[i] - src[j])
            dimg = np.linalg.norm(tgt[img[i]] - tgt[img[j]])
            if d == 0.0 or dimg == 0.0:
                raise DegenerateEdge(f"edge ({i}, {j}) has zero length in the source or its image")
            r = dimg / d
            worst = max(worst, r, 1.0 / r)
    return float(worst)


def n1_constant(theta):
    """Triangle constant: a + b <= N1 * c whenever the angle at C lies in [theta, pi - theta]."""
    if not (0.0 < theta <= pi / 2):
        raise ThetaOutOfRange(f"theta must lie in (0, pi/2], got {theta!r}")
    half = theta / 2
    return 1.0 + 1.0 / tan(half) + cos(half) ** 2 / sin(half)


def prop31_bound(M, theta, n):
    if not n >= 1 or int(n) != n:
        raise ParameterRangeError(f"dimension must be a positive integer, got {n!r}")
    if not (M >= 1.0 and isfinite(M)):
        raise ParameterRangeError(f"vertex ratio bound must be finite and >= 1, got {M!r}")
    if n == 1:
        return float(M)
    N = n1_constant(theta) ** 2
    return float(M * N ** (n - 1) * 6.0 ** ((n - 2) / 2))


def _carrier_is_convex(c, seed, samples=CONVEXITY_SAMPLES):
    if len(c.simplices) == 1:
        return True
    nsimp = len(c.simplices)
    for chunk, start, stop in _random.chunked(samples):
        rng = _random.rng_for(seed, "convexity", chunk)
        count = stop - start
        a = rng.integers(nsimp, size=count)
        b = (a + rng.integers(1, nsimp, size=count)) % nsimp
        pa = _dirichlet_points(c, a, rng)
        pb = _dirichlet_points(c, b, rng)
        probes = np.vstack([pa + t * (pb - pa) for t in (0.25, 0.5, 0.75)])
        if np.any(locate_many(c, probes) < 0):
            return False
    return True


def _dirichlet_points(c, sids, rng):
    out = np.empty((len(sids), c.ambient_dim))
    for row, sid in enumerate(sids):
        verts = c.simplices[sid].vertices
        out[row] = rng.dirichlet(np.ones(len(verts))) @ verts
    return out


def certify(m, convexity="auto", seed=0):
    """Certificate for a simplicial homeomorphism ``m``.

    Parameters
    ----------
    m : SimplicialMap
    convexity : {"auto", "assume", "none"}
        ``auto`` samples segments between random points of distinct simplices and
        accepts the carrier as convex when every probe stays inside; ``assume``
        trusts the caller; ``none`` withholds the global constant.
    seed : int
        Seed for the convexity probe.
    """
    for name, c in (("source", m.source), ("target", m.target)):
        rep = validate(c)
        if not rep.valid:
            raise InvalidComplex(f"{name} complex is invalid: {rep.to_dict()}")
    validate_simplicial(m, require_homeomorphism=True)

    M_obs = vertex_ratio_bound(m)
    M = M_obs * (1.0 + STRICTNESS)
    dim = max(m.source.dims)
    if dim <= 1:
        theta = N1 = N = None
        k = prop31_bound(M, None, 1)
    else:
        theta = min(facet_angle_margin(m.source), facet_angle_margin(m.target))
        N1 = n1_constant(theta)
        N = N1 ** 2
        k = prop31_bound(M, theta, dim)

    if convexity == "assume":
        convex = True
    elif convexity == "none":
        convex = False
    elif convexity == "auto":
        convex = _carrier_is_convex(m.source, seed)
    else:
        raise ValueError(f"convexity must be auto, assume or none, not {convexity!r}")
    return PLDeltaCertificate(
        n=m.source.ambient_dim,
        M_obs=M_obs,
        M=M,
        theta=theta,
        N1=N1,
        N=N,
        k_simplex=k,
        k_global=k if convex else None,
        convex_carrier=convex,
    )


@dataclass(frozen=True)
class TriangleReport:
    theta: float
    N1: float
    trials: int
    violations: int
    worst_ratio: float
    seed: int

    @property
    def passed(self):
        return self.violations == 0


def random_triangles(theta, count, rng):
    """Sides a = |BC|, b = |CA|, c = |AB| of random triangles with C at the origin."""
    phi = rng.uniform(0.0, 2 * pi, count)
    gamma = rng.uniform(theta, pi - theta, count)
    a = 10.0 ** rng.uniform(-2.0, 2.0, count)
    b = 10.0 ** rng.uniform(-2.0, 2.0, count)
    A = b[:, None] * np.column_stack([np.cos(phi), np.sin(phi)])
    B = a[:, None] * np.column_stack([np.cos(phi + gamma), np.sin(phi + gamma)])
    c = np.linalg.norm(A - B, axis=1)
    return a, b, c


def triangle_inequality_check(theta, trials, seed=0):
    """Randomized check of a + b <= N1(theta) c.

    The first two trials are pinned to isosceles triangles with the angle at C
    equal to theta and pi - theta, the extreme admissible shapes.
    """
    if not (0.0 < theta < pi / 2):
        raise ThetaOutOfRange(f"theta must lie in (0, pi/2), got {theta!r}")
    N1 = n1_constant(theta)
    violations = 0
    worst = 0.0
    for chunk, start, stop in _random.chunked(trials):
        rng = _random.rng_for(seed, "triangles", chunk)
        a, b, c = random_triangles(theta, stop - start, rng)
        if chunk == 0:
            for row, gamma in enumerate((theta, pi - theta)[: stop - start]):
                a[row] = b[row] = 1.0
                c[row] = 2.0 * sin(gamma / 2)
        violations += int(np.count_nonzero(a + b > N1 * c + TRIANGLE_SLACK))
        worst = max(worst, float(((a + b) / c).max()))
    return TriangleReport(theta, N1, trials, violations, worst, seed)
