"""Sampling-based falsification of distortion and quasi-isometry bounds.

Sampling can refute a claimed bound but never prove one; the certificates in
:mod:`plqi.certify` carry the proofs. Every draw is keyed by (seed, chunk), so
reports are reproducible bit for bit.
"""
from dataclasses import dataclass, field
from math import ceil, log

import numpy as np

from . import _random
from .errors import EvaluationFailure, NoFiniteConstant, NotInCarrier
from .plmap import SimplicialMap, evaluate_many

MIN_SEPARATION = 1e-12
QI_GRID_RATIO = 1.01
QI_CAP = 1e6
BOUND_SLACK = 1e-9


@dataclass(frozen=True, eq=False)
class Ball:
    center: np.ndarray
    radius: float


@dataclass(frozen=True, eq=False)
class MapUnderTest:
    """A map plus the region its samples are drawn from.

    ``fn`` is a :class:`~plqi.plmap.SimplicialMap` (region: its source carrier)
    or any callable on (m, n) arrays with a :class:`Ball` region.
    """

    fn: object
    region: Ball | None = None

    @classmethod
    def ball(cls, fn, radius, center=None, dim=None):
        if center is None:
            center = np.zeros(dim)
        return cls(fn, Ball(np.asarray(center, dtype=float), float(radius)))

    @property
    def is_pl(self):
        return isinstance(self.fn, SimplicialMap)

    @property
    def dim(self):
        return self.fn.source.ambient_dim if self.is_pl else len(self.region.center)

    def __call__(self, pts):
        if self.is_pl:
            return evaluate_many(self.fn, pts)
        return np.asarray(self.fn(pts), dtype=float)


@dataclass(frozen=True)
class SamplePlan:
    """``stratification``: PL maps, fraction of within-simplex pairs (the rest
    straddle two simplices); balls, fraction of local pairs whose second point
    is a small perturbation of the first (the rest are independent)."""

    seed: int = 0
    pair_count: int = 10_000
    stratification: float = 0.5

    def __post_init__(self):
        if self.pair_count < 1:
            raise ValueError("pair_count must be >= 1")
        if not 0.0 <= self.stratification <= 1.0:
            raise ValueError("stratification must lie in [0, 1]")


@dataclass
class DistortionReport:
    seed: int
    pair_count: int
    min_ratio: float
    max_ratio: float
    argmin: tuple
    argmax: tuple

    def to_dict(self):
        return {
            "seed": self.seed,
            "pair_count": self.pair_count,
            "min_ratio": self.min_ratio,
            "max_ratio": self.max_ratio,
            "witnesses": {
                "min": [self.argmin[0].tolist(), self.argmin[1].tolist()],
                "max": [self.argmax[0].tolist(), self.argmax[1].tolist()],
            },
        }


def _ball_points(rng, count, n, center, radius):
    g = rng.standard_normal((count, n))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    r = radius * rng.uniform(0.0, 1.0, count) ** (1.0 / n)
    return center + r[:, None] * g


def _simplex_points(rng, c, sids):
    out = np.empty((len(sids), c.ambient_dim))
    for sid in np.unique(sids):
        rows = np.flatnonzero(sids == sid)
        verts = c.simplices[sid].vertices
        out[rows] = rng.dirichlet(np.ones(len(verts)), size=len(rows)) @ verts
    return out


def _draw_pairs(m, plan, rng, count):
    if m.is_pl:
        c = m.fn.source
        nsimp = len(c.simplices)
        a = rng.integers(nsimp, size=count)
        within = rng.uniform(size=count) < plan.stratification
        if nsimp > 1:
            b = np.where(within, a, (a + rng.integers(1, nsimp, size=count)) % nsimp)
        else:
            b = a
        return _simplex_points(rng, c, a), _simplex_points(rng, c, b)
    n, ball = m.dim, m.region
    x = _ball_points(rng, count, n, ball.center, ball.radius)
    y = _ball_points(rng, count, n, ball.center, ball.radius)
    local = rng.uniform(size=count) < plan.stratification
    if local.any():
        k = int(local.sum())
        step = rng.standard_normal((k, n))
        step /= np.linalg.norm(step, axis=1, keepdims=True)
        step *= ball.radius * 10.0 ** rng.uniform(-6.0, 0.0, k)[:, None]
        cand = x[local] + step
        # keep local partners inside the ball
        off = np.linalg.norm(cand - ball.center, axis=1) > ball.radius
        cand[off] = x[local][off] - step[off]
        y[local] = cand
    return x, y


def _pairs(m, plan):
    """Yield (x, y) chunks with d(x, y) >= MIN_SEPARATION, resampling short pairs."""
    for chunk, start, stop in _random.chunked(plan.pair_count):
        rng = _random.rng_for(plan.seed, "pairs", chunk)
        need = stop - start
        xs, ys = [], []
        while need:
            x, y = _draw_pairs(m, plan, rng, need)
            keep = np.linalg.norm(x - y, axis=1) >= MIN_SEPARATION
            xs.append(x[keep])
            ys.append(y[keep])
            need -= int(keep.sum())
        yield np.vstack(xs), np.vstack(ys)


def _eval(m, pts):
    try:
        return m(pts)
    except NotInCarrier as exc:
        raise EvaluationFailure(exc.point, exc) from exc


def pair_ratio(m, x, y):
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    fx, fy = _eval(m, np.vstack([x, y]))
    return float(np.linalg.norm(fx - fy) / np.linalg.norm(x - y))


def sample_distortion(m, plan):
    """Minimum and maximum of d(f(x), f(y)) / d(x, y) over the planned pairs."""
    lo = (np.inf, None, None)
    hi = (-np.inf, None, None)
    for x, y in _pairs(m, plan):
        f = _eval(m, np.vstack([x, y]))
        fx, fy = f[: len(x)], f[len(x):]
        ratios = np.linalg.norm(fx - fy, axis=1) / np.linalg.norm(x - y, axis=1)
        i, j = int(np.argmin(ratios)), int(np.argmax(ratios))
        if ratios[i] < lo[0]:
            lo = (float(ratios[i]), x[i].copy(), y[i].copy())
        if ratios[j] > hi[0]:
            hi = (float(ratios[j]), x[j].copy(), y[j].copy())
    return DistortionReport(plan.seed, plan.pair_count, lo[0], hi[0], lo[1:], hi[1:])


@dataclass(frozen=True)
class BoundCheck:
    passed: bool
    margin: float
    k: float

    @property
    def violation(self):
        return max(0.0, -self.margin)


def bound_check(report, k):
    """Pass iff the sampled ratio range lies inside [1/k, k] up to 1e-9.

    ``margin`` is the smaller slack of the two sides, negative on failure.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    margin = min(report.min_ratio - 1.0 / k, k - report.max_ratio)
    return BoundCheck(margin >= -BOUND_SLACK, float(margin), float(k))


@dataclass
class QIEstimate:
    M_hat: float
    required: float
    grid_ratio: float = QI_GRID_RATIO
    per_radius: list = field(default_factory=list)


def _required_constant(d, dfx):
    """Smallest M with d/M - M <= dfx <= M d + M, elementwise."""
    upper = dfx / (d + 1.0)
    lower = (-dfx + np.sqrt(dfx * dfx + 4.0 * d)) / 2.0
    return np.maximum(upper, lower)


def _grid_value(required):
    steps = max(1, ceil(log(max(required, 1.0)) / log(QI_GRID_RATIO) - 1e-12))
    return QI_GRID_RATIO ** steps


def _qi_single(m, plan):
    need = 1.0
    for x, y in _pairs(m, plan):
        f = _eval(m, np.vstack([x, y]))
        d = np.linalg.norm(x - y, axis=1)
        dfx = np.linalg.norm(f[: len(x)] - f[len(x):], axis=1)
        need = max(need, float(_required_constant(d, dfx).max()))
    return need


def qi_constants(m, plan, cap=QI_CAP, radii=None, growth_exponent=0.5):
    """Single-parameter quasi-isometry constant on the grid 1.01**k, k >= 1.

    With ``radii`` (ball maps only) the estimate is repeated on concentric
    balls using the same seed. A constant that keeps growing like
    radius**growth_exponent or faster between the last two radii means no
    radius-independent constant exists at the sampled scale.

    Raises
    ------
    NoFiniteConstant
        If the estimate exceeds ``cap`` or grows with the radius as above.
    """
    if radii is None:
        need = _qi_single(m, plan)
        M_hat = _grid_value(need)
        if M_hat > cap:
            raise NoFiniteConstant(f"QI constant {M_hat:.4g} exceeds cap {cap:.4g}", M_hat)
        return QIEstimate(M_hat, need)
    if m.is_pl:
        raise ValueError("a radius schedule needs a ball-sampled map")
    radii = sorted(float(r) for r in radii)
    per = []
    for R in radii:
        sub = MapUnderTest(m.fn, Ball(m.region.center, R))
        need = _qi_single(sub, plan)
        per.append((R, _grid_value(need)))
        if per[-1][1] > cap:
            raise NoFiniteConstant(f"QI constant {per[-1][1]:.4g} exceeds cap at radius {R:g}", per)
    if len(per) >= 2:
        (r0, m0), (r1, m1) = per[-2], per[-1]
        slope = log(m1 / m0) / log(r1 / r0)
        if slope >= growth_exponent:
            raise NoFiniteConstant(
                f"QI constant grows like radius**{slope:.2f} between radii {r0:g} and {r1:g}", per
            )
    return QIEstimate(per[-1][1], need, per_radius=per)


def equivalence_gap(f, g, radii, seed=0, samples_per_radius=2000, center=None, dim=None):
    """Running sup of d(f(x), g(x)) over nested balls.

    Each radius adds its own samples, half of them in the shell [0.9R, R],
    and the estimate at R covers every sample drawn so far, so the returned
    sequence is nondecreasing.
    """
    radii = [float(r) for r in radii]
    if any(b <= a for a, b in zip(radii, radii[1:])):
        raise ValueError("radii must be strictly increasing")
    n = dim if dim is not None else (len(center) if center is not None else None)
    if n is None:
        raise ValueError("pass dim or center")
    center = np.zeros(n) if center is None else np.asarray(center, dtype=float)
    best = 0.0
    out = []
    for idx, R in enumerate(radii):
        rng = _random.rng_for(seed, "gap", idx)
        half = samples_per_radius // 2
        inner = _ball_points(rng, samples_per_radius - half, n, center, R)
        dirs = rng.standard_normal((half, n))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        shell = center + R * rng.uniform(0.9, 1.0, half)[:, None] * dirs
        pts = np.vstack([inner, shell])
        gap = np.linalg.norm(np.asarray(f(pts)) - np.asarray(g(pts)), axis=1)
        best = max(best, float(gap.max()))
        out.append(best)
    return out
