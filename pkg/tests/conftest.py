import numpy as np
import pytest
from scipy.spatial import Delaunay

from plqi.complex import Complex, validate
from plqi.geometry import Simplex, degeneracy_measure
from plqi.plmap import SimplicialMap

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def record():
    def _record(criterion, passed, detail=""):
        line = f"[{'PASS' if passed else 'FAIL'}] {criterion}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return passed
    return _record


def random_simplex(rng, n, min_measure=1e-2):
    while True:
        v = rng.standard_normal((n + 1, n)) * rng.uniform(0.5, 3.0)
        s = Simplex(v)
        if degeneracy_measure(s) >= min_measure:
            return s


def delaunay_complex(rng, npts, n=2):
    pts = rng.uniform(-1.0, 1.0, (npts, n))
    tri = Delaunay(pts)
    keep = []
    for simp in tri.simplices:
        if degeneracy_measure(Simplex(pts[simp])) > 1e-4:
            keep.append(tuple(sorted(int(i) for i in simp)))
    used = sorted({i for t in keep for i in t})
    remap = {old: new for new, old in enumerate(used)}
    return Complex(n, pts[used], tuple(tuple(remap[i] for i in t) for t in keep))


def _orientations(c):
    return np.array([np.linalg.det(s.edges) for s in c.simplices])


def random_homeomorphism(rng, npts=12, n=2, jitter=0.05, check=True):
    """Delaunay source, target = random affine image with jittered vertices."""
    while True:
        src = delaunay_complex(rng, npts, n)
        A = np.eye(n) + 0.3 * rng.standard_normal((n, n))
        if np.linalg.det(A) < 0.2:
            continue
        tv = src.vertices @ A.T + rng.standard_normal(n) + jitter * rng.standard_normal(src.vertices.shape)
        tgt = Complex(n, tv, src.maximal_simplices)
        if np.any(np.sign(_orientations(src)) != np.sign(_orientations(tgt))):
            continue
        if min(degeneracy_measure(s) for s in tgt.simplices) < 1e-4:
            continue
        if check and not validate(tgt).valid:
            continue
        return SimplicialMap(src, tgt, tuple(range(len(src.vertices))))


def random_rotation(rng, n):
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
