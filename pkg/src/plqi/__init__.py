"""Certify PL homeomorphisms as bi-Lipschitz quasi-isometries and run the
commutator experiments on explicit quasi-isometries of R^n."""
from .certify import PLDeltaCertificate, certify, n1_constant, prop31_bound, vertex_ratio_bound
from .complex import VACUOUS, Complex, facet_angle_margin, locate, validate
from .geometry import (
    BarycentricCoords,
    Simplex,
    barycentric_coordinates,
    clip_segment,
    degeneracy_measure,
    dihedral_angle,
    point_from_barycentric,
)
from .plmap import SimplicialMap, compose, evaluate, inverse, validate_simplicial

__version__ = "0.1.0"
