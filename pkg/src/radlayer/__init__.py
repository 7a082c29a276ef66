"""Radical and socle layerings of representations of k<x1..xn>/((x)^3 + (S))."""

from .algebra import LocalAlgebra, QuiverPresentation, make_local_algebra, normalize_tuple
from .bundle import fiber_constancy_probe, fiber_dim
from .construct import witness_any, witness_dim1, witness_dimgt1, witness_exceptional
from .exactmat import DEFAULT_FIELD, GF, QQ, FieldSpec, Matrix
from .layering import components, generic_socdim, h0_generic, h1_generic, rad_nonempty, root_decompose
from .rep import LayeringVector, Representation, adapt_basis, h_invariants, raddim, socdim
from .sampler import brute_force_layerings, estimate_generic, sample_with_radlayering

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_FIELD",
    "FieldSpec",
    "GF",
    "LayeringVector",
    "LocalAlgebra",
    "Matrix",
    "QQ",
    "QuiverPresentation",
    "Representation",
    "adapt_basis",
    "brute_force_layerings",
    "components",
    "estimate_generic",
    "fiber_constancy_probe",
    "fiber_dim",
    "generic_socdim",
    "h0_generic",
    "h1_generic",
    "h_invariants",
    "make_local_algebra",
    "normalize_tuple",
    "rad_nonempty",
    "raddim",
    "root_decompose",
    "sample_with_radlayering",
    "socdim",
    "witness_any",
    "witness_dim1",
    "witness_dimgt1",
    "witness_exceptional",
]
