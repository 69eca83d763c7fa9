"""Exact arithmetic for a four-parameter deformed affine Hecke algebra, its discrete
Hamiltonian and Bethe eigenfunctions, and the derived (s, q) particle system."""

from .hamiltonian import (
    Propagator, apply_Delta, apply_H, apply_H_global, apply_H_rewritten, bethe_phi, propagate,
)
from .lattice import Params, StandingAssumptionError, WeylWord, cluster_coordinate, shortest_chamber_word
from .operators import LatticeFunction, LaurentPolynomial, apply_T, apply_X, delta_function, pairing
from .scalar import Scalar, format_scalar, scalar
from .stochastic import (
    StochasticParams, jump_rate, psi_z, simulate, simulate_many, uniformization_distribution,
)

__version__ = "0.1.0"

__all__ = [
    "Params", "StandingAssumptionError", "WeylWord", "shortest_chamber_word", "cluster_coordinate",
    "LatticeFunction", "LaurentPolynomial", "delta_function", "apply_T", "apply_X", "pairing",
    "Propagator", "propagate", "apply_H", "apply_H_global", "apply_H_rewritten", "apply_Delta",
    "bethe_phi", "StochasticParams", "jump_rate", "psi_z", "simulate", "simulate_many",
    "uniformization_distribution", "Scalar", "scalar", "format_scalar", "__version__",
]
