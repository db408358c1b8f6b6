"""Numerical toolkit for Weil-Petersson class homeomorphisms and their flows.

Modules
-------
functions  circle/line function types, H^1/2, H^3/2 and BMO seminorms, Cayley maps
mollifier  smoothing kernels phi, psi and the derived Wirtinger kernels alpha, beta
semmes     mollifier extension rho_u, Beltrami coefficient and its area energy
flow       RK4 flows of time-dependent vector fields and log-derivative checks
wpmap      the exponential map Psi, its differential and inverse differential
reich      Cauchy-type extension operators A, A''' and H on the upper half plane
cli        command-line front end
"""
from .errors import (DegeneracyError, ExpOverflowError, InvalidInputError, MonotonicityError,
                     OutOfDomainError, ResolutionError, SpecParseError, StepSizeError, WPFlowError)
from .functions import (CircleFunction, IncreasingMap, LineFunction, SeminormReport, bmo_norm, builtin,
                        h12_circle, h12_line, h32_norm, jn_moment, parse_function)
from .kernels import backend_name, compiled_available
from .manifest import ConfigSpec, RunManifest
from .mollifier import Mollifier, derive_alpha_beta, make_phi, make_psi
from .semmes import HalfPlaneGrid, beltrami, rho_extension, wirtinger, wp_energy
from .flow import FlowCurve, TimeDependentField, integrate_flow
from .wpmap import SobolevClass, TangentVectorWP, d_psi, d_psi_inv, psi
from .reich import BoundaryFunction, reich_A, reich_A3, reich_H

__version__ = "0.1.0"

__all__ = [
    "WPFlowError", "InvalidInputError", "OutOfDomainError", "ResolutionError", "DegeneracyError",
    "StepSizeError", "MonotonicityError", "ExpOverflowError", "SpecParseError",
    "CircleFunction", "LineFunction", "IncreasingMap", "SeminormReport", "h12_circle", "h12_line",
    "h32_norm", "bmo_norm", "jn_moment", "builtin", "parse_function",
    "backend_name", "compiled_available", "ConfigSpec", "RunManifest",
    "Mollifier", "make_phi", "make_psi", "derive_alpha_beta",
    "HalfPlaneGrid", "rho_extension", "wirtinger", "beltrami", "wp_energy",
    "TimeDependentField", "FlowCurve", "integrate_flow",
    "SobolevClass", "TangentVectorWP", "psi", "d_psi", "d_psi_inv",
    "BoundaryFunction", "reich_A", "reich_A3", "reich_H",
]
