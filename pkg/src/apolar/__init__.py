"""Macaulay inverse systems for Artinian level local algebras."""
from __future__ import annotations

__version__ = "0.1.0"

from .exactlin import ContractError, RationalMatrix, Subspace
from .gradedness import certify_graded_s3, is_compressed_s3
from .hvectors import (
    InadmissibleError,
    UnsupportedError,
    construct,
    enumerate_admissible,
    is_admissible_level_local,
    macaulay_growth,
)
from .inverse_system import (
    HVector,
    InverseSystem,
    algebra_model,
    apolar_ideal_upto,
    build,
    hilbert_function,
    is_level,
    module_equal,
    q0,
    q_decomposition,
    socle_dimension,
    truncation,
)
from .kernels import BACKEND
from .multipoly import Poly, parse, format_poly

__all__ = [
    "BACKEND", "ContractError", "HVector", "InadmissibleError", "InverseSystem",
    "Poly", "RationalMatrix", "Subspace", "UnsupportedError", "__version__",
    "algebra_model", "apolar_ideal_upto", "build", "certify_graded_s3", "construct",
    "enumerate_admissible", "format_poly", "hilbert_function", "is_admissible_level_local",
    "is_compressed_s3", "is_level", "macaulay_growth", "module_equal", "parse", "q0",
    "q_decomposition", "socle_dimension", "truncation",
]
