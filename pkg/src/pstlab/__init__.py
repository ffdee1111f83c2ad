"""Orthogonal polynomials, Jacobi matrices and perfect state transfer."""

__version__ = "0.1.0"

from .errors import ConvergenceError, NumericalError, PSTLabError, SurgeryRefused, ValidationError
from .orthopoly import (
    KrawtchoukParams,
    Normalization,
    PolynomialTable,
    RecurrenceCoefficients,
    evaluate_ops,
    krawtchouk_coefficients,
    krawtchouk_monic,
    polynomial_zeros,
)
from .spectral import (
    JacobiMatrix,
    SpectralDecomposition,
    eigendecompose,
    eigenvectors_from_polynomials,
    spectral_polynomial_table,
    jacobi_from_spectrum,
    mirror_symmetric,
    mirror_weights,
)
from .walk import (
    AmplitudeSeries,
    BirthDeathRates,
    QuantumState,
    amplitude_spectral,
    birth_death_transition,
    evolve,
    transfer_probability,
)
from .pst import (
    GapWitness,
    PSTReport,
    certify_endpoint_pst,
    endpoint_polynomial_identity,
    ese_scan,
    gap_condition,
    interior_pst,
)
from .surgery import SurgerySpec, christoffel_transform, surgery_chain
from .xkrawtchouk import build_band_hamiltonian, build_family, x_amplitudes

__all__ = [
    "ConvergenceError",
    "NumericalError",
    "PSTLabError",
    "SurgeryRefused",
    "ValidationError",
    "KrawtchoukParams",
    "Normalization",
    "PolynomialTable",
    "RecurrenceCoefficients",
    "evaluate_ops",
    "krawtchouk_coefficients",
    "krawtchouk_monic",
    "polynomial_zeros",
    "JacobiMatrix",
    "SpectralDecomposition",
    "eigendecompose",
    "eigenvectors_from_polynomials",
    "spectral_polynomial_table",
    "jacobi_from_spectrum",
    "mirror_symmetric",
    "mirror_weights",
    "AmplitudeSeries",
    "BirthDeathRates",
    "QuantumState",
    "amplitude_spectral",
    "birth_death_transition",
    "evolve",
    "transfer_probability",
    "GapWitness",
    "PSTReport",
    "certify_endpoint_pst",
    "endpoint_polynomial_identity",
    "ese_scan",
    "gap_condition",
    "interior_pst",
    "SurgerySpec",
    "christoffel_transform",
    "surgery_chain",
    "build_band_hamiltonian",
    "build_family",
    "x_amplitudes",
]
