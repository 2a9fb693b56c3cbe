"""Threshold virtual levels of finite-rank diagonal perturbations of the
half-line Jacobi operator with off-diagonal ``(-sqrt 2, -1, -1, ...)``.

The main entry points are re-exported here; see the submodules for the
oracles, samplers and the command-line interface.
"""

__version__ = "0.1.0"

from .core import (  # noqa: E402
    DomainError,
    OnVarietyError,
    Potential,
    ThetaPolynomial,
    big_q_sequence,
    c_n,
    jost_coeffs,
    jost_eval,
    phi,
    q_sequence,
    reflect,
    theta_of_z,
    z_of_theta,
)
from .classifier import (  # noqa: E402
    RegionClassification,
    SpectralClassification,
    classify_D,
    classify_G,
    classify_spectral,
    on_variety_point,
    sign_changes,
)

__all__ = [
    "DomainError",
    "OnVarietyError",
    "Potential",
    "RegionClassification",
    "SpectralClassification",
    "ThetaPolynomial",
    "big_q_sequence",
    "c_n",
    "classify_D",
    "classify_G",
    "classify_spectral",
    "jost_coeffs",
    "jost_eval",
    "on_variety_point",
    "phi",
    "q_sequence",
    "reflect",
    "sign_changes",
    "theta_of_z",
    "z_of_theta",
]
