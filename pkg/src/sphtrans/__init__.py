"""Numerical spherical transform engine for rank-one noncompact symmetric spaces.

Forward transform, Plancherel density, wave-packet inversion and
Schwartz-class diagnostics, all tied to one calibrated measure constant
per group preset.
"""

from .groups import (
    GroupDatum,
    PRESET_NAMES,
    haar_density,
    haar_log_derivative,
    haar_tail_bound,
    preset,
    uncalibrated_preset,
)
from .specfun import (
    ExpDecay,
    QuadratureSpec,
    gauss_2f1,
    integrate_halfline,
    integrate_interval,
    log_gamma,
)
from .spherical import RadialProfile, phi, phi_d1, phi_d2, phi_integral_oracle, sigma, xi
from .cfunction import (
    CFit,
    PlancherelDensity,
    aggregate_density,
    asymptotic_c_oracle,
    c_function,
    plancherel_density,
)
from .transform import (
    SpectralDecay,
    SpectralFunction,
    TransformResult,
    calibrate,
    casimir_radial,
    convolve_at_identity,
    default_spectral_grid,
    expansion_term,
    hc_transform,
    hc_transform_at,
    plancherel_pairing,
    spectral_multiplier,
    wave_packet,
)
from .schwartz import (
    MembershipBudget,
    TubeSpec,
    image_membership,
    schwartz_seminorm,
    tube_extension_check,
    weyl_symmetry_defect,
)

__version__ = "0.1.0"

__all__ = [
    "GroupDatum",
    "PRESET_NAMES",
    "preset",
    "uncalibrated_preset",
    "haar_density",
    "haar_log_derivative",
    "haar_tail_bound",
    "QuadratureSpec",
    "ExpDecay",
    "log_gamma",
    "gauss_2f1",
    "integrate_interval",
    "integrate_halfline",
    "RadialProfile",
    "phi",
    "phi_d1",
    "phi_d2",
    "phi_integral_oracle",
    "xi",
    "sigma",
    "CFit",
    "PlancherelDensity",
    "c_function",
    "plancherel_density",
    "asymptotic_c_oracle",
    "aggregate_density",
    "SpectralDecay",
    "SpectralFunction",
    "TransformResult",
    "default_spectral_grid",
    "hc_transform",
    "hc_transform_at",
    "convolve_at_identity",
    "wave_packet",
    "calibrate",
    "plancherel_pairing",
    "expansion_term",
    "casimir_radial",
    "spectral_multiplier",
    "MembershipBudget",
    "TubeSpec",
    "schwartz_seminorm",
    "weyl_symmetry_defect",
    "image_membership",
    "tube_extension_check",
]
