"""Dephasing of Rydberg-atom spin waves in cold Gaussian ensembles.

Pair interference function P(t) by explicit pair summation, distance-space
Monte Carlo and deterministic oscillatory quadrature; closed-form long-time
asymptotics; and the pair correlation g2 of the stored spin wave.
"""

__version__ = "0.1.0"

from .asymptotics import (
    AsymptoteSpec,
    dd_asymptote,
    dd_constants,
    vdw_asymptote,
    vdw_constants,
)
from .cloud import (
    AtomCloud,
    SeparationSample,
    estimate_atom_number,
    pair_separation_density,
    sample_gaussian_cloud,
    sample_pair_separation,
    shift_density,
)
from .correlation import (
    CorrelationSeries,
    ExcitationDistribution,
    apply_background,
    g2_double_only,
    g2_longtime,
    g2_series,
    poisson_amplitudes,
)
from .errors import ConfigError, DegenerateGeometryError, QuadratureError, TruncationError
from .interference import (
    ComplexSeries,
    distance_mc,
    pair_sum,
    quadrature,
    quadrature_point,
    ramsey_transform,
    short_time_dd3,
)
from .potentials import (
    CoefficientModel,
    PotentialSpec,
    characteristic_frequency,
    coefficient_for_level,
    load_coefficient_table,
    pairwise_shift,
)

__all__ = [
    "AsymptoteSpec",
    "AtomCloud",
    "CoefficientModel",
    "ComplexSeries",
    "ConfigError",
    "CorrelationSeries",
    "DegenerateGeometryError",
    "ExcitationDistribution",
    "PotentialSpec",
    "QuadratureError",
    "SeparationSample",
    "TruncationError",
    "apply_background",
    "characteristic_frequency",
    "coefficient_for_level",
    "dd_asymptote",
    "dd_constants",
    "distance_mc",
    "estimate_atom_number",
    "g2_double_only",
    "g2_longtime",
    "g2_series",
    "load_coefficient_table",
    "pair_separation_density",
    "pair_sum",
    "pairwise_shift",
    "poisson_amplitudes",
    "quadrature",
    "quadrature_point",
    "ramsey_transform",
    "sample_gaussian_cloud",
    "sample_pair_separation",
    "shift_density",
    "short_time_dd3",
    "vdw_asymptote",
    "vdw_constants",
]
