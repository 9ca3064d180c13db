"""Stochastic-geometry toolkit for D2D-enabled aerial networks.

Library layers, bottom up: special functions and quadrature (``specfun``),
planar point processes (``pointprocess``), channel models (``channel``),
nearest-platform distance densities (``nearestdist``), mode selection and
its closed-form probabilities (``modeselect``), nearest-platform
association (``association``), and the Monte Carlo validation engine
(``montecarlo``).  The ``aerial-d2d`` CLI (``cli``) reproduces the report
figures as CSV plus rendered plots.
"""

__version__ = "0.1.0"

from .association import AssociationRecord, build_link_state, nearest_association
from .channel import (
    ENVIRONMENTS,
    CarrierConfig,
    EnvironmentProfile,
    atg_attenuation,
    atg_pathloss_db,
    d2d_attenuation,
    get_environment,
    los_probability,
    rss,
)
from .modeselect import (
    LinkState,
    ModeDecision,
    PowerConfig,
    Scheme,
    SchemeConfig,
    d2d_probability_rsss,
    d2d_probability_tdds,
    mean_height_attenuation,
    mean_threshold_distance,
    rss_threshold_distance,
    rsss_decide,
    tdds_decide,
    threshold_distance,
)
from .montecarlo import (
    DeploymentConfig,
    EstimateWithCI,
    ExperimentConfig,
    HistogramBin,
    estimate_d2d_probability,
    estimate_mean_threshold_distance,
    nearest_distance_histogram,
    sample_nearest_distances,
)
from .nearestdist import (
    DistancePdfParams,
    cdf_approx,
    lens_area,
    pdf_approx,
    pdf_exact,
    pdf_grid_span,
    sample_nearest_distance,
)
from .pointprocess import (
    EmptyPatternError,
    MhcpParams,
    Point,
    PointPattern,
    mhcp_density,
    mhcp_thin,
    nearest_point_distance,
    sample_ppp,
    substream,
)
from .specfun import (
    ConvergenceError,
    QuadratureSpec,
    integrate,
    upper_incomplete_gamma,
    upper_incomplete_gamma_scaled,
)

__all__ = [
    "__version__",
    "AssociationRecord",
    "CarrierConfig",
    "ConvergenceError",
    "DeploymentConfig",
    "DistancePdfParams",
    "ENVIRONMENTS",
    "EmptyPatternError",
    "EnvironmentProfile",
    "EstimateWithCI",
    "ExperimentConfig",
    "HistogramBin",
    "LinkState",
    "MhcpParams",
    "ModeDecision",
    "Point",
    "PointPattern",
    "PowerConfig",
    "QuadratureSpec",
    "Scheme",
    "SchemeConfig",
    "atg_attenuation",
    "atg_pathloss_db",
    "build_link_state",
    "cdf_approx",
    "d2d_attenuation",
    "d2d_probability_rsss",
    "d2d_probability_tdds",
    "estimate_d2d_probability",
    "estimate_mean_threshold_distance",
    "get_environment",
    "integrate",
    "lens_area",
    "los_probability",
    "mean_height_attenuation",
    "mean_threshold_distance",
    "mhcp_density",
    "mhcp_thin",
    "nearest_association",
    "nearest_distance_histogram",
    "nearest_point_distance",
    "pdf_approx",
    "pdf_exact",
    "pdf_grid_span",
    "rss",
    "rss_threshold_distance",
    "rsss_decide",
    "sample_nearest_distance",
    "sample_nearest_distances",
    "sample_ppp",
    "substream",
    "tdds_decide",
    "threshold_distance",
    "upper_incomplete_gamma",
    "upper_incomplete_gamma_scaled",
]
