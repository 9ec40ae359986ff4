"""Coverage and throughput analysis for dense d-dimensional cellular networks
under a dual-slope path loss model, with an independent Monte Carlo oracle."""
from .coverage import (
    CoverageKind,
    CoverageMethod,
    CoveragePoint,
    coverage_general,
    coverage_sinr,
    coverage_sir,
    coverage_snr,
    interference_laplace,
    nearest_distance_pdf,
)
from .errors import (
    DegenerateFit,
    DensecovError,
    DivergentInterference,
    InvalidExponents,
    InvalidScalar,
    NoConvergence,
    SingularParameter,
)
from .mcsim import (
    McEstimate,
    SimConfig,
    TrialStream,
    estimate_coverage,
    nearest_distances,
    run_trial,
    truncation_radius,
)
from .model import (
    DimTag,
    Dimension,
    DualSlopePathLoss,
    Equivalent2DParams,
    NetworkModel,
    ball_volume_coeff,
    equivalent_2d,
    make_model,
    path_loss,
)
from .specfun import DEFAULT_QUAD, QuadratureSpec, c_func, integrate_adaptive, rho
from .throughput import (
    DensitySweep,
    RegimeLabel,
    RegimeTag,
    SweepMetric,
    classify_regime,
    fit_loglog_slope,
    potential_throughput,
    sweep,
)

__version__ = "1.0.0"

__all__ = [
    "DimTag", "Dimension", "DualSlopePathLoss", "NetworkModel",
    "Equivalent2DParams", "ball_volume_coeff", "make_model", "path_loss",
    "equivalent_2d",
    "QuadratureSpec", "DEFAULT_QUAD", "c_func", "rho", "integrate_adaptive",
    "CoverageKind", "CoverageMethod", "CoveragePoint", "coverage_general",
    "coverage_sinr", "coverage_sir", "coverage_snr", "nearest_distance_pdf",
    "interference_laplace",
    "SweepMetric", "DensitySweep", "RegimeTag", "RegimeLabel",
    "potential_throughput", "sweep", "fit_loglog_slope", "classify_regime",
    "SimConfig", "McEstimate", "TrialStream", "truncation_radius", "run_trial",
    "estimate_coverage", "nearest_distances",
    "DensecovError", "InvalidScalar", "InvalidExponents",
    "DivergentInterference", "SingularParameter", "NoConvergence",
    "DegenerateFit",
]
