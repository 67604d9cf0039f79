"""Nonparametric changepoint estimation from pattern frequencies.

Estimates the locations of distribution changes in a time series without
independence, finite-memory, or mixing assumptions: samples are compared
through sliding-window pattern frequencies at every length scale, and
splits maximizing that empirical distance become changepoint candidates.
"""

from .bench import (
    ExperimentConfig,
    ExperimentResult,
    PiecewiseTemplate,
    RunRecord,
    baseline_mean_cusum,
    estimation_error,
    run_sweep,
)
from .distance import (
    DistanceParams,
    FrequencyTable,
    default_weight,
    empirical_distance,
    empirical_frequencies,
    quantize,
)
from .estimators import (
    Candidate,
    CandidateList,
    ChangepointEstimator,
    ClusterAssignment,
    ListEstimator,
    Segmentation,
    cluster_segments,
    delta,
    find_changepoints,
    list_estimator,
    phi,
)
from .generators import (
    BernoulliIID,
    HiddenIrrationalRotation,
    IrrationalRotation,
    PiecewiseSpec,
    gen_bernoulli,
    gen_hidden_rotation,
    gen_irrational_rotation,
    gen_piecewise,
    running_mean,
)
from .validation import ParameterError

__version__ = "0.1.0"

__all__ = [
    "BernoulliIID",
    "Candidate",
    "CandidateList",
    "ChangepointEstimator",
    "ClusterAssignment",
    "DistanceParams",
    "ExperimentConfig",
    "ExperimentResult",
    "FrequencyTable",
    "HiddenIrrationalRotation",
    "IrrationalRotation",
    "ListEstimator",
    "ParameterError",
    "PiecewiseSpec",
    "PiecewiseTemplate",
    "RunRecord",
    "Segmentation",
    "baseline_mean_cusum",
    "cluster_segments",
    "default_weight",
    "delta",
    "empirical_distance",
    "empirical_frequencies",
    "estimation_error",
    "find_changepoints",
    "gen_bernoulli",
    "gen_hidden_rotation",
    "gen_irrational_rotation",
    "gen_piecewise",
    "list_estimator",
    "phi",
    "quantize",
    "run_sweep",
    "running_mean",
    "__version__",
]
