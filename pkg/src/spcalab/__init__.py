"""spcalab: sparse-PCA consistency laboratory for the d >> n regime.

Estimators (dual PCA, simple thresholding, iterative penalized rank-one,
oracle subspace), BIC threshold selection, spiked-model samplers, and a
reproducible Monte-Carlo harness with CSV/SVG output.
"""

from .eigen import (
    DualComponent,
    EigenPair,
    canonical_sign,
    dual_first_component,
    jacobi_eigh,
    sym_eigen,
)
from .estimators import (
    LoadingVector,
    RspcaIteration,
    RspcaTrace,
    oracle_estimator,
    pca_first,
    rspca,
    st_estimator,
)
from .exceptions import (
    ConfigError,
    DegenerateInputError,
    DimensionError,
    DomainError,
    NumericError,
    SpcaLabError,
)
from .experiment import (
    PAPER_PAIRS,
    CounterexampleResult,
    ExperimentConfig,
    ExperimentResult,
    ReplicationRecord,
    SummaryRow,
    emit_csv,
    emit_phase,
    emit_plots,
    emit_summary_csv,
    run_and_emit,
    run_counterexample,
    run_experiment,
)
from .metrics import (
    BicValue,
    LambdaBounds,
    LambdaSelection,
    MetricRow,
    RateDiagnostic,
    angle_degrees,
    bic,
    default_gamma,
    default_lambda_grid,
    evaluate_estimate,
    fit_rate,
    gamma_is_valid,
    select_lambda_bic,
    support_errors,
    theorem_lambda_bounds,
)
from .model import (
    DataMatrix,
    EigenSystem,
    Provenance,
    SpikedSpec,
    Sphericity,
    build_eigensystem,
    failure_probability,
    sample_counterexample,
    sample_gaussian,
    sample_gaussian_general,
    sphericity,
)
from .penalties import PenaltySpec, penalty_value, threshold, threshold_scalar

__version__ = "0.1.0"

__all__ = [
    "BicValue",
    "ConfigError",
    "CounterexampleResult",
    "DataMatrix",
    "DegenerateInputError",
    "DimensionError",
    "DomainError",
    "DualComponent",
    "EigenPair",
    "EigenSystem",
    "ExperimentConfig",
    "ExperimentResult",
    "LambdaBounds",
    "LambdaSelection",
    "LoadingVector",
    "MetricRow",
    "NumericError",
    "PAPER_PAIRS",
    "PenaltySpec",
    "Provenance",
    "RateDiagnostic",
    "ReplicationRecord",
    "RspcaIteration",
    "RspcaTrace",
    "SpcaLabError",
    "SpikedSpec",
    "Sphericity",
    "SummaryRow",
    "angle_degrees",
    "bic",
    "build_eigensystem",
    "canonical_sign",
    "default_gamma",
    "default_lambda_grid",
    "dual_first_component",
    "emit_csv",
    "emit_phase",
    "emit_plots",
    "emit_summary_csv",
    "evaluate_estimate",
    "failure_probability",
    "fit_rate",
    "gamma_is_valid",
    "jacobi_eigh",
    "oracle_estimator",
    "pca_first",
    "penalty_value",
    "rspca",
    "run_and_emit",
    "run_counterexample",
    "run_experiment",
    "sample_counterexample",
    "sample_gaussian",
    "sample_gaussian_general",
    "select_lambda_bic",
    "sphericity",
    "st_estimator",
    "support_errors",
    "sym_eigen",
    "theorem_lambda_bounds",
    "threshold",
    "threshold_scalar",
]
