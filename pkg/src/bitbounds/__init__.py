"""Estimation-error lower bounds for one-bit measurements of a Gauss-Markov process.

A scalar state ``theta_k = alpha * theta_{k-1} + z_k`` is observed either
directly in Gaussian noise or through a single-bit quantizer. This package
computes the recursive Bayesian information matrices whose inverses bound the
mean square error of filtering, prediction, and smoothing under both
channels; their steady-state fixed points and the dB performance ratios
between the channels; and reference estimators (Kalman/RTS, point-mass grid)
with a Monte Carlo harness that validates the bounds empirically. A command
line tool (``bitbounds``) runs the standard sweep and validation experiments.
"""

from .bim import (
    BimKind,
    BimSequence,
    filter_bim_sequence,
    filter_bim_step,
    per_block_fims,
    predict_bim,
    predict_bim_step,
    smooth_bim_backward,
    smooth_bim_compact,
    smoothing_gain,
)
from .core import (
    GaussMarkovModel,
    MeasurementChannel,
    StateMoments,
    TransitionInfo,
    prior_bim,
    state_moments,
    stationary_variance,
    transition_info,
)
from .estimators import (
    GridFilterResult,
    GridSmootherResult,
    GridSpec,
    KalmanResult,
    MseReport,
    RtsResult,
    TrajectoryBatch,
    burn_in_blocks,
    grid_filter,
    grid_smoother,
    kalman_filter,
    kalman_steady_variance,
    monte_carlo_mse,
    rts_smoother,
    rts_steady_variance,
    simulate,
)
from .exceptions import ConvergenceError, NumericalDegeneracyError, QuadratureError
from .qfim import (
    DEFAULT_QUADRATURE,
    QuadratureRule,
    QuadratureSpec,
    expected_fim,
    expected_fq,
    fq,
    q_function,
)
from .steady import (
    FixedPointResult,
    SteadyStateReport,
    model_for_snr,
    performance_ratios,
    quadratic_filter_root,
    quadratic_gain_root,
    snr_to_sigma_z,
    steady_expected_fim,
    steady_filter_bim,
    steady_lag_gain,
    steady_smoothing_gain,
)

__version__ = "0.1.0"

__all__ = [
    "BimKind",
    "BimSequence",
    "ConvergenceError",
    "DEFAULT_QUADRATURE",
    "FixedPointResult",
    "GaussMarkovModel",
    "GridFilterResult",
    "GridSmootherResult",
    "GridSpec",
    "KalmanResult",
    "MeasurementChannel",
    "MseReport",
    "NumericalDegeneracyError",
    "QuadratureError",
    "QuadratureRule",
    "QuadratureSpec",
    "RtsResult",
    "StateMoments",
    "SteadyStateReport",
    "TrajectoryBatch",
    "TransitionInfo",
    "burn_in_blocks",
    "expected_fim",
    "expected_fq",
    "filter_bim_sequence",
    "filter_bim_step",
    "fq",
    "grid_filter",
    "grid_smoother",
    "kalman_filter",
    "kalman_steady_variance",
    "model_for_snr",
    "monte_carlo_mse",
    "per_block_fims",
    "performance_ratios",
    "predict_bim",
    "predict_bim_step",
    "prior_bim",
    "q_function",
    "quadratic_filter_root",
    "quadratic_gain_root",
    "rts_smoother",
    "rts_steady_variance",
    "simulate",
    "smooth_bim_backward",
    "smooth_bim_compact",
    "smoothing_gain",
    "snr_to_sigma_z",
    "state_moments",
    "stationary_variance",
    "steady_expected_fim",
    "steady_filter_bim",
    "steady_lag_gain",
    "steady_smoothing_gain",
    "transition_info",
    "__version__",
]
