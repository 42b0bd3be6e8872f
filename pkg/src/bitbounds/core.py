"""Scalar Gauss-Markov model and the building blocks of its information recursions.

The state evolves as ``theta_k = alpha * theta_{k-1} + z_k`` with
``z_k ~ N(0, sigma_z^2)`` and a Gaussian prior ``theta_0 ~ N(mu0, sigma0^2)``.
Each block k >= 1 is observed either directly in additive Gaussian noise
(``y_k = theta_k + eta_k``) or through a single-bit quantizer
(``r_k = sign(theta_k + eta_k)``, with ``sign(0) := +1``).

This module provides the model container, the measurement-channel selector,
the per-step transition information terms used by every bound recursion, and
closed forms for the marginal state moments.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np


class MeasurementChannel(enum.Enum):
    """How the noisy state is delivered to the estimator."""

    UNQUANTIZED = "unquantized"
    ONE_BIT = "one_bit"


@dataclass(frozen=True)
class GaussMarkovModel:
    """First-order scalar Gauss-Markov process with additive Gaussian noise.

    Parameters
    ----------
    alpha : float
        State transition coefficient. Requires ``|alpha| <= 1``; values with
        ``|alpha| = 1`` are accepted but have no stationary distribution.
    sigma_z : float
        Process noise standard deviation, must be positive.
    sigma_eta : float
        Measurement noise standard deviation, must be positive.
    sigma0 : float
        Prior standard deviation of ``theta_0``, must be positive.
    mu0 : float, optional
        Prior mean of ``theta_0``. Defaults to 0, which keeps the one-bit
        channel symmetric around its threshold.
    """

    alpha: float
    sigma_z: float
    sigma_eta: float
    sigma0: float
    mu0: float = 0.0

    def __post_init__(self):
        if not abs(self.alpha) <= 1.0:
            raise ValueError(f"GaussMarkovModel requires |alpha| <= 1, got {self.alpha}.")
        for name in ("sigma_z", "sigma_eta", "sigma0"):
            value = getattr(self, name)
            if not value > 0.0 or not math.isfinite(value):
                raise ValueError(f"GaussMarkovModel requires {name} > 0, got {value}.")
        if not math.isfinite(self.mu0):
            raise ValueError(f"GaussMarkovModel requires finite mu0, got {self.mu0}.")

    @property
    def is_stationary(self) -> bool:
        """Whether the state process admits a stationary distribution."""
        return abs(self.alpha) < 1.0


@dataclass(frozen=True)
class TransitionInfo:
    """Transition information terms of one state propagation step.

    For the linear-Gaussian transition these are the four blocks of the
    joint information contributed by ``p(theta_k | theta_{k-1})``:
    ``d11 = alpha^2 / sigma_z^2``, ``d22 = 1 / sigma_z^2`` and
    ``d12 = d21 = -alpha / sigma_z^2``. They are stored as square matrices
    so the recursions also cover block states of dimension M > 1; the scalar
    model ships with M = 1.
    """

    d11: np.ndarray
    d12: np.ndarray
    d21: np.ndarray
    d22: np.ndarray

    def __post_init__(self):
        for name in ("d11", "d12", "d21", "d22"):
            block = np.atleast_2d(np.asarray(getattr(self, name), dtype=float))
            if block.shape[0] != block.shape[1]:
                raise ValueError(f"TransitionInfo block {name} must be square, got {block.shape}.")
            object.__setattr__(self, name, block)
        if self.d11.shape != self.d22.shape or self.d12.shape != self.d11.shape:
            raise ValueError("TransitionInfo blocks must share one square shape.")
        if not np.allclose(self.d12, self.d21.T):
            raise ValueError("TransitionInfo requires d21 == d12.T.")

    @property
    def dim(self) -> int:
        return self.d11.shape[0]


@dataclass(frozen=True)
class StateMoments:
    """Marginal mean and variance of ``theta_k`` at one block index."""

    block_index: int
    mean: float
    variance: float

    def __post_init__(self):
        if self.block_index < 0:
            raise ValueError(f"StateMoments requires block_index >= 0, got {self.block_index}.")
        if not self.variance > 0.0:
            raise ValueError(f"StateMoments requires variance > 0, got {self.variance}.")


def transition_info(model: GaussMarkovModel) -> TransitionInfo:
    """Transition information terms of the scalar model, as 1x1 blocks.

    Parameters
    ----------
    model : GaussMarkovModel

    Returns
    -------
    TransitionInfo
        ``d11 = alpha^2/sigma_z^2``, ``d22 = 1/sigma_z^2`` and
        ``d12 = d21 = -alpha/sigma_z^2``. The stacked 2x2 block
        ``[[d11, d12], [d21, d22]]`` has rank one by construction.
    """
    s = 1.0 / model.sigma_z**2
    a = model.alpha
    return TransitionInfo(
        d11=np.array([[a * a * s]]),
        d12=np.array([[-a * s]]),
        d21=np.array([[-a * s]]),
        d22=np.array([[s]]),
    )


def prior_bim(model: GaussMarkovModel) -> np.ndarray:
    """Information matrix of the Gaussian prior, ``1/sigma0^2`` for M = 1."""
    return np.array([[1.0 / model.sigma0**2]])


def state_moments(model: GaussMarkovModel, k: int) -> StateMoments:
    """Marginal moments of ``theta_k`` in closed form.

    The mean is ``alpha^k * mu0``. The variance sums the geometric series of
    propagated process noise,
    ``alpha^(2k) * sigma0^2 + sigma_z^2 * (1 - alpha^(2k)) / (1 - alpha^2)``,
    which degenerates to ``sigma0^2 + k * sigma_z^2`` when ``|alpha| = 1``.

    Parameters
    ----------
    model : GaussMarkovModel
    k : int
        Block index, ``k >= 0``.

    Returns
    -------
    StateMoments
    """
    if k < 0:
        raise ValueError(f"state_moments requires k >= 0, got {k}.")
    a = model.alpha
    # alpha^(2k) in log space so large k underflows cleanly to 0
    if a == 0.0:
        decay = 1.0 if k == 0 else 0.0
    else:
        decay = math.exp(2.0 * k * math.log(abs(a))) if abs(a) < 1.0 else 1.0
    mean = (a**k) * model.mu0
    if abs(a) == 1.0:
        variance = model.sigma0**2 + k * model.sigma_z**2
    else:
        variance = decay * model.sigma0**2 + model.sigma_z**2 * (1.0 - decay) / (1.0 - a * a)
    return StateMoments(block_index=k, mean=mean, variance=variance)


def stationary_variance(model: GaussMarkovModel) -> float:
    """Stationary state variance ``sigma_z^2 / (1 - alpha^2)``.

    Raises
    ------
    ValueError
        If ``|alpha| >= 1`` (no stationary distribution exists).
    """
    if not model.is_stationary:
        raise ValueError(
            f"stationary_variance requires |alpha| < 1, got alpha = {model.alpha}."
        )
    return model.sigma_z**2 / (1.0 - model.alpha**2)
