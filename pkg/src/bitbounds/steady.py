"""Steady-state information fixed points and quantization performance ratios.

For a stationary chain the filtering information, the smoothing gain, and
their sum (the long-lag smoothing information) all converge to fixed points
of the per-block recursions. Both fixed points solve scalar quadratics once
the steady expected measurement information ``f`` is known:

    J^2 - B J - C = 0,   kappa^2 + B kappa - C = 0,
    B = (1 - alpha^2) s + f,   C = alpha^2 s f,   s = 1 / sigma_z^2,

with positive roots ``J = (B + sqrt(B^2 + 4C)) / 2`` and
``kappa = 2C / (B + sqrt(B^2 + 4C))``, so ``J + kappa = sqrt(B^2 + 4C)``.
The solvers here iterate the plain recursions and use the closed forms as an
independent consistency guard.

Performance ratios compare the two channels in decibels: ``rho_f`` and
``rho_sl`` are the one-bit information losses for filtering and long-lag
smoothing, and ``rho_s`` compares one-bit smoothing against unquantized
filtering (positive when smoothing more than repays the quantization loss).
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass

from .core import GaussMarkovModel, MeasurementChannel, StateMoments, stationary_variance
from .exceptions import ConvergenceError, NumericalDegeneracyError
from .qfim import DEFAULT_QUADRATURE, QuadratureSpec, expected_fim

__all__ = [
    "FixedPointResult",
    "SteadyStateReport",
    "DEFAULT_TOLERANCE",
    "DEFAULT_MAX_ITERATIONS",
    "steady_expected_fim",
    "quadratic_filter_root",
    "quadratic_gain_root",
    "steady_filter_bim",
    "steady_smoothing_gain",
    "steady_lag_gain",
    "performance_ratios",
    "snr_to_sigma_z",
    "model_for_snr",
]

DEFAULT_TOLERANCE = 1e-12
DEFAULT_MAX_ITERATIONS = 1_000_000

_CROSS_CHECK_RTOL = 1e-10


@dataclass(frozen=True)
class FixedPointResult:
    """Converged fixed-point value with iteration accounting."""

    value: float
    iterations: int
    converged: bool

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise ValueError(f"FixedPointResult requires a finite value, got {self.value}.")
        if self.iterations < 0:
            raise ValueError(f"FixedPointResult requires iterations >= 0, got {self.iterations}.")


@dataclass(frozen=True)
class SteadyStateReport:
    """Steady-state informations and dB performance ratios for one model.

    Parameters
    ----------
    snr_db : float
        ``10 log10(stationary state variance / sigma_eta^2)``.
    j_filter_unq, j_filter_q : float
        Steady filtering informations, unquantized and one-bit.
    kappa_unq, kappa_q : float
        Steady smoothing gains.
    j_smooth_unq, j_smooth_q : float
        Steady long-lag smoothing informations; each equals the matching
        filter value plus gain.
    rho_f_db : float
        One-bit filtering loss ``10 log10(j_filter_q / j_filter_unq)``.
    rho_sl_db : float
        One-bit smoothing loss ``10 log10(j_smooth_q / j_smooth_unq)``.
    rho_s_db : float
        One-bit smoothing vs unquantized filtering,
        ``10 log10(j_smooth_q / j_filter_unq)``.
    iterations_used : tuple of int
        Solver iterations, ordered (filter unquantized, filter one-bit,
        gain unquantized, gain one-bit).
    converged : tuple of bool
        Convergence flags in the same order.
    """

    snr_db: float
    j_filter_unq: float
    j_filter_q: float
    kappa_unq: float
    kappa_q: float
    j_smooth_unq: float
    j_smooth_q: float
    rho_f_db: float
    rho_sl_db: float
    rho_s_db: float
    iterations_used: tuple[int, int, int, int]
    converged: tuple[bool, bool, bool, bool]

    def __post_init__(self):
        for name in ("j_filter_unq", "j_filter_q", "j_smooth_unq", "j_smooth_q"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"SteadyStateReport requires {name} > 0, got {getattr(self, name)}.")
        for name in ("kappa_unq", "kappa_q"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"SteadyStateReport requires {name} >= 0, got {getattr(self, name)}.")
        for filt, gain, smooth in (
            (self.j_filter_unq, self.kappa_unq, self.j_smooth_unq),
            (self.j_filter_q, self.kappa_q, self.j_smooth_q),
        ):
            if not math.isclose(filt + gain, smooth, rel_tol=1e-12):
                raise ValueError("SteadyStateReport requires j_smooth == j_filter + kappa.")
        if self.rho_f_db > 0.0 or self.rho_sl_db > 0.0:
            raise ValueError("Quantization losses must be <= 0 dB.")


def steady_expected_fim(model: GaussMarkovModel, channel: MeasurementChannel,
                        spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """Expected per-sample measurement information under the stationary marginal.

    The stationary marginal is ``N(0, sigma_z^2 / (1 - alpha^2))``; the prior
    mean plays no role because its influence decays geometrically. For the
    unquantized channel this is the constant ``1 / sigma_eta^2`` and the
    stationarity requirement is waived.
    """
    if channel is MeasurementChannel.UNQUANTIZED:
        return 1.0 / model.sigma_eta**2
    moments = StateMoments(block_index=0, mean=0.0, variance=stationary_variance(model))
    return expected_fim(channel, moments, model.sigma_eta, spec)


def quadratic_filter_root(model: GaussMarkovModel, fim: float) -> float:
    """Positive root of the steady filtering quadratic for a given ``fim``."""
    s = 1.0 / model.sigma_z**2
    b = (1.0 - model.alpha**2) * s + fim
    c = model.alpha**2 * s * fim
    return 0.5 * (b + math.sqrt(b * b + 4.0 * c))


def quadratic_gain_root(model: GaussMarkovModel, fim: float) -> float:
    """Positive root of the steady smoothing-gain quadratic for a given ``fim``.

    Written as ``2C / (B + sqrt(B^2 + 4C))`` to avoid the cancellation in
    the textbook root formula when ``C << B^2``.
    """
    s = 1.0 / model.sigma_z**2
    b = (1.0 - model.alpha**2) * s + fim
    c = model.alpha**2 * s * fim
    return 2.0 * c / (b + math.sqrt(b * b + 4.0 * c))


def _iterate(step, derivative, start: float, tolerance: float, max_iterations: int,
             label: str) -> FixedPointResult:
    # The maps contract with a factor that approaches 1 at low SNR, so a raw
    # step-size test would stop far from the fixed point. Bound the remaining
    # distance as delta * rate / (1 - rate) with the analytic contraction
    # rate at the current iterate (step ratios are too noisy near machine
    # granularity), and accept once progress falls below that granularity.
    eps_floor = 2.0 * sys.float_info.epsilon
    current = start
    for iteration in range(1, max_iterations + 1):
        updated = step(current)
        delta = abs(updated - current)
        scale = max(abs(updated), 1e-300)
        if delta <= eps_floor * scale:
            return FixedPointResult(value=updated, iterations=iteration, converged=True)
        rate = derivative(updated)
        if rate < 1.0 and delta * rate / (1.0 - rate) <= tolerance * scale:
            return FixedPointResult(value=updated, iterations=iteration, converged=True)
        current = updated
    raise ConvergenceError(
        f"{label} fixed point did not converge within {max_iterations} iterations.",
        last_iterates=(current, step(current)),
    )


def _cross_check(value: float, root: float, label: str) -> None:
    if not math.isclose(value, root, rel_tol=_CROSS_CHECK_RTOL):
        raise NumericalDegeneracyError(
            f"{label} fixed point {value!r} disagrees with closed-form root {root!r}."
        )


def steady_filter_bim(model: GaussMarkovModel, channel: MeasurementChannel,
                      spec: QuadratureSpec = DEFAULT_QUADRATURE,
                      tolerance: float = DEFAULT_TOLERANCE,
                      max_iterations: int = DEFAULT_MAX_ITERATIONS) -> FixedPointResult:
    """Steady-state filtering information by fixed-point iteration.

    Iterates ``J <- s + f - alpha^2 s^2 / (J + alpha^2 s)``, evaluated in
    the equivalent form ``f + s J / (J + alpha^2 s)`` that avoids the
    catastrophic cancellation of the literal form when ``s`` dwarfs the
    fixed point, then verifies the result against the closed-form
    quadratic root.

    Parameters
    ----------
    model : GaussMarkovModel
        The one-bit channel requires a stationary model; the unquantized
        channel also accepts ``|alpha| = 1``.
    channel : MeasurementChannel
    spec : QuadratureSpec, optional
    tolerance : float, optional
        Relative convergence tolerance between successive iterates.
    max_iterations : int, optional

    Returns
    -------
    FixedPointResult

    Raises
    ------
    ConvergenceError
        If the iteration cap is hit; carries the last two iterates.
    """
    fim = steady_expected_fim(model, channel, spec)
    s = 1.0 / model.sigma_z**2
    a2s = model.alpha**2 * s

    def step(j: float) -> float:
        return fim + s * j / (j + a2s) if a2s else s + fim

    def rate(j: float) -> float:
        return s * a2s / (j + a2s) ** 2 if a2s else 0.0

    result = _iterate(step, rate, s + fim, tolerance, max_iterations, "filtering")
    _cross_check(result.value, quadratic_filter_root(model, fim), "filtering")
    return result


def steady_smoothing_gain(model: GaussMarkovModel, channel: MeasurementChannel,
                          spec: QuadratureSpec = DEFAULT_QUADRATURE,
                          tolerance: float = DEFAULT_TOLERANCE,
                          max_iterations: int = DEFAULT_MAX_ITERATIONS) -> FixedPointResult:
    """Steady-state smoothing gain by fixed-point iteration.

    Iterates ``kappa <- alpha^2 s - alpha^2 s^2 / (s + f + kappa)`` from 0,
    evaluated in the cancellation-free form
    ``alpha^2 s (f + kappa) / (s + f + kappa)``, then verifies against the
    closed-form quadratic root. The value is the information a long-lag
    smoother adds on top of the steady filter.

    Parameters and errors match :func:`steady_filter_bim`.
    """
    fim = steady_expected_fim(model, channel, spec)
    s = 1.0 / model.sigma_z**2
    a2s = model.alpha**2 * s

    def step(kappa: float) -> float:
        return a2s * (fim + kappa) / (s + fim + kappa)

    def rate(kappa: float) -> float:
        return a2s * s / (s + fim + kappa) ** 2

    result = _iterate(step, rate, 0.0, tolerance, max_iterations, "smoothing gain")
    _cross_check(result.value, quadratic_gain_root(model, fim), "smoothing gain")
    return result


def steady_lag_gain(model: GaussMarkovModel, channel: MeasurementChannel, lag: int,
                    spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """Steady smoothing gain of a finite lag.

    Applies exactly ``lag`` backward gain steps from 0 with the steady
    expected measurement information, giving the information a lag-``lag``
    smoother adds over the steady filter. Increases monotonically in
    ``lag`` toward the fixed point of :func:`steady_smoothing_gain`.
    """
    if lag < 0:
        raise ValueError(f"steady_lag_gain requires lag >= 0, got {lag}.")
    fim = steady_expected_fim(model, channel, spec)
    s = 1.0 / model.sigma_z**2
    a2s = model.alpha**2 * s
    kappa = 0.0
    for _ in range(lag):
        kappa = a2s * (fim + kappa) / (s + fim + kappa)
    return kappa


def performance_ratios(model: GaussMarkovModel,
                       spec: QuadratureSpec = DEFAULT_QUADRATURE,
                       tolerance: float = DEFAULT_TOLERANCE,
                       max_iterations: int = DEFAULT_MAX_ITERATIONS) -> SteadyStateReport:
    """Steady informations for both channels and the three dB ratios.

    Parameters
    ----------
    model : GaussMarkovModel
        Must be stationary (``|alpha| < 1``).
    spec, tolerance, max_iterations
        Passed through to the fixed-point solvers.

    Returns
    -------
    SteadyStateReport
    """
    if not model.is_stationary:
        raise ValueError(f"performance_ratios requires |alpha| < 1, got alpha = {model.alpha}.")
    snr_db = 10.0 * math.log10(stationary_variance(model) / model.sigma_eta**2)
    f_unq = steady_filter_bim(model, MeasurementChannel.UNQUANTIZED, spec, tolerance, max_iterations)
    f_q = steady_filter_bim(model, MeasurementChannel.ONE_BIT, spec, tolerance, max_iterations)
    g_unq = steady_smoothing_gain(model, MeasurementChannel.UNQUANTIZED, spec, tolerance, max_iterations)
    g_q = steady_smoothing_gain(model, MeasurementChannel.ONE_BIT, spec, tolerance, max_iterations)
    smooth_unq = f_unq.value + g_unq.value
    smooth_q = f_q.value + g_q.value
    return SteadyStateReport(
        snr_db=snr_db,
        j_filter_unq=f_unq.value,
        j_filter_q=f_q.value,
        kappa_unq=g_unq.value,
        kappa_q=g_q.value,
        j_smooth_unq=smooth_unq,
        j_smooth_q=smooth_q,
        rho_f_db=10.0 * math.log10(f_q.value / f_unq.value),
        rho_sl_db=10.0 * math.log10(smooth_q / smooth_unq),
        rho_s_db=10.0 * math.log10(smooth_q / f_unq.value),
        iterations_used=(f_unq.iterations, f_q.iterations, g_unq.iterations, g_q.iterations),
        converged=(f_unq.converged, f_q.converged, g_unq.converged, g_q.converged),
    )


def snr_to_sigma_z(alpha: float, snr_db: float, sigma_eta: float = 1.0) -> float:
    """Process noise level that realizes a requested stationary SNR.

    Inverts ``snr_db = 10 log10(sigma_z^2 / ((1 - alpha^2) sigma_eta^2))``,
    giving ``sigma_z = sigma_eta * sqrt((1 - alpha^2) * 10^(snr_db / 10))``.

    Raises
    ------
    ValueError
        If ``|alpha| >= 1`` or ``sigma_eta <= 0``.
    """
    if not abs(alpha) < 1.0:
        raise ValueError(f"snr_to_sigma_z requires |alpha| < 1, got {alpha}.")
    if not sigma_eta > 0.0:
        raise ValueError(f"snr_to_sigma_z requires sigma_eta > 0, got {sigma_eta}.")
    return sigma_eta * math.sqrt((1.0 - alpha**2) * 10.0 ** (snr_db / 10.0))


def model_for_snr(alpha: float, snr_db: float, sigma_eta: float = 1.0) -> GaussMarkovModel:
    """Stationary model at a requested SNR, started from its stationary prior.

    The prior is ``N(0, stationary variance)``, so every block shares the
    stationary marginal and transient effects vanish.
    """
    sigma_z = snr_to_sigma_z(alpha, snr_db, sigma_eta)
    sigma0 = sigma_z / math.sqrt(1.0 - alpha**2)
    return GaussMarkovModel(alpha=alpha, sigma_z=sigma_z, sigma_eta=sigma_eta,
                            sigma0=sigma0, mu0=0.0)
