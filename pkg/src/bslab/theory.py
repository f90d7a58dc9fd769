"""Closed-form error rates for the energy detectors.

Two families of expressions:

* Exact: under a complex-Gaussian source the block energy is
  Gamma(N, scale sigma_i^2), so any threshold's conditional error rates are
  regularized incomplete gammas.  `ber_cg_exact` evaluates that for an
  arbitrary threshold; `ber_cg_optimal` is the same thing at the
  likelihood-ratio threshold.

* Gaussian-model: treating Z as N(mu_i, var_i) per hypothesis gives the
  Q-function forms used by the suboptimal and constant-modulus detectors,
  the balanced/asymptotic simplifications, and the high-SNR error floor
  Q(sqrt(N) * Delta / Sigma).  These are approximations of the exact law;
  their bias at practical N is characterized in the tests.

Every function is scale-invariant under (sigma0^2, sigma1^2) -> c*(...)
jointly with its threshold.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .detectors import (
    SigmaPair,
    ThresholdDecision,
    threshold_balanced,
    threshold_cg_optimal,
    threshold_cg_suboptimal,
    threshold_psk_asymptotic,
    threshold_psk_noise_aware,
)
from .sigmodel import ChannelRealization, SystemParams
from .specfun import lower_gamma_reg, q_func, upper_gamma_reg

__all__ = [
    "GaussianMoments",
    "ProbabilityClampWarning",
    "cg_moments",
    "psk_moments",
    "clamp_probability",
    "cg_error_pair_exact",
    "cg_error_pair_gaussian",
    "psk_error_pair",
    "ber_cg_exact",
    "ber_cg_optimal",
    "ber_cg_optimal_approx",
    "ber_cg_gaussian",
    "ber_cg_suboptimal",
    "ber_cg_asymptotic",
    "ber_floor",
    "ber_floor_exp_approx",
    "ber_psk",
    "ber_psk_gaussian",
    "ber_psk_asymptotic",
]


class ProbabilityClampWarning(RuntimeWarning):
    """A series or formula overshot [0, 1] by more than the clamp tolerance."""


def clamp_probability(p: float, tol: float = 1e-9) -> float:
    """Clamp to [0, 1]; warn when the violation exceeds tol."""
    if p < -tol or p > 1.0 + tol:
        warnings.warn(
            f"probability {p!r} clamped to [0, 1]", ProbabilityClampWarning, stacklevel=2
        )
    return min(1.0, max(0.0, p))


@dataclass(frozen=True)
class GaussianMoments:
    """Per-hypothesis mean/variance of the block energy in the Gaussian model."""

    mu0: float
    mu1: float
    var0: float
    var1: float

    def __post_init__(self) -> None:
        if not (self.var0 > 0.0 and self.var1 > 0.0):
            raise ValueError("variances must be > 0")


def cg_moments(s: SigmaPair, n: int) -> GaussianMoments:
    """Complex-Gaussian source: mu_i = N sigma_i^2, var_i = N sigma_i^4."""
    return GaussianMoments(
        mu0=n * s.sigma0_sq,
        mu1=n * s.sigma1_sq,
        var0=n * s.sigma0_sq**2,
        var1=n * s.sigma1_sq**2,
    )


def psk_moments(h0_sq: float, h1_sq: float, ps: float, nw: float, n: int) -> GaussianMoments:
    """Constant-modulus source: mu_i = N sigma_i^2, var_i = 2N|h_i|^2 Ps Nw + N Nw^2."""
    return GaussianMoments(
        mu0=n * (h0_sq * ps + nw),
        mu1=n * (h1_sq * ps + nw),
        var0=2.0 * n * h0_sq * ps * nw + n * nw * nw,
        var1=2.0 * n * h1_sq * ps * nw + n * nw * nw,
    )


# ---------------------------------------------------------------------------
# Conditional error pairs
# ---------------------------------------------------------------------------

def cg_error_pair_exact(s: SigmaPair, n: int, t: ThresholdDecision) -> tuple[float, float]:
    """(P(decide 1 | bit 0), P(decide 0 | bit 1)) under the exact Gamma law."""
    if t.zero_above:
        return (
            lower_gamma_reg(n, t.threshold / s.sigma0_sq),
            upper_gamma_reg(n, t.threshold / s.sigma1_sq),
        )
    return (
        upper_gamma_reg(n, t.threshold / s.sigma0_sq),
        lower_gamma_reg(n, t.threshold / s.sigma1_sq),
    )


def _gaussian_error_pair(m: GaussianMoments, t: ThresholdDecision) -> tuple[float, float]:
    z0 = (t.threshold - m.mu0) / math.sqrt(m.var0)
    z1 = (t.threshold - m.mu1) / math.sqrt(m.var1)
    if t.zero_above:
        # error|H0 = P(Z < T), error|H1 = P(Z > T)
        return 1.0 - q_func(z0), q_func(z1)
    return q_func(z0), 1.0 - q_func(z1)


def cg_error_pair_gaussian(s: SigmaPair, n: int, t: ThresholdDecision) -> tuple[float, float]:
    """Same pair under the Gaussian energy model N(N s_i, N s_i^2)."""
    return _gaussian_error_pair(cg_moments(s, n), t)


def psk_error_pair(
    ch: ChannelRealization, params: SystemParams, n: int, t: ThresholdDecision
) -> tuple[float, float]:
    """Gaussian-model error pair with the constant-modulus moments."""
    m = psk_moments(ch.h0_sq, ch.h1_sq, params.source_power, params.noise_power, n)
    return _gaussian_error_pair(m, t)


# ---------------------------------------------------------------------------
# Complex-Gaussian source
# ---------------------------------------------------------------------------

def ber_cg_exact(s: SigmaPair, n: int, threshold: ThresholdDecision) -> float:
    """Exact BER of an energy detector at an arbitrary threshold.

    (P(err|H0) + P(err|H1)) / 2 through regularized incomplete gammas; the
    likelihood-ratio threshold minimizes this over all thresholds.
    """
    e0, e1 = cg_error_pair_exact(s, n, threshold)
    return clamp_probability(0.5 * (e0 + e1))


def ber_cg_optimal(s: SigmaPair, n: int) -> float:
    """Exact BER at the likelihood-ratio threshold.

    Equals [P(N, N s_min^2 L) + Q(N, N s_max^2 L)] / 2 with
    L = ln(s1/s0)/(s1 - s0) > 0.
    """
    return ber_cg_exact(s, n, threshold_cg_optimal(s, n))


def ber_cg_optimal_approx(s: SigmaPair, n: int) -> float:
    """Central-limit approximation of ber_cg_optimal.

    Uses P(N, x) ~ 1 - Q(x/sqrt(N) - sqrt(N)); accurate in the distribution
    bulk (error rates of a few percent and up) but substantially
    overestimates deep tails; see the tests for the measured bias.
    """
    s.check_separated()
    smin = min(s.sigma0_sq, s.sigma1_sq)
    smax = max(s.sigma0_sq, s.sigma1_sq)
    ell = (math.log(s.sigma1_sq) - math.log(s.sigma0_sq)) / (s.sigma1_sq - s.sigma0_sq)
    rt_n = math.sqrt(n)
    return clamp_probability(
        0.5 * q_func(rt_n - rt_n * smin * ell) + 0.5 * q_func(rt_n * smax * ell - rt_n)
    )


def ber_cg_gaussian(s: SigmaPair, n: int, threshold: ThresholdDecision) -> float:
    """Gaussian-model BER at an arbitrary threshold:
    1/2 - Q((T - N s_max^2)/(sqrt(N) s_max^2))/2 + Q((T - N s_min^2)/(sqrt(N) s_min^2))/2.
    """
    e0, e1 = cg_error_pair_gaussian(s, n, threshold)
    return clamp_probability(0.5 * (e0 + e1))


def ber_cg_suboptimal(s: SigmaPair, n: int) -> float:
    """Gaussian-model BER at the density-equality (suboptimal) threshold."""
    return ber_cg_gaussian(s, n, threshold_cg_suboptimal(s, n))


def ber_cg_asymptotic(delta: float, sigma_sum: float, gamma: float, n: int) -> float:
    """Large-N BER of the suboptimal detector: Q(sqrt(N) Delta / (Sigma + 2/gamma)).

    Delta and Sigma are the path-gain difference and sum; gamma = Ps/Nw.
    Identical to ber_cg_gaussian at the balanced threshold.
    """
    if delta < 0.0 or sigma_sum < 0.0 or gamma <= 0.0:
        raise ValueError("need delta, sigma_sum >= 0 and gamma > 0")
    if sigma_sum == 0.0 and delta == 0.0:
        return 0.5
    return clamp_probability(q_func(math.sqrt(n) * delta / (sigma_sum + 2.0 / gamma)))


def ber_floor(delta: float, sigma_sum: float, n: int) -> float:
    """Infinite-SNR limit of the asymptotic BER: Q(sqrt(N) Delta / Sigma).

    Nonzero whenever the two path gains differ: the complex-Gaussian
    source's error floor, driven entirely by the relative channel
    difference Delta/Sigma.
    """
    if delta < 0.0 or sigma_sum <= 0.0:
        raise ValueError("need delta >= 0 and sigma_sum > 0")
    return clamp_probability(q_func(math.sqrt(n) * delta / sigma_sum))


def ber_floor_exp_approx(delta: float, sigma_sum: float, n: int) -> float:
    """Two-exponential approximation of the floor.

    Q(x) ~ exp(-x^2/2)/12 + exp(-2x^2/3)/4 for x >= 0, applied to
    x = sqrt(N) Delta / Sigma.
    """
    if delta < 0.0 or sigma_sum <= 0.0:
        raise ValueError("need delta >= 0 and sigma_sum > 0")
    x = math.sqrt(n) * delta / sigma_sum
    return clamp_probability(
        math.exp(-0.5 * x * x) / 12.0 + math.exp(-2.0 * x * x / 3.0) / 4.0
    )


# ---------------------------------------------------------------------------
# Constant-modulus (PSK) source
# ---------------------------------------------------------------------------

def ber_psk(
    ch: ChannelRealization, params: SystemParams, n: int, threshold: ThresholdDecision
) -> float:
    """Gaussian-model BER of the constant-modulus detector at a threshold.

    1/2 - Q((T - mu_max)/sqrt(var_max))/2 + Q((T - mu_min)/sqrt(var_min))/2
    with the constant-modulus moments.
    """
    e0, e1 = psk_error_pair(ch, params, n, threshold)
    return clamp_probability(0.5 * (e0 + e1))


def ber_psk_gaussian(
    h0_sq: float, h1_sq: float, ps: float, nw: float, n: int, threshold: ThresholdDecision
) -> float:
    """ber_psk on raw path gains (no ChannelRealization needed)."""
    m = psk_moments(h0_sq, h1_sq, ps, nw, n)
    e0, e1 = _gaussian_error_pair(m, threshold)
    return clamp_probability(0.5 * (e0 + e1))


def ber_psk_asymptotic(h0_mag: float, h1_mag: float, gamma: float, n: int) -> float:
    """High-SNR, large-N BER of the constant-modulus detector.

    Q(sqrt(N gamma / 2) * | |h0| - |h1| |): decays with SNR without bound,
    so this source exhibits no error floor.
    """
    if h0_mag < 0.0 or h1_mag < 0.0 or gamma <= 0.0:
        raise ValueError("need magnitudes >= 0 and gamma > 0")
    return clamp_probability(
        q_func(math.sqrt(0.5 * n * gamma) * abs(h0_mag - h1_mag))
    )


# Convenience: detector registry used by the Monte Carlo engine and the CLI.

def threshold_for(kind: str, s: SigmaPair, n: int, nw: float) -> ThresholdDecision:
    if kind == "cg-optimal":
        return threshold_cg_optimal(s, n)
    if kind == "cg-balanced":
        return threshold_balanced(s, n)
    if kind == "cg-suboptimal":
        return threshold_cg_suboptimal(s, n)
    if kind == "psk-noise-aware":
        return threshold_psk_noise_aware(s, nw, n)
    if kind == "psk-asymptotic":
        return threshold_psk_asymptotic(s, n)
    raise ValueError(f"unknown detector kind {kind!r}")
