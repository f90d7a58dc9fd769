"""Energy-detection thresholds and the decision rule.

Every detector compares the block energy Z against a threshold; the decision
direction depends on which hypothesis carries the larger variance, captured
in ThresholdDecision.zero_above.  All thresholds are functions of the
per-hypothesis received variances (sigma0_sq, sigma1_sq) alone, except the
noise-aware constant-modulus variant which also needs the noise power.

Scalar functions here are the contract; `*_arr` twins operate on numpy
arrays for the Monte Carlo engine and are cross-checked against the scalar
forms in the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "SigmaPair",
    "ThresholdDecision",
    "DetectionUndefinedError",
    "SIGMA_EQUALITY_RTOL",
    "threshold_cg_optimal",
    "threshold_balanced",
    "threshold_cg_suboptimal",
    "threshold_psk_noise_aware",
    "threshold_psk_asymptotic",
    "decide",
    "decide_arr",
    "thresholds_arr",
]

SIGMA_EQUALITY_RTOL = 1e-12


class DetectionUndefinedError(ValueError):
    """The two hypotheses have (numerically) equal variance: no detector exists."""


@dataclass(frozen=True)
class SigmaPair:
    """Per-hypothesis received variances, the detector's sole inputs."""

    sigma0_sq: float
    sigma1_sq: float

    def __post_init__(self) -> None:
        if not (self.sigma0_sq > 0.0 and self.sigma1_sq > 0.0):
            raise ValueError("variances must be > 0")

    def check_separated(self) -> None:
        if sigmas_equal(self.sigma0_sq, self.sigma1_sq):
            raise DetectionUndefinedError(
                f"sigma0_sq={self.sigma0_sq!r} and sigma1_sq={self.sigma1_sq!r} "
                "are equal within tolerance; the hypotheses cannot be discriminated"
            )

    @property
    def zero_above(self) -> bool:
        return self.sigma0_sq > self.sigma1_sq


@dataclass(frozen=True)
class ThresholdDecision:
    """An energy threshold plus the variance ordering fixing the direction.

    zero_above=True means "decide bit 0 when Z >= threshold" (hypothesis 0
    has the larger variance); otherwise bit 0 is decided when Z <= threshold.
    """

    threshold: float
    zero_above: bool

    def __post_init__(self) -> None:
        if not self.threshold > 0.0:
            raise ValueError("threshold must be > 0")


def sigmas_equal(s0: float, s1: float) -> bool:
    """Relative-tolerance equality guard used by every threshold."""
    return abs(s0 - s1) <= SIGMA_EQUALITY_RTOL * max(abs(s0), abs(s1))


def _log_ratio(s: SigmaPair) -> float:
    # ln(sigma1^2 / sigma0^2) as a difference of logs: no overflow for
    # extreme ratios.
    return math.log(s.sigma1_sq) - math.log(s.sigma0_sq)


def threshold_cg_optimal(s: SigmaPair, n: int) -> ThresholdDecision:
    """Likelihood-ratio threshold for the complex-Gaussian source.

    T = n s0 s1 ln(s1/s0) / (s1 - s0); the energy likelihoods of the two
    hypotheses are equal at T.
    """
    s.check_separated()
    t = n * s.sigma0_sq * s.sigma1_sq / (s.sigma1_sq - s.sigma0_sq) * _log_ratio(s)
    return ThresholdDecision(threshold=t, zero_above=s.zero_above)


def threshold_balanced(s: SigmaPair, n: int) -> ThresholdDecision:
    """Harmonic-mean threshold equalizing the two Gaussian-model error rates.

    T = 2 n s0 s1 / (s0 + s1); also the large-n limit of the suboptimal
    quadratic-root threshold.
    """
    s.check_separated()
    t = 2.0 * n * s.sigma0_sq * s.sigma1_sq / (s.sigma0_sq + s.sigma1_sq)
    return ThresholdDecision(threshold=t, zero_above=s.zero_above)


def threshold_cg_suboptimal(s: SigmaPair, n: int) -> ThresholdDecision:
    """Gaussian-density-equality threshold for the complex-Gaussian source.

    Equalizing the two N(n s_i, n s_i^2) densities gives a quadratic whose
    positive root is

        T = [n s0 s1/(s0+s1)] [1 + sqrt(1 + 2(s0+s1) ln(s1/s0) / (n(s1-s0)))].
    """
    s.check_separated()
    s0, s1 = s.sigma0_sq, s.sigma1_sq
    disc = 1.0 + 2.0 * (s0 + s1) / (n * (s1 - s0)) * _log_ratio(s)
    if disc < 0.0:
        raise ArithmeticError(
            f"negative discriminant {disc!r}: no real positive-root threshold at n={n}"
        )
    t = n * s0 * s1 / (s0 + s1) * (1.0 + math.sqrt(disc))
    return ThresholdDecision(threshold=t, zero_above=s.zero_above)


def threshold_psk_noise_aware(s: SigmaPair, nw: float, n: int) -> ThresholdDecision:
    """Density-equality threshold for the constant-modulus source, Nw known.

    T = n Nw/2 + (n/2) sqrt((2 s0 - Nw)(2 s1 - Nw)
                            [1 + 2 Nw ln((2 s0 - Nw)/(2 s1 - Nw)) / (n (s0 - s1))]).
    """
    s.check_separated()
    if not nw > 0.0:
        raise ValueError("nw must be > 0")
    a0 = 2.0 * s.sigma0_sq - nw
    a1 = 2.0 * s.sigma1_sq - nw
    if a0 <= 0.0 or a1 <= 0.0:
        raise ValueError("need 2*sigma_i^2 > nw for both hypotheses")
    bracket = 1.0 + 2.0 * nw * (math.log(a0) - math.log(a1)) / (
        n * (s.sigma0_sq - s.sigma1_sq)
    )
    t = 0.5 * n * nw + 0.5 * n * math.sqrt(a0 * a1 * bracket)
    return ThresholdDecision(threshold=t, zero_above=s.zero_above)


def threshold_psk_asymptotic(s: SigmaPair, n: int) -> ThresholdDecision:
    """Geometric-mean threshold T = n sqrt(s0 s1); needs no noise knowledge."""
    s.check_separated()
    t = n * math.sqrt(s.sigma0_sq * s.sigma1_sq)
    return ThresholdDecision(threshold=t, zero_above=s.zero_above)


def decide(z: float, t: ThresholdDecision) -> int:
    """Energy decision rule; ties (Z == T) resolve inclusively to bit 0."""
    if z < 0.0:
        raise ValueError("energy must be >= 0")
    if t.zero_above:
        return 0 if z >= t.threshold else 1
    return 0 if z <= t.threshold else 1


# ---------------------------------------------------------------------------
# Array twins for the Monte Carlo engine
# ---------------------------------------------------------------------------

def decide_arr(z: np.ndarray, threshold: np.ndarray, zero_above: np.ndarray) -> np.ndarray:
    """Vectorized decision: bit 0 iff Z >= T (zero_above) or Z <= T (else)."""
    ge = z >= threshold
    le = z <= threshold
    return np.where(np.where(zero_above, ge, le), 0, 1).astype(np.int8)


def thresholds_arr(
    kind: str, s0: np.ndarray, s1: np.ndarray, n: int, nw: float
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized threshold evaluation with the equality guard.

    Returns (threshold, zero_above, valid); entries failing the variance
    separation guard (or a domain condition) are flagged invalid and carry
    a placeholder threshold.
    """
    s0 = np.asarray(s0, dtype=float)
    s1 = np.asarray(s1, dtype=float)
    valid = np.abs(s0 - s1) > SIGMA_EQUALITY_RTOL * np.maximum(s0, s1)
    s1s = np.where(valid, s1, s0 * 2.0)  # placeholder separation
    logr = np.log(s1s) - np.log(s0)
    if kind == "cg-optimal":
        t = n * s0 * s1s / (s1s - s0) * logr
    elif kind == "cg-balanced":
        t = 2.0 * n * s0 * s1s / (s0 + s1s)
    elif kind == "cg-suboptimal":
        disc = 1.0 + 2.0 * (s0 + s1s) / (n * (s1s - s0)) * logr
        valid = valid & (disc >= 0.0)
        t = n * s0 * s1s / (s0 + s1s) * (1.0 + np.sqrt(np.maximum(disc, 0.0)))
    elif kind == "psk-noise-aware":
        a0 = 2.0 * s0 - nw
        a1 = 2.0 * s1s - nw
        valid = valid & (a0 > 0.0) & (a1 > 0.0)
        a0 = np.maximum(a0, 1e-300)
        a1 = np.maximum(a1, 1e-300)
        bracket = 1.0 + 2.0 * nw * (np.log(a0) - np.log(a1)) / (n * (s0 - s1s))
        valid = valid & (bracket >= 0.0)
        t = 0.5 * n * nw + 0.5 * n * np.sqrt(np.maximum(a0 * a1 * bracket, 0.0))
    elif kind == "psk-asymptotic":
        t = n * np.sqrt(s0 * s1s)
    else:
        raise ValueError(f"unknown threshold kind {kind!r}")
    return t, s0 > s1s, valid
