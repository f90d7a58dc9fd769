"""Semi-blind estimation of the per-hypothesis received variances.

Blind part: the M per-block normalized energies A_k = ||y_k||^2 / N are
sorted and the lower and upper halves averaged, yielding unlabeled cluster
centers (A_min, A_max).  The equal-transmit-probability assumption makes
the realized bit counts approximately M/2 each; the fixed half-split is
kept as is, which introduces a small bias when the realized counts differ
(the Monte Carlo engine can synthesize exactly balanced bit sequences to
isolate that bias).

Labeling part: the mean normalized energy A_t of M_t known training bits
selects which cluster center belongs to the training bit; the other center
gets the remaining label.  A distance tie assigns the training bit to
A_max (deterministic, measure-zero event).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .sigmodel import Frame

__all__ = ["SigmaEstimate", "AmbiguityError", "normalized_energies", "estimate_sigmas",
           "estimate_sigmas_batch"]


class AmbiguityError(ValueError):
    """No training blocks: the blind cluster centers cannot be labeled."""


@dataclass(frozen=True)
class SigmaEstimate:
    """Labeled variance estimates plus the raw cluster/KPI values."""

    sigma0_sq_hat: float
    sigma1_sq_hat: float
    a_min: float
    a_max: float
    a_t: float

    def __post_init__(self) -> None:
        if self.a_min > self.a_max:
            raise ValueError("a_min must be <= a_max")
        if {self.sigma0_sq_hat, self.sigma1_sq_hat} != {self.a_min, self.a_max}:
            raise ValueError("estimates must be a labeling of {a_min, a_max}")


def normalized_energies(frame: Frame) -> list[float]:
    """Per-data-block energy over the block length N."""
    if frame.m < 2:
        raise ValueError("frame must hold at least 2 data blocks")
    n = frame.data_blocks[0].samples.shape[0]
    return [b.energy / n for b in frame.data_blocks]


def _assign(a_min: float, a_max: float, a_t: float, training_bit: int) -> tuple[float, float]:
    # The hypothesis matching the training bit takes the center closer to
    # A_t; ties go to A_max.
    min_closer = abs(a_min - a_t) < abs(a_max - a_t)
    closer, other = (a_min, a_max) if min_closer else (a_max, a_min)
    if training_bit == 1:
        return other, closer  # (sigma0, sigma1)
    return closer, other


def estimate_sigmas(frame: Frame, training_bit: int = 1) -> SigmaEstimate:
    """Run the sorted-half-split clustering plus training disambiguation."""
    if training_bit not in (0, 1):
        raise ValueError("training_bit must be 0 or 1")
    if frame.m % 2 != 0:
        raise ValueError("frame length M must be even")
    if frame.m_t < 1:
        raise AmbiguityError(
            "at least one training block is required to label the estimates"
        )
    n = frame.data_blocks[0].samples.shape[0]
    a = np.sort(np.asarray(normalized_energies(frame)))
    half = frame.m // 2
    a_min = float(np.mean(a[:half]))
    a_max = float(np.mean(a[half:]))
    a_t = float(np.mean([b.energy / n for b in frame.training_blocks]))
    s0, s1 = _assign(a_min, a_max, a_t, training_bit)
    return SigmaEstimate(sigma0_sq_hat=s0, sigma1_sq_hat=s1, a_min=a_min, a_max=a_max, a_t=a_t)


def estimate_sigmas_batch(
    data_energies: np.ndarray,
    training_energies: np.ndarray,
    n: int,
    training_bit: int = 1,
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized estimate over frames.

    data_energies has shape (frames, M), training_energies (frames, M_t);
    returns per-frame (sigma0_sq_hat, sigma1_sq_hat).  Matches
    estimate_sigmas frame by frame (asserted in the tests).
    """
    if data_energies.ndim != 2 or data_energies.shape[1] % 2 != 0:
        raise ValueError("data_energies must be (frames, even M)")
    if training_energies.ndim != 2 or training_energies.shape[1] < 1:
        raise AmbiguityError(
            "at least one training block is required to label the estimates"
        )
    if training_bit not in (0, 1):
        raise ValueError("training_bit must be 0 or 1")
    a = np.sort(data_energies / n, axis=1)
    half = a.shape[1] // 2
    a_min = a[:, :half].mean(axis=1)
    a_max = a[:, half:].mean(axis=1)
    a_t = (training_energies / n).mean(axis=1)
    min_closer = np.abs(a_min - a_t) < np.abs(a_max - a_t)
    closer = np.where(min_closer, a_min, a_max)
    other = np.where(min_closer, a_max, a_min)
    if training_bit == 1:
        return other, closer
    return closer, other
