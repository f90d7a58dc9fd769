"""Three-node channel and received-signal synthesis.

An ambient RF source with per-sample power Ps illuminates a passive tag and
a reader.  The tag signals bit d in {0, 1} by absorbing or reflecting; over
one bit interval of N source samples the reader sees

    y[n] = h_d s[n] + w[n],      h_0 = h_sr,   h_1 = h_sr + alpha h_st h_tr,

with w[n] ~ CN(0, Nw).  The block energy Z = sum |y[n]|^2 is the sufficient
statistic for detection: under a complex-Gaussian source Z ~ Gamma(N,
scale sigma_d^2) with sigma_d^2 = |h_d|^2 Ps + Nw, and under a constant-
modulus (PSK) source Z ~ (Nw/2) * noncentral-chi2(2N, 2N |h_d|^2 Ps / Nw).

Frames bundle M data blocks and M_t known training blocks that share one
channel realization (the channel energy is assumed coherent over the frame).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ComplexGaussian",
    "Psk",
    "SystemParams",
    "ChannelRealization",
    "SignalBlock",
    "Frame",
    "sample_channels",
    "sample_channels_with_rcd",
    "synth_block",
    "synth_frame",
    "channel_from_magnitudes",
    "cg_block_energies",
    "psk_block_energies",
]


@dataclass(frozen=True)
class ComplexGaussian:
    """Ambient source with i.i.d. CN(0, Ps) samples."""


@dataclass(frozen=True)
class Psk:
    """Constant-modulus ambient source sqrt(Ps) * exp(j 2 pi k / order).

    Every energy statistic depends on |s[n]|^2 = Ps only, so the order
    affects nothing measured here; it is kept for fidelity of the sample
    paths.
    """

    constellation_order: int = 4

    def __post_init__(self) -> None:
        if self.constellation_order < 2:
            raise ValueError("constellation_order must be >= 2")


SourceKind = ComplexGaussian | Psk


@dataclass(frozen=True)
class SystemParams:
    """Static scenario description (all powers and variances linear)."""

    source_power: float = 10.0
    noise_power: float = 1.0
    alpha: float = 0.5
    samples_per_bit: int = 40
    source_kind: SourceKind = field(default_factory=ComplexGaussian)
    var_st: float = 1.0
    var_sr: float = 1.0
    var_tr: float = 10.0

    def __post_init__(self) -> None:
        if not self.source_power > 0.0:
            raise ValueError("source_power must be > 0")
        if not self.noise_power > 0.0:
            raise ValueError("noise_power must be > 0")
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError("alpha must be in (0, 1]")
        n = self.samples_per_bit
        if n < 2 or n % 2 != 0:
            raise ValueError("samples_per_bit must be an even integer >= 2")
        for name in ("var_st", "var_sr", "var_tr"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be > 0")

    @property
    def snr(self) -> float:
        """Source SNR gamma = Ps / Nw."""
        return self.source_power / self.noise_power

    def with_snr_db(self, snr_db: float) -> "SystemParams":
        """Copy with the source power set so that Ps/Nw matches snr_db."""
        import dataclasses

        return dataclasses.replace(
            self, source_power=self.noise_power * 10.0 ** (snr_db / 10.0)
        )


@dataclass(frozen=True)
class ChannelRealization:
    """One fading draw plus every derived detection quantity."""

    h_st: complex
    h_sr: complex
    h_tr: complex
    h0: complex
    h1: complex
    sigma0_sq: float
    sigma1_sq: float
    delta: float
    sigma_sum: float
    rcd: float

    @property
    def h0_sq(self) -> float:
        return abs(self.h0) ** 2

    @property
    def h1_sq(self) -> float:
        return abs(self.h1) ** 2


def _derive(h_st: complex, h_sr: complex, h_tr: complex, params: SystemParams) -> ChannelRealization:
    h0 = h_sr
    h1 = h_sr + params.alpha * h_st * h_tr
    a0 = abs(h0) ** 2
    a1 = abs(h1) ** 2
    sigma_sum = a0 + a1
    delta = abs(a0 - a1)
    rcd = delta / sigma_sum if sigma_sum > 0.0 else 0.0
    return ChannelRealization(
        h_st=h_st,
        h_sr=h_sr,
        h_tr=h_tr,
        h0=h0,
        h1=h1,
        sigma0_sq=a0 * params.source_power + params.noise_power,
        sigma1_sq=a1 * params.source_power + params.noise_power,
        delta=delta,
        sigma_sum=sigma_sum,
        rcd=rcd,
    )


def _cn_scalar(rng: np.random.Generator, variance: float) -> complex:
    s = math.sqrt(variance / 2.0)
    return complex(rng.standard_normal() * s, rng.standard_normal() * s)


def sample_channels(
    params: SystemParams,
    rng: np.random.Generator,
    fixed_h_tr: float | None = None,
) -> ChannelRealization:
    """Draw the three links as circularly-symmetric complex Gaussians.

    `fixed_h_tr` pins the tag-reader link to a real constant, the regime in
    which the closed-form outage expressions hold.
    """
    h_st = _cn_scalar(rng, params.var_st)
    h_sr = _cn_scalar(rng, params.var_sr)
    h_tr = complex(fixed_h_tr) if fixed_h_tr is not None else _cn_scalar(rng, params.var_tr)
    return _derive(h_st, h_sr, h_tr, params)


def sample_channels_with_rcd(
    params: SystemParams,
    target_rcd: float,
    rng: np.random.Generator,
) -> ChannelRealization:
    """Draw h0 as configured and construct h1 so the RCD is exact.

    With r = target_rcd the reflecting-path magnitude is set to
    |h0|^2 (1-r)/(1+r) or |h0|^2 (1+r)/(1-r) with equal probability (the
    two orderings |h1| < |h0| and |h1| > |h0| are equally likely), and h1
    gets an independent uniform phase.
    """
    if not 0.0 <= target_rcd < 1.0:
        raise ValueError("target_rcd must be in [0, 1)")
    h_sr = _cn_scalar(rng, params.var_sr)
    while abs(h_sr) == 0.0:
        h_sr = _cn_scalar(rng, params.var_sr)
    a0 = abs(h_sr) ** 2
    ratio = (1.0 - target_rcd) / (1.0 + target_rcd)
    if rng.random() < 0.5:
        a1 = a0 * ratio
    else:
        a1 = a0 / ratio
    phase = rng.uniform(0.0, 2.0 * math.pi)
    h1 = math.sqrt(a1) * complex(math.cos(phase), math.sin(phase))
    # Back out the synthetic tag path so that h1 = h_sr + alpha*h_st*h_tr.
    h_tr = complex(1.0)
    h_st = (h1 - h_sr) / (params.alpha * h_tr)
    return _derive(h_st, h_sr, h_tr, params)


def channel_from_magnitudes(
    h0_sq: float, h1_sq: float, params: SystemParams
) -> ChannelRealization:
    """Deterministic channel with the given path gains (real phases).

    Used to pin operating points when validating the conditional error-rate
    formulas.
    """
    if h0_sq < 0.0 or h1_sq < 0.0:
        raise ValueError("path gains must be >= 0")
    h_sr = complex(math.sqrt(h0_sq))
    h1 = complex(math.sqrt(h1_sq))
    h_tr = complex(1.0)
    h_st = (h1 - h_sr) / (params.alpha * h_tr)
    return _derive(h_st, h_sr, h_tr, params)


# ---------------------------------------------------------------------------
# Sample-level synthesis
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SignalBlock:
    """N received samples spanning one tag bit, with the energy cached."""

    samples: np.ndarray
    true_bit: int
    energy: float

    @staticmethod
    def from_samples(samples: np.ndarray, true_bit: int) -> "SignalBlock":
        return SignalBlock(
            samples=samples, true_bit=true_bit, energy=float(np.sum(np.abs(samples) ** 2))
        )


@dataclass(frozen=True)
class Frame:
    """M data blocks plus M_t training blocks under one channel draw."""

    data_blocks: tuple[SignalBlock, ...]
    training_blocks: tuple[SignalBlock, ...]
    channel: ChannelRealization

    @property
    def m(self) -> int:
        return len(self.data_blocks)

    @property
    def m_t(self) -> int:
        return len(self.training_blocks)


def _source_samples(params: SystemParams, n: int, rng: np.random.Generator) -> np.ndarray:
    ps = params.source_power
    kind = params.source_kind
    if isinstance(kind, ComplexGaussian):
        s = math.sqrt(ps / 2.0)
        return s * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
    k = rng.integers(0, kind.constellation_order, size=n)
    return math.sqrt(ps) * np.exp(2j * math.pi * k / kind.constellation_order)


def synth_block(
    ch: ChannelRealization,
    bit: int,
    params: SystemParams,
    rng: np.random.Generator,
) -> SignalBlock:
    """Synthesize y[n] = h_bit s[n] + w[n] for one tag bit."""
    if bit not in (0, 1):
        raise ValueError("bit must be 0 or 1")
    n = params.samples_per_bit
    h = ch.h1 if bit else ch.h0
    s = _source_samples(params, n, rng)
    nw = math.sqrt(params.noise_power / 2.0)
    w = nw * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
    return SignalBlock.from_samples(h * s + w, bit)


def synth_frame(
    ch: ChannelRealization,
    bits,
    params: SystemParams,
    rng: np.random.Generator,
    m_t: int = 4,
    training_bit: int = 1,
) -> Frame:
    """One block per data bit plus m_t training blocks, all on one channel."""
    bits = list(bits)
    if len(bits) % 2 != 0:
        raise ValueError("frame length M must be even")
    data = tuple(synth_block(ch, b, params, rng) for b in bits)
    training = tuple(synth_block(ch, training_bit, params, rng) for _ in range(m_t))
    return Frame(data_blocks=data, training_blocks=training, channel=ch)


# ---------------------------------------------------------------------------
# Vectorized energy synthesis (exact block-energy laws)
# ---------------------------------------------------------------------------
#
# The detector and the semi-blind estimator consume only block energies, and
# the energy laws are exact (not asymptotic): Gamma for the complex-Gaussian
# source, scaled noncentral chi-square for the constant-modulus source.
# Drawing energies directly is distribution-identical to summing |y[n]|^2
# over synthesized samples and is what the Monte Carlo engine uses; the
# equivalence is asserted statistically in the test suite.

def cg_block_energies(
    sigma_sq: np.ndarray, n: int, rng: np.random.Generator
) -> np.ndarray:
    """Energies of complex-Gaussian-source blocks: Gamma(n, scale=sigma_sq)."""
    return rng.gamma(shape=float(n), scale=sigma_sq)

def psk_block_energies(
    h_sq: np.ndarray,
    ps: float,
    nw: float,
    n: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """Energies of constant-modulus-source blocks.

    Z = sum_n |h sqrt(Ps) e^{j theta_n} + w_n|^2 with w ~ CN(0, Nw) is
    (Nw/2) times a noncentral chi-square with 2n degrees of freedom and
    noncentrality 2 n |h|^2 Ps / Nw.
    """
    nonc = 2.0 * n * np.asarray(h_sq, dtype=float) * ps / nw
    return 0.5 * nw * rng.noncentral_chisquare(2 * n, nonc)
