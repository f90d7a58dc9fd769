"""Monte Carlo experiment engine.

Sweeps a scenario across SNR, block length, RCD, training count, or outage
target; synthesizes frames of block energies from their exact laws; runs
every configured detector on the same energies; and pairs the empirical
error rates with the matching closed-form values evaluated at each frame's
true channel.

Determinism contract: results are a pure function of (config, seed).  Work
is split into fixed-size chunks of frames, each chunk drawing from an
independent substream keyed by (seed, point_index, chunk_index); partial
sums are reduced in chunk order, so the worker count never changes a
single output bit.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import special as sps

from .config import ExperimentConfig, ConfigError
from .detectors import decide_arr, thresholds_arr
from .estimator import estimate_sigmas_batch
from .fading import OutageModelParams, at_probability, outage_probability
from .sigmodel import cg_block_energies, psk_block_energies

__all__ = [
    "FRAMES_PER_CHUNK",
    "DETECTOR_SOURCE",
    "BERCurve",
    "BalanceCurve",
    "OutageCurve",
    "run_ber_sweep",
    "run_balance_sweep",
    "run_outage_sweep",
    "run_training_sweep",
    "binomial_radius",
]

FRAMES_PER_CHUNK = 512

# Which ambient source each detector front end assumes.
DETECTOR_SOURCE = {
    "cg-optimal": "cg",
    "cg-suboptimal": "cg",
    "cg-balanced": "cg",
    "psk-noise-aware": "psk",
    "psk-asymptotic": "psk",
}


def binomial_radius(errors: float, n: float) -> float:
    """4-sigma binomial radius 4 sqrt(p(1-p)/n) of an error-rate estimate."""
    if n <= 0:
        return 0.0
    p = errors / n
    return 4.0 * math.sqrt(max(p * (1.0 - p), 0.0) / n)


# ---------------------------------------------------------------------------
# Result containers
# ---------------------------------------------------------------------------

@dataclass
class SeriesStats:
    theory_ber: list[float] = field(default_factory=list)
    mc_ber: list[float] = field(default_factory=list)
    mc_radius: list[float] = field(default_factory=list)
    trials: list[int] = field(default_factory=list)
    skipped: list[int] = field(default_factory=list)


@dataclass
class BalanceSeries:
    theory_p01: list[float] = field(default_factory=list)
    theory_p10: list[float] = field(default_factory=list)
    p01: list[float] = field(default_factory=list)
    p10: list[float] = field(default_factory=list)
    radius01: list[float] = field(default_factory=list)
    radius10: list[float] = field(default_factory=list)
    n0: list[int] = field(default_factory=list)
    n1: list[int] = field(default_factory=list)
    skipped: list[int] = field(default_factory=list)


@dataclass
class BERCurve:
    x_label: str
    x_values: list[float]
    series: dict[str, SeriesStats]


@dataclass
class BalanceCurve:
    x_label: str
    x_values: list[float]
    series: dict[str, BalanceSeries]


@dataclass
class OutageCurve:
    x_label: str
    x_values: list[float]
    theory_pout: list[float]
    theory_pat: list[float]
    mc_pout: list[float]
    mc_pat: list[float]
    mc_radius_pout: list[float]
    mc_radius_pat: list[float]
    trials: list[int]


# ---------------------------------------------------------------------------
# Per-chunk simulation
# ---------------------------------------------------------------------------

@dataclass
class _DetStats:
    errors: int = 0
    counted: int = 0
    skipped: int = 0
    err0: int = 0
    n0: int = 0
    err1: int = 0
    n1: int = 0
    theory_sum: float = 0.0
    theory_e0_sum: float = 0.0
    theory_e1_sum: float = 0.0
    theory_frames: int = 0

    def add(self, o: "_DetStats") -> None:
        self.errors += o.errors
        self.counted += o.counted
        self.skipped += o.skipped
        self.err0 += o.err0
        self.n0 += o.n0
        self.err1 += o.err1
        self.n1 += o.n1
        self.theory_sum += o.theory_sum
        self.theory_e0_sum += o.theory_e0_sum
        self.theory_e1_sum += o.theory_e1_sum
        self.theory_frames += o.theory_frames


def _chunk_rng(seed: int, point_idx: int, chunk_idx: int) -> np.random.Generator:
    ss = np.random.SeedSequence(seed, spawn_key=(point_idx, chunk_idx))
    return np.random.Generator(np.random.PCG64(ss))


def _q_arr(x: np.ndarray) -> np.ndarray:
    return sps.ndtr(-x)


def _draw_gains(cfg, params, fixed_rcd, n_frames, rng):
    """Per-frame path gains (|h0|^2, |h1|^2) honoring the channel mode."""
    if cfg.fixed_channel is not None:
        h0 = np.full(n_frames, cfg.fixed_channel.h0_sq)
        h1 = np.full(n_frames, cfg.fixed_channel.h1_sq)
        return h0, h1
    if fixed_rcd is not None:
        h0 = rng.exponential(params.var_sr, size=n_frames)
        ratio = (1.0 - fixed_rcd) / (1.0 + fixed_rcd)
        up = rng.random(n_frames) < 0.5
        h1 = np.where(up, h0 / ratio, h0 * ratio)
        return h0, h1
    s_st = math.sqrt(params.var_st / 2.0)
    s_sr = math.sqrt(params.var_sr / 2.0)
    h_st = s_st * (rng.standard_normal(n_frames) + 1j * rng.standard_normal(n_frames))
    h_sr = s_sr * (rng.standard_normal(n_frames) + 1j * rng.standard_normal(n_frames))
    if cfg.fixed_h_tr is not None:
        h_tr = np.full(n_frames, cfg.fixed_h_tr, dtype=complex)
    else:
        s_tr = math.sqrt(params.var_tr / 2.0)
        h_tr = s_tr * (rng.standard_normal(n_frames) + 1j * rng.standard_normal(n_frames))
    h1c = h_sr + params.alpha * h_st * h_tr
    return np.abs(h_sr) ** 2, np.abs(h1c) ** 2


def _theory_pair_arr(kind, h0_sq, h1_sq, n, ps, nw):
    """Per-frame closed-form conditional error pair at the true channel.

    Exact incomplete-gamma law for the likelihood-ratio and balanced
    thresholds; the Gaussian energy model for the suboptimal and
    constant-modulus detectors (their own closed forms).
    """
    s0 = h0_sq * ps + nw
    s1 = h1_sq * ps + nw
    t, zero_above, valid = thresholds_arr(kind, s0, s1, n, nw)
    if kind in ("cg-optimal", "cg-balanced"):
        e_low = sps.gammainc(n, t / np.where(zero_above, s0, s1))
        e_high = sps.gammaincc(n, t / np.where(zero_above, s1, s0))
        e0 = np.where(zero_above, e_low, e_high)
        e1 = np.where(zero_above, e_high, e_low)
    elif kind == "cg-suboptimal":
        z0 = (t - n * s0) / (math.sqrt(n) * s0)
        z1 = (t - n * s1) / (math.sqrt(n) * s1)
        e0 = np.where(zero_above, 1.0 - _q_arr(z0), _q_arr(z0))
        e1 = np.where(zero_above, _q_arr(z1), 1.0 - _q_arr(z1))
    else:  # constant-modulus moments
        v0 = 2.0 * n * h0_sq * ps * nw + n * nw * nw
        v1 = 2.0 * n * h1_sq * ps * nw + n * nw * nw
        z0 = (t - n * s0) / np.sqrt(v0)
        z1 = (t - n * s1) / np.sqrt(v1)
        e0 = np.where(zero_above, 1.0 - _q_arr(z0), _q_arr(z0))
        e1 = np.where(zero_above, _q_arr(z1), 1.0 - _q_arr(z1))
    return e0, e1, valid


def _simulate_chunk(cfg, params, fixed_rcd, m, m_t, n_frames, point_idx, chunk_idx):
    rng = _chunk_rng(cfg.seed, point_idx, chunk_idx)
    n = params.samples_per_bit
    ps, nw = params.source_power, params.noise_power
    h0_sq, h1_sq = _draw_gains(cfg, params, fixed_rcd, n_frames, rng)
    s0_true = h0_sq * ps + nw
    s1_true = h1_sq * ps + nw
    if cfg.balanced_bits:
        base = np.tile(np.repeat(np.array([0, 1], dtype=np.int8), m // 2)[None, :], (n_frames, 1))
        bits = rng.permuted(base, axis=1)
    else:
        bits = rng.integers(0, 2, size=(n_frames, m), dtype=np.int8)
    estimated = cfg.sigma_source.kind == "estimated"
    training_bit = cfg.sigma_source.training_bit

    sources = sorted({DETECTOR_SOURCE[d] for d in cfg.detector_set})
    energies: dict[str, np.ndarray] = {}
    sigma_hat: dict[str, tuple[np.ndarray, np.ndarray]] = {}
    for src in sources:
        if src == "cg":
            sigma_d = np.where(bits == 1, s1_true[:, None], s0_true[:, None])
            z = cg_block_energies(sigma_d, n, rng)
            if estimated:
                sig_t = (s1_true if training_bit == 1 else s0_true)[:, None]
                z_t = cg_block_energies(np.broadcast_to(sig_t, (n_frames, m_t)).copy(), n, rng)
        else:
            h_d = np.where(bits == 1, h1_sq[:, None], h0_sq[:, None])
            z = psk_block_energies(h_d, ps, nw, n, rng)
            if estimated:
                h_t = (h1_sq if training_bit == 1 else h0_sq)[:, None]
                z_t = psk_block_energies(np.broadcast_to(h_t, (n_frames, m_t)).copy(), ps, nw, n, rng)
        energies[src] = z
        if estimated:
            sigma_hat[src] = estimate_sigmas_batch(z, z_t, n, training_bit)
        else:
            sigma_hat[src] = (s0_true, s1_true)

    out: dict[str, _DetStats] = {}
    for det in cfg.detector_set:
        src = DETECTOR_SOURCE[det]
        z = energies[src]
        s0_hat, s1_hat = sigma_hat[src]
        t, zero_above, valid = thresholds_arr(det, s0_hat, s1_hat, n, nw)
        dec = decide_arr(z, t[:, None], np.broadcast_to(zero_above[:, None], z.shape))
        vmask = valid[:, None]
        err = (dec != bits) & vmask
        st = _DetStats()
        st.errors = int(err.sum())
        st.counted = int(valid.sum()) * m
        st.skipped = int((~valid).sum()) * m
        b0 = (bits == 0) & vmask
        b1 = (bits == 1) & vmask
        st.err0 = int((err & b0).sum())
        st.n0 = int(b0.sum())
        st.err1 = int((err & b1).sum())
        st.n1 = int(b1.sum())
        e0, e1, tvalid = _theory_pair_arr(det, h0_sq, h1_sq, n, ps, nw)
        tv = tvalid & valid
        st.theory_e0_sum = float(e0[tv].sum())
        st.theory_e1_sum = float(e1[tv].sum())
        st.theory_sum = 0.5 * (st.theory_e0_sum + st.theory_e1_sum)
        st.theory_frames = int(tv.sum())
        out[det] = st
    return out


def _point_setup(cfg: ExperimentConfig, x: float):
    """Resolve the swept quantity into (params, fixed_rcd, m, m_t)."""
    import dataclasses

    params = cfg.scenario
    fixed_rcd = cfg.fixed_rcd
    m = cfg.sigma_source.m
    m_t = cfg.sigma_source.m_t
    kind = cfg.sweep.kind
    if kind == "snr_db":
        params = params.with_snr_db(x)
    elif kind == "block_len":
        params = dataclasses.replace(params, samples_per_bit=int(x))
    elif kind == "rcd":
        fixed_rcd = x
    elif kind == "training_count":
        m_t = int(x)
    else:
        raise ConfigError(f"sweep kind {kind!r} is not a detection sweep")
    return params, fixed_rcd, m, m_t


def _run_detection(cfg: ExperimentConfig, threads: int = 1) -> dict[str, list[_DetStats]]:
    if cfg.sweep.kind == "training_count" and cfg.sigma_source.kind != "estimated":
        raise ConfigError("training_count sweeps require sigma_source.kind='estimated'")
    acc: dict[str, list[_DetStats]] = {d: [] for d in cfg.detector_set}
    for point_idx, x in enumerate(cfg.sweep.points):
        params, fixed_rcd, m, m_t = _point_setup(cfg, x)
        n_frames_total = -(-cfg.trials // m)  # ceil
        chunks = []
        remaining = n_frames_total
        chunk_idx = 0
        while remaining > 0:
            take = min(FRAMES_PER_CHUNK, remaining)
            chunks.append((chunk_idx, take))
            remaining -= take
            chunk_idx += 1

        def work(item):
            ci, nf = item
            return _simulate_chunk(cfg, params, fixed_rcd, m, m_t, nf, point_idx, ci)

        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as ex:
                results = list(ex.map(work, chunks))
        else:
            results = [work(c) for c in chunks]
        totals = {d: _DetStats() for d in cfg.detector_set}
        for res in results:  # chunk order: deterministic reduction
            for d in cfg.detector_set:
                totals[d].add(res[d])
        for d in cfg.detector_set:
            acc[d].append(totals[d])
    return acc


def run_ber_sweep(cfg: ExperimentConfig, threads: int = 1) -> BERCurve:
    """Empirical vs closed-form BER for every configured detector."""
    stats = _run_detection(cfg, threads)
    series: dict[str, SeriesStats] = {}
    for det, points in stats.items():
        s = SeriesStats()
        for st in points:
            mc = st.errors / st.counted if st.counted else math.nan
            s.theory_ber.append(st.theory_sum / st.theory_frames if st.theory_frames else math.nan)
            s.mc_ber.append(mc)
            s.mc_radius.append(binomial_radius(st.errors, st.counted))
            s.trials.append(st.counted)
            s.skipped.append(st.skipped)
        series[det] = s
    return BERCurve(x_label=cfg.sweep.kind, x_values=list(cfg.sweep.points), series=series)


def run_balance_sweep(cfg: ExperimentConfig, threads: int = 1) -> BalanceCurve:
    """Conditional error rates P(decide 1 | bit 0) and P(decide 0 | bit 1)."""
    stats = _run_detection(cfg, threads)
    series: dict[str, BalanceSeries] = {}
    for det, points in stats.items():
        s = BalanceSeries()
        for st in points:
            s.p01.append(st.err0 / st.n0 if st.n0 else math.nan)
            s.p10.append(st.err1 / st.n1 if st.n1 else math.nan)
            s.radius01.append(binomial_radius(st.err0, st.n0))
            s.radius10.append(binomial_radius(st.err1, st.n1))
            tf = st.theory_frames
            s.theory_p01.append(st.theory_e0_sum / tf if tf else math.nan)
            s.theory_p10.append(st.theory_e1_sum / tf if tf else math.nan)
            s.n0.append(st.n0)
            s.n1.append(st.n1)
            s.skipped.append(st.skipped)
        series[det] = s
    return BalanceCurve(x_label=cfg.sweep.kind, x_values=list(cfg.sweep.points), series=series)


def run_training_sweep(cfg: ExperimentConfig, threads: int = 1) -> BERCurve:
    """BER vs the number of training blocks (estimated variances)."""
    if cfg.sweep.kind != "training_count":
        raise ConfigError("run_training_sweep requires sweep.kind='training_count'")
    return run_ber_sweep(cfg, threads)


# ---------------------------------------------------------------------------
# Outage sweep
# ---------------------------------------------------------------------------

def _outage_chunk(cfg, var_f, gamma, n, zeta, eta, n_draws, point_idx, chunk_idx):
    rng = _chunk_rng(cfg.seed, point_idx, chunk_idx)
    var_h0 = cfg.scenario.var_sr
    h0 = math.sqrt(var_h0 / 2.0) * (
        rng.standard_normal(n_draws) + 1j * rng.standard_normal(n_draws)
    )
    f = math.sqrt(var_f / 2.0) * (
        rng.standard_normal(n_draws) + 1j * rng.standard_normal(n_draws)
    )
    y0 = np.abs(h0) ** 2
    y1 = np.abs(h0 + f) ** 2
    delta = np.abs(y0 - y1)
    sig = y0 + y1
    rt_n = math.sqrt(n)
    ber = _q_arr(rt_n * delta / (sig + 2.0 / gamma))
    floor = _q_arr(rt_n * delta / np.maximum(sig, 1e-300))
    return int((ber >= zeta).sum()), int((floor >= eta).sum())


def run_outage_sweep(cfg: ExperimentConfig, threads: int = 1) -> OutageCurve:
    """Empirical {large-N BER >= zeta} / {floor >= eta} rates vs closed forms.

    Sweeps either the target (sweep.kind='target_ber', zeta = eta = x) or
    the SNR (sweep.kind='snr_db', targets fixed at cfg.outage_target).
    Requires fixed_h_tr: the closed forms hold for a constant tag-reader
    link.
    """
    if cfg.fixed_h_tr is None:
        raise ConfigError("outage sweeps require fixed_h_tr (constant tag-reader link)")
    if cfg.sweep.kind not in ("target_ber", "snr_db"):
        raise ConfigError("outage sweeps accept sweep.kind 'target_ber' or 'snr_db'")
    sc = cfg.scenario
    var_f = sc.alpha**2 * cfg.fixed_h_tr**2 * sc.var_st
    n = sc.samples_per_bit
    th_pout, th_pat, mc_pout, mc_pat, rad_out, rad_at, trials = [], [], [], [], [], [], []
    for point_idx, x in enumerate(cfg.sweep.points):
        if cfg.sweep.kind == "target_ber":
            gamma = sc.snr
            zeta = eta = float(x)
        else:
            gamma = sc.with_snr_db(x).snr
            zeta = eta = cfg.outage_target
        model = OutageModelParams(var_h0=sc.var_sr, var_f=var_f, gamma=gamma, n=n)
        th_pout.append(outage_probability(model, zeta))
        th_pat.append(at_probability(model, eta))
        draws = cfg.trials
        chunk = 1 << 16
        c_out = c_at = 0
        items = []
        idx = 0
        remaining = draws
        while remaining > 0:
            take = min(chunk, remaining)
            items.append((idx, take))
            remaining -= take
            idx += 1

        def work(item):
            ci, nd = item
            return _outage_chunk(cfg, var_f, gamma, n, zeta, eta, nd, point_idx, ci)

        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as ex:
                results = list(ex.map(work, items))
        else:
            results = [work(i) for i in items]
        for a, b in results:
            c_out += a
            c_at += b
        mc_pout.append(c_out / draws)
        mc_pat.append(c_at / draws)
        rad_out.append(binomial_radius(c_out, draws))
        rad_at.append(binomial_radius(c_at, draws))
        trials.append(draws)
    return OutageCurve(
        x_label=cfg.sweep.kind,
        x_values=list(cfg.sweep.points),
        theory_pout=th_pout,
        theory_pat=th_pat,
        mc_pout=mc_pout,
        mc_pat=mc_pat,
        mc_radius_pout=rad_out,
        mc_radius_pat=rad_at,
        trials=trials,
    )
