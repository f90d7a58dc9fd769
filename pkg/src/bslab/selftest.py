"""Built-in oracle cross-checks and selftest datasets.

`run_selftest` exercises every numerical kernel against an independent
route (identities, quadrature, a short Monte Carlo run), prints one line
per check, writes one small CSV per figure preset into the output
directory, and reports overall success.
"""

from __future__ import annotations

import math
from pathlib import Path

from .config import ExperimentConfig, FixedChannelSpec, SigmaSourceSpec, SweepSpec
from .csvio import write_csv
from .detectors import (
    SigmaPair,
    threshold_balanced,
    threshold_cg_optimal,
    threshold_cg_suboptimal,
    threshold_psk_asymptotic,
)
from .fading import (
    OutageModelParams,
    at_probability,
    outage_probability,
    outage_probability_quadrature,
    ratio_cdf,
)
from .harness import run_balance_sweep, run_ber_sweep, run_outage_sweep, run_training_sweep
from .sigmodel import ComplexGaussian, Psk, SystemParams
from .specfun import (
    bessel_i0,
    gauss_2f1,
    lower_gamma_reg,
    q_func,
    q_inv,
    upper_gamma_reg,
)
from . import theory

__all__ = ["run_selftest", "SELFTEST_DATASETS"]


class _Checker:
    def __init__(self) -> None:
        self.failures = 0

    def check(self, name: str, ok: bool, detail: str = "") -> None:
        status = "ok  " if ok else "FAIL"
        print(f"[selftest] {status} {name}" + (f"  ({detail})" if detail else ""))
        if not ok:
            self.failures += 1

    def close(self, name: str, a: float, b: float, rtol: float, atol: float = 0.0) -> None:
        err = abs(a - b)
        ok = err <= atol + rtol * abs(b)
        self.check(name, ok, f"{a:.6g} vs {b:.6g}")


def _kernel_checks(c: _Checker) -> None:
    c.check("q symmetry", all(abs(q_func(x) + q_func(-x) - 1.0) < 1e-14 for x in (-3, -0.7, 0.2, 4)))
    c.close("q inverse roundtrip", q_func(q_inv(0.037)), 0.037, 1e-12)
    c.check(
        "gamma complement",
        all(
            abs(lower_gamma_reg(a, x) + upper_gamma_reg(a, x) - 1.0) < 1e-13
            for a, x in ((3, 1.0), (40, 40.0), (400, 350.0))
        ),
    )
    c.close("gamma finite-sum m=1", upper_gamma_reg(2, 1.0), 2.0 * math.exp(-1.0), 1e-13)
    c.close("bessel i0(1)", bessel_i0(1.0), 1.2660658777520084, 1e-12)
    c.close("2f1 binomial identity", gauss_2f1(2, 1, 1, -1), 0.25, 1e-12)
    c.close("2f1 log identity", gauss_2f1(1, 1, 2, -1), math.log(2.0), 1e-12)


def _threshold_checks(c: _Checker) -> None:
    s = SigmaPair(31.0, 11.0)
    n = 40
    t = threshold_cg_optimal(s, n)
    llr = n * (math.log(s.sigma1_sq) - math.log(s.sigma0_sq)) + (
        s.sigma0_sq - s.sigma1_sq
    ) / (s.sigma0_sq * s.sigma1_sq) * t.threshold
    c.check("optimal threshold zeroes the log-likelihood ratio", abs(llr) < 1e-9)
    ts = threshold_cg_suboptimal(s, n)
    m = theory.cg_moments(s, n)

    def log_norm_pdf(x, mu, var):
        return -0.5 * math.log(2 * math.pi * var) - (x - mu) ** 2 / (2 * var)

    c.check(
        "suboptimal threshold equalizes the Gaussian densities",
        abs(
            log_norm_pdf(ts.threshold, m.mu0, m.var0)
            - log_norm_pdf(ts.threshold, m.mu1, m.var1)
        )
        < 1e-9,
    )
    tb = threshold_balanced(s, n).threshold
    tl = threshold_cg_suboptimal(s, 10_000_000).threshold / 10_000_000 * n
    c.close("suboptimal -> balanced threshold as N grows", tl, tb, 1e-3)
    # Harmonic <= geometric mean: the balanced threshold never exceeds the
    # geometric-mean one.
    c.check(
        "balanced threshold below geometric-mean threshold",
        tb <= threshold_psk_asymptotic(s, n).threshold,
    )


def _theory_checks(c: _Checker) -> None:
    s = SigmaPair(31.0, 11.0)
    n = 40
    tb = threshold_balanced(s, n)
    lhs = theory.ber_cg_gaussian(s, n, tb)
    delta, sig = 2.0, 4.0
    rhs = theory.ber_cg_asymptotic(delta, sig, 10.0, n)
    c.close("balanced-threshold Gaussian BER equals asymptotic Q form", lhs, rhs, 1e-12)
    e0, e1 = theory.cg_error_pair_gaussian(s, n, tb)
    c.check("balanced threshold equalizes Gaussian error pair", abs(e0 - e1) < 1e-12)
    c.check(
        "optimal <= suboptimal BER",
        theory.ber_cg_optimal(s, n) <= theory.ber_cg_suboptimal(s, n),
    )
    c.close(
        "scale invariance",
        theory.ber_cg_optimal(SigmaPair(3.1, 1.1), n),
        theory.ber_cg_optimal(SigmaPair(31.0, 11.0), n),
        1e-12,
    )


def _fading_checks(c: _Checker) -> None:
    p = OutageModelParams(var_h0=1.0, var_f=1.0, gamma=100.0, n=40)
    series = outage_probability(p, 0.1)
    quad = outage_probability_quadrature(p, 0.1)
    c.close("outage series vs quadrature", series, quad, 1e-4, 1e-8)
    c.close("gain-ratio CDF tail", ratio_cdf(1e4, p), 1.0, 1e-3)
    c.check("gain-ratio CDF at 0", ratio_cdf(0.0, p) == 0.0)
    c.check("AT trivial endpoints", at_probability(p, 0.5) == 0.0 and at_probability(p, 1e-12) == 1.0)


def _mc_check(c: _Checker, trials: int, threads: int) -> None:
    cfg = ExperimentConfig(
        scenario=SystemParams(source_power=10.0),
        sweep=SweepSpec(kind="snr_db", points=(10.0,)),
        detector_set=("cg-optimal",),
        trials=max(trials, 20_000),
        seed=20_240_601,
        fixed_channel=FixedChannelSpec(h0_sq=3.0, h1_sq=1.0),
    )
    curve = run_ber_sweep(cfg, threads=threads)
    s = curve.series["cg-optimal"]
    gap = abs(s.mc_ber[0] - s.theory_ber[0])
    six_sigma = 1.5 * max(s.mc_radius[0], 4.0 * math.sqrt(s.theory_ber[0] / s.trials[0]))
    c.check(
        "Monte Carlo matches exact BER (6 sigma)",
        gap <= six_sigma,
        f"mc={s.mc_ber[0]:.3e} theory={s.theory_ber[0]:.3e}",
    )


# ---------------------------------------------------------------------------
# Selftest datasets: one small CSV per figure preset
# ---------------------------------------------------------------------------

_CG = SystemParams(source_kind=ComplexGaussian())
_PSK = SystemParams(source_kind=Psk())
ALL_DETECTORS = (
    "cg-optimal",
    "cg-suboptimal",
    "cg-balanced",
    "psk-noise-aware",
    "psk-asymptotic",
)


def _dataset_configs(trials: int, seed: int = 7_310) -> dict[str, tuple]:
    snr = SweepSpec(kind="snr_db", points=(0.0, 5.0, 10.0, 15.0, 20.0))
    return {
        "ber-fig4.csv": (
            run_ber_sweep,
            ExperimentConfig(
                scenario=_CG, sweep=snr, detector_set=ALL_DETECTORS,
                trials=trials, seed=seed, fixed_rcd=0.5,
            ),
        ),
        "balance-fig6.csv": (
            run_balance_sweep,
            ExperimentConfig(
                scenario=_CG, sweep=snr,
                detector_set=("cg-optimal", "cg-balanced", "psk-asymptotic"),
                trials=trials, seed=seed + 1, fixed_rcd=0.5,
            ),
        ),
        "ber-fig7.csv": (
            run_ber_sweep,
            ExperimentConfig(
                scenario=_CG, sweep=SweepSpec(kind="block_len", points=(10, 20, 40, 80)),
                detector_set=ALL_DETECTORS, trials=trials, seed=seed + 2, fixed_rcd=0.5,
            ),
        ),
        "ber-fig8.csv": (
            run_ber_sweep,
            ExperimentConfig(
                scenario=_CG,
                sweep=SweepSpec(kind="rcd", points=tuple(i / 10 for i in range(1, 10))),
                detector_set=("cg-optimal", "cg-suboptimal"),
                trials=trials, seed=seed + 3,
            ),
        ),
        "outage-fig9-target.csv": (
            run_outage_sweep,
            ExperimentConfig(
                scenario=_CG,
                sweep=SweepSpec(kind="target_ber", points=(0.02, 0.05, 0.1, 0.2, 0.3)),
                detector_set=("cg-suboptimal",),
                trials=max(trials, 50_000), seed=seed + 4, fixed_h_tr=2.0,
            ),
        ),
        "outage-fig9-snr.csv": (
            run_outage_sweep,
            ExperimentConfig(
                scenario=_CG,
                sweep=SweepSpec(kind="snr_db", points=(0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0)),
                detector_set=("cg-suboptimal",),
                trials=max(trials, 50_000), seed=seed + 5, fixed_h_tr=2.0,
                outage_target=0.1,
            ),
        ),
        "training-fig10.csv": (
            run_training_sweep,
            ExperimentConfig(
                scenario=_CG,
                sweep=SweepSpec(kind="training_count", points=tuple(float(k) for k in range(1, 9))),
                detector_set=("cg-optimal", "cg-suboptimal"),
                sigma_source=SigmaSourceSpec(kind="estimated", m=50, m_t=4),
                trials=trials, seed=seed + 6, fixed_rcd=0.5,
            ),
        ),
    }


SELFTEST_DATASETS = tuple(_dataset_configs(trials=1000))


def run_selftest(out_dir: Path, trials: int = 20_000, threads: int = 1) -> bool:
    c = _Checker()
    _kernel_checks(c)
    _threshold_checks(c)
    _theory_checks(c)
    _fading_checks(c)
    _mc_check(c, trials, threads)
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, (runner, cfg) in _dataset_configs(trials=max(2000, trials // 4)).items():
        curve = runner(cfg, threads=threads)
        write_csv(curve, out_dir / name)
        print(f"[selftest] wrote {out_dir / name}")
    if c.failures:
        print(f"[selftest] {c.failures} check(s) FAILED")
    else:
        print("[selftest] all checks passed")
    return c.failures == 0
