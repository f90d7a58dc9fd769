"""Command-line front end.

    bsl ber      --config cfg.json [--out DIR] [--seed S] [--trials T]
                 [--threads N] [--override k=v ...]
    bsl balance  ... (same flags)
    bsl outage   ...
    bsl training ...
    bsl eval     --formula NAME [scalar flags]
    bsl selftest [--out DIR] [--trials T] [--threads N]

Experiment subcommands write `<subcommand>-<config-stem>.csv` into --out.
Exit codes: 0 success, 1 runtime or selftest failure, 2 configuration or
usage error.  BSL_THREADS sets the default worker count.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from pathlib import Path

from . import selftest as selftest_mod
from .config import ConfigError, load_config
from .csvio import write_csv
from .detectors import SigmaPair
from .harness import run_balance_sweep, run_ber_sweep, run_outage_sweep, run_training_sweep
from .fading import OutageModelParams, at_probability, outage_probability
from .specfun import q_func, q_inv
from . import theory

__all__ = ["main", "FORMULAS"]


def _default_threads() -> int:
    env = os.environ.get("BSL_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(f"BSL_THREADS must be an integer, got {env!r}")
    return 1


def _sigma_pair(args) -> SigmaPair:
    if args.sigma0_sq is None or args.sigma1_sq is None:
        raise ConfigError("this formula needs --sigma0-sq and --sigma1-sq")
    return SigmaPair(args.sigma0_sq, args.sigma1_sq)


def _need(args, *names):
    vals = []
    for name in names:
        v = getattr(args, name)
        if v is None:
            raise ConfigError(f"this formula needs --{name.replace('_', '-')}")
        vals.append(v)
    return vals


def _outage_model(args) -> OutageModelParams:
    var_h0, = _need(args, "var_h0")
    if args.var_f is not None:
        var_f = args.var_f
    else:
        h_tr, var_st, alpha = _need(args, "h_tr", "var_st", "alpha")
        var_f = alpha * alpha * h_tr * h_tr * var_st
    gamma, n = _need(args, "gamma", "n")
    return OutageModelParams(var_h0=var_h0, var_f=var_f, gamma=gamma, n=int(n))


FORMULAS = {
    "q": lambda a: q_func(*_need(a, "x")),
    "q-inv": lambda a: q_inv(*_need(a, "x")),
    "threshold-cg-optimal": lambda a: theory.threshold_for(
        "cg-optimal", _sigma_pair(a), int(*_need(a, "n")), a.nw or 1.0
    ).threshold,
    "threshold-balanced": lambda a: theory.threshold_for(
        "cg-balanced", _sigma_pair(a), int(*_need(a, "n")), a.nw or 1.0
    ).threshold,
    "threshold-cg-suboptimal": lambda a: theory.threshold_for(
        "cg-suboptimal", _sigma_pair(a), int(*_need(a, "n")), a.nw or 1.0
    ).threshold,
    "threshold-psk-noise-aware": lambda a: theory.threshold_for(
        "psk-noise-aware", _sigma_pair(a), int(*_need(a, "n")), *_need(a, "nw")
    ).threshold,
    "threshold-psk-asymptotic": lambda a: theory.threshold_for(
        "psk-asymptotic", _sigma_pair(a), int(*_need(a, "n")), a.nw or 1.0
    ).threshold,
    "ber-cg-optimal": lambda a: theory.ber_cg_optimal(_sigma_pair(a), int(*_need(a, "n"))),
    "ber-cg-optimal-approx": lambda a: theory.ber_cg_optimal_approx(
        _sigma_pair(a), int(*_need(a, "n"))
    ),
    "ber-cg-suboptimal": lambda a: theory.ber_cg_suboptimal(_sigma_pair(a), int(*_need(a, "n"))),
    "ber-cg-asymptotic": lambda a: theory.ber_cg_asymptotic(
        *_need(a, "delta", "sigma_sum", "gamma"), int(*_need(a, "n"))
    ),
    "ber-floor": lambda a: theory.ber_floor(*_need(a, "delta", "sigma_sum"), int(*_need(a, "n"))),
    "ber-floor-exp": lambda a: theory.ber_floor_exp_approx(
        *_need(a, "delta", "sigma_sum"), int(*_need(a, "n"))
    ),
    "ber-psk-asymptotic": lambda a: theory.ber_psk_asymptotic(
        math.sqrt(_need(a, "h0_sq")[0]),
        math.sqrt(_need(a, "h1_sq")[0]),
        *_need(a, "gamma"),
        int(*_need(a, "n")),
    ),
    "outage": lambda a: outage_probability(_outage_model(a), *_need(a, "target")),
    "at": lambda a: at_probability(_outage_model(a), *_need(a, "target")),
}

_RUNNERS = {
    "ber": run_ber_sweep,
    "balance": run_balance_sweep,
    "outage": run_outage_sweep,
    "training": run_training_sweep,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bsl",
        description="Backscatter semi-coherent detection lab: Monte Carlo sweeps "
        "and closed-form evaluators.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_run(name: str, help_: str):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", required=True, help="experiment config JSON")
        p.add_argument("--out", default="out", help="output directory (default: ./out)")
        p.add_argument("--seed", type=int, default=None, help="override config seed")
        p.add_argument("--trials", type=int, default=None, help="override config trials")
        p.add_argument("--threads", type=int, default=None, help="worker threads")
        p.add_argument(
            "--override",
            action="append",
            default=[],
            metavar="K=V",
            help="dotted-path config override, repeatable",
        )
        return p

    add_run("ber", "BER sweep: Monte Carlo vs closed forms")
    add_run("balance", "conditional error-rate sweep")
    add_run("outage", "outage / floor-exceedance sweep")
    add_run("training", "BER vs number of training blocks")

    pe = sub.add_parser("eval", help="print one closed-form value")
    pe.add_argument("--formula", required=True, choices=sorted(FORMULAS))
    pe.add_argument("--x", type=float)
    pe.add_argument("--sigma0-sq", dest="sigma0_sq", type=float)
    pe.add_argument("--sigma1-sq", dest="sigma1_sq", type=float)
    pe.add_argument("--n", type=float)
    pe.add_argument("--nw", type=float)
    pe.add_argument("--delta", type=float)
    pe.add_argument("--sigma-sum", dest="sigma_sum", type=float)
    pe.add_argument("--gamma", type=float)
    pe.add_argument("--h0-sq", dest="h0_sq", type=float)
    pe.add_argument("--h1-sq", dest="h1_sq", type=float)
    pe.add_argument("--var-h0", dest="var_h0", type=float)
    pe.add_argument("--var-f", dest="var_f", type=float)
    pe.add_argument("--h-tr", dest="h_tr", type=float)
    pe.add_argument("--var-st", dest="var_st", type=float)
    pe.add_argument("--alpha", type=float)
    pe.add_argument("--target", type=float)

    ps = sub.add_parser("selftest", help="oracle cross-checks plus selftest CSV datasets")
    ps.add_argument("--out", default="out", help="directory for the selftest CSVs")
    ps.add_argument("--trials", type=int, default=20_000, help="Monte Carlo trials per point")
    ps.add_argument("--threads", type=int, default=None)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help; pass both through
        return int(exc.code or 0)
    try:
        if args.subcommand == "eval":
            value = FORMULAS[args.formula](args)
            print(format(value, ".12g"))
            return 0
        if args.subcommand == "selftest":
            threads = args.threads if args.threads is not None else _default_threads()
            ok = selftest_mod.run_selftest(Path(args.out), trials=args.trials, threads=threads)
            return 0 if ok else 1
        # experiment subcommands
        overrides = list(args.override)
        if args.seed is not None:
            overrides.append(f"seed={args.seed}")
        if args.trials is not None:
            overrides.append(f"trials={args.trials}")
        cfg = load_config(args.config, overrides)
        threads = args.threads if args.threads is not None else _default_threads()
        curve = _RUNNERS[args.subcommand](cfg, threads=threads)
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        stem = Path(args.config).stem
        out_path = out_dir / f"{args.subcommand}-{stem}.csv"
        write_csv(curve, out_path)
        print(out_path)
        return 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # runtime failure
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
