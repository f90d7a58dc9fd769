"""Experiment configuration: JSON round-trip with strict validation.

The JSON document mirrors ExperimentConfig field for field; unknown keys at
any level are rejected so that typos fail loudly instead of silently
running a default.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .sigmodel import ComplexGaussian, Psk, SystemParams

__all__ = [
    "ConfigError",
    "SweepSpec",
    "SigmaSourceSpec",
    "FixedChannelSpec",
    "ExperimentConfig",
    "load_config",
    "parse_config",
    "apply_override",
]

SWEEP_KINDS = ("snr_db", "block_len", "rcd", "training_count", "target_ber")
DETECTOR_NAMES = (
    "cg-optimal",
    "cg-suboptimal",
    "cg-balanced",
    "psk-noise-aware",
    "psk-asymptotic",
)


class ConfigError(ValueError):
    """Invalid or unparseable experiment configuration."""


@dataclass(frozen=True)
class SweepSpec:
    kind: str
    points: tuple[float, ...]

    def __post_init__(self) -> None:
        if self.kind not in SWEEP_KINDS:
            raise ConfigError(f"unknown sweep kind {self.kind!r}; expected one of {SWEEP_KINDS}")
        if len(self.points) == 0:
            raise ConfigError("sweep.points must be nonempty")
        if any(b <= a for a, b in zip(self.points, self.points[1:])):
            raise ConfigError("sweep.points must be strictly increasing")
        if self.kind == "training_count" and any(
            p < 1 or p != int(p) for p in self.points
        ):
            raise ConfigError(
                "training_count points must be integers >= 1 "
                "(zero training blocks leaves the variance labels ambiguous)"
            )
        if self.kind == "block_len" and any(
            p < 2 or p != int(p) or int(p) % 2 for p in self.points
        ):
            raise ConfigError("block_len points must be even integers >= 2")
        if self.kind == "rcd" and any(not 0.0 < p < 1.0 for p in self.points):
            raise ConfigError("rcd points must lie in (0, 1)")
        if self.kind == "target_ber" and any(not 0.0 < p < 0.5 for p in self.points):
            raise ConfigError("target_ber points must lie in (0, 0.5)")


@dataclass(frozen=True)
class SigmaSourceSpec:
    kind: str = "perfect"  # "perfect" | "estimated"
    m: int = 50
    m_t: int = 4
    training_bit: int = 1

    def __post_init__(self) -> None:
        if self.kind not in ("perfect", "estimated"):
            raise ConfigError(f"sigma_source.kind must be 'perfect' or 'estimated', got {self.kind!r}")
        if self.m < 2 or self.m % 2:
            raise ConfigError("sigma_source.m must be an even integer >= 2")
        if self.kind == "estimated" and self.m_t < 1:
            raise ConfigError(
                "sigma_source.m_t must be >= 1: with no training blocks the "
                "blind cluster centers cannot be labeled"
            )
        if self.training_bit not in (0, 1):
            raise ConfigError("sigma_source.training_bit must be 0 or 1")


@dataclass(frozen=True)
class FixedChannelSpec:
    h0_sq: float
    h1_sq: float

    def __post_init__(self) -> None:
        if self.h0_sq < 0.0 or self.h1_sq < 0.0:
            raise ConfigError("fixed_channel gains must be >= 0")


@dataclass(frozen=True)
class ExperimentConfig:
    scenario: SystemParams
    sweep: SweepSpec
    detector_set: tuple[str, ...]
    sigma_source: SigmaSourceSpec = field(default_factory=SigmaSourceSpec)
    trials: int = 100_000
    seed: int = 1
    fixed_h_tr: float | None = None
    fixed_rcd: float | None = None
    fixed_channel: FixedChannelSpec | None = None
    balanced_bits: bool = False
    outage_target: float = 0.1

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if not 0.0 < self.outage_target < 0.5:
            raise ConfigError("outage_target must lie in (0, 0.5)")
        if not self.detector_set:
            raise ConfigError("detector_set must be nonempty")
        for d in self.detector_set:
            if d not in DETECTOR_NAMES:
                raise ConfigError(f"unknown detector {d!r}; expected one of {DETECTOR_NAMES}")
        if len(set(self.detector_set)) != len(self.detector_set):
            raise ConfigError("detector_set contains duplicates")
        if self.fixed_rcd is not None and not 0.0 <= self.fixed_rcd < 1.0:
            raise ConfigError("fixed_rcd must be in [0, 1)")
        if self.fixed_rcd is not None and self.fixed_channel is not None:
            raise ConfigError("fixed_rcd and fixed_channel are mutually exclusive")


def _take(d: dict, allowed: dict[str, bool], where: str) -> None:
    unknown = set(d) - set(allowed)
    if unknown:
        raise ConfigError(f"unknown key(s) {sorted(unknown)} in {where}")
    missing = [k for k, required in allowed.items() if required and k not in d]
    if missing:
        raise ConfigError(f"missing required key(s) {missing} in {where}")


def _parse_source_kind(d) -> ComplexGaussian | Psk:
    if not isinstance(d, dict):
        raise ConfigError("scenario.source_kind must be an object")
    kind = d.get("kind")
    if kind == "complex_gaussian":
        _take(d, {"kind": True}, "scenario.source_kind")
        return ComplexGaussian()
    if kind == "psk":
        _take(d, {"kind": True, "constellation_order": False}, "scenario.source_kind")
        return Psk(constellation_order=int(d.get("constellation_order", 4)))
    raise ConfigError(f"source_kind.kind must be 'complex_gaussian' or 'psk', got {kind!r}")


def parse_config(doc: dict) -> ExperimentConfig:
    if not isinstance(doc, dict):
        raise ConfigError("config root must be a JSON object")
    _take(
        doc,
        {
            "scenario": True,
            "sweep": True,
            "detector_set": True,
            "sigma_source": False,
            "trials": False,
            "seed": False,
            "fixed_h_tr": False,
            "fixed_rcd": False,
            "fixed_channel": False,
            "balanced_bits": False,
            "outage_target": False,
        },
        "config",
    )
    sc = doc["scenario"]
    _take(
        sc,
        {
            "source_power": False,
            "noise_power": False,
            "alpha": False,
            "samples_per_bit": False,
            "source_kind": False,
            "var_st": False,
            "var_sr": False,
            "var_tr": False,
        },
        "scenario",
    )
    try:
        scenario = SystemParams(
            source_power=float(sc.get("source_power", 10.0)),
            noise_power=float(sc.get("noise_power", 1.0)),
            alpha=float(sc.get("alpha", 0.5)),
            samples_per_bit=int(sc.get("samples_per_bit", 40)),
            source_kind=_parse_source_kind(sc.get("source_kind", {"kind": "complex_gaussian"})),
            var_st=float(sc.get("var_st", 1.0)),
            var_sr=float(sc.get("var_sr", 1.0)),
            var_tr=float(sc.get("var_tr", 10.0)),
        )
    except ValueError as exc:
        raise ConfigError(f"invalid scenario: {exc}") from exc
    sw = doc["sweep"]
    _take(sw, {"kind": True, "points": True}, "sweep")
    sweep = SweepSpec(kind=sw["kind"], points=tuple(float(p) for p in sw["points"]))
    ss = doc.get("sigma_source", {"kind": "perfect"})
    _take(ss, {"kind": True, "m": False, "m_t": False, "training_bit": False}, "sigma_source")
    sigma_source = SigmaSourceSpec(
        kind=ss["kind"],
        m=int(ss.get("m", 50)),
        m_t=int(ss.get("m_t", 4)),
        training_bit=int(ss.get("training_bit", 1)),
    )
    fc = doc.get("fixed_channel")
    fixed_channel = None
    if fc is not None:
        _take(fc, {"h0_sq": True, "h1_sq": True}, "fixed_channel")
        fixed_channel = FixedChannelSpec(h0_sq=float(fc["h0_sq"]), h1_sq=float(fc["h1_sq"]))
    try:
        return ExperimentConfig(
            scenario=scenario,
            sweep=sweep,
            detector_set=tuple(doc["detector_set"]),
            sigma_source=sigma_source,
            trials=int(doc.get("trials", 100_000)),
            seed=int(doc.get("seed", 1)),
            fixed_h_tr=None if doc.get("fixed_h_tr") is None else float(doc["fixed_h_tr"]),
            fixed_rcd=None if doc.get("fixed_rcd") is None else float(doc["fixed_rcd"]),
            fixed_channel=fixed_channel,
            balanced_bits=bool(doc.get("balanced_bits", False)),
            outage_target=float(doc.get("outage_target", 0.1)),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path: str | Path, overrides: list[str] | None = None) -> ExperimentConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    for ov in overrides or []:
        apply_override(doc, ov)
    return parse_config(doc)


def apply_override(doc: dict, override: str) -> None:
    """Apply a dotted-path `key=value` override to a raw config document.

    Values parse as JSON when possible (numbers, booleans, lists), else as
    bare strings: `--override sweep.points=[0,10,20]`,
    `--override sigma_source.kind=estimated`.
    """
    if "=" not in override:
        raise ConfigError(f"override {override!r} must look like path.to.key=value")
    loc, raw = override.split("=", 1)
    keys = loc.strip().split(".")
    if not all(keys):
        raise ConfigError(f"override path {loc!r} is malformed")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    node = doc
    for k in keys[:-1]:
        nxt = node.get(k)
        if nxt is None:
            nxt = {}
            node[k] = nxt
        if not isinstance(nxt, dict):
            raise ConfigError(f"override path {loc!r} walks through a non-object")
        node = nxt
    node[keys[-1]] = value
