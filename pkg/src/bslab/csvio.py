"""Curve serialization.

One schema for every curve kind:

    x,detector,theory_ber,mc_ber,mc_radius,trials,skipped

Floats are written with 17 significant digits (exact double round-trip),
UTF-8, LF line endings.  Balance curves emit two rows per detector and
point, with the detector tagged `<name>:p01` / `<name>:p10`; outage curves
emit `outage` and `at` rows.
"""

from __future__ import annotations

import csv
import io
from pathlib import Path

from .harness import BalanceCurve, BERCurve, OutageCurve

__all__ = ["CSV_HEADER", "write_csv", "read_csv", "format_float"]

CSV_HEADER = ("x", "detector", "theory_ber", "mc_ber", "mc_radius", "trials", "skipped")


def format_float(v: float) -> str:
    return format(float(v), ".17g")


def _rows(curve) -> list[tuple]:
    rows: list[tuple] = []
    if isinstance(curve, BERCurve):
        for det, s in curve.series.items():
            for i, x in enumerate(curve.x_values):
                rows.append(
                    (x, det, s.theory_ber[i], s.mc_ber[i], s.mc_radius[i], s.trials[i], s.skipped[i])
                )
    elif isinstance(curve, BalanceCurve):
        for det, s in curve.series.items():
            for i, x in enumerate(curve.x_values):
                rows.append(
                    (x, f"{det}:p01", s.theory_p01[i], s.p01[i], s.radius01[i], s.n0[i], s.skipped[i])
                )
                rows.append(
                    (x, f"{det}:p10", s.theory_p10[i], s.p10[i], s.radius10[i], s.n1[i], s.skipped[i])
                )
    elif isinstance(curve, OutageCurve):
        for i, x in enumerate(curve.x_values):
            rows.append(
                (x, "outage", curve.theory_pout[i], curve.mc_pout[i],
                 curve.mc_radius_pout[i], curve.trials[i], 0)
            )
            rows.append(
                (x, "at", curve.theory_pat[i], curve.mc_pat[i],
                 curve.mc_radius_pat[i], curve.trials[i], 0)
            )
    else:
        raise TypeError(f"cannot serialize {type(curve).__name__}")
    # Stable order: by x, then detector label.
    rows.sort(key=lambda r: (r[0], str(r[1])))
    return rows


def write_csv(curve, path: str | Path) -> None:
    path = Path(path)
    try:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for x, det, theory, mc, radius, trials, skipped in _rows(curve):
            w.writerow(
                [
                    format_float(x),
                    det,
                    format_float(theory),
                    format_float(mc),
                    format_float(radius),
                    int(trials),
                    int(skipped),
                ]
            )
        path.write_text(buf.getvalue(), encoding="utf-8", newline="")
    except OSError as exc:
        raise OSError(f"failed writing curve CSV to {path}: {exc}") from exc


def read_csv(path: str | Path) -> list[dict]:
    """Parse a curve CSV back into row dictionaries with numeric fields."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise OSError(f"failed reading curve CSV from {path}: {exc}") from exc
    reader = csv.reader(io.StringIO(text))
    try:
        header = tuple(next(reader))
    except StopIteration:
        raise ValueError(f"{path}: empty file, expected header {CSV_HEADER!r}")
    if header != CSV_HEADER:
        raise ValueError(f"{path}: unexpected header {header!r}, expected {CSV_HEADER!r}")
    rows = []
    for rec in reader:
        if not rec:
            continue
        x, det, theory, mc, radius, trials, skipped = rec
        rows.append(
            {
                "x": float(x),
                "detector": det,
                "theory_ber": float(theory),
                "mc_ber": float(mc),
                "mc_radius": float(radius),
                "trials": int(trials),
                "skipped": int(skipped),
            }
        )
    return rows
