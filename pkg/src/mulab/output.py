"""Deterministic serialized outputs: time-series CSV and report JSON.

Floats are rendered with shortest round-trip decimals (repr) and column
order is fixed, so identical inputs produce byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path

from .diagnostics import DiagnosticsRow
from .evolution import SolutionRecord

TIMESERIES_COLUMNS = (
    "t",
    "dt",
    "min_ux",
    "max_ux",
    "sup_u",
    "H0",
    "H1",
    "H2",
    "Ht0",
    "Ht1",
    "Ht2",
    "V",
    "resolvedness",
)

_ROW_ATTRS = (
    "t",
    "dt",
    "min_ux",
    "max_ux",
    "sup_u",
    "h0",
    "h1",
    "h2",
    "ht0",
    "ht1",
    "ht2",
    "v",
    "resolvedness",
)


def fmt(value) -> str:
    """Shortest round-trip decimal for floats; empty string for None."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def timeseries_csv_text(rows: list[DiagnosticsRow]) -> str:
    lines = [",".join(TIMESERIES_COLUMNS)]
    for row in rows:
        lines.append(",".join(fmt(getattr(row, a)) for a in _ROW_ATTRS))
    return "\n".join(lines) + "\n"


def write_timeseries_csv(path, record: SolutionRecord) -> None:
    Path(path).write_text(timeseries_csv_text(record.diagnostics))


def write_json(path, obj: dict) -> None:
    Path(path).write_text(json.dumps(obj, indent=2) + "\n")


def summary_dict(record: SolutionRecord, report) -> dict:
    """Stable-keyed run summary merging the record and the blow-up report."""
    out = {
        "model": {"lambda": record.params.lam},
        "params": {
            "mu0": record.params.mu0,
            "mu1": record.params.mu1,
            "mu2": record.params.mu2,
            "n": record.fields[0].grid.n,
        },
        "termination": record.termination.value,
        "t_final": record.t_final,
        "t_star": None,
        "rate_sigma": None,
        "theorems": [],
    }
    if report is not None:
        d = report.to_dict()
        out["t_star"] = d["t_star"]
        out["rate_sigma"] = d["rate_sigma"]
        out["theorems"] = d["theorems"]
        out["consistency"] = d["consistency"]
        out["min_slope_final"] = d["min_slope_final"]
        out["fit_note"] = d["fit_note"]
    return out
