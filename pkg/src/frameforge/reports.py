"""Report records and their CSV / JSON serialization."""

from __future__ import annotations

import csv
import io
import json
import math
import os
from dataclasses import dataclass, field
from typing import Any

__all__ = ["ReportRecord", "CSV_COLUMNS", "PROVENANCE_OPS", "format_value", "render_report", "emit_report"]

CSV_COLUMNS = ("scenario", "metric", "value", "tolerance", "pass", "seed", "note")

# ops a record's provenance note may name, as "<module>.<op>"
PROVENANCE_OPS = frozenset(
    f"{mod}.{op}"
    for mod, ops in {
        "numerics": ("svd", "null_space", "least_squares", "principal_angle_distance"),
        "hardy": (
            "v_map", "v_inverse", "multiply_by_z", "evaluate", "blaschke_eval",
            "blaschke_to_hardy", "is_inner", "model_space_dimension",
        ),
        "shiftspace": (
            "right_shift", "invariance_residual", "reducing_residual",
            "cyclic_span", "beurling_extract",
        ),
        "frames": (
            "synthesis_apply", "frame_bounds", "kernel", "riesz_basis_check",
            "riesz_frame_check", "carleson_separation", "build_orbit_frame",
            "excess_test", "recover_operator", "boundedness_probe",
            "adjoint_orbit_identity_check",
        ),
    }.items()
    for op in ops
)


@dataclass(frozen=True)
class ReportRecord:
    scenario: str
    metric: str
    value: Any
    tolerance: Any
    passed: bool
    seed: Any = "deterministic"
    note: str = ""
    inputs: dict = field(default_factory=dict)

    @property
    def op(self):
        return self.note.split(";", 1)[0].strip()


def format_value(v):
    """Numbers with 17 significant digits; everything else as text."""
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return format(v, ".17g")
    return str(v)


def _json_token(v):
    if isinstance(v, bool) or v is None:
        return json.dumps(v)
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        if math.isfinite(v):
            return format(v, ".17g")
        return json.dumps(format_value(v))
    if isinstance(v, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_json_token(x)}" for k, x in v.items()) + "}"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_json_token(x) for x in v) + "]"
    return json.dumps(str(v))


def _csv_text(records):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in records:
        w.writerow([
            r.scenario, r.metric, format_value(r.value), format_value(r.tolerance),
            format_value(bool(r.passed)), format_value(r.seed), r.note,
        ])
    return buf.getvalue()


def _json_text(records):
    rows = []
    for r in records:
        rows.append(
            _json_token({
                "scenario": r.scenario,
                "metric": r.metric,
                "value": r.value,
                "tolerance": r.tolerance,
                "pass": bool(r.passed),
                "seed": r.seed,
                "note": r.note,
                "input": r.inputs,
            })
        )
    return "[\n" + ",\n".join("  " + row for row in rows) + ("\n" if rows else "") + "]\n"


def render_report(records, fmt="csv"):
    if fmt == "csv":
        return _csv_text(records)
    if fmt == "json":
        return _json_text(records)
    raise ValueError(f"unknown report format {fmt!r}")


def emit_report(records, path, fmt="csv"):
    """Write ``records`` to ``path``; raises ``OSError`` when the path is unwritable."""
    text = render_report(records, fmt)
    d = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(d):
        raise OSError(f"directory does not exist: {d}")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return path
