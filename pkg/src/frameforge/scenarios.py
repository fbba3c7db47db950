"""Declarative experiment scenarios and the pipelines behind them."""

from __future__ import annotations

import json
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import frames, hardy, shiftspace
from .numerics import Subspace
from .reports import ReportRecord, emit_report

SPEC_VERSION = "1"
KINDS = (
    "blaschke-certify",
    "beurling-roundtrip",
    "orbit-frame",
    "boundedness-probe",
    "riesz-exhaustive",
    "model-space",
)


class ConfigError(ValueError):
    """A scenario or batch config failed validation."""


def parse_complex(x):
    if isinstance(x, bool):
        raise ConfigError(f"not a complex number: {x!r}")
    if isinstance(x, (int, float)):
        return complex(x)
    if isinstance(x, str):
        try:
            return complex(x.replace(" ", "").replace("i", "j"))
        except ValueError:
            raise ConfigError(f"not a complex number: {x!r}") from None
    if isinstance(x, (list, tuple)) and len(x) == 2 and all(isinstance(t, (int, float)) for t in x):
        return complex(x[0], x[1])
    if isinstance(x, dict) and set(x) <= {"re", "im"}:
        return complex(x.get("re", 0.0), x.get("im", 0.0))
    raise ConfigError(f"not a complex number: {x!r}")


def _complex_list(x):
    if not isinstance(x, (list, tuple)):
        raise ConfigError("expected a list of complex numbers")
    return [parse_complex(v) for v in x]


def _disk_list(x):
    pts = _complex_list(x)
    bad = [z for z in pts if not abs(z) < 1]
    if bad:
        raise ConfigError(f"points must lie inside the open unit disk, got {bad}")
    return pts


def _vectors(x):
    if not isinstance(x, (list, tuple)) or not x:
        raise ConfigError("expected a non-empty list of vectors")
    vs = [_complex_list(v) for v in x]
    if len({len(v) for v in vs}) != 1:
        raise ConfigError("vectors have different lengths")
    return vs


def _int(lo=None):
    def parse(x):
        if isinstance(x, bool) or not isinstance(x, int):
            raise ConfigError(f"expected an integer, got {x!r}")
        if lo is not None and x < lo:
            raise ConfigError(f"expected an integer >= {lo}, got {x}")
        return x
    return parse


def _positive(x):
    if isinstance(x, bool) or not isinstance(x, (int, float)) or not x > 0:
        raise ConfigError(f"tolerances must be positive numbers, got {x!r}")
    return float(x)


def _int_list(lo):
    def parse(x):
        if not isinstance(x, (list, tuple)) or not x:
            raise ConfigError("expected a non-empty list of integers")
        return [_int(lo)(v) for v in x]
    return parse


def _choice(*options):
    def parse(x):
        if x not in options:
            raise ConfigError(f"expected one of {options}, got {x!r}")
        return x
    return parse


def _seed_param(x):
    if isinstance(x, str):
        return _choice("balanced", "decaying")(x)
    return _complex_list(x)


def _optional(parse):
    def wrapped(x):
        return None if x is None else parse(x)
    return wrapped


_TRUNC = _int(16)
_BLASCHKE = {
    "zeros": (_disk_list, []),
    "r": (_int(0), 0),
    "d": (parse_complex, 1.0),
}
_ORBIT = {
    "k": (_int(1), 8),
    "eigenvalues": (_optional(_disk_list), None),
    "seed_kind": (_seed_param, "balanced"),
}

SCHEMAS = {
    "blaschke-certify": {**_BLASCHKE, "truncation": (_TRUNC, 256), "samples": (_int(64), 1024), "tol": (_positive, 1e-6)},
    "beurling-roundtrip": {
        **_BLASCHKE,
        "truncation": (_TRUNC, 256),
        "depth": (_optional(_int(1)), None),
        "gate": (_positive, shiftspace.INVARIANCE_GATE),
        "residual_tol": (_positive, 1e-8),
        "overlap_tol": (_positive, 1e-6),
    },
    "orbit-frame": {
        **_ORBIT,
        "truncations": (_int_list(16), [64, 128, 256]),
        "separation_min": (_positive, 0.1),
        "stability_tol": (_positive, 0.05),
        "excess_tol": (_positive, frames.EXACTNESS_TOL),
        "random_checks": (_int(0), 100),
        "seed": (_int(0), 0),
    },
    "boundedness-probe": {
        **_ORBIT,
        "truncation": (_TRUNC, 64),
        "planted": (_choice("none", "line"), "none"),
        "expect": (_optional(_choice("BOUNDED-CONSISTENT", "UNBOUNDED-SUSPECT", "INCONCLUSIVE")), None),
    },
    "riesz-exhaustive": {
        "vectors": (_vectors, None),
        "max_subsets": (_optional(_int(1)), None),
        "expected_lower": (_optional(float), None),
        "expected_upper": (_optional(float), None),
        "tol": (_positive, 1e-12),
        "seed": (_int(0), 0),
    },
    "model-space": {**_BLASCHKE, "truncation": (_TRUNC, 256)},
}


@dataclass(frozen=True)
class Scenario:
    name: str
    kind: str
    parameters: dict = field(default_factory=dict)
    output_path: str = ""
    format: str = "csv"

    @classmethod
    def from_dict(cls, d):
        if not isinstance(d, dict):
            raise ConfigError("scenario must be an object")
        unknown = set(d) - {"name", "kind", "parameters", "output_path", "format"}
        if unknown:
            raise ConfigError(f"unknown scenario keys: {sorted(unknown)}")
        for key in ("name", "kind"):
            if not isinstance(d.get(key), str) or not d[key]:
                raise ConfigError(f"scenario needs a non-empty string {key!r}")
        fmt = d.get("format", "csv")
        if fmt not in ("csv", "json"):
            raise ConfigError(f"unknown format {fmt!r}")
        s = cls(d["name"], d["kind"], dict(d.get("parameters", {})), d.get("output_path", ""), fmt)
        s.validated()
        return s

    def validated(self):
        """Parameters after schema validation and defaults."""
        if self.kind not in SCHEMAS:
            raise ConfigError(f"unknown scenario kind {self.kind!r}; expected one of {KINDS}")
        schema = SCHEMAS[self.kind]
        unknown = set(self.parameters) - set(schema)
        if unknown:
            raise ConfigError(f"{self.name}: unknown parameters {sorted(unknown)} for kind {self.kind}")
        out = {}
        for key, (parse, default) in schema.items():
            if key in self.parameters:
                try:
                    out[key] = parse(self.parameters[key])
                except (ConfigError, TypeError, ValueError) as exc:
                    raise ConfigError(f"{self.name}: parameter {key!r}: {exc}") from None
            elif default is None and key == "vectors":
                raise ConfigError(f"{self.name}: parameter 'vectors' is required")
            else:
                out[key] = default
        return out


def load_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from None
    return parse_config(doc)


def parse_config(doc):
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    version = doc.get("spec_version")
    if not isinstance(version, str) or version.split(".")[0] != SPEC_VERSION:
        raise ConfigError(f"unsupported spec_version {version!r}; expected {SPEC_VERSION!r}")
    items = doc.get("scenarios")
    if not isinstance(items, list) or not items:
        raise ConfigError("config needs a non-empty 'scenarios' array")
    scenarios = [Scenario.from_dict(d) for d in items]
    names = [s.name for s in scenarios]
    if len(set(names)) != len(names):
        raise ConfigError("scenario names must be unique")
    return scenarios


# ---------------------------------------------------------------- pipelines


def _echo(params):
    out = {}
    for k, v in params.items():
        if isinstance(v, complex):
            out[k] = [v.real, v.imag]
        elif isinstance(v, list):
            out[k] = [
                [x.real, x.imag] if isinstance(x, complex)
                else [[y.real, y.imag] for y in x] if isinstance(x, list) else x
                for x in v
            ]
        else:
            out[k] = v
    return out


class _Recorder:
    def __init__(self, name, params, seed="deterministic"):
        self.name = name
        self.inputs = _echo(params)
        self.seed = seed
        self.records = []
        self.plots = {}

    def add(self, metric, value, tolerance, passed, note, seed=None):
        if isinstance(value, np.generic):
            value = value.item()
        self.records.append(
            ReportRecord(self.name, metric, value, tolerance, bool(passed),
                         self.seed if seed is None else seed, note, self.inputs)
        )

    def fail(self, metric, exc, note):
        self.add(metric, type(exc).__name__, None, False, f"{note}; {exc}")


def _blaschke_spec(p):
    d = p["d"] / abs(p["d"]) if p["d"] != 0 else 1.0
    return hardy.BlaschkeSpec(d=d, r=p["r"], zeros=tuple(p["zeros"]))


def _certify(rec, p):
    spec = _blaschke_spec(p)
    n = p["truncation"]
    series = hardy.blaschke_to_hardy(spec, n)
    rec.add("tail_mass", series.tail_mass, None, True, "hardy.blaschke_to_hardy; l2 mass beyond truncation")
    cert = hardy.is_inner(series.function, p["samples"], p["tol"])
    rec.add("boundary_modulus_deviation", cert.max_deviation, p["tol"], cert.max_deviation <= p["tol"],
            f"hardy.is_inner; radius {cert.radius:.17g}, extrapolated to the circle")
    rec.add("series_norm", cert.norm, p["tol"], cert.norm <= 1 + p["tol"], "hardy.is_inner; ||f|| <= 1 + tol")
    rec.add("interior_modulus_deviation", cert.interior_deviation, None, True,
            f"hardy.is_inner; raw deviation at radius {cert.radius:.17g}")
    theta = 2 * np.pi * np.arange(p["samples"]) / p["samples"]
    exact = hardy.blaschke_eval(spec, np.exp(1j * theta))
    dev = float(np.max(np.abs(np.abs(exact) - 1)))
    rec.add("closed_form_unimodularity", dev, 1e-10, dev <= 1e-10, "hardy.blaschke_eval; product formula on the circle")
    _, limit, interior = hardy.radial_limit(series.function, p["samples"])
    rec.plots["boundary_modulus"] = (
        ("angle", "modulus_limit", "modulus_interior"),
        np.column_stack([theta, np.abs(limit), np.abs(interior)]),
    )


def _roundtrip(rec, p):
    spec = _blaschke_spec(p)
    n = p["truncation"]
    psi = hardy.v_inverse(hardy.blaschke_to_hardy(spec, n).function)
    depth = p["depth"] if p["depth"] is not None else n - spec.degree
    w = shiftspace.cyclic_span(psi, depth)
    rec.add("cyclic_dimension", w.dim, None, w.dim == depth,
            f"shiftspace.cyclic_span; depth {depth}, dropped {w.info['dropped']}")
    inv = shiftspace.invariance_report(w)
    rec.add("invariance_residual", inv.residual, p["residual_tol"], inv.residual < p["residual_tol"],
            f"shiftspace.invariance_residual; edge directions excluded: {inv.excluded_edge}")
    try:
        res = shiftspace.beurling_extract(w, gate=p["gate"])
    except shiftspace.WanderingDimensionError as exc:
        rec.add("wandering_dimension", exc.dimension, None, False, f"shiftspace.beurling_extract; {exc}")
        return
    except ValueError as exc:
        rec.fail("wandering_dimension", exc, "shiftspace.beurling_extract")
        return
    rec.add("wandering_dimension", res.wandering_dim, None, res.wandering_dim == 1, "shiftspace.beurling_extract")
    ov = shiftspace.overlap(res.generator, psi)
    rec.add("generator_overlap", ov, p["overlap_tol"], ov >= 1 - p["overlap_tol"],
            "shiftspace.beurling_extract; |<c_hat, c>| / (||c_hat|| ||c||)")
    rec.add("cyclic_distance", res.cyclic_distance, None, True,
            "shiftspace.beurling_extract; principal-angle distance to cyclic span of the generator")
    cert = hardy.is_inner(hardy.v_map(res.generator))
    rec.add("generator_inner_deviation", cert.max_deviation, cert.tol, cert.inner, "hardy.is_inner")


def _orbit_spec(p, n):
    if p["eigenvalues"] is not None:
        lam = np.array(p["eigenvalues"])
    else:
        lam = frames.exponential_schedule(p["k"])
    if isinstance(p["seed_kind"], list):
        seed = np.array(p["seed_kind"])
    else:
        seed = frames.balanced_seed(lam)
        if p["seed_kind"] == "decaying":
            seed = seed * 2.0 ** -np.arange(lam.size)
    return frames.OrbitSpec(lam, seed, n)


def _orbit(rec, p):
    rng = np.random.default_rng(p["seed"])
    lowers = []
    for i, n in enumerate(p["truncations"]):
        try:
            of = frames.build_orbit_frame(_orbit_spec(p, n))
        except ValueError as exc:
            rec.fail("orbit_construction", exc, "frames.build_orbit_frame")
            return
        fs = of.system
        if i == 0:
            rec.add("carleson_separation", of.separation, p["separation_min"],
                    of.separation > p["separation_min"], "frames.carleson_separation")
            balanced = p["seed_kind"] == "balanced"
            rec.add("ratio_min", of.ratio_min, 0.0 if balanced else None,
                    of.ratio_min == 1.0 if balanced else True, "frames.build_orbit_frame; |P_k phi| / sqrt(1 - |lambda_k|^2)")
            rec.add("ratio_max", of.ratio_max, 0.0 if balanced else None,
                    of.ratio_max == 1.0 if balanced else True, "frames.build_orbit_frame")
        b = frames.frame_bounds(fs)
        lowers.append(b.lower)
        rec.add(f"lower_bound_N{n}", b.lower, None, b.is_frame(), "frames.frame_bounds")
        rec.add(f"upper_bound_N{n}", b.upper, None, True, "frames.frame_bounds")
        k = frames.kernel(fs)
        rec.add(f"kernel_dim_N{n}", k.dim, None, k.dim == fs.count - fs.ambient_dim, "frames.kernel; expected N - K")
        if p["random_checks"]:
            worst = _frame_inequality_violation(fs, b, p["random_checks"], rng)
            rec.add(f"frame_inequality_violation_N{n}", worst, 1e-10, worst <= 1e-10, "frames.frame_bounds; random unit vectors",
                    seed=p["seed"])
        ex = frames.excess_test(fs, p["excess_tol"])
        rec.add(f"deletions_surviving_N{n}", sum(ex.survives), fs.count, ex.all_survive,
                "frames.excess_test; every single deletion keeps the system complete")
    if len(lowers) >= 2:
        change = abs(lowers[-1] - lowers[-2]) / lowers[-1]
        rec.add("lower_bound_relative_change", change, p["stability_tol"], change < p["stability_tol"],
                f"frames.frame_bounds; N {p['truncations'][-2]} -> {p['truncations'][-1]}")
    rec.plots["frame_bounds"] = (
        ("truncation", "lower_bound"),
        np.column_stack([np.array(p["truncations"], dtype=float), np.array(lowers)]),
    )


def _frame_inequality_violation(fs, b, count, rng):
    m = fs.ambient_dim
    x = rng.standard_normal((m, count)) + 1j * rng.standard_normal((m, count))
    x /= np.linalg.norm(x, axis=0)
    energy = np.sum(np.abs(fs.synthesis.conj().T @ x) ** 2, axis=0)
    below = np.maximum(b.lower - energy, 0) / b.upper
    above = np.maximum(energy - b.upper, 0) / b.upper
    return float(max(below.max(), above.max()))


def planted_line_system(n):
    """Parseval frame for C^(n-1) whose synthesis kernel is span{e_0 + e_1}."""
    c = np.zeros(n, dtype=complex)
    c[:2] = 1.0
    return frames.FrameSystem(Subspace.span(c).complement().basis.conj().T)


def _probe(rec, p):
    n = p["truncation"]
    if p["planted"] == "line":
        fs = planted_line_system(n)
    else:
        fs = frames.build_orbit_frame(_orbit_spec(p, n)).system
    rep = frames.boundedness_probe(fs)
    rec.add("kernel_dimension", rep.kernel_dim, None, True, "frames.kernel")
    rec.add("kernel_invariance_residual", rep.kernel_invariance_residual, None, True, "shiftspace.invariance_residual")
    rec.add("operator_norm_estimate", rep.operator_norm_estimate, None, True, "frames.recover_operator")
    rec.add("norm_growth", rep.growth, None, True, "frames.recover_operator; norm at 2N over norm at N")
    expect = p["expect"]
    rec.add("verdict", rep.verdict, expect, expect is None or rep.verdict == expect, "frames.boundedness_probe")


def _riesz(rec, p):
    fs = frames.FrameSystem(np.array(p["vectors"], dtype=complex).T)
    rep = frames.riesz_frame_check(fs, p["max_subsets"], p["seed"])
    seed = "deterministic" if rep.exhaustive else p["seed"]
    for label, value, expected, witness in (
        ("uniform_lower", rep.bounds.lower, p["expected_lower"], rep.lower_witness),
        ("uniform_upper", rep.bounds.upper, p["expected_upper"], rep.upper_witness),
    ):
        ok = True if expected is None else abs(value - expected) <= p["tol"] * max(1.0, abs(expected))
        rec.add(label, value, p["tol"] if expected is not None else None, ok,
                f"frames.riesz_frame_check; witness {list(witness)}", seed=seed)
    rec.add("subsets_checked", rep.subsets_checked, rep.total_subsets, True,
            f"frames.riesz_frame_check; {'exhaustive' if rep.exhaustive else 'sampled'}", seed=seed)


def _model_space(rec, p):
    spec = _blaschke_spec(p)
    dim = hardy.model_space_dimension(spec, p["truncation"])
    rec.add("model_space_dimension", dim, spec.degree, dim == spec.degree, "hardy.model_space_dimension; expected k + r")


PIPELINES = {
    "blaschke-certify": _certify,
    "beurling-roundtrip": _roundtrip,
    "orbit-frame": _orbit,
    "boundedness-probe": _probe,
    "riesz-exhaustive": _riesz,
    "model-space": _model_space,
}


@dataclass
class ScenarioResult:
    scenario: Scenario
    records: list
    plots: dict


def evaluate_scenario(s):
    """Run the pipeline for ``s`` and return its records without writing anything.

    Numerical failures become failed records; the run carries on.
    """
    params = s.validated()
    rec = _Recorder(s.name, params)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        try:
            PIPELINES[s.kind](rec, params)
        except (ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
            rec.fail("pipeline", exc, _default_note(s.kind))
    return ScenarioResult(s, rec.records, rec.plots)


def _default_note(kind):
    return {
        "blaschke-certify": "hardy.blaschke_to_hardy",
        "beurling-roundtrip": "shiftspace.beurling_extract",
        "orbit-frame": "frames.build_orbit_frame",
        "boundedness-probe": "frames.boundedness_probe",
        "riesz-exhaustive": "frames.riesz_frame_check",
        "model-space": "hardy.model_space_dimension",
    }[kind]


def _write_plot_data(result, base):
    paths = []
    for key, (header, data) in sorted(result.plots.items()):
        path = f"{base}.{key}.dat"
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("# " + " ".join(header) + "\n")
            for row in data:
                fh.write(" ".join(format(float(v), ".17g") for v in row) + "\n")
        paths.append(path)
    return paths


def _write_result(result, path, fmt, emit_plot_data, plot):
    emit_report(result.records, path, fmt)
    base = os.path.splitext(path)[0]
    if emit_plot_data:
        _write_plot_data(result, base)
    if plot and result.plots:
        from .plotting import render_scenario_figures

        render_scenario_figures(result, base)


def run_scenario(s, output_path=None, fmt=None, emit_plot_data=False, plot=False):
    """Evaluate ``s``, write its report, and return the records."""
    result = evaluate_scenario(s)
    f = fmt or s.format
    _write_result(result, output_path or s.output_path or f"{s.name}.{f}", f, emit_plot_data, plot)
    return result.records


def run_batch(scenarios, out_dir=None, fmt=None, emit_plot_data=False, plot=False, jobs=1, base_dir="."):
    """Run scenarios, possibly concurrently; reports are written in config order.

    Relative output paths resolve against ``out_dir`` when given, else
    ``base_dir`` (the config file's directory).
    """
    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        results = list(pool.map(evaluate_scenario, scenarios))
    all_records = []
    for s, result in zip(scenarios, results):
        f = fmt or s.format
        name = s.output_path or f"{s.name}.{f}"
        path = name if os.path.isabs(name) else os.path.join(out_dir or base_dir, name)
        _write_result(result, path, f, emit_plot_data, plot)
        all_records.extend(result.records)
    return all_records
