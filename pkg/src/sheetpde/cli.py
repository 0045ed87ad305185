"""Command-line front end: validated batch runs emitting plot-ready files.

Subcommands: simulate, qv, weakform, lemmas, yield, compare. Every run
reads a JSON config (key-value with nested sections), validates it
fully before any computation, echoes the effective config (defaults
materialized) into the output directory, and writes CSV data files, a
JSON report and a manifest. Reruns with identical config and seed
reproduce every numeric output byte for byte; manifests differ only in
timestamp and wall time.

Exit codes: 0 success, 2 config error, 3 numerical-criterion violation,
4 I/O error.
"""

from __future__ import annotations

import argparse
import datetime
import difflib
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__, _kernels
from .coefficients import CoefficientSet, const, coord_sum, coord_t, coord_x, polynomial
from .bumps import standard_bump_battery
from .diagnostics import (QVReport, build_Z, build_Z_characteristic,
                          existence_check, holder_estimate, partition_sup_check,
                          partition_product_check, qv_characteristic_theoretical,
                          qv_estimate, qv_slicewise, qv_theoretical)
from .grids import GridError, make_grid
from .operators import OperatorD, weak_residual_transport, write_residual_records
from .sheet import RectRegion, diagonal_noise, restrict_sheet, sample_sheet
from .solver import (ExistenceCriterionError, InitialCurve, flat_curve,
                     nelson_siegel_curve, polynomial_curve, solve_transport,
                     transport_solution)
from .yield_curve import (YieldScenario, compare_models, negate, simulate_yield,
                          write_slices_csv)

__all__ = ["ConfigError", "NumericalCriterionError", "RunConfig", "parse_config", "run", "main"]

COMMANDS = ("simulate", "qv", "weakform", "lemmas", "yield", "compare")


class ConfigError(ValueError):
    """Malformed, unknown or invalid configuration (exit code 2)."""


class NumericalCriterionError(ValueError):
    """A numerical criterion (e.g. existence check) failed (exit code 3)."""


# ---------------------------------------------------------------------------
# schema
# ---------------------------------------------------------------------------

_ALIASES = {"stepsize": "h", "step": "h", "dt": "h", "dx": "h",
            "paths": "n_paths", "npaths": "n_paths", "outdir": "out_dir"}

_COEFF_KINDS = ("const", "t", "x", "t+x", "poly")
_CURVE_KINDS = ("flat", "nelson_siegel", "poly")

_SCHEMA = {
    "": {"command", "grid", "coefficients", "initial_curve", "seed", "n_paths",
         "out_dir", "tolerances", "simulate", "qv", "weakform", "lemmas",
         "yield", "compare"},
    "grid": {"t_max", "x_max", "h"},
    "coefficients": {"a", "b", "c"},
    "initial_curve": {"kind", "level", "beta0", "beta1", "beta2", "tau", "coeffs"},
    "tolerances": {"qv_relative", "mc_sigmas", "deterministic"},
    "simulate": set(),
    "qv": {"t", "x_lo", "x_hi", "n_values", "n_seeds"},
    "weakform": {"h_values", "n_seeds"},
    "lemmas": {"product_n_values", "product_n_seeds", "sup_n_values", "sup_n_seeds"},
    "yield": {"t_slices", "keep_paths"},
    "compare": {"t_slices", "maturities", "ms_alpha", "ms_sigma"},
}

_DEFAULTS = {
    "seed": 0,
    "n_paths": 1000,
    "out_dir": "out",
    "coefficients": {"a": {"kind": "const", "value": 1.0},
                     "c": {"kind": "const", "value": 0.0}},
    "initial_curve": {"kind": "flat", "level": 0.0},
    "tolerances": {"qv_relative": 0.1, "mc_sigmas": 3.0, "deterministic": 1e-9},
    "qv": {"t": 1.0, "x_lo": 0.0, "x_hi": 1.0, "n_values": [64, 128, 256], "n_seeds": 50},
    "weakform": {"h_values": [0.04, 0.02, 0.01], "n_seeds": 20},
    "lemmas": {"product_n_values": [8, 32, 128], "product_n_seeds": 1000,
               "sup_n_values": [4, 16, 64, 256], "sup_n_seeds": 20},
    "yield": {"t_slices": [0.5, 1.0], "keep_paths": False},
    "compare": {"t_slices": [0.5], "maturities": None,
                "ms_alpha": {"kind": "const", "value": 0.0},
                "ms_sigma": {"kind": "const", "value": 1.0}},
    "simulate": {},
}


def _reject_unknown(section: str, given: dict) -> None:
    allowed = _SCHEMA[section]
    for key in given:
        if key not in allowed:
            hint = _ALIASES.get(key) or next(
                iter(difflib.get_close_matches(key, sorted(allowed), n=1)), None)
            where = f"section '{section}'" if section else "top level"
            msg = f"unknown key '{key}' at {where}"
            if hint:
                msg += f"; did you mean '{hint}'?"
            raise ConfigError(msg)


def _need(cond: bool, msg: str) -> None:
    if not cond:
        raise ConfigError(msg)


def _check_coeff_spec(path: str, spec) -> dict:
    _need(isinstance(spec, dict), f"{path} must be an object")
    _need("kind" in spec, f"{path} needs a 'kind' ({', '.join(_COEFF_KINDS)})")
    kind = spec["kind"]
    _need(kind in _COEFF_KINDS, f"{path}.kind: unknown kind {kind!r}")
    allowed = {"kind"} | ({"value"} if kind == "const" else set()) \
        | ({"coeffs"} if kind == "poly" else set())
    for key in spec:
        _need(key in allowed, f"unknown key '{key}' in {path}")
    if kind == "const":
        _need(isinstance(spec.get("value"), (int, float)), f"{path}.value must be a number")
        return {"kind": "const", "value": float(spec["value"])}
    if kind == "poly":
        rows = spec.get("coeffs")
        _need(isinstance(rows, list) and rows and all(
            isinstance(r, list) and r and all(isinstance(v, (int, float)) for v in r)
            for r in rows), f"{path}.coeffs must be a non-empty matrix of numbers")
        return {"kind": "poly", "coeffs": [[float(v) for v in r] for r in rows]}
    return {"kind": kind}


def coeff_from_spec(spec: dict) -> CoeffFn:
    kind = spec["kind"]
    if kind == "const":
        return const(spec["value"])
    if kind == "t":
        return coord_t()
    if kind == "x":
        return coord_x()
    if kind == "t+x":
        return coord_sum()
    return polynomial(spec["coeffs"])


def curve_from_spec(spec: dict) -> InitialCurve:
    kind = spec["kind"]
    if kind == "flat":
        return flat_curve(spec["level"])
    if kind == "nelson_siegel":
        return nelson_siegel_curve(spec["beta0"], spec["beta1"], spec["beta2"], spec["tau"])
    return polynomial_curve(spec["coeffs"])


@dataclass(frozen=True)
class RunConfig:
    """A fully validated run configuration with every default materialized."""

    command: str
    data: dict

    def serialize(self) -> str:
        return json.dumps(self.data, indent=2, sort_keys=True) + "\n"


def parse_config(text: str, overrides: dict | None = None) -> RunConfig:
    """Parse and validate a JSON config document into a RunConfig.

    Overrides (from command-line flags) are applied before validation.
    Raises ConfigError for syntax errors, unknown keys or invalid values,
    and NumericalCriterionError when the coefficients of a solve command
    violate the existence criterion a = -b.
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON at line {exc.lineno}, column {exc.colno}: "
                          f"{exc.msg}") from None
    _need(isinstance(raw, dict), "config root must be an object")
    raw = dict(raw)
    for key, val in (overrides or {}).items():
        if val is None:
            continue
        if key == "h":
            raw.setdefault("grid", {})
            raw["grid"] = dict(raw["grid"], h=val)
        else:
            raw[key] = val

    _reject_unknown("", raw)
    _need("command" in raw, "config needs a 'command'")
    command = raw["command"]
    _need(command in COMMANDS, f"command must be one of {COMMANDS}, got {command!r}")

    _need("grid" in raw and isinstance(raw["grid"], dict), "config needs a 'grid' section")
    _reject_unknown("grid", raw["grid"])
    for key in ("t_max", "x_max", "h"):
        _need(isinstance(raw["grid"].get(key), (int, float)),
              f"grid.{key} must be a number")
    grid_cfg = {k: float(raw["grid"][k]) for k in ("t_max", "x_max", "h")}
    try:
        make_grid(**grid_cfg)
    except GridError as exc:
        raise ConfigError(f"grid: {exc}") from None

    data = {
        "command": command,
        "grid": grid_cfg,
        "seed": raw.get("seed", _DEFAULTS["seed"]),
        "n_paths": raw.get("n_paths", _DEFAULTS["n_paths"]),
        "out_dir": raw.get("out_dir", _DEFAULTS["out_dir"]),
    }
    _need(isinstance(data["seed"], int) and data["seed"] >= 0,
          "seed must be a non-negative integer")
    _need(isinstance(data["n_paths"], int) and data["n_paths"] >= 1,
          "n_paths must be a positive integer")
    _need(isinstance(data["out_dir"], str) and data["out_dir"],
          "out_dir must be a non-empty string")

    tol = dict(_DEFAULTS["tolerances"])
    if "tolerances" in raw:
        _reject_unknown("tolerances", raw["tolerances"])
        for key, val in raw["tolerances"].items():
            _need(isinstance(val, (int, float)) and val > 0,
                  f"tolerances.{key} must be a positive number")
            tol[key] = float(val)
    data["tolerances"] = tol

    coeffs_raw = raw.get("coefficients", {})
    _need(isinstance(coeffs_raw, dict), "'coefficients' must be an object")
    _reject_unknown("coefficients", coeffs_raw)
    coeffs_cfg = {
        "a": _check_coeff_spec("coefficients.a",
                               coeffs_raw.get("a", _DEFAULTS["coefficients"]["a"])),
        "c": _check_coeff_spec("coefficients.c",
                               coeffs_raw.get("c", _DEFAULTS["coefficients"]["c"])),
    }
    if "b" in coeffs_raw:
        coeffs_cfg["b"] = _check_coeff_spec("coefficients.b", coeffs_raw["b"])
    elif command == "qv":
        coeffs_cfg["b"] = {"kind": "const", "value": 0.0}
    data["coefficients"] = coeffs_cfg

    curve_raw = raw.get("initial_curve", _DEFAULTS["initial_curve"])
    _need(isinstance(curve_raw, dict), "'initial_curve' must be an object")
    _reject_unknown("initial_curve", curve_raw)
    kind = curve_raw.get("kind")
    _need(kind in _CURVE_KINDS, f"initial_curve.kind must be one of {_CURVE_KINDS}")
    if kind == "flat":
        _need(isinstance(curve_raw.get("level", 0.0), (int, float)),
              "initial_curve.level must be a number")
        data["initial_curve"] = {"kind": "flat", "level": float(curve_raw.get("level", 0.0))}
    elif kind == "nelson_siegel":
        keys = ("beta0", "beta1", "beta2", "tau")
        for key in keys:
            _need(isinstance(curve_raw.get(key), (int, float)),
                  f"initial_curve.{key} must be a number")
        _need(curve_raw["tau"] > 0, "initial_curve.tau must be positive")
        data["initial_curve"] = {"kind": kind, **{k: float(curve_raw[k]) for k in keys}}
    else:
        cs = curve_raw.get("coeffs")
        _need(isinstance(cs, list) and cs and all(isinstance(v, (int, float)) for v in cs),
              "initial_curve.coeffs must be a non-empty list of numbers")
        data["initial_curve"] = {"kind": "poly", "coeffs": [float(v) for v in cs]}

    section = dict(_DEFAULTS[command])
    if command in raw:
        _need(isinstance(raw[command], dict), f"'{command}' must be an object")
        _reject_unknown(command, raw[command])
        section.update(raw[command])
    if command == "compare":
        section["ms_alpha"] = _check_coeff_spec("compare.ms_alpha", section["ms_alpha"])
        section["ms_sigma"] = _check_coeff_spec("compare.ms_sigma", section["ms_sigma"])
    _validate_section(command, section, grid_cfg)
    data[command] = section

    # solve commands force b = -a; an explicit b must satisfy the criterion
    if command in ("simulate", "yield", "weakform", "compare") and "b" in coeffs_cfg:
        grid = make_grid(**grid_cfg)
        cs = CoefficientSet(a=coeff_from_spec(coeffs_cfg["a"]),
                            b=coeff_from_spec(coeffs_cfg["b"]),
                            c=coeff_from_spec(coeffs_cfg["c"]))
        report = existence_check(cs, grid, tol=tol["deterministic"])
        if not report.exists:
            raise NumericalCriterionError(
                "a function solution exists if and only if a(t,x) = -b(t,x); "
                f"config violates the criterion with sup |a + b| = "
                f"{report.max_deviation:.3e} at (t, x) = {report.location}")

    return RunConfig(command, data)


def _validate_section(command: str, sec: dict, grid_cfg: dict) -> None:
    def pos_num(key):
        _need(isinstance(sec.get(key), (int, float)) and sec[key] > 0,
              f"{command}.{key} must be a positive number")

    def int_list(key):
        _need(isinstance(sec.get(key), list) and sec[key]
              and all(isinstance(v, int) and v >= 1 for v in sec[key]),
              f"{command}.{key} must be a non-empty list of positive integers")

    if command == "qv":
        pos_num("t")
        _need(isinstance(sec.get("x_lo"), (int, float)), "qv.x_lo must be a number")
        _need(isinstance(sec.get("x_hi"), (int, float)), "qv.x_hi must be a number")
        _need(sec["x_lo"] < sec["x_hi"], "qv.x_lo must be below qv.x_hi")
        int_list("n_values")
        _need(isinstance(sec.get("n_seeds"), int) and sec["n_seeds"] >= 2,
              "qv.n_seeds must be an integer >= 2")
        h = grid_cfg["h"]
        for key in ("t", "x_lo", "x_hi"):
            val = float(sec[key])
            _need(abs(round(val / h) * h - val) < 1e-9, f"qv.{key} must be on the lattice")
        span = round((float(sec["x_hi"]) - float(sec["x_lo"])) / h)
        for n in sec["n_values"]:
            _need(span % n == 0,
                  f"qv partition count {n} does not divide the lattice span {span}")
    elif command == "weakform":
        _need(isinstance(sec.get("h_values"), list) and len(sec["h_values"]) >= 2
              and all(isinstance(v, (int, float)) and v > 0 for v in sec["h_values"]),
              "weakform.h_values must list at least 2 positive steps")
        hs = [float(v) for v in sec["h_values"]]
        _need(all(hs[i] > hs[i + 1] for i in range(len(hs) - 1)),
              "weakform.h_values must be strictly decreasing")
        for h in hs[:-1]:
            ratio = h / hs[-1]
            _need(abs(ratio - round(ratio)) < 1e-9,
                  "every weakform.h must be an integer multiple of the finest")
        _need(isinstance(sec.get("n_seeds"), int) and sec["n_seeds"] >= 1,
              "weakform.n_seeds must be a positive integer")
    elif command == "lemmas":
        int_list("product_n_values")
        int_list("sup_n_values")
        for key in ("product_n_seeds", "sup_n_seeds"):
            _need(isinstance(sec.get(key), int) and sec[key] >= 2,
                  f"lemmas.{key} must be an integer >= 2")
    elif command == "yield":
        _need(isinstance(sec.get("t_slices"), list) and sec["t_slices"]
              and all(isinstance(v, (int, float)) for v in sec["t_slices"]),
              "yield.t_slices must be a non-empty list of numbers")
        _need(all(0 <= v <= grid_cfg["t_max"] for v in sec["t_slices"]),
              "yield.t_slices must lie within [0, t_max]")
        _need(isinstance(sec.get("keep_paths"), bool), "yield.keep_paths must be a boolean")
    elif command == "compare":
        _need(isinstance(sec.get("t_slices"), list) and sec["t_slices"]
              and all(isinstance(v, (int, float)) for v in sec["t_slices"]),
              "compare.t_slices must be a non-empty list of numbers")
        mats = sec.get("maturities")
        _need(mats is None or (isinstance(mats, list) and mats
                               and all(isinstance(v, (int, float)) for v in mats)),
              "compare.maturities must be null or a list of numbers")


# ---------------------------------------------------------------------------
# execution
# ---------------------------------------------------------------------------


def _coefficient_set(cfg: RunConfig) -> CoefficientSet:
    spec = cfg.data["coefficients"]
    a = coeff_from_spec(spec["a"])
    b = coeff_from_spec(spec["b"]) if "b" in spec else negate(a)
    c = coeff_from_spec(spec["c"])
    return CoefficientSet(a=a, b=b, c=c)


class _Outputs:
    """Tracks files created by a run so failures can clean up after themselves."""

    def __init__(self, out_dir: Path):
        self.out_dir = out_dir
        self.created: list[Path] = []

    def path(self, name: str) -> Path:
        p = self.out_dir / name
        self.created.append(p)
        return p

    def discard_all(self) -> None:
        for p in self.created:
            try:
                p.unlink(missing_ok=True)
            except OSError:
                pass


def _write_json(path: Path, obj) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(obj, f, indent=2, sort_keys=True)
        f.write("\n")


def run(cfg: RunConfig, workers: int = 1) -> list[str]:
    """Execute a validated config; returns the list of files written."""
    out_dir = Path(cfg.data["out_dir"])
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out_dir}: {exc}") from exc
    outputs = _Outputs(out_dir)
    started = time.time()
    try:
        with open(outputs.path("config_effective.json"), "w", encoding="utf-8") as f:
            f.write(cfg.serialize())
        runner = {"simulate": _run_simulate, "qv": _run_qv, "weakform": _run_weakform,
                  "lemmas": _run_lemmas, "yield": _run_yield,
                  "compare": _run_compare}[cfg.command]
        runner(cfg, outputs, workers)
        manifest = {
            "command": cfg.command,
            "seed": cfg.data["seed"],
            "package_version": __version__,
            "numpy_version": np.__version__,
            "numba_kernels": _kernels.NUMBA_ENABLED,
            "outputs": sorted(p.name for p in outputs.created),
            "wall_time_s": time.time() - started,
            "timestamp_utc": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        }
        _write_json(outputs.path("manifest.json"), manifest)
        return sorted(p.name for p in outputs.created)
    except Exception:
        outputs.discard_all()
        raise


def _grid_curve(cfg: RunConfig):
    g = make_grid(**cfg.data["grid"])
    r0 = curve_from_spec(cfg.data["initial_curve"])
    r0.validate(g.sheet_x_max)
    return g, r0


def _run_simulate(cfg: RunConfig, outputs: _Outputs, workers: int) -> None:
    g, r0 = _grid_curve(cfg)
    coeffs = _coefficient_set(cfg)
    sheet = sample_sheet(g, cfg.data["seed"], path_index=0)
    solution = solve_transport(coeffs, r0, diagonal_noise(sheet))
    solution.to_csv(outputs.path("solution.csv"))
    transport_solution(g, r0).to_csv(outputs.path("baseline.csv"))


_ESTIMATORS = ("diagonal", "characteristic", "slicewise")


def _run_qv(cfg: RunConfig, outputs: _Outputs, workers: int) -> None:
    g, _ = _grid_curve(cfg)
    coeffs = _coefficient_set(cfg)
    sec = cfg.data["qv"]
    t, x_lo, x_hi = float(sec["t"]), float(sec["x_lo"]), float(sec["x_hi"])
    n_values = sec["n_values"]
    seed, n_seeds = cfg.data["seed"], sec["n_seeds"]

    per = {(est, n): [] for est in _ESTIMATORS for n in n_values}
    holder_levels = sorted(n_values) if len(n_values) >= 3 else None
    holders = {"diagonal": [], "characteristic": []}
    for k in range(n_seeds):
        sheet = sample_sheet(g, seed, path_index=k)
        zd = build_Z(coeffs, sheet, t)
        zc = build_Z_characteristic(coeffs, sheet, t)
        for n in n_values:
            per[("diagonal", n)].append(qv_estimate(zd, x_lo, x_hi, n))
            per[("characteristic", n)].append(
                qv_estimate(zc, t + x_lo, t + x_hi, n))
            per[("slicewise", n)].append(
                qv_slicewise(coeffs, sheet, t, x_lo, x_hi, n))
        if holder_levels:
            holders["diagonal"].append(
                holder_estimate(zd, x_lo, x_hi, holder_levels).estimated_exponent)
            holders["characteristic"].append(
                holder_estimate(zc, t + x_lo, t + x_hi,
                                holder_levels).estimated_exponent)

    targets = {
        "diagonal": qv_theoretical(coeffs, t, x_lo, x_hi),
        "slicewise": qv_theoretical(coeffs, t, x_lo, x_hi),
        "characteristic": qv_characteristic_theoretical(coeffs, t, t + x_lo,
                                                        t + x_hi),
    }
    n_max = max(n_values)
    tol = cfg.data["tolerances"]["qv_relative"]
    reports = {}
    for est in _ESTIMATORS:
        med = float(np.median(per[(est, n_max)]))
        target = targets[est]
        rel = abs(med - target) / target if target else abs(med)
        reports[est] = QVReport(t, x_lo, x_hi, n_max, med, target, rel,
                                seed, n_seeds, est)

    def finite_or_none(v: float):
        return float(v) if np.isfinite(v) else None

    report = {
        "per_estimator": {est: reports[est].to_json_dict() for est in _ESTIMATORS},
        "qv_relative_tolerance": tol,
        "within_tolerance": {est: bool(reports[est].relative_error <= tol)
                             for est in _ESTIMATORS},
        "holder_median_exponent": {
            est: finite_or_none(np.median(vals)) if vals else None
            for est, vals in holders.items()},
    }
    _write_json(outputs.path("qv_report.json"), report)
    with open(outputs.path("qv_convergence.csv"), "w", encoding="utf-8",
              newline="\n") as f:
        f.write("estimator,n,seed,qv\n")
        for est in _ESTIMATORS:
            for n in n_values:
                for k, v in enumerate(per[(est, n)]):
                    f.write(f"{est},{n},{k},{v:.17g}\n")


def _run_weakform(cfg: RunConfig, outputs: _Outputs, workers: int) -> None:
    g_cfg = cfg.data["grid"]
    sec = cfg.data["weakform"]
    hs = [float(v) for v in sec["h_values"]]
    h_fine = hs[-1]
    coeffs = _coefficient_set(cfg)
    _, r0 = _grid_curve(cfg)
    fine_grid = make_grid(g_cfg["t_max"], g_cfg["x_max"], h_fine)
    op = OperatorD(coeffs)
    records = []
    medians = {h: [] for h in hs}
    corrupt_fine = []
    for seed_idx in range(sec["n_seeds"]):
        sheet_fine = sample_sheet(fine_grid, cfg.data["seed"], path_index=seed_idx)
        for h in hs:
            factor = round(h / h_fine)
            sheet = restrict_sheet(sheet_fine, factor) if factor > 1 else sheet_fine
            W = diagonal_noise(sheet)
            r = solve_transport(coeffs, r0, W)
            battery = standard_bump_battery(sheet.grid)
            res = [weak_residual_transport(r, W, op, tf) for tf in battery]
            for tf_id, value in enumerate(res):
                records.append({"h": h, "seed": seed_idx, "test_function_id": tf_id,
                                "residual": value, "variant": "intact"})
            medians[h].append(float(np.median(res)))
            if h == h_fine:
                corrupted = _corrupted_solution(coeffs, r0, W)
                res_c = [weak_residual_transport(corrupted, W, op, tf) for tf in battery]
                for tf_id, value in enumerate(res_c):
                    records.append({"h": h, "seed": seed_idx, "test_function_id": tf_id,
                                    "residual": value, "variant": "corrupted"})
                corrupt_fine.append(float(np.median(res_c)))
    med_by_h = {h: float(np.median(medians[h])) for h in hs}
    med_corrupt = float(np.median(corrupt_fine))
    report = {
        "h_values": hs,
        "median_residuals": {str(h): med_by_h[h] for h in hs},
        "median_corrupted_at_finest": med_corrupt,
        "corrupted_over_intact_ratio": med_corrupt / med_by_h[h_fine],
        "monotone_decreasing": all(med_by_h[a] > med_by_h[b]
                                   for a, b in zip(hs, hs[1:])),
    }
    _write_json(outputs.path("weakform_report.json"), report)
    write_residual_records(outputs.path("residuals.json"), records)


def _corrupted_solution(coeffs, r0, W):
    """Closed-form solution with its time-integral term deleted (for refutation)."""
    from .solver import SolutionField, Provenance, _initial_values_on_diagonals
    g = W.grid
    tt = g.t_values[:, None]
    xx = g.x_values[None, :]
    a_grid = coeffs.eval("a", tt, xx)
    values = a_grid * W.values + _initial_values_on_diagonals(r0, g)
    return SolutionField(g, values, Provenance("closed_form_corrupted", seed=W.seed))


def _run_lemmas(cfg: RunConfig, outputs: _Outputs, workers: int) -> None:
    g, _ = _grid_curve(cfg)
    sec = cfg.data["lemmas"]
    template = sample_sheet(g, cfg.data["seed"], path_index=0)
    unit = RectRegion(0.0, min(1.0, g.t_max), 0.0, min(1.0, g.sheet_x_max))
    ones = const(1.0)
    diag_rows = partition_product_check(template, ones, ones, unit, unit,
                              sec["product_n_values"], "diagonal",
                              n_seeds=sec["product_n_seeds"])
    width = unit.x_hi - unit.x_lo
    shifted = RectRegion(unit.t_lo, unit.t_hi, unit.x_hi,
                         min(unit.x_hi + width, g.sheet_x_max))
    disj_rows = partition_product_check(template, ones, ones, unit, shifted,
                              sec["product_n_values"], "disjoint",
                              n_seeds=sec["product_n_seeds"])
    sup_rows = partition_sup_check(template, unit, sec["sup_n_values"],
                                   n_seeds=sec["sup_n_seeds"])
    report = {
        "partition_product_diagonal": [r.to_json_dict() for r in diag_rows],
        "partition_product_disjoint": [r.to_json_dict() for r in disj_rows],
        "partition_sup": [r.to_json_dict() for r in sup_rows],
    }
    _write_json(outputs.path("lemmas_report.json"), report)
    with open(outputs.path("lemmas_convergence.csv"), "w", encoding="utf-8",
              newline="\n") as f:
        f.write("check,n,seed,statistic\n")
        for label, rows in (("partition_product_diagonal", diag_rows),
                            ("partition_product_disjoint", disj_rows),
                            ("partition_sup", sup_rows)):
            for r in rows:
                for k, v in enumerate(r.samples):
                    f.write(f"{label},{r.n},{k},{v:.17g}\n")


def _run_yield(cfg: RunConfig, outputs: _Outputs, workers: int) -> None:
    g, r0 = _grid_curve(cfg)
    spec = cfg.data["coefficients"]
    sc = YieldScenario(g, r0, coeff_from_spec(spec["a"]), coeff_from_spec(spec["c"]),
                       cfg.data["n_paths"], cfg.data["seed"])
    sec = cfg.data["yield"]
    result = simulate_yield(sc, t_slices=sec["t_slices"],
                            keep_paths=sec["keep_paths"], workers=workers)
    write_slices_csv(result, outputs.path("yield_slices.csv"))
    result.mean.to_csv(outputs.path("yield_mean.csv"))
    result.variance.to_csv(outputs.path("yield_variance.csv"))
    transport_solution(g, r0).to_csv(outputs.path("baseline.csv"))


def _run_compare(cfg: RunConfig, outputs: _Outputs, workers: int) -> None:
    g, r0 = _grid_curve(cfg)
    spec = cfg.data["coefficients"]
    sec = cfg.data["compare"]
    sc = YieldScenario(g, r0, coeff_from_spec(spec["a"]), coeff_from_spec(spec["c"]),
                       cfg.data["n_paths"], cfg.data["seed"])
    report = compare_models(sc, coeff_from_spec(sec["ms_alpha"]),
                            coeff_from_spec(sec["ms_sigma"]),
                            sec["t_slices"], maturities=sec["maturities"])
    _write_json(outputs.path("compare_report.json"), report.to_json_dict())


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sheetpde",
                                     description="Brownian-sheet SPDE laboratory")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="path to JSON config")
        p.add_argument("--seed", type=int, default=None, help="override config seed")
        p.add_argument("--out", default=None, help="override output directory")
        p.add_argument("--paths", type=int, default=None, help="override n_paths")
        p.add_argument("--h", type=float, default=None, help="override grid step")
        p.add_argument("--workers", type=int, default=1, help="worker pool size")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        text = Path(args.config).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 4
    overrides = {"seed": args.seed, "out_dir": args.out, "n_paths": args.paths,
                 "h": args.h}
    try:
        cfg = parse_config(text, overrides=overrides)
        if cfg.command != args.command:
            raise ConfigError(f"config command {cfg.command!r} does not match "
                              f"subcommand {args.command!r}")
        run(cfg, workers=args.workers)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (NumericalCriterionError, ExistenceCriterionError) as exc:
        print(f"criterion violation: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4
    except ValueError as exc:
        # config-induced numeric misuse surfaced past validation
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
