"""Scenario files, dispatch, and deterministic artifact writing.

A scenario is a JSON object ``{"kind": ..., "params": {...}}`` with an
optional ``"output_path"`` naming the CSV (defaults to the kind). Every
run writes the CSV, a sidecar ``<stem>.manifest.json`` with the resolved
parameters, options, library version, and derived summary results, and a
``<stem>.png`` figure. CSV and manifest bytes are identical across runs
of the same scenario: floats are serialized at 17 significant digits,
keys are sorted, and no timestamps are recorded.
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import bounds, hbac, ising, multireset, phase_ensemble, plots, thermo
from ._version import __version__
from .errors import ScenarioError
from .qcore import apply_channel

KINDS = (
    "bounds",
    "region",
    "alpha-average",
    "hbac-run",
    "hbac-analytic-check",
    "confidence-band",
    "ising-sweep",
    "thermo",
    "multi-reset",
)

_REQUIRED = object()

# kind -> parameter name -> (checker, default)
_SCHEMAS = {
    "bounds": {
        "pol_v": ("float", _REQUIRED),
        "grid_points": ("int", 101),
    },
    "region": {
        "pol_v": ("float", _REQUIRED),
        "resolution": ("int", 64),
    },
    "alpha-average": {
        "pol_v": ("float", _REQUIRED),
        "gamma": ("float", _REQUIRED),
        "gamma_rot": ("float", _REQUIRED),
        "alpha_min": ("float", _REQUIRED),
        "alpha_max": ("float", _REQUIRED),
        "count": ("int", 101),
        "rule": ("str", "orthogonal-offset"),
    },
    "hbac-run": {
        "eps1_0": ("float", 0.0),
        "target_coherence_re": ("float", 0.0),
        "target_coherence_im": ("float", 0.0),
        "eps2": ("float", _REQUIRED),
        "eps3": ("float", _REQUIRED),
        "xi": ("float", 0.0),
        "alpha_prime": ("float", 0.0),
        "cycles": ("int", _REQUIRED),
    },
    "hbac-analytic-check": {
        "configs": ("int", 20),
        "max_cycles": ("int", 30),
        "seed": ("int", 42),
    },
    "confidence-band": {
        "pol_v": ("float", _REQUIRED),
        "gamma_min": ("float", _REQUIRED),
        "gamma_max": ("float", _REQUIRED),
        "grid_points": ("int", 201),
    },
    "ising-sweep": {
        "omega": ("float", 1.0),
        "beta": ("float", _REQUIRED),
        "g_over_omega": ("list[float]", _REQUIRED),
        "cycles": ("int", 15),
    },
    "thermo": {
        "eps1_0": ("float", 0.0),
        "eps2": ("float", _REQUIRED),
        "eps3": ("float", _REQUIRED),
        "xi": ("float", 0.0),
        "alpha_prime": ("float", 0.0),
        "cycles": ("int", _REQUIRED),
        "omega": ("float", 1.0),
    },
    "multi-reset": {
        "r_values": ("list[int]", _REQUIRED),
        "eps_a": ("list[float]", _REQUIRED),
    },
}


@dataclass(frozen=True)
class RunOptions:
    seed: int | None = None
    verbatim_sm: bool = False
    tc_verbatim: bool = False


def _check_type(kind: str, name: str, value, expected: str):
    def fail(msg):
        raise ScenarioError(f"scenario kind {kind!r}: parameter {name!r} {msg}")

    if expected == "float":
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            fail(f"must be a number, got {type(value).__name__}")
        return float(value)
    if expected == "int":
        if isinstance(value, bool) or not isinstance(value, int):
            fail(f"must be an integer, got {type(value).__name__}")
        return int(value)
    if expected == "str":
        if not isinstance(value, str):
            fail(f"must be a string, got {type(value).__name__}")
        return value
    if expected.startswith("list["):
        inner = expected[5:-1]
        if not isinstance(value, list) or not value:
            fail("must be a nonempty list")
        return [_check_type(kind, name, v, inner) for v in value]
    raise AssertionError(expected)  # pragma: no cover


def load_scenario(path) -> dict:
    """Parse and strictly validate a scenario file."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario file {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise ScenarioError(f"{path}: scenario must be a JSON object")
    unknown = set(doc) - {"kind", "params", "output_path"}
    if unknown:
        raise ScenarioError(f"{path}: unknown top-level keys {sorted(unknown)}")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise ScenarioError(f"{path}: kind must be one of {list(KINDS)}, got {kind!r}")
    raw_params = doc.get("params")
    if not isinstance(raw_params, dict):
        raise ScenarioError(f"{path}: 'params' must be a JSON object")
    schema = _SCHEMAS[kind]
    unknown = set(raw_params) - set(schema)
    if unknown:
        raise ScenarioError(f"{path}: scenario kind {kind!r} does not accept keys {sorted(unknown)}")
    params = {}
    for name, (typ, default) in schema.items():
        if name in raw_params:
            params[name] = _check_type(kind, name, raw_params[name], typ)
        elif default is _REQUIRED:
            raise ScenarioError(f"{path}: scenario kind {kind!r} requires parameter {name!r}")
        else:
            params[name] = default
    out_name = doc.get("output_path", kind.replace("-", "_") + ".csv")
    if not isinstance(out_name, str) or not out_name:
        raise ScenarioError(f"{path}: 'output_path' must be a nonempty string")
    return {"kind": kind, "params": params, "output_path": out_name}


def _fmt(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.17g}"
    return str(value)


def _atomic_write(path: Path, data: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(path: Path, header, rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    _atomic_write(path, ("\n".join(lines) + "\n").encode())


def write_manifest(path: Path, payload: dict) -> None:
    _atomic_write(path, (json.dumps(payload, sort_keys=True, indent=2) + "\n").encode())


# ---------------------------------------------------------------------------
# Kind handlers: each returns (header, rows, results_dict)


def _run_bounds(params, options):
    grid = np.linspace(0.0, 1.0, params["grid_points"])
    rows = []
    for gamma in grid:
        region = bounds.cooling_region(params["pol_v"], float(gamma))
        rows.append(
            (
                float(gamma),
                bounds.epsilon_star(params["pol_v"], float(gamma)),
                region.kind.value,
                region.gamma_rot_max if region.gamma_rot_max is not None else math.nan,
            )
        )
    return ["gamma", "epsilon_star", "region", "gamma_rot_max"], rows, {}


def _run_region(params, options):
    if params["resolution"] < 16:
        raise ScenarioError(f"region resolution must be at least 16, got {params['resolution']}")
    pol_v = params["pol_v"]
    grid = np.linspace(0.0, 1.0, params["resolution"])
    rows = []
    for gamma in grid:
        for gamma_rot in grid:
            eps_after = bounds.epsilon_after_rotation(pol_v, float(gamma), float(gamma_rot))
            if abs(eps_after - pol_v) <= 1e-12:
                label = "boundary"
            elif eps_after > pol_v:
                label = "cools"
            else:
                label = "heats"
            rows.append((float(gamma), float(gamma_rot), eps_after, label))
    return ["gamma", "gamma_rot", "eps_after", "classification"], rows, {}


def emit_region_map(pol_v: float, resolution: int):
    """Grid classification of (gamma, gamma_rot) cells; library-side helper."""
    header, rows, _ = _run_region({"pol_v": pol_v, "resolution": resolution}, RunOptions())
    return header, rows


def _run_alpha_average(params, options):
    interval = phase_ensemble.PhaseInterval(params["alpha_min"], params["alpha_max"])
    try:
        rule = phase_ensemble.AlphaRotRule(params["rule"])
    except ValueError as exc:
        raise ScenarioError(
            f"rule must be one of {[r.value for r in phase_ensemble.AlphaRotRule]}, got {params['rule']!r}"
        ) from exc
    rows = phase_ensemble.sample_ensemble(
        params["pol_v"], params["gamma"], interval, params["gamma_rot"], rule, params["count"]
    )
    mean, frac = phase_ensemble.ensemble_summary(rows, params["pol_v"])
    numeric = phase_ensemble.average_epsilon_numeric(
        params["pol_v"], params["gamma"], params["gamma_rot"], interval
    )
    closed = phase_ensemble.average_epsilon_closed(
        params["pol_v"], params["gamma"], params["gamma_rot"], interval
    )
    results = {
        "average_epsilon_numeric": numeric,
        "average_epsilon_closed_verbatim": closed,
        "closed_vs_numeric_discrepancy": abs(closed - numeric),
        "ensemble_mean": mean,
        "fraction_cooled": frac,
    }
    return ["alpha", "epsilon_out", "coherence_out"], rows, results


def _run_hbac_run(params, options):
    config = hbac.HbacConfig(
        eps1_0=params["eps1_0"],
        target_coherence=complex(params["target_coherence_re"], params["target_coherence_im"]),
        eps2=params["eps2"],
        eps3=params["eps3"],
        xi=params["xi"],
        alpha_prime=params["alpha_prime"],
        cycles=params["cycles"],
    )
    rows = hbac.trajectory_rows(config)
    spec = hbac.extract_virtual_qubit(config)
    results = {
        "virtual_polarization": spec.pol_v,
        "virtual_coherence": spec.gamma,
        "virtual_phase": spec.alpha,
    }
    return ["cycle", "eps_z", "coh_re", "coh_im", "trace_dist_to_fixed_point"], rows, results


def _run_hbac_analytic_check(params, options):
    seed = options.seed if options.seed is not None else params["seed"]
    rng = np.random.default_rng(seed)
    header = [
        "index",
        "eps1_0",
        "chi_re",
        "chi_im",
        "eps2",
        "eps3",
        "xi",
        "alpha_prime",
        "n",
        "phi_dev",
        "rho_dev",
    ]
    rows = []
    devs = {"phi": 0.0, "rho": 0.0, "phi_verbatim": 0.0, "rho_verbatim": 0.0}
    for index in range(params["configs"]):
        eps2 = float(rng.uniform(0.0, 0.9))
        eps3 = float(rng.uniform(0.0, 0.9))
        xi = float(rng.uniform(0.0, 1.0))
        alpha_prime = float(rng.uniform(0.0, 2.0 * math.pi))
        eps1 = float(rng.uniform(-0.9, 0.9))
        chi = complex(
            rng.uniform(0.0, 1.0) * math.sqrt(1.0 - eps1**2) * np.exp(1j * rng.uniform(0.0, 2.0 * math.pi))
        )
        n = int(rng.integers(0, params["max_cycles"] + 1))
        config = hbac.HbacConfig(
            eps1_0=eps1, target_coherence=chi, eps2=eps2, eps3=eps3, xi=xi,
            alpha_prime=alpha_prime, cycles=n,
        )
        chan = hbac.hbac_channel(config)
        phi_power = np.linalg.matrix_power(chan.natural, n)
        state = hbac.initial_target_state(config)
        for _ in range(n):
            state = apply_channel(chan, state)
        for flavor, verbatim in (("", False), ("_verbatim", True)):
            phi_dev = float(
                np.max(np.abs(hbac.analytic_phi_n(n, eps2, eps3, xi, alpha_prime, verbatim=verbatim) - phi_power))
            )
            rho_dev = float(
                np.max(np.abs(hbac.analytic_rho1_n(n, config, verbatim=verbatim).data - state.data))
            )
            devs["phi" + flavor] = max(devs["phi" + flavor], phi_dev)
            devs["rho" + flavor] = max(devs["rho" + flavor], rho_dev)
            if verbatim == options.verbatim_sm:
                row_phi, row_rho = phi_dev, rho_dev
        rows.append((index, eps1, chi.real, chi.imag, eps2, eps3, xi, alpha_prime, n, row_phi, row_rho))
    results = {
        "seed": seed,
        "form_in_csv": "verbatim" if options.verbatim_sm else "corrected",
        "max_phi_dev_corrected": devs["phi"],
        "max_rho_dev_corrected": devs["rho"],
        "max_phi_dev_verbatim": devs["phi_verbatim"],
        "max_rho_dev_verbatim": devs["rho_verbatim"],
    }
    return header, rows, results


def _run_confidence_band(params, options):
    grid = np.linspace(0.0, 1.0, params["grid_points"])
    rows = hbac.confidence_band_sweep(
        params["pol_v"], params["gamma_min"], params["gamma_max"], grid
    )
    eps_mid = np.array([r[2] for r in rows])
    peak = int(np.argmax(eps_mid))
    results = {
        "peak_gamma_rot": rows[peak][0],
        "peak_eps_mid": rows[peak][2],
        "residual_coherence_at_peak": rows[peak][5],
    }
    return (
        ["gamma_rot", "eps_min", "eps_mid", "eps_max", "coh_min", "coh_mid", "coh_max"],
        rows,
        results,
    )


def _run_ising_sweep(params, options):
    rows = []
    summary = {}
    configs = []
    for ratio in params["g_over_omega"]:
        config = ising.IsingConfig(
            omega=params["omega"], g=ratio * params["omega"], beta=params["beta"]
        )
        configs.append(config)
        gamma, pol_v = ising.ising_virtual_coherence(config)
        summary[f"gamma_at_g_over_omega_{_fmt(ratio)}"] = gamma
        summary[f"pol_v_at_g_over_omega_{_fmt(ratio)}"] = pol_v
        for cycle, x, y, z in ising.target_trajectory(config, params["cycles"]):
            rows.append((float(ratio), cycle, x, y, z))
    if len(configs) >= 3:
        fit = ising.scaling_check(configs)
        summary["scaling_constant"] = fit.constant
        summary["scaling_spearman"] = fit.spearman
    return ["g_over_omega", "cycle", "x", "y", "z"], rows, summary


def _run_thermo(params, options):
    config = hbac.HbacConfig(
        eps1_0=params["eps1_0"],
        eps2=params["eps2"],
        eps3=params["eps3"],
        xi=params["xi"],
        alpha_prime=params["alpha_prime"],
        cycles=params["cycles"],
    )
    records = thermo.thermo_series(config, params["omega"], tc_verbatim=options.tc_verbatim)
    rows = [
        (r.cycle, r.Q, r.W, r.C1, r.Q_coh, r.zeta_coh, r.J_coh, r.zeta_carnot) for r in records
    ]
    results = {"tc_convention": "verbatim-log-ratio" if options.tc_verbatim else "reciprocal"}
    return ["cycle", "Q", "W", "C1", "Q_coh", "zeta_coh", "J_coh", "zeta_carnot"], rows, results


def _run_multi_reset(params, options):
    rows = []
    for r in params["r_values"]:
        for eps_a in params["eps_a"]:
            rows.append((r, eps_a, multireset.resource_ratio(r, eps_a)))
    return ["r", "eps_a", "ratio"], rows, {}


_HANDLERS = {
    "bounds": _run_bounds,
    "region": _run_region,
    "alpha-average": _run_alpha_average,
    "hbac-run": _run_hbac_run,
    "hbac-analytic-check": _run_hbac_analytic_check,
    "confidence-band": _run_confidence_band,
    "ising-sweep": _run_ising_sweep,
    "thermo": _run_thermo,
    "multi-reset": _run_multi_reset,
}


def run_scenario_file(scenario_path, out_dir=".", options: RunOptions = RunOptions()):
    """Execute one scenario; returns the paths written (CSV, manifest, figure)."""
    scenario = load_scenario(scenario_path)
    kind, params = scenario["kind"], scenario["params"]
    header, rows, results = _HANDLERS[kind](params, options)

    out_dir = Path(out_dir)
    csv_path = Path(scenario["output_path"])
    if not csv_path.is_absolute():
        csv_path = out_dir / csv_path
    stem = csv_path.with_suffix("")
    manifest_path = stem.parent / (stem.name + ".manifest.json")
    figure_path = stem.parent / (stem.name + ".png")

    write_csv(csv_path, header, rows)
    manifest = {
        "kind": kind,
        "params": params,
        "options": {
            "seed": options.seed,
            "verbatim_sm": options.verbatim_sm,
            "tc_verbatim": options.tc_verbatim,
        },
        "library_version": __version__,
        "csv": csv_path.name,
        "figure": figure_path.name,
        "columns": header,
        "results": results,
    }
    write_manifest(manifest_path, manifest)
    plots.render_figure(kind, header, rows, params, results, figure_path)
    return [csv_path, manifest_path, figure_path]
