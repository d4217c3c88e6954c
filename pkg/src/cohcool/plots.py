"""Figure rendering for scenario runs.

One PNG per scenario, written next to the CSV. Uses the Agg backend so
runs work headless; nothing here affects the numeric outputs.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def _columns(header, rows):
    cols = {name: [] for name in header}
    for row in rows:
        for name, value in zip(header, row):
            cols[name].append(value)
    return cols


def _draw_bounds(ax, header, rows, params, results):
    cols = _columns(header, rows)
    gamma = np.array(cols["gamma"], dtype=float)
    eps = np.array(cols["epsilon_star"], dtype=float)
    ax.plot(gamma, eps, color="tab:blue", label="best reachable polarization")
    ax.axhline(params["pol_v"], color="0.6", ls="--", lw=1.0, label="bare virtual polarization")
    ax.set_xlabel("coherence fraction")
    ax.set_ylabel("polarization bound")
    ax.legend(loc="best", fontsize=8)


def _draw_region(ax, header, rows, params, results):
    cols = _columns(header, rows)
    res = params["resolution"]
    eps = np.array(cols["eps_after"], dtype=float).reshape(res, res)
    im = ax.imshow(
        eps - params["pol_v"],
        origin="lower",
        extent=(0, 1, 0, 1),
        aspect="auto",
        cmap="RdBu",
    )
    ax.figure.colorbar(im, ax=ax, label="polarization gain")
    ax.set_xlabel("applied rotation weight")
    ax.set_ylabel("state coherence fraction")


def _draw_alpha_average(ax, header, rows, params, results):
    cols = _columns(header, rows)
    alpha = np.array(cols["alpha"], dtype=float)
    eps = np.array(cols["epsilon_out"], dtype=float)
    ax.plot(alpha, eps, color="tab:green")
    ax.axhline(params["pol_v"], color="0.6", ls="--", lw=1.0)
    ax.set_xlabel("phase sample")
    ax.set_ylabel("polarization after rotation")


def _draw_hbac_run(ax, header, rows, params, results):
    cols = _columns(header, rows)
    cycles = np.array(cols["cycle"], dtype=float)
    ax.plot(cycles, np.array(cols["eps_z"], dtype=float), label="target polarization")
    coh = np.hypot(np.array(cols["coh_re"], dtype=float), np.array(cols["coh_im"], dtype=float))
    ax.plot(cycles, coh, label="|target coherence|")
    ax.plot(
        cycles,
        np.array(cols["trace_dist_to_fixed_point"], dtype=float),
        label="distance to fixed point",
    )
    ax.set_xlabel("round")
    ax.legend(loc="best", fontsize=8)


def _draw_hbac_analytic_check(ax, header, rows, params, results):
    cols = _columns(header, rows)
    devs = np.array(cols["rho_dev"], dtype=float)
    floor = 1e-18
    ax.semilogy(cols["index"], np.maximum(devs, floor), "o", ms=4)
    ax.set_xlabel("random configuration")
    ax.set_ylabel("state deviation (analytic vs simulated)")


def _draw_confidence_band(ax, header, rows, params, results):
    cols = _columns(header, rows)
    grid = np.array(cols["gamma_rot"], dtype=float)
    ax.fill_between(
        grid,
        np.array(cols["eps_min"], dtype=float),
        np.array(cols["eps_max"], dtype=float),
        alpha=0.3,
        color="tab:blue",
        label="range over assumed coherence",
    )
    ax.plot(grid, np.array(cols["eps_mid"], dtype=float), color="tab:blue", label="midpoint")
    ax.axhline(params["pol_v"], color="0.6", ls="--", lw=1.0)
    ax.set_xlabel("applied rotation weight")
    ax.set_ylabel("polarization after rotation")
    ax.legend(loc="best", fontsize=8)


def _draw_ising_sweep(ax, header, rows, params, results):
    cols = _columns(header, rows)
    ratios = sorted(set(cols["g_over_omega"]))
    cycles = np.array(cols["cycle"], dtype=float)
    z = np.array(cols["z"], dtype=float)
    for ratio in ratios:
        mask = np.array([r == ratio for r in cols["g_over_omega"]])
        ax.plot(cycles[mask], z[mask], label=f"coupling ratio {ratio:g}")
    ax.set_xlabel("round")
    ax.set_ylabel("target z component")
    ax.legend(loc="best", fontsize=8)


def _draw_thermo(ax, header, rows, params, results):
    cols = _columns(header, rows)
    cycles = np.array(cols["cycle"], dtype=float)
    for name in ("Q", "W", "Q_coh"):
        ax.plot(cycles, np.array(cols[name], dtype=float), label=name)
    ax.set_xlabel("round")
    ax.set_ylabel("per-round energy flow")
    ax.legend(loc="best", fontsize=8)


def _draw_multi_reset(ax, header, rows, params, results):
    cols = _columns(header, rows)
    r_vals = sorted(set(cols["r"]))
    eps = np.array(cols["eps_a"], dtype=float)
    ratio = np.array(cols["ratio"], dtype=float)
    for r in r_vals:
        mask = np.array([v == r for v in cols["r"]])
        order = np.argsort(eps[mask])
        ax.plot(eps[mask][order], ratio[mask][order], "o-", ms=3, label=f"{r} resets")
    ax.axhline(1.0, color="0.6", ls="--", lw=1.0)
    ax.set_xlabel("bath polarization")
    ax.set_ylabel("coherent vs extra-reset advantage")
    ax.legend(loc="best", fontsize=8)


_DRAWERS = {
    "bounds": _draw_bounds,
    "region": _draw_region,
    "alpha-average": _draw_alpha_average,
    "hbac-run": _draw_hbac_run,
    "hbac-analytic-check": _draw_hbac_analytic_check,
    "confidence-band": _draw_confidence_band,
    "ising-sweep": _draw_ising_sweep,
    "thermo": _draw_thermo,
    "multi-reset": _draw_multi_reset,
}


def render_figure(kind, header, rows, params, results, path) -> None:
    fig, ax = plt.subplots(figsize=(6.0, 4.0), dpi=120)
    try:
        _DRAWERS[kind](ax, header, rows, params, results)
        ax.set_title(kind)
        fig.tight_layout()
        fig.savefig(path)
    finally:
        plt.close(fig)
