"""Scenario orchestration: run a validated config, write CSV/JSON/SVG outputs.

CSV is the contract (full round-trip float precision, one column group per
method); JSON carries the run summary; SVG plots are conveniences.  All
parallelism is across grid points and sub-cases, with results assembled in
grid order, so outputs are independent of the thread count.
"""

from __future__ import annotations

import csv
import json
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .cloud import pairwise_distances, sample_gaussian_cloud
from .config import ExperimentConfig
from .correlation import apply_background, g2_double_only, g2_longtime, g2_series, poisson_amplitudes
from .errors import ConfigError
from .interference import (
    ComplexSeries,
    distance_mc,
    pair_series_from_shifts,
    pair_sum,
    quadrature_point,
    ramsey_transform,
    short_time_dd3,
)
from .asymptotics import dd_asymptote, vdw_asymptote
from .potentials import PotentialSpec, characteristic_frequency, coefficient_for_level


def _parallel_map(fn, items, threads: int):
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def emit_csv(path: Path, columns: list[tuple[str, np.ndarray]]) -> None:
    """Write named columns; floats use the shortest round-trip representation."""
    lengths = {len(v) for _, v in columns}
    if len(lengths) != 1:
        raise ValueError(f"column lengths differ: { {k: len(v) for k, v in columns} }")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([name for name, _ in columns])
        for row in zip(*(v for _, v in columns)):
            writer.writerow([_fmt(x) for x in row])


def emit_json(path: Path, summary: dict) -> None:
    with open(path, "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True, default=str)
        fh.write("\n")


def emit_svg(path: Path, draw) -> None:
    """Render a plot callback onto an SVG file (convenience output)."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.4, 4.4))
    draw(ax)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


def _series_columns(tag: str, series: ComplexSeries) -> list[tuple[str, np.ndarray]]:
    cols = [
        (f"{tag}_re", series.values.real),
        (f"{tag}_im", series.values.imag),
        (f"{tag}_modsq", series.modsq()),
    ]
    if series.stderr_re is not None:
        cols.append((f"{tag}_stderr_re", series.stderr_re))
        cols.append((f"{tag}_stderr_im", series.stderr_im))
    return cols


def _clipped_p_abs(series: ComplexSeries) -> np.ndarray:
    # bias-corrected |P|^2 can dip below 0 in the noise floor
    return np.sqrt(np.clip(series.modsq(), 0.0, 1.0))


def run(config: ExperimentConfig, out_dir, threads: int = 1) -> dict:
    """Execute a scenario; returns the summary record that is also written
    to JSON when 'json' is among the outputs."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    runner = {
        "fig1": _run_fig1,
        "decay": _run_decay,
        "shorttime": _run_series_scenario,
        "ramsey": _run_ramsey,
        "custom": _run_series_scenario,
    }[config.scenario]
    t0 = time.perf_counter()
    summary = runner(config, out, threads)
    summary["scenario"] = config.scenario
    summary["seed"] = config.mc.seed
    summary["threads"] = threads
    summary["total_runtime_s"] = round(time.perf_counter() - t0, 6)
    summary["version"] = __version__
    if "json" in config.outputs:
        emit_json(out / f"{config.scenario}_summary.json", summary)
        summary.setdefault("files", []).append(str(out / f"{config.scenario}_summary.json"))
    return summary


# ---------------------------------------------------------------------------
# scenarios


def _run_fig1(config: ExperimentConfig, out: Path, threads: int) -> dict:
    """Pair correlation vs principal quantum number at fixed storage time."""
    axis = config.geometry.resolved_axis_sigmas()
    cloud = sample_gaussian_cloud(axis, config.mc.atom_count, config.mc.seed)
    iu, ju, dist = pairwise_distances(cloud)
    inv_r_alpha = dist ** (-float(config.coefficient_model.alpha))
    times = np.array([config.storage_time_us])
    ns = np.arange(config.n_start, config.n_stop + 1)

    t0 = time.perf_counter()

    def one_level(n):
        c = coefficient_for_level(int(n), config.coefficient_model)
        series = pair_series_from_shifts(cloud.n_atoms, iu, ju, c * inv_r_alpha, times)
        return series.values[0], series.stderr_re[0], series.stderr_im[0], _clipped_p_abs(series)[0]

    rows = _parallel_map(one_level, list(ns), threads)
    p_vals = np.array([r[0] for r in rows])
    p_abs = np.array([r[3] for r in rows])
    mc_se = np.array([np.hypot(r[1], r[2]) for r in rows])
    runtime = time.perf_counter() - t0

    dist_m = poisson_amplitudes(config.excitation.mean, config.excitation.m_max)
    g2 = g2_series(dist_m, p_abs, grid=ns.astype(float)).g2
    g2_dbl = g2_double_only(dist_m, p_abs, grid=ns.astype(float)).g2
    g2_adj = apply_background(g2, config.g2_bg)
    g2_dbl_adj = apply_background(g2_dbl, config.g2_bg)

    files = []
    if "csv" in config.outputs:
        path = out / "fig1_g2_vs_n.csv"
        emit_csv(
            path,
            [
                ("n", ns),
                ("p_re", p_vals.real),
                ("p_im", p_vals.imag),
                ("p_abs", p_abs),
                ("g2", g2_adj),
                ("g2_double_only", g2_dbl_adj),
            ],
        )
        files.append(str(path))
    if "svg" in config.outputs:
        overlay = _load_overlay(config.overlay_csv)

        def draw(ax):
            ax.plot(ns, g2_adj, "-", color="tab:red", label="full multi-excitation")
            ax.plot(ns, g2_dbl_adj, "--", color="tab:blue", label="double excitations only")
            if overlay is not None:
                ax.plot(overlay[0], overlay[1], "ko", ms=4, label="overlay data")
            ax.set_xlabel("principal quantum number n")
            ax.set_ylabel(r"$g^{(2)}$")
            ax.legend()

        path = out / "fig1_g2_vs_n.svg"
        emit_svg(path, draw)
        files.append(str(path))

    return {
        "files": files,
        "methods": {"pair_sum": {"runtime_s": round(runtime, 6), "max_stderr": float(mc_se.max())}},
        "n_range": [int(ns[0]), int(ns[-1])],
        "atom_count": cloud.n_atoms,
        "g2_bg": config.g2_bg,
    }


def _load_overlay(path):
    if not path:
        return None
    ns, g2s = [], []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        next(reader)
        for rec in reader:
            if rec:
                ns.append(float(rec[0]))
                g2s.append(float(rec[1]))
    return np.array(ns), np.array(g2s)


_ASYMPTOTE = {
    (3, "asymptote_leading"): lambda D, tau: dd_asymptote(D, tau, "leading"),
    (3, "asymptote_corrected"): lambda D, tau: dd_asymptote(D, tau, "corrected"),
    (6, "asymptote_leading"): lambda D, tau: vdw_asymptote(D, tau, "leading"),
    (6, "asymptote_corrected"): lambda D, tau: vdw_asymptote(D, tau, "corrected"),
}


def _evaluate_method(method, config, pot, D, sigma, taus, threads) -> ComplexSeries:
    """One interference series on the dimensionless grid."""
    omega = characteristic_frequency(pot, sigma) if sigma else None
    if method == "pair_sum":
        if config.geometry.axis_sigmas_um is not None:
            axis = config.geometry.axis_sigmas_um
        else:
            axis = tuple(sigma if ax < int(D) else 0.0 for ax in range(3))
        cloud = sample_gaussian_cloud(axis, config.mc.atom_count, config.mc.seed)
        series = pair_sum(cloud, pot, taus / omega)
        series.grid = taus
        series.grid_is_tau = True
        return series
    if method == "distance_mc":
        return distance_mc(int(D), pot.alpha, taus, config.mc.distance_samples, config.mc.seed)
    if method == "quadrature":
        vals = _parallel_map(lambda t: quadrature_point(D, pot.alpha, float(t)), list(taus), threads)
        return ComplexSeries(
            grid=taus,
            values=np.array(vals, dtype=complex),
            grid_is_tau=True,
            meta={"method": "quadrature", "D": D, "alpha": pot.alpha},
        )
    if method == "short_time":
        vals = np.array([short_time_dd3(t) if t > 0 else 1.0 + 0.0j for t in taus])
        # the expansion overshoots |P| = 1 outside its validity range
        mod = np.abs(vals)
        vals = np.where(mod > 1.0, vals / mod, vals)
        return ComplexSeries(grid=taus, values=vals, grid_is_tau=True, meta={"method": "short_time"})
    if method in ("asymptote_leading", "asymptote_corrected"):
        vals = _ASYMPTOTE[(pot.alpha, method)](D, taus)
        vals = np.asarray(vals, dtype=complex)
        mod = np.abs(vals)
        vals = np.where(mod > 1.0, vals / mod, vals)  # asymptote invalid at small tau
        return ComplexSeries(grid=taus, values=vals, grid_is_tau=True, meta={"method": method})
    raise ConfigError([f"methods: unknown method {method!r}"])


def _tau_grid(config: ExperimentConfig, omega: float) -> np.ndarray:
    grid = config.time_grid.build()
    if config.time_grid.unit == "us":
        return grid * omega
    return grid


def _run_decay(config: ExperimentConfig, out: Path, threads: int) -> dict:
    """|P|^2 decay curves per potential and dimension (tau grid)."""
    sigma = config.geometry.resolved_sigma()
    files = []
    method_stats: dict = {}
    pot_names = {3: "dd", 6: "vdw"}
    for pot in config.potential_specs:
        omega = characteristic_frequency(pot, sigma)
        taus = _tau_grid(config, omega)
        cols: list[tuple[str, np.ndarray]] = [("tau", taus), ("time_us", taus / omega)]
        curves = []
        for D in config.dimensions:
            for method in config.methods:
                t0 = time.perf_counter()
                series = _evaluate_method(method, config, pot, float(D), sigma, taus, threads)
                dt = time.perf_counter() - t0
                tag = f"{method}_D{D}"
                cols.extend(_series_columns(tag, series))
                curves.append((tag, series))
                stat = method_stats.setdefault(f"{pot_names[pot.alpha]}.{tag}", {})
                stat["runtime_s"] = round(dt, 6)
                if series.stderr_re is not None:
                    stat["max_stderr"] = float(series.combined_stderr().max())
        name = pot_names[pot.alpha]
        if "csv" in config.outputs:
            path = out / f"decay_{name}.csv"
            emit_csv(path, cols)
            files.append(str(path))
        if "svg" in config.outputs:

            def draw(ax, curves=curves, taus=taus, name=name):
                for tag, series in curves:
                    y = np.clip(series.modsq(), 1e-12, None)
                    style = "--" if "asymptote" in tag else "-"
                    ax.plot(taus, y, style, label=tag)
                ax.set_xscale("log")
                ax.set_yscale("log")
                ax.set_xlabel(r"$\tau$")
                ax.set_ylabel(r"$|P|^2$")
                ax.set_title(name)
                ax.legend(fontsize=7)

            path = out / f"decay_{name}.svg"
            emit_svg(path, draw)
            files.append(str(path))
    return {"files": files, "methods": method_stats, "sigma_um": sigma}


def _run_series_scenario(config: ExperimentConfig, out: Path, threads: int) -> dict:
    """Shared driver for the shorttime and custom scenarios: every selected
    method on one grid."""
    pot = config.potential_specs[0]
    sigma = config.geometry.resolved_sigma()
    D = config.geometry.resolved_dimension()
    omega = characteristic_frequency(pot, sigma) if sigma else None
    taus = _tau_grid(config, omega)
    cols: list[tuple[str, np.ndarray]] = [("tau", taus)]
    if omega:
        cols.append(("time_us", taus / omega))
    method_stats = {}
    curves = []
    for method in config.methods:
        t0 = time.perf_counter()
        series = _evaluate_method(method, config, pot, D, sigma, taus, threads)
        method_stats[method] = {"runtime_s": round(time.perf_counter() - t0, 6)}
        if series.stderr_re is not None:
            method_stats[method]["max_stderr"] = float(series.combined_stderr().max())
        cols.extend(_series_columns(method, series))
        curves.append((method, series))
    files = []
    if "csv" in config.outputs:
        path = out / f"{config.scenario}_p.csv"
        emit_csv(path, cols)
        files.append(str(path))
    if "svg" in config.outputs:

        def draw(ax):
            for tag, series in curves:
                ax.plot(taus, np.clip(series.modsq(), 1e-12, None), label=tag)
            ax.set_xscale("log")
            ax.set_xlabel(r"$\tau$")
            ax.set_ylabel(r"$|P|^2$")
            ax.legend(fontsize=8)

        path = out / f"{config.scenario}_p.svg"
        emit_svg(path, draw)
        files.append(str(path))
    return {"files": files, "methods": method_stats, "alpha": pot.alpha, "D": D}


def _run_ramsey(config: ExperimentConfig, out: Path, threads: int) -> dict:
    """Two-pulse sequence: P -> (1 + P(2t))/2, then the two-excitation g2."""
    pot = config.potential_specs[0]
    sigma = config.geometry.resolved_sigma()
    D = config.geometry.resolved_dimension()
    omega = characteristic_frequency(pot, sigma)
    taus = _tau_grid(config, omega)
    method = config.methods[0]

    t0 = time.perf_counter()
    base = _evaluate_method(method, config, pot, D, sigma, 2.0 * taus, threads)
    base.grid = taus  # values are P(2 tau) on the output grid
    pair_amp = ramsey_transform(base)
    runtime = time.perf_counter() - t0

    dist_m = poisson_amplitudes(config.excitation.mean, config.excitation.m_max)
    p_abs = np.minimum(np.abs(pair_amp.values), 1.0)
    g2 = np.array([g2_longtime(dist_m, p) for p in p_abs])
    g2 = apply_background(g2, config.g2_bg)

    files = []
    if "csv" in config.outputs:
        path = out / "ramsey_g2.csv"
        cols = [("tau", taus), ("time_us", taus / omega)]
        cols.extend(_series_columns("p_doubled", base))
        cols.extend(_series_columns("ramsey", pair_amp))
        cols.append(("g2", g2))
        emit_csv(path, cols)
        files.append(str(path))
    if "svg" in config.outputs:
        plateau = g2_longtime(dist_m, 0.5)

        def draw(ax):
            ax.plot(taus, g2, "-", label=r"$g^{(2)}$ after one cycle")
            ax.axhline(plateau, color="gray", ls=":", label="plateau")
            ax.set_xscale("log")
            ax.set_xlabel(r"$\tau$")
            ax.set_ylabel(r"$g^{(2)}$")
            ax.legend()

        path = out / "ramsey_g2.svg"
        emit_svg(path, draw)
        files.append(str(path))
    return {
        "files": files,
        "methods": {method: {"runtime_s": round(runtime, 6)}},
        "plateau": g2_longtime(dist_m, 0.5),
        "alpha": pot.alpha,
        "D": D,
    }
