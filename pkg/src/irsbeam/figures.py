"""Campaigns behind each figure: CSV tables plus an optional rendered PNG."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

from .baselines import cpp_ratio_bound, sdr_ratio_bound
from .kary import apx_ratio_bound
from .sim import IRS_SWEEP, ChannelModelConfig, EstimationConfig, run_monte_carlo

FIGURE_IDS = ("ratio-curves", "cdf-k2", "cdf-k4", "percentile-vs-n", "boost-vs-beta", "percentile-vs-beta", "cdf-noise")

CDF_SIZES = (100, 200)
SWEEP_SIZES = (25, 50, 100, 200)
NOISE_LEVELS = (-90.0, -50.0)


def algorithms_for(k: int) -> tuple[str, ...]:
    return ("binary-optimal", "apx", "cpp") if k == 2 else ("apx", "cpp")


@dataclass
class FigureData:
    figure_id: str
    header: list[str]
    rows: list[list] = field(default_factory=list)
    render: Optional[Callable[[Path], None]] = None

    def csv_text(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.header)
        w.writerows(self.rows)
        return buf.getvalue()


def _fmt_db(x: float) -> str:
    return f"{x:.4f}"


def _ratio_curves(kmax: int = 64) -> FigureData:
    ks = list(range(2, kmax + 1))
    curves = {
        "apx": [apx_ratio_bound(k) for k in ks],
        "cpp": [cpp_ratio_bound(k) for k in ks],
        "sdr": [sdr_ratio_bound(k) for k in ks],
    }
    rows = [[k, f"{curves['apx'][i]:.9g}", f"{curves['cpp'][i]:.9g}", f"{curves['sdr'][i]:.9g}"] for i, k in enumerate(ks)]

    def render(path):
        from .plotting import plot_ratio_curves

        plot_ratio_curves(ks, curves, path)

    return FigureData("ratio-curves", ["k", "apx", "cpp", "sdr"], rows, render)


def _cdf(fig_id: str, k: int, sizes, seed: int, trials: int, workers: int) -> FigureData:
    algs = algorithms_for(k)
    columns, series = [], {}
    for n in sizes:
        rep = run_monte_carlo(ChannelModelConfig(n_elements=n, seed=seed), EstimationConfig(), algs, trials, k, workers=workers)
        for a in algs:
            columns.append(f"{a}_n{n}")
            series[f"{a} N={n}"] = rep.boosts_db[a]
    table = list(series.values())
    rows = [[t] + [_fmt_db(col[t]) for col in table] for t in range(trials)]

    def render(path):
        from .plotting import plot_cdfs

        plot_cdfs(series, path, title=f"K={k}")

    return FigureData(fig_id, ["trial"] + columns, rows, render)


def _cdf_noise(sizes, seed: int, trials: int, workers: int) -> FigureData:
    algs = algorithms_for(2)
    n = sizes[0] if sizes else 200
    columns, series = [], {}
    for noise in NOISE_LEVELS:
        cfg = ChannelModelConfig(n_elements=n, noise_dbm=noise, seed=seed)
        rep = run_monte_carlo(cfg, EstimationConfig("noisy"), algs, trials, 2, workers=workers)
        for a in algs:
            columns.append(f"{a}_sigma{noise:g}")
            series[f"{a} sigma2={noise:g} dBm"] = rep.boosts_db[a]
    table = list(series.values())
    rows = [[t] + [_fmt_db(col[t]) for col in table] for t in range(trials)]

    def render(path):
        from .plotting import plot_cdfs

        plot_cdfs(series, path, title=f"K=2, N={n}, noisy estimates")

    return FigureData("cdf-noise", ["trial"] + columns, rows, render)


def _percentile_vs_n(sizes, seed: int, trials: int, workers: int) -> FigureData:
    rows, lines = [], {}
    for k in (2, 4):
        algs = algorithms_for(k)
        for n in sizes:
            rep = run_monte_carlo(ChannelModelConfig(n_elements=n, seed=seed), EstimationConfig(), algs, trials, k, workers=workers)
            for a in algs:
                p1 = rep.percentile(a, 1)
                rows.append([k, n, a, _fmt_db(p1)])
                lines.setdefault(f"{a} K={k}", []).append(p1)

    def render(path):
        from .plotting import plot_lines

        plot_lines(list(sizes), lines, path, "N", "1st percentile SNR boost (dB)")

    return FigureData("percentile-vs-n", ["k", "n", "algorithm", "p1_db"], rows, render)


def _versus_beta(fig_id: str, stat: str, n: int, seed: int, trials: int, workers: int) -> FigureData:
    rows, lines, ratios = [], {}, []
    for pos in IRS_SWEEP:
        cfg = ChannelModelConfig(irs_pos=pos, n_elements=n, seed=seed)
        ratios.append(20.0 * math.log10(cfg.amplitude_ratio))
        for k in (2, 4):
            algs = algorithms_for(k)
            rep = run_monte_carlo(cfg, EstimationConfig(), algs, trials, k, workers=workers)
            for a in algs:
                v = rep.mean_db(a) if stat == "mean" else rep.percentile(a, 1)
                rows.append([f"{pos[0]:g}", f"{ratios[-1]:.4f}", k, a, _fmt_db(v)])
                lines.setdefault(f"{a} K={k}", []).append(v)

    def render(path):
        from .plotting import plot_lines

        ylabel = "average SNR boost (dB)" if stat == "mean" else "1st percentile SNR boost (dB)"
        plot_lines(ratios, lines, path, "beta0/beta_n (dB)", ylabel)

    col = "mean_db" if stat == "mean" else "p1_db"
    return FigureData(fig_id, ["irs_x", "beta_ratio_db", "k", "algorithm", col], rows, render)


def figure_data(figure_id: str, seed: int = 0, trials: int = 1000, n: Optional[int] = None, workers: int = 1) -> FigureData:
    if figure_id not in FIGURE_IDS:
        raise ValueError(f"unknown figure id {figure_id!r}; choose from {', '.join(FIGURE_IDS)}")
    if figure_id == "ratio-curves":
        return _ratio_curves()
    if figure_id in ("cdf-k2", "cdf-k4"):
        k = 2 if figure_id == "cdf-k2" else 4
        return _cdf(figure_id, k, (n,) if n else CDF_SIZES, seed, trials, workers)
    if figure_id == "cdf-noise":
        return _cdf_noise((n,) if n else (200,), seed, trials, workers)
    if figure_id == "percentile-vs-n":
        return _percentile_vs_n((n,) if n else SWEEP_SIZES, seed, trials, workers)
    stat = "mean" if figure_id == "boost-vs-beta" else "p1"
    return _versus_beta(figure_id, stat, n or 200, seed, trials, workers)


def write_figure(figure_id: str, out_dir, seed: int = 0, trials: int = 1000, n: Optional[int] = None, plot: bool = True, workers: int = 1) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    data = figure_data(figure_id, seed, trials, n, workers)
    csv_path = out / f"{figure_id}.csv"
    csv_path.write_text(data.csv_text(), encoding="utf-8")
    written = [csv_path]
    if plot and data.render is not None:
        png = out / f"{figure_id}.png"
        data.render(png)
        written.append(png)
    return written
