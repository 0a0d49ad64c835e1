"""Matplotlib rendering of the figure data files (PNG, written next to the CSV)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

STYLE = {
    "binary-optimal": dict(color="tab:green", ls="-"),
    "apx": dict(color="tab:blue", ls="--"),
    "cpp": dict(color="tab:red", ls=":"),
    "restricted-exact": dict(color="tab:purple", ls="-."),
    "brute-force": dict(color="black", ls="-"),
}


def new_figure(width=6.4, height=None):
    golden = (np.sqrt(5.0) - 1.0) / 2.0
    fig, ax = plt.subplots(figsize=(width, height or width * golden))
    ax.grid(True, alpha=0.3)
    return fig, ax


def save(fig, path) -> None:
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _style(label: str) -> dict:
    return STYLE.get(label.split(" ")[0], {})


def plot_ratio_curves(ks, curves: dict[str, list[float]], path) -> None:
    fig, ax = new_figure()
    for name, ys in curves.items():
        ax.plot(ks, ys, label=name.upper(), **_style(name))
    ax.set_xlabel("K")
    ax.set_ylabel("approximation ratio")
    ax.set_xscale("log", base=2)
    ax.legend()
    save(fig, path)


def plot_cdfs(series: dict[str, np.ndarray], path, title: str = "") -> None:
    fig, ax = new_figure()
    for label, values in series.items():
        x = np.sort(values)
        y = np.arange(1, len(x) + 1) / len(x)
        ax.step(x, y, where="post", label=label, **_style(label))
    ax.set_xlabel("SNR boost (dB)")
    ax.set_ylabel("CDF")
    ax.set_title(title)
    ax.legend(fontsize=8)
    save(fig, path)


def plot_lines(x, series: dict[str, list[float]], path, xlabel: str, ylabel: str) -> None:
    fig, ax = new_figure()
    for label, ys in series.items():
        ax.plot(x, ys, marker="o", label=label, **_style(label))
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.legend(fontsize=8)
    save(fig, path)
