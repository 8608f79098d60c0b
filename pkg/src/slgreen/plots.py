"""Figure rendering for the report path.

Every scenario writes one PNG next to its delimited output. Non-interactive
backend only; nothing here touches a display.
"""

from __future__ import annotations

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .tables import ResultTable

_FIGSIZE = (6.4, 4.2)
_DPI = 140


def render_figure(scenario: str, table: ResultTable, path) -> None:
    fn = _RENDERERS.get(scenario)
    if fn is None:
        return
    fig = fn(table)
    fig.savefig(path, dpi=_DPI, bbox_inches="tight")
    plt.close(fig)


def _column(table: ResultTable, name: str) -> np.ndarray:
    idx = table.columns.index(name)
    return np.array([row[idx] for row in table.rows], dtype=float)


def _kernel_figure(table: ResultTable):
    x = _column(table, "x")
    xp = _column(table, "x_prime")
    mag = np.hypot(_column(table, "re_g"), _column(table, "im_g"))
    xs = np.unique(x)
    n = len(xs)
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    if n * n == len(mag):
        grid = mag.reshape(n, n)
        pcm = ax.pcolormesh(xs, xs, grid.T, shading="nearest", cmap="viridis")
        fig.colorbar(pcm, ax=ax, label="|G(x, x')|")
        ax.set_xlabel("x")
        ax.set_ylabel("x'")
    else:
        sc = ax.scatter(x, xp, c=mag, s=12, cmap="viridis")
        fig.colorbar(sc, ax=ax, label="|G(x, x')|")
        ax.set_xlabel("x")
        ax.set_ylabel("x'")
    ax.set_title("kernel magnitude")
    return fig


def _scatter_figure(table: ResultTable):
    row = table.rows[0]
    values = dict(zip(table.columns, row))
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    ax.bar(["T", "R"], [values["T"], values["R"]], color=["tab:blue", "tab:orange"])
    ax.axhline(1.0, color="gray", linestyle=":", linewidth=1)
    ax.set_ylabel("probability")
    ax.set_title(f"T = {values['T']:.6g}, R = {values['R']:.6g}")
    return fig


def _wavepacket_figure(table: ResultTable):
    x = _column(table, "x")
    prob = _column(table, "prob")
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    ax.plot(x, prob, lw=1.5)
    ax.axvline(0.0, color="gray", linestyle=":", linewidth=1)
    ax.set_xlabel("x")
    ax.set_ylabel(r"$|\psi|^2$")
    ax.set_title("outgoing packet density")
    return fig


def _scan_figure(table: ResultTable):
    eps = _column(table, "epsilon")
    T = _column(table, "T")
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    ax.loglog(eps, np.maximum(T, 1e-300), "o-")
    ax.invert_xaxis()
    ax.set_xlabel("mollifier width")
    ax.set_ylabel("transmission")
    ax.set_title("transmission versus regularization width")
    ax.grid(True, which="both", alpha=0.3)
    return fig


def _validate_figure(table: ResultTable):
    names = [str(row[0]) for row in table.rows]
    passed = [bool(row[1]) for row in table.rows]
    fig, ax = plt.subplots(figsize=(6.4, 0.4 * len(names) + 1.2))
    colors = ["tab:green" if p else "tab:red" for p in passed]
    ax.barh(range(len(names)), [1.0] * len(names), color=colors)
    ax.set_yticks(range(len(names)), names, fontsize=8)
    ax.set_xticks([])
    ax.set_title(f"{sum(passed)}/{len(passed)} checks passed")
    return fig


_RENDERERS = {
    "g0": _kernel_figure,
    "dress": _kernel_figure,
    "scatter": _scatter_figure,
    "wavepacket": _wavepacket_figure,
    "scan": _scan_figure,
    "validate": _validate_figure,
}
