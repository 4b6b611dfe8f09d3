"""Figure builders for simulator timeseries and entropy-sweep CSVs.

Every figure id maps to a declarative FigureSpec; rendering is a pure
function of the input files (fixed style, no timestamps), so re-running
produces byte-identical images.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .io import MissingColumn, Table, load_table

_LINESTYLES = ["-", "-.", ":", "--", "-"]
_COLORS = ["tab:blue", "tab:red", "tab:purple", "tab:green", "black"]


@dataclass
class FigureSpec:
    """One renderable figure: inputs, column selections, and guide lines."""

    figure_id: str
    inputs: list
    kind: str  # middle_population | current | sigma | populations |
    #            entropy_family | reduced_entropy_family
    column: str = ""  # for the single-column kinds
    labels: list = field(default_factory=list)
    title: str = ""
    ylabel: str = ""


_KINDS = {
    "fig1": ("middle_population", "", "middle-well population", "N_m"),
    "fig2": ("current", "I_m", "current into the middle well", "I_m"),
    "fig3": ("sigma", "sigma_lm", "coherence of the (m-1, m) pair", "sigma"),
    "fig4": ("sigma", "sigma_lr", "coherence of the (m-1, m+1) pair", "sigma"),
    "fig5": ("populations", "", "well populations", "N_j"),
    "fig6": ("sigma", "sigma_lm", "coherence of the (m-1, m) pair", "sigma"),
    "fig7": ("entropy_family", "", "pseudo-entropy by chain length", "zeta_n"),
    "fig8": ("entropy_family", "", "pseudo-entropy by chain length", "zeta_n"),
    "fig9": ("entropy_family", "", "pseudo-entropy by chain length", "zeta_n"),
    "fig10": ("entropy_family", "", "pseudo-entropy by chain length", "zeta_n"),
    "fig11": ("reduced_entropy_family", "zeta_r", "middle-three pseudo-entropy", "zeta_n_r"),
    "fig12": ("reduced_entropy_family", "zeta_r", "middle-three pseudo-entropy", "zeta_n_r"),
}

FIGURE_IDS = tuple(sorted(_KINDS, key=lambda s: int(s[3:])))


def make_spec(figure_id: str, inputs, labels=None) -> FigureSpec:
    if figure_id not in _KINDS:
        raise ValueError(f"unknown figure id {figure_id!r} (have {FIGURE_IDS})")
    kind, column, title, ylabel = _KINDS[figure_id]
    return FigureSpec(
        figure_id=figure_id,
        inputs=list(inputs),
        kind=kind,
        column=column,
        labels=list(labels or []),
        title=title,
        ylabel=ylabel,
    )


def _label(spec: FigureSpec, k: int, path) -> str:
    if k < len(spec.labels):
        return spec.labels[k]
    parent = os.path.basename(os.path.dirname(str(path)))
    stem = os.path.splitext(os.path.basename(str(path)))[0]
    return parent or stem


def _style(k: int):
    return {
        "color": _COLORS[k % len(_COLORS)],
        "linestyle": _LINESTYLES[k % len(_LINESTYLES)],
        "linewidth": 1.4,
    }


def _middle_column(table: Table) -> str:
    m = (table.n_wells + 1) // 2
    return f"N_{m}"


def _plot_one_column_per_input(ax, spec, column_of):
    for k, path in enumerate(spec.inputs):
        table = load_table(path)
        col = column_of(table)
        ax.plot(table["t"], table[col], label=_label(spec, k, path), **_style(k))


def build_figure(spec: FigureSpec):
    """Render a FigureSpec into a matplotlib Figure (pure, deterministic)."""
    if not spec.inputs:
        raise ValueError("figure needs at least one input CSV")
    fig, ax = plt.subplots(figsize=(6.4, 4.2), dpi=150)

    if spec.kind == "middle_population":
        _plot_one_column_per_input(ax, spec, _middle_column)
    elif spec.kind in ("current", "sigma"):
        _plot_one_column_per_input(ax, spec, lambda table: spec.column)
    elif spec.kind == "populations":
        table = load_table(spec.inputs[0])
        n = table.n_wells
        m = (n + 1) // 2
        for k, j in enumerate(range(1, m + 1)):
            ax.plot(table["t"], table[f"N_{j}"], label=f"N_{j}", **_style(k))
        total = sum(table[f"N_{j}"][0] for j in range(1, n + 1))
        ax.axhline(total / n, color="0.4", linewidth=0.9,
                   label="equal populations")
    elif spec.kind == "entropy_family":
        table = load_table(spec.inputs[0])
        for k, (n, col) in enumerate(sorted(table.zeta_columns())):
            ax.plot(table["t"], table[col], label=f"zeta_{n}", **_style(k))
            ax.axhline(math.log(n), color="0.55", linewidth=0.8)
    elif spec.kind == "reduced_entropy_family":
        for k, path in enumerate(spec.inputs):
            table = load_table(path)
            n = table.n_wells
            ax.plot(table["t"], table["zeta_r"],
                    label=_label(spec, k, path) or f"n={n}", **_style(k))
            ax.axhline(3.0 / n * math.log(n), color="0.55", linewidth=0.8)
    else:
        raise ValueError(f"unknown figure kind {spec.kind!r}")

    ax.set_xlabel("Jt")
    ax.set_ylabel(spec.ylabel)
    ax.set_title(spec.title)
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    return fig


def render(spec: FigureSpec, out_path) -> str:
    """Write the figure as a PNG; byte-stable across reruns."""
    fig = build_figure(spec)
    try:
        fig.savefig(out_path, format="png", metadata={"Software": None})
    finally:
        plt.close(fig)
    return str(out_path)
