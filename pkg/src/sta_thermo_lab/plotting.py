"""Static SVG figures for each command, drawn with matplotlib's Agg canvas."""

from __future__ import annotations

from pathlib import Path

import matplotlib
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

# fixed ids and no timestamp keep SVG output stable between runs
matplotlib.rcParams["svg.hashsalt"] = "sta-thermo-lab"
SVG_METADATA = {"Date": None}

STYLE = {
    "font.size": 10,
    "axes.labelsize": 11,
    "legend.fontsize": 8,
    "lines.linewidth": 1.5,
}

FAMILY_COLORS = {
    "random_mixed": "tab:blue",
    "haar_pure": "tab:cyan",
    "diagonal": "0.55",
    "max_coherent": "tab:blue",
    "coherent_thermal": "tab:green",
    "red_boundary_1": "tab:red",
    "red_boundary_2": "tab:red",
    "work_max": "k",
    "entropy_zero": "k",
}


def new_figure(ncols: int = 1, width: float = 4.8, height: float = 3.6) -> Figure:
    with matplotlib.rc_context(STYLE):
        fig = Figure(figsize=(width * ncols, height))
        FigureCanvasAgg(fig)
        fig.subplots(1, ncols)
    return fig


def save(fig: Figure, path: Path) -> Path:
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata=SVG_METADATA)
    return path


def shortcut_figure(rows: list[dict], model_id: str) -> Figure:
    fig = new_figure()
    ax = fig.axes[0]
    for element in sorted({r["element"] for r in rows}):
        sel = [r for r in rows if r["element"] == element]
        s = [r["s"] for r in sel]
        ax.plot(s, [r["analytic_abs"] for r in sel], label=f"|{element}| closed form")
        ax.plot(s, [r["numeric_abs"] for r in sel], "--", label=f"|{element}| numerical")
    ax.set_xlabel("s = t / tau")
    ax.set_ylabel("|H_tqd| element")
    ax.set_title(model_id)
    ax.legend()
    return fig


def fidelity_figure(rows: list[dict], model_id: str) -> Figure:
    fig = new_figure()
    ax = fig.axes[0]
    for flag, label, style in ((1, "with shortcut", "o-"), (0, "bare", "s--")):
        sel = [r for r in rows if r["with_tqd"] == flag]
        if sel:
            ax.plot([r["tau"] for r in sel], [r["fidelity"] for r in sel], style, label=label)
    ax.set_xscale("log")
    ax.set_xlabel("tau")
    ax.set_ylabel("fidelity")
    ax.set_title(model_id)
    ax.legend()
    return fig


def _boundaries(ax, curves, x_key="C"):
    styles = {"diagonal": ("k", "diagonal boundary"), "pure": ("tab:red", "pure boundary")}
    for family, points in curves.items():
        color, label = styles[family]
        C = [p.work_target for p in points]
        ax.plot(C, [p.s_min for p in points], color=color, label=label)
        ax.plot(C, [p.s_max for p in points], color=color)


def scatter_figure(rows: list[dict], curves: dict, model_id: str) -> Figure:
    fig = new_figure()
    ax = fig.axes[0]
    for tag in dict.fromkeys(r["family_tag"] for r in rows):
        sel = [r for r in rows if r["family_tag"] == tag]
        ax.scatter([r["work"] for r in sel], [r["s_irr"] for r in sel], s=3,
                   color=FAMILY_COLORS.get(tag, "tab:purple"), label=tag, rasterized=len(sel) > 2000)
    _boundaries(ax, curves)
    ax.set_xlabel("work")
    ax.set_ylabel("S_irr")
    ax.set_title(model_id)
    ax.legend(markerscale=3)
    return fig


def coherence_figure(rows: list[dict], model_id: str) -> Figure:
    fig = new_figure(ncols=2)
    for ax, key, label in zip(fig.axes, ("work", "s_irr"), ("work", "S_irr")):
        for tag in dict.fromkeys(r["family_tag"] for r in rows):
            sel = [r for r in rows if r["family_tag"] == tag]
            ax.scatter([r["coherence"] for r in sel], [r[key] for r in sel], s=3,
                       color=FAMILY_COLORS.get(tag, "tab:purple"), label=tag, rasterized=len(sel) > 2000)
        ax.set_xlabel("C_rel of initial state")
        ax.set_ylabel(label)
    fig.axes[0].set_title(model_id)
    fig.axes[1].legend(markerscale=3)
    return fig


def frontier_figure(curves: dict, model_id: str) -> Figure:
    fig = new_figure()
    ax = fig.axes[0]
    _boundaries(ax, curves)
    ax.set_xlabel("work C")
    ax.set_ylabel("S_irr")
    ax.set_title(model_id)
    ax.legend()
    return fig


def sweep_figure(points, param: str) -> Figure:
    fig = new_figure(ncols=2)
    x = [p.param_value for p in points]
    left, right = fig.axes
    left.plot(x, [p.work_max_extract for p in points], color="tab:blue", label="max work state: work")
    left.plot(x, [p.s_irr_at_work_max for p in points], color="tab:orange", label="max work state: S_irr")
    left.set_xlabel(param)
    left.legend()
    right.plot(x, [p.zero_entropy_work for p in points], color="tab:red", label="zero-entropy state: work")
    for p in points:
        if p.crossing_at is not None:
            right.axvline(p.crossing_at, color="0.6", ls=":")
    right.set_xlabel(param)
    right.legend()
    return fig


def verify_figure(rows: list[dict], model_id: str) -> Figure:
    fig = new_figure()
    ax = fig.axes[0]
    ax.loglog([r["n_grid"] for r in rows], [r["sup_error"] for r in rows], "o-")
    ax.set_xlabel("n_grid")
    ax.set_ylabel("sup |numeric - closed form|")
    ax.set_title(model_id)
    return fig
