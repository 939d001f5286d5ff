"""Scatter-plot rendering for experiment reports.

Figures are written as SVG next to the delimited report output. Each
plotter reads only the report's records, so plots can be regenerated
from a saved report.json.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .experiments.report import ExperimentReport  # noqa: E402


def _scatter(path: Path, xs, ys, xlabel: str, ylabel: str, title: str) -> None:
    fig, ax = plt.subplots(figsize=(4.0, 4.0))
    ax.scatter(xs, ys, s=18, alpha=0.6, edgecolors="none")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def plot_omission(report: ExperimentReport, path: Path) -> bool:
    points = [
        (r["r_dat_only"], r["r_acc_dat"])
        for r in report.records
        if r.get("r_dat_only") is not None and r.get("r_acc_dat") is not None
    ]
    if not points:
        return False
    xs, ys = zip(*points)
    _scatter(path, xs, ys, "R_DAT-only", "ACC-DAT rate", "Omission vs object order (per verb)")
    return True


def plot_cooccurrence(report: ExperimentReport, path: Path) -> bool:
    points = [
        (r["delta_npmi"], r["acc_dat_preferred"])
        for r in report.records
        if r.get("delta_npmi") is not None
    ]
    if not points:
        return False
    xs, ys = zip(*points)
    _scatter(path, xs, ys, "ΔNPMI", "ACC-DAT rate", "Co-occurrence vs object order (per example)")
    return True


def plot_topic_ii(report: ExperimentReport, path: Path) -> bool:
    points = [
        (r["r_acc_dat"], r["topic_acc_rate"])
        for r in report.records
        if r.get("r_acc_dat") is not None and r.get("topic_acc_rate") is not None
    ]
    if not points:
        return False
    xs, ys = zip(*points)
    _scatter(path, xs, ys, "ACC-DAT rate", "ACC-topicalized rate", "Object order vs topic choice (per verb)")
    return True


PLOTTERS = {
    "omission": plot_omission,
    "cooccurrence": plot_cooccurrence,
    "topic-ii": plot_topic_ii,
}


def render_plots(report: ExperimentReport, out_dir: str | Path) -> list[Path]:
    """Render the report's figures, if any are defined for it."""
    plotter = PLOTTERS.get(report.name)
    if plotter is None:
        return []
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"{report.name}.svg"
    if plotter(report, path):
        return [path]
    return []
