"""SVG figures for benchmark reports: wall time (log scale) and quality vs. n."""

from __future__ import annotations

from pathlib import Path

import matplotlib
from matplotlib.figure import Figure

from .bench import BenchmarkReport

STYLE = {
    "font.family": "DejaVu Sans",
    "font.size": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "figure.figsize": (4.8, 3.2),
    "svg.hashsalt": "smpp",
    "svg.fonttype": "path",
}

LABELS = {"vqe": "VQE", "qaoa": "QAOA", "wqaoa": "W-QAOA"}
MARKERS = {"vqe": "o", "qaoa": "s", "wqaoa": "^"}
MODE_TITLES = {"noise_free": "noise-free", "noise_aware": "noise-aware"}


def _series(report: BenchmarkReport, mode: str, column: str) -> dict[str, tuple[list, list]]:
    out: dict[str, tuple[list, list]] = {}
    for row in report.aggregates():
        if row["mode"] != mode:
            continue
        xs, ys = out.setdefault(row["algorithm"], ([], []))
        xs.append(row["n"])
        ys.append(row[column])
    return out


def _figure(report: BenchmarkReport, mode: str, column: str, ylabel: str, log: bool) -> Figure:
    fig = Figure()
    ax = fig.add_subplot()
    for algo, (xs, ys) in _series(report, mode, column).items():
        (line,) = ax.plot(xs, ys, marker=MARKERS.get(algo, "o"), label=LABELS.get(algo, algo))
        line.set_gid(f"series-{algo}")
    if log:
        ax.set_yscale("log")
    ax.set_xlabel("number of locations")
    ax.set_ylabel(ylabel)
    ax.set_title(MODE_TITLES.get(mode, mode))
    ax.xaxis.get_major_locator().set_params(integer=True)
    ax.legend()
    fig.tight_layout()
    return fig


def time_figure(report: BenchmarkReport, mode: str) -> Figure:
    with matplotlib.rc_context(STYLE):
        return _figure(report, mode, "mean_wall_time_s", "calculation time [s]", log=True)


def quality_figure(report: BenchmarkReport, mode: str) -> Figure:
    with matplotlib.rc_context(STYLE):
        fig = _figure(report, mode, "mean_quality", "result quality", log=False)
        fig.axes[0].set_ylim(top=1.02)
        return fig


def write_plots(report: BenchmarkReport, path: str | Path) -> list[Path]:
    """Write ``<mode>_time.svg`` and ``<mode>_quality.svg`` into directory ``path``."""
    if not report.records:
        raise ValueError("cannot plot an empty report")
    if any(r.wall_time <= 0 for r in report.records):
        # log axis needs positive times; untimed reports get a quality plot only
        kinds = [("quality", quality_figure)]
    else:
        kinds = [("time", time_figure), ("quality", quality_figure)]
    out_dir = Path(path)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for mode in report.modes():
        for name, make in kinds:
            target = out_dir / f"{mode}_{name}.svg"
            with matplotlib.rc_context(STYLE):
                make(report, mode).savefig(target, format="svg", metadata={"Date": None})
            written.append(target)
    return written
