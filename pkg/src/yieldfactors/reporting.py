"""Serialization of weights, fit reports and weight series, plus SVG plots.

File layouts are tab-delimited with LF endings and no quoting or header:

* ``w.<k>.<runs>.<stamp>.txt`` - maturity label, K weight columns in
  percent rounded to 2 decimals and, when spreads are given, K spread
  columns in percent (6 decimals in high-precision mode, else 2).
* ``rss.<k>.<runs>.<stamp>.txt`` - maturity label, fit correlation in
  percent and squared error, both rounded to 2 decimals.
* ``wseries[.daily].<cluster>.<k>.<runs>.<stamp>.txt`` - period index,
  then the cluster members' weights in percent rounded to 6 decimals.

Plots are emitted as 1800 x 1800 logical-unit SVG files named
``Factor.<j>.<stamp>.svg`` and ``Weights[.daily].<j>.<stamp>.svg``.
Numbers are rendered the way the reference environment prints rounded
numerics: trailing zeros dropped, scientific notation below 1e-4, "NA"
for undefined values.
"""

from datetime import datetime, timedelta
from pathlib import Path

import matplotlib as mpl
import numpy as np
from matplotlib.figure import Figure

PLOT_COLORS = ("green", "red", "blue", "black")

STAMP_FORMAT = "%Y-%m-%d.%H%M%S"

_PLOT_RC = {
    "svg.hashsalt": "yieldfactors",
    "font.size": 42,
    "axes.labelsize": 46,
    "xtick.labelsize": 36,
    "ytick.labelsize": 36,
    "lines.linewidth": 4.0,
    "axes.linewidth": 2.0,
    "xtick.major.size": 14,
    "ytick.major.size": 14,
    "xtick.major.width": 2.0,
    "ytick.major.width": 2.0,
}


def format_number(x):
    """Render a rounded number without trailing zeros; NaN renders "NA"."""
    v = float(x)
    if v != v:
        return "NA"
    if v == 0:
        return "0"
    if v == int(v) and abs(v) < 1e16:
        return str(int(v))
    return repr(v)


class Stamper:
    """Monotonic file-name timestamps with an injectable clock.

    ``stamp()`` formats the clock as YYYY-MM-DD.HHMMSS; if the clock has
    not advanced past the previous stamp it is bumped by one second, so
    stamps are strictly increasing within a process.
    """

    def __init__(self, clock=None):
        self._clock = clock if clock is not None else datetime.now
        self._last = None

    def stamp(self):
        now = self._clock().replace(microsecond=0)
        if self._last is not None and now <= self._last:
            now = self._last + timedelta(seconds=1)
        self._last = now
        return now.strftime(STAMP_FORMAT)


def fixed_stamper(text):
    """A Stamper pinned at a fixed start time parsed from a stamp string."""
    try:
        start = datetime.strptime(text, STAMP_FORMAT)
    except ValueError:
        raise ValueError(
            f"cannot parse {text!r} as a YYYY-MM-DD.HHMMSS stamp"
        ) from None
    return Stamper(clock=lambda: start)


def write_weights(
    weights, spreads, labels, out_dir, k, runs, stamp, high_precision_spread=False
):
    """Write the weights file; spreads may be None for spread-free models.

    Weights (and spreads) are fractions; both are written in percent.
    Spread columns get 6 decimals in high-precision mode, else 2.
    """
    weights = np.asarray(weights, dtype=float)
    labels = tuple(labels)
    if weights.shape[0] != len(labels):
        raise ValueError(f"{len(labels)} labels for {weights.shape[0]} weight rows")
    if spreads is not None:
        spreads = np.asarray(spreads, dtype=float)
        if spreads.shape != weights.shape:
            raise ValueError(
                f"spread shape {spreads.shape} does not match weights {weights.shape}"
            )
    digits = 6 if high_precision_spread else 2
    lines = []
    for i, label in enumerate(labels):
        cells = [label]
        cells.extend(format_number(round(v * 100.0, 2)) for v in weights[i])
        if spreads is not None:
            cells.extend(format_number(round(v * 100.0, digits)) for v in spreads[i])
        lines.append("\t".join(cells))
    path = Path(out_dir) / f"w.{k}.{runs}.{stamp}.txt"
    path.write_text("\n".join(lines) + "\n")
    return path


def write_fit(report, labels, out_dir, k, runs, stamp):
    """Write the per-maturity fit file (correlation percent, squared error)."""
    labels = tuple(labels)
    if report.correlations.shape[0] != len(labels):
        raise ValueError(
            f"{len(labels)} labels for {report.correlations.shape[0]} report rows"
        )
    lines = []
    for label, rho, err in zip(labels, report.correlations, report.errors):
        lines.append(
            "\t".join(
                (label, format_number(round(float(rho), 2)), format_number(round(float(err), 2)))
            )
        )
    path = Path(out_dir) / f"rss.{k}.{runs}.{stamp}.txt"
    path.write_text("\n".join(lines) + "\n")
    return path


def write_weight_series(series, out_dir, cluster, k, runs, stamp, daily=False):
    """Write one cluster's weight series, one row per period.

    ``series`` is periods x members (fractions); values are written in
    percent rounded to 6 decimals after a 1-based period index.
    """
    series = np.asarray(series, dtype=float)
    if series.ndim != 2:
        raise ValueError(f"expected a periods x members matrix, got shape {series.shape}")
    lines = []
    for p in range(series.shape[0]):
        cells = [str(p + 1)]
        cells.extend(format_number(round(v * 100.0, 6)) for v in series[p])
        lines.append("\t".join(cells))
    tag = "wseries.daily" if daily else "wseries"
    path = Path(out_dir) / f"{tag}.{cluster}.{k}.{runs}.{stamp}.txt"
    path.write_text("\n".join(lines) + "\n")
    return path


def _plot_lines(path, x, series_list, colors, styles, xlabel, ylabel, ylim=None):
    with mpl.rc_context(_PLOT_RC):
        fig = Figure(figsize=(25.0, 25.0))
        ax = fig.add_subplot(111)
        for y, color, style in zip(series_list, colors, styles):
            ax.plot(x, y, color=color, linestyle=style)
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        if ylim is not None and ylim[0] < ylim[1]:
            ax.set_ylim(*ylim)
        fig.savefig(path, format="svg", metadata={"Date": None})
    return path


def _banded(values, spread):
    series = [values]
    styles = ["-"]
    if spread is not None:
        series.extend([values + spread, values - spread])
        styles.extend([":", ":"])
    return series, styles


def emit_factor_plot(values, spread, index, out_dir, stamp):
    """One factor's time-series plot, with dotted +/-1 spread bands if given."""
    values = np.asarray(values, dtype=float)
    color = PLOT_COLORS[(index - 1) % len(PLOT_COLORS)]
    x = np.arange(1, values.size + 1)
    series, styles = _banded(values, spread)
    ylim = None
    if spread is not None:
        ylim = (
            float((values - 1.1 * spread).min()),
            float((values + 1.1 * spread).max()),
        )
    path = Path(out_dir) / f"Factor.{index}.{stamp}.svg"
    return _plot_lines(
        path, x, series, [color] * len(series), styles, "Days", "Factor", ylim
    )


def emit_weights_plot(values, spread, months, index, out_dir, stamp):
    """One factor's weights against log maturity, with optional bands."""
    values = np.asarray(values, dtype=float)
    color = PLOT_COLORS[(index - 1) % len(PLOT_COLORS)]
    x = np.log(np.asarray(months, dtype=float))
    series, styles = _banded(values, spread)
    ylim = None
    if spread is not None:
        ylim = (
            float((values - 1.1 * spread).min()),
            float((values + 1.1 * spread).max()),
        )
    path = Path(out_dir) / f"Weights.{index}.{stamp}.svg"
    return _plot_lines(
        path, x, series, [color] * len(series), styles, "Log(Maturity)", "Weight", ylim
    )


def emit_ensemble_plots(result, months, out_dir, stamp):
    """Factor and weights plots for every factor of an ensemble result."""
    paths = []
    for j in range(1, result.k_effective + 1):
        paths.append(
            emit_factor_plot(
                result.factors[j - 1], result.factors_spread[j - 1], j, out_dir, stamp
            )
        )
        paths.append(
            emit_weights_plot(
                result.weights[:, j - 1],
                result.weights_spread[:, j - 1],
                months,
                j,
                out_dir,
                stamp,
            )
        )
    return paths


def emit_cluster_plots(model, out_dir, stamp):
    """Factor plots only (no bands, no weights plots) for a cluster model."""
    paths = []
    for j in range(1, model.factors.shape[0] + 1):
        paths.append(emit_factor_plot(model.factors[j - 1], None, j, out_dir, stamp))
    return paths


def emit_series_plot(series, cluster, out_dir, stamp, daily=False):
    """One cluster's weight trajectories, one line per member maturity."""
    series = np.asarray(series, dtype=float)
    x = np.arange(1, series.shape[0] + 1)
    lines = [series[:, i] for i in range(series.shape[1])]
    colors = [PLOT_COLORS[i % len(PLOT_COLORS)] for i in range(series.shape[1])]
    tag = "Weights.daily" if daily else "Weights"
    path = Path(out_dir) / f"{tag}.{cluster}.{stamp}.svg"
    return _plot_lines(
        path, x, lines, colors, ["-"] * len(lines), "Period", "Weight", None
    )
