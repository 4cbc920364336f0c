"""Command line interface.

Subcommands:

* ``erank`` - rank diagnostics of a yield panel.
* ``nmf`` - ensemble factor extraction with optional level removal;
  writes weight/fit tables and factor/weights plots.
* ``cluster`` - stability-checked clustering with one rank-1 factor per
  cluster; writes weight/fit tables and factor plots.
* ``stability`` - the cluster pipeline plus windowed (and optionally
  daily) weight trajectories per cluster.
* ``compare-rank1`` - squared errors of a one-factor NMF versus the
  rank-1 spectral truncation on one random positive matrix.

All tabular and plot files written by one invocation share a single
timestamp; ``--stamp`` pins it for reproducible file names, and with a
fixed ``--seed`` the tabular outputs are byte-identical across runs.
"""

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .clustering import star_kmeans, stat_clustering, verify_stability
from .diagnostics import (
    correlation_percent,
    curve_series,
    fit_report,
    interpretation_correlations,
    level_slope_curvature_correlations,
)
from .factors import (
    DENOISE_MODES,
    cluster_factor_model,
    daily_weights,
    denoise,
    ensemble_nmf,
    normalize_rows,
    reconstruct,
    windowed_weights,
)
from .ingest import drop_maturity, maturity_months, parse_treasury_tsv
from .linalg import erank, serial_correlation, sym_eigen
from .nmf import compare_one_factor_nmf
from .reporting import (
    Stamper,
    emit_cluster_plots,
    emit_ensemble_plots,
    emit_series_plot,
    fixed_stamper,
    format_number,
    write_fit,
    write_weight_series,
    write_weights,
)
from .seeds import derive_seed

LEVEL_CHOICES = {"min": "min_yield", "max": "max_yield", "10y": "ten_year"}


@dataclass(frozen=True)
class RunConfig:
    """Resolved options of one CLI invocation."""

    command: str
    input: str = None
    k: int = None
    runs: int = 100
    sets: int = None
    denoise: str = "none"
    drop: tuple = ()
    seed: int = 0
    use_median: bool = False
    window: int = 21
    daily: bool = False
    level: str = "ten_year"
    out_dir: str = "."
    stamp: str = None
    n: int = 10
    m: int = 20


def build_parser():
    parser = argparse.ArgumentParser(
        prog="yieldfactors",
        description="Factor extraction and diagnostics for daily yield panels.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_input(p):
        p.add_argument("--input", required=True, help="tab-delimited yield file")
        p.add_argument(
            "--drop",
            action="append",
            default=[],
            metavar="LABEL",
            help="maturity to drop before analysis (repeatable)",
        )

    def add_output(p):
        p.add_argument("--out-dir", default=".", help="directory for output files")
        p.add_argument(
            "--stamp",
            default=None,
            metavar="YYYY-MM-DD.HHMMSS",
            help="fixed timestamp for output file names",
        )

    p = sub.add_parser("erank", help="rank diagnostics of the panel")
    add_input(p)

    p = sub.add_parser("nmf", help="ensemble nonnegative factorization")
    add_input(p)
    p.add_argument("--k", type=int, required=True, help="number of factors")
    p.add_argument("--runs", type=int, default=100, help="ensemble size")
    p.add_argument(
        "--denoise", choices=DENOISE_MODES, default="none", help="level removal mode"
    )
    p.add_argument("--seed", type=int, default=0, help="base random seed")
    p.add_argument(
        "--median",
        action="store_true",
        help="aggregate runs by median/MAD instead of mean/SD",
    )
    add_output(p)

    def add_cluster_args(p):
        add_input(p)
        p.add_argument("--k", type=int, required=True, help="number of clusters")
        p.add_argument("--runs", type=int, default=100, help="k-means runs per vote")
        p.add_argument(
            "--sets",
            type=int,
            default=None,
            help="stability repetitions (default: same as --runs)",
        )
        p.add_argument("--seed", type=int, default=0, help="base random seed")
        p.add_argument(
            "--level",
            choices=sorted(LEVEL_CHOICES),
            default="10y",
            help="level series used in the correlation report",
        )
        add_output(p)

    p = sub.add_parser("cluster", help="deterministic clustering factor model")
    add_cluster_args(p)

    p = sub.add_parser("stability", help="cluster model plus weight trajectories")
    add_cluster_args(p)
    p.add_argument("--window", type=int, default=21, help="days per weight window")
    p.add_argument(
        "--daily", action="store_true", help="also write per-date weight trajectories"
    )

    p = sub.add_parser("compare-rank1", help="one-factor NMF versus rank-1 SVD")
    p.add_argument("--n", type=int, default=10, help="rows of the random matrix")
    p.add_argument("--m", type=int, default=20, help="columns of the random matrix")
    p.add_argument("--seed", type=int, default=0, help="base random seed")

    return parser


def config_from_args(args):
    fields = {"command": args.command}
    if hasattr(args, "input"):
        fields["input"] = args.input
        fields["drop"] = tuple(args.drop)
    for name in ("k", "runs", "seed", "denoise", "window", "daily", "n", "m", "stamp"):
        if hasattr(args, name):
            fields[name] = getattr(args, name)
    if hasattr(args, "median"):
        fields["use_median"] = args.median
    if hasattr(args, "sets"):
        fields["sets"] = args.sets if args.sets is not None else args.runs
    if hasattr(args, "level"):
        fields["level"] = LEVEL_CHOICES[args.level]
    if hasattr(args, "out_dir"):
        fields["out_dir"] = args.out_dir
    return RunConfig(**fields)


def _load_panel(config):
    panel = parse_treasury_tsv(Path(config.input).read_text())
    for label in config.drop:
        panel = drop_maturity(panel, label)
    return panel


def _make_stamp(config):
    stamper = fixed_stamper(config.stamp) if config.stamp else Stamper()
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    return out_dir, stamper.stamp()


def _print_matrix(matrix):
    for row in np.atleast_2d(np.asarray(matrix, dtype=float)):
        print("\t".join(format_number(round(float(v), 2)) for v in row))


def _print_rank_diagnostics(panel):
    corr = serial_correlation(panel.yields, panel.maturities)
    eig = sym_eigen(corr.entries)
    avg = 100.0 * corr.average_offdiagonal()
    print(f"Average pairwise correlation = {format_number(round(avg, 2))}")
    print(f"eRank = {format_number(round(erank(eig.values), 2))}")
    print(f"ModeRank = {format_number(round(erank(eig.values, exclude_first=True), 2))}")


def cmd_erank(config):
    panel = _load_panel(config)
    _print_rank_diagnostics(panel)
    return 0


def cmd_nmf(config):
    panel = _load_panel(config)
    print(f"Seed = {config.seed}")
    _print_rank_diagnostics(panel)
    series = curve_series(panel)
    noise = denoise(panel, config.denoise)
    result = ensemble_nmf(
        noise.values,
        config.k,
        config.runs,
        config.seed,
        use_median=config.use_median,
        log=print,
    )
    out_dir, stamp = _make_stamp(config)
    write_weights(
        result.weights,
        result.weights_spread,
        panel.maturities,
        out_dir,
        result.k_effective,
        config.runs,
        stamp,
        high_precision_spread=config.denoise != "none",
    )
    report = fit_report(noise.values, reconstruct(result.weights, result.factors))
    write_fit(report, panel.maturities, out_dir, result.k_effective, config.runs, stamp)
    emit_ensemble_plots(result, maturity_months(panel.maturities), out_dir, stamp)
    sc = correlation_percent(series.slope, series.curvature)[0, 0]
    print(f"Correlation between slope and curvature = {format_number(round(sc, 2))}")
    if noise.level is not None:
        fac_rows = np.vstack([noise.level, result.factors])
    else:
        fac_rows = result.factors
    print("Factor correlation matrix:")
    _print_matrix(correlation_percent(fac_rows))
    print("Correlation matrix between factors & slope + curvature:")
    _print_matrix(correlation_percent(fac_rows, np.vstack([series.slope, series.curvature])))
    return 0


def _cluster_pipeline(config):
    """Shared front half of the cluster and stability commands."""
    panel = _load_panel(config)
    print(f"Seed = {config.seed}")
    normalized = normalize_rows(panel)
    series = curve_series(panel, config.level)
    lsc, lsc_erank = level_slope_curvature_correlations(series)
    print("Correlations between level, slope, curvature:")
    _print_matrix(lsc)
    print(f"eRank = {format_number(round(lsc_erank, 2))}")
    stable = True
    if config.sets >= 2:
        stable = verify_stability(
            normalized, config.k, config.runs, config.sets, config.seed
        )
    if stable:
        clustering = stat_clustering(
            normalized, config.k, config.runs, derive_seed(config.seed, 3, 0)
        )
    else:
        print("Unstable clustering, use *K-means.")
        clustering, freq = star_kmeans(
            normalized, config.k, config.runs, config.sets, derive_seed(config.seed, 4)
        )
        print(f"Modal partition frequency = {freq} of {config.sets}")
    model = cluster_factor_model(panel, clustering)
    out_dir, stamp = _make_stamp(config)
    k_eff = clustering.k_effective
    write_weights(
        model.weights, None, panel.maturities, out_dir, k_eff, config.runs, stamp
    )
    report = fit_report(panel.yields, reconstruct(model.weights, model.factors))
    write_fit(report, panel.maturities, out_dir, k_eff, config.runs, stamp)
    emit_cluster_plots(model, out_dir, stamp)
    print("Factor correlation matrix:")
    _print_matrix(correlation_percent(model.factors))
    print("Correlations between factors & level, slope, curvature:")
    _print_matrix(interpretation_correlations(model.factors, series))
    return panel, model, out_dir, stamp


def cmd_cluster(config):
    _cluster_pipeline(config)
    return 0


def cmd_stability(config):
    panel, model, out_dir, stamp = _cluster_pipeline(config)
    clustering = model.clustering
    k_eff = clustering.k_effective
    windows = windowed_weights(panel, clustering, config.window)
    for a in range(1, k_eff + 1):
        members = np.flatnonzero(clustering.assignment == a)
        trajectory = np.stack([w[members, a - 1] for w in windows])
        write_weight_series(
            trajectory, out_dir, a, k_eff, config.runs, stamp, daily=False
        )
        emit_series_plot(trajectory, a, out_dir, stamp, daily=False)
    if config.daily:
        daily = daily_weights(panel, model)
        for a in range(1, k_eff + 1):
            members = np.flatnonzero(clustering.assignment == a)
            trajectory = daily.weights[:, members, a - 1]
            write_weight_series(
                trajectory, out_dir, a, k_eff, config.runs, stamp, daily=True
            )
            emit_series_plot(trajectory, a, out_dir, stamp, daily=True)
    return 0


def cmd_compare_rank1(config):
    nmf_error, svd_error = compare_one_factor_nmf(config.n, config.m, config.seed)
    print(f"NMF error = {nmf_error}")
    print(f"SVD error = {svd_error}")
    return 0


_COMMANDS = {
    "erank": cmd_erank,
    "nmf": cmd_nmf,
    "cluster": cmd_cluster,
    "stability": cmd_stability,
    "compare-rank1": cmd_compare_rank1,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    config = config_from_args(args)
    try:
        return _COMMANDS[config.command](config)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
