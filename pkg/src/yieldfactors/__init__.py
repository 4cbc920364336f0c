"""Factor extraction for daily Treasury yield-curve panels.

Two unsupervised pipelines over the same tab-delimited yield panels:
an ensemble of de-noised nonnegative matrix factorizations, and a
statistically deterministic clustering with one rank-1 factor per
cluster, plus rank diagnostics, fit reports and file/plot writers.
"""

from .clustering import (
    Clustering,
    CountsMatrix,
    aggregate_clusterings,
    align_centers,
    clustering_from_labels,
    counts_matrix,
    kmeans_run,
    partition_sets,
    star_kmeans,
    stat_clustering,
    verify_stability,
)
from .diagnostics import (
    LEVEL_DEFINITIONS,
    CurveSeries,
    FitReport,
    NelsonSiegelLoadings,
    correlation_percent,
    curve_series,
    factor_correlations,
    fit_report,
    interpretation_correlations,
    level_slope_curvature_correlations,
    nelson_siegel_loadings,
)
from .factors import (
    DENOISE_MODES,
    ClusterFactorModel,
    DailyWeights,
    DenoisedPanel,
    EnsembleResult,
    cluster_factor_model,
    daily_weights,
    denoise,
    ensemble_nmf,
    normalize_rows,
    reconstruct,
    windowed_weights,
)
from .ingest import (
    MATURITY_LABELS,
    MATURITY_MONTHS,
    YieldPanel,
    drop_maturity,
    maturity_months,
    panel_to_tsv,
    parse_treasury_tsv,
)
from .linalg import (
    CorrelationMatrix,
    SymEigen,
    erank,
    rank1_truncate,
    serial_correlation,
    sym_eigen,
)
from .nmf import NmfRun, compare_one_factor_nmf, nmf_run
from .reporting import (
    PLOT_COLORS,
    Stamper,
    emit_cluster_plots,
    emit_ensemble_plots,
    emit_factor_plot,
    emit_series_plot,
    emit_weights_plot,
    fixed_stamper,
    format_number,
    write_fit,
    write_weight_series,
    write_weights,
)
from .seeds import derive_seed

__all__ = [
    "Clustering",
    "ClusterFactorModel",
    "CorrelationMatrix",
    "CountsMatrix",
    "CurveSeries",
    "DENOISE_MODES",
    "DailyWeights",
    "DenoisedPanel",
    "EnsembleResult",
    "FitReport",
    "LEVEL_DEFINITIONS",
    "MATURITY_LABELS",
    "MATURITY_MONTHS",
    "NelsonSiegelLoadings",
    "NmfRun",
    "PLOT_COLORS",
    "Stamper",
    "SymEigen",
    "YieldPanel",
    "aggregate_clusterings",
    "align_centers",
    "cluster_factor_model",
    "clustering_from_labels",
    "compare_one_factor_nmf",
    "correlation_percent",
    "counts_matrix",
    "curve_series",
    "daily_weights",
    "denoise",
    "derive_seed",
    "drop_maturity",
    "emit_cluster_plots",
    "emit_ensemble_plots",
    "emit_factor_plot",
    "emit_series_plot",
    "emit_weights_plot",
    "ensemble_nmf",
    "erank",
    "factor_correlations",
    "fit_report",
    "fixed_stamper",
    "format_number",
    "interpretation_correlations",
    "kmeans_run",
    "level_slope_curvature_correlations",
    "maturity_months",
    "nelson_siegel_loadings",
    "nmf_run",
    "normalize_rows",
    "panel_to_tsv",
    "parse_treasury_tsv",
    "partition_sets",
    "rank1_truncate",
    "reconstruct",
    "serial_correlation",
    "star_kmeans",
    "stat_clustering",
    "sym_eigen",
    "verify_stability",
    "windowed_weights",
    "write_fit",
    "write_weight_series",
    "write_weights",
]
