"""Factor-model pipelines.

De-noising transforms, the ensemble NMF pipeline (alignment of runs,
factor-count reduction, element-wise averaging), the clustering-based
factor model with one rank-1 factor per cluster, and the rolling-window
and per-date weight re-fits used to study weight stability.
"""

from dataclasses import dataclass

import numpy as np

from .clustering import kmeans_run
from .ingest import YieldPanel
from .linalg import rank1_truncate
from .nmf import nmf_run
from .seeds import derive_seed

DENOISE_MODES = ("none", "min", "max")

_MAD_SCALE = 1.4826


@dataclass(frozen=True)
class DenoisedPanel:
    """A nonnegative transform of the panel plus the per-date level removed.

    Mode "min" stores yields minus the per-date minimum, "max" stores the
    per-date maximum minus the yields, "none" stores the yields unchanged
    with no level.  Either transform leaves at least one zero per date and
    is exactly invertible given the level.
    """

    values: np.ndarray
    level: np.ndarray
    mode: str


@dataclass(frozen=True)
class EnsembleResult:
    """Element-wise aggregates of aligned NMF runs.

    Mean/SD and median/MAD are both computed; ``use_median`` records which
    pair the ``weights``/``factors`` properties select.  ``batch_sizes``
    counts the runs aligned into each factor group; ``k_effective`` is the
    factor count after any reductions from the requested ``k_requested``.
    """

    weights_mean: np.ndarray
    weights_sd: np.ndarray
    weights_median: np.ndarray
    weights_mad: np.ndarray
    factors_mean: np.ndarray
    factors_sd: np.ndarray
    factors_median: np.ndarray
    factors_mad: np.ndarray
    batch_sizes: tuple
    k_effective: int
    k_requested: int
    use_median: bool

    @property
    def weights(self):
        return self.weights_median if self.use_median else self.weights_mean

    @property
    def factors(self):
        return self.factors_median if self.use_median else self.factors_mean

    @property
    def weights_spread(self):
        return self.weights_mad if self.use_median else self.weights_sd

    @property
    def factors_spread(self):
        return self.factors_mad if self.use_median else self.factors_sd


@dataclass(frozen=True)
class ClusterFactorModel:
    """One nonnegative rank-1 factor per cluster.

    Weights are zero outside the owning cluster and each column sums to 1;
    each maturity's fitted row is its cluster's factor row scaled by its
    weight.
    """

    clustering: object
    weights: np.ndarray
    factors: np.ndarray


@dataclass(frozen=True)
class DailyWeights:
    """Per-date exact weight re-fits of a cluster factor model.

    ``weights[s]`` is the N x K weight matrix for date s (columns sum
    to 1); ``scales[s, A]`` is the multiplier absorbed from cluster A's
    raw weights, so the exact per-date fit is
    weights[s][:, A] * scales[s, A] * factors[A, s].
    """

    weights: np.ndarray
    scales: np.ndarray


def denoise(panel, mode):
    """Remove a per-date level from the panel.

    "min" subtracts each date's minimum yield, "max" subtracts the yields
    from each date's maximum, "none" passes the yields through.
    """
    if mode not in DENOISE_MODES:
        raise ValueError(f"mode must be one of {DENOISE_MODES}, got {mode!r}")
    yields = panel.yields
    if mode == "none":
        return DenoisedPanel(values=yields.copy(), level=None, mode=mode)
    if mode == "min":
        level = yields.min(axis=0)
        values = yields - level
    else:
        level = yields.max(axis=0)
        values = level - yields
    return DenoisedPanel(values=values, level=level, mode=mode)


def _aggregate_columns(cols):
    """Mean, sample SD, median and scaled MAD across columns, per element."""
    mean = cols.mean(axis=1)
    sd = cols.std(axis=1, ddof=1)
    med = np.median(cols, axis=1)
    mad = _MAD_SCALE * np.median(np.abs(cols - med[:, None]), axis=1)
    return mean, sd, med, mad


def ensemble_nmf(x, k, p_runs, seed, use_median=False, min_batch=1, log=None):
    """Average many NMF runs after aligning their factor columns.

    Runs ``p_runs`` independent factorizations, stacks all weight columns,
    k-means-clusters the stacked columns into k groups and aggregates
    weights (and the factor rows that travel with them) within each group.
    Whenever some group has ``min_batch`` or fewer members the factor count
    is reduced by one and the whole loop restarts; ``log`` (a callable such
    as ``print``) receives the trace of attempts.  A single run is returned
    as-is with zero spreads.
    """
    x = np.asarray(x, dtype=float)
    if p_runs < 1:
        raise ValueError(f"p_runs must be at least 1, got {p_runs}")
    emit = log if log is not None else (lambda line: None)

    if p_runs == 1:
        emit(f"Trying k = {k}")
        run = nmf_run(x, k, derive_seed(seed, k, 0))
        zeros_w = np.zeros_like(run.weights)
        zeros_f = np.zeros_like(run.factors)
        return EnsembleResult(
            weights_mean=run.weights,
            weights_sd=zeros_w,
            weights_median=run.weights.copy(),
            weights_mad=zeros_w.copy(),
            factors_mean=run.factors,
            factors_sd=zeros_f,
            factors_median=run.factors.copy(),
            factors_mad=zeros_f.copy(),
            batch_sizes=(1,) * k,
            k_effective=k,
            k_requested=k,
            use_median=use_median,
        )

    k_requested = k
    k_cur = k
    while True:
        if k_cur < 1:
            raise ValueError(
                f"factor count reduced to 0 from {k_requested}; data supports no stable factors"
            )
        emit(f"Trying k = {k_cur}")
        runs = [nmf_run(x, k_cur, derive_seed(seed, k_cur, r)) for r in range(p_runs)]
        w_stack = np.hstack([run.weights for run in runs])
        f_stack = np.vstack([run.factors for run in runs])
        grouping, _ = kmeans_run(w_stack.T, k_cur, derive_seed(seed, k_cur, p_runs))

        reduce_k = False
        sizes = []
        for j in range(1, grouping.k_effective + 1):
            count = int((grouping.assignment == j).sum())
            sizes.append(count)
            emit(f"Number of elements in cluster {j} = {count}")
            if count <= min_batch:
                emit("Reducing k")
                reduce_k = True
                break
        if not reduce_k and grouping.k_effective < k_cur:
            emit("Reducing k")
            reduce_k = True
        if reduce_k:
            k_cur -= 1
            continue
        break

    k_eff = grouping.k_effective
    n, t = x.shape
    w_mean = np.zeros((n, k_eff))
    w_sd = np.zeros((n, k_eff))
    w_med = np.zeros((n, k_eff))
    w_mad = np.zeros((n, k_eff))
    f_mean = np.zeros((k_eff, t))
    f_sd = np.zeros((k_eff, t))
    f_med = np.zeros((k_eff, t))
    f_mad = np.zeros((k_eff, t))
    for j in range(1, k_eff + 1):
        members = np.flatnonzero(grouping.assignment == j)
        w_cols = w_stack[:, members]
        f_rows = f_stack[members, :]
        w_mean[:, j - 1], w_sd[:, j - 1], w_med[:, j - 1], w_mad[:, j - 1] = (
            _aggregate_columns(w_cols)
        )
        f_mean[j - 1], f_sd[j - 1], f_med[j - 1], f_mad[j - 1] = _aggregate_columns(
            f_rows.T
        )

    return EnsembleResult(
        weights_mean=w_mean,
        weights_sd=w_sd,
        weights_median=w_med,
        weights_mad=w_mad,
        factors_mean=f_mean,
        factors_sd=f_sd,
        factors_median=f_med,
        factors_mad=f_mad,
        batch_sizes=tuple(sizes),
        k_effective=k_eff,
        k_requested=k_requested,
        use_median=use_median,
    )


def cluster_factor_model(panel, clustering):
    """Rank-1 factor per cluster, assembled into one weight/factor pair.

    Within each cluster the weights are the scaled positive top principal
    component of the within-cluster Gram matrix and the factor is the
    positive unit top principal component of its transpose.  Weight columns
    are then normalized to sum to 1 with the scale pushed into the factors.
    """
    yields = panel.yields
    n, t = yields.shape
    if clustering.assignment.size != n:
        raise ValueError(
            f"clustering covers {clustering.assignment.size} items, panel has {n}"
        )
    k = clustering.k_effective
    weights = np.zeros((n, k))
    factors = np.zeros((k, t))
    for a in range(1, k + 1):
        members = clustering.assignment == a
        sub = yields[members, :]
        if not (sub > 0).all():
            bad = [panel.maturities[i] for i in np.flatnonzero(members)]
            raise ValueError(
                f"cluster {a} (maturities {bad}) has non-positive yields; "
                "rank-1 factors need strictly positive data"
            )
        col, row = rank1_truncate(sub)
        weights[members, a - 1] = col
        factors[a - 1] = row
    col_sums = weights.sum(axis=0)
    weights = weights / col_sums
    factors = factors * col_sums[:, None]
    return ClusterFactorModel(clustering=clustering, weights=weights, factors=factors)


def reconstruct(weights, factors):
    """The fitted matrix: plain product of weights and factors."""
    weights = np.asarray(weights, dtype=float)
    factors = np.asarray(factors, dtype=float)
    if weights.ndim != 2 or factors.ndim != 2 or weights.shape[1] != factors.shape[0]:
        raise ValueError(
            f"cannot multiply shapes {weights.shape} and {factors.shape}"
        )
    return weights @ factors


def windowed_weights(panel, clustering, window):
    """Cluster-model weights refit on consecutive non-overlapping windows.

    The date axis is split into T // window full windows of ``window``
    days (the trailing remainder is discarded) and the cluster factor
    model is refit on each with the clustering held fixed.  Returns the
    list of per-window weight matrices.
    """
    t = panel.n_dates
    if window < 2:
        raise ValueError(f"window must be at least 2 days, got {window}")
    if window > t:
        raise ValueError(f"window {window} exceeds the {t} available dates")
    out = []
    for w in range(t // window):
        lo, hi = w * window, (w + 1) * window
        sub = YieldPanel(
            yields=panel.yields[:, lo:hi],
            maturities=panel.maturities,
            dates=panel.dates[lo:hi],
        )
        out.append(cluster_factor_model(sub, clustering).weights)
    return out


def daily_weights(panel, model):
    """Exact per-date weight re-fits of a cluster factor model.

    With one nonzero weight per maturity the per-date fit is exact:
    raw weight = yield / factor value.  Each date's weight columns are
    renormalized to sum to 1 and the absorbed per-cluster scale is
    returned alongside.
    """
    yields = panel.yields
    n, t = yields.shape
    assignment = model.clustering.assignment
    k = model.clustering.k_effective
    weights = np.zeros((t, n, k))
    scales = np.zeros((t, k))
    for s in range(t):
        f_vals = model.factors[assignment - 1, s]
        if (f_vals == 0).any():
            raise ValueError(f"factor value is zero on {panel.dates[s]}")
        raw = yields[:, s] / f_vals
        mat = np.zeros((n, k))
        mat[np.arange(n), assignment - 1] = raw
        col_sums = mat.sum(axis=0)
        if (col_sums == 0).any():
            raise ValueError(f"all weights vanish for some cluster on {panel.dates[s]}")
        weights[s] = mat / col_sums
        scales[s] = col_sums
    return DailyWeights(weights=weights, scales=scales)


def normalize_rows(panel):
    """Each yield row divided by its serial sample standard deviation."""
    if panel.n_dates < 2:
        raise ValueError("need at least 2 dates to normalize by serial deviation")
    sd = panel.yields.std(axis=1, ddof=1)
    for i in np.flatnonzero(sd == 0):
        raise ValueError(f"maturity {panel.maturities[i]!r} has zero variance")
    return panel.yields / sd[:, None]
