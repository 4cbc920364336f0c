"""Seeded k-means and its statistically deterministic aggregation.

A single k-means run is nondeterministic across seeds.  Aggregating many
aligned runs by majority vote removes that nondeterminism; repeating the
aggregate and comparing fits verifies it; and taking the modal aggregate
over many sets removes it entirely when verification fails.
"""

from dataclasses import dataclass

import numpy as np

from .seeds import derive_seed


@dataclass(frozen=True)
class Clustering:
    """A map from N items to clusters 1..k_effective, all non-empty.

    ``assignment`` holds 1-based cluster ids; ``indicator`` is the N x
    k_effective binary matrix whose column j marks membership of cluster
    j + 1.
    """

    assignment: np.ndarray
    k_effective: int
    indicator: np.ndarray


@dataclass(frozen=True)
class CountsMatrix:
    """Vote counts Q[i, A]: how many runs put item i in aligned cluster A+1."""

    counts: np.ndarray
    runs: int


def clustering_from_labels(labels):
    """Build a Clustering from 1-based labels, compacting empty ids.

    Label ids that occur keep their relative order; gaps are squeezed out
    so the result uses 1..K' with every cluster non-empty.  Compaction
    never changes which items share a cluster.
    """
    labels = np.asarray(labels, dtype=int)
    if labels.ndim != 1 or labels.size == 0:
        raise ValueError(f"expected a nonempty 1-d label array, got shape {labels.shape}")
    if labels.min() < 1:
        raise ValueError("cluster labels must be 1-based positive integers")
    present = np.unique(labels)
    remap = {int(old): new for new, old in enumerate(present, start=1)}
    assignment = np.asarray([remap[int(v)] for v in labels], dtype=int)
    k_eff = len(present)
    indicator = np.zeros((labels.size, k_eff), dtype=int)
    indicator[np.arange(labels.size), assignment - 1] = 1
    return Clustering(assignment=assignment, k_effective=k_eff, indicator=indicator)


def partition_sets(clustering):
    """The clustering as a relabeling-invariant set of item-index sets."""
    assignment = (
        clustering.assignment if isinstance(clustering, Clustering) else np.asarray(clustering)
    )
    return frozenset(
        frozenset(int(i) for i in np.flatnonzero(assignment == c))
        for c in np.unique(assignment)
    )


def kmeans_run(points, k, seed, max_iter=100):
    """One seeded Lloyd k-means run with Euclidean distance.

    Initial centers are k distinct data points sampled without replacement.
    An empty cluster has its center reseeded at the point farthest from its
    own center; if ties keep it empty through a stable pass it is compacted
    away, so k_effective can drop below k only on degenerate data.
    Returns (Clustering, centers) with centers as the final cluster means.
    """
    points = np.asarray(points, dtype=float)
    if points.ndim != 2:
        raise ValueError(f"expected a 2-dimensional matrix, got shape {points.shape}")
    if not np.isfinite(points).all():
        raise ValueError("points contain non-finite values")
    n = points.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k must be between 1 and {n}, got {k}")

    rng = np.random.default_rng(seed)
    centers = points[rng.choice(n, size=k, replace=False)].copy()

    assign = None
    prev = None
    for _ in range(max_iter):
        d = ((points[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        assign = d.argmin(axis=1)
        counts = np.bincount(assign, minlength=k)
        empties = np.flatnonzero(counts == 0)
        if empties.size:
            own = d[np.arange(n), assign]
            order = np.argsort(own)[::-1]
            used = set()
            for c in empties:
                pick = next(int(i) for i in order if int(i) not in used)
                used.add(pick)
                centers[c] = points[pick]
        if prev is not None and np.array_equal(assign, prev):
            break
        prev = assign
        for c in range(k):
            members = assign == c
            if members.any():
                centers[c] = points[members].mean(axis=0)

    clustering = clustering_from_labels(assign + 1)
    final_centers = np.vstack(
        [
            points[clustering.assignment == c].mean(axis=0)
            for c in range(1, clustering.k_effective + 1)
        ]
    )
    return clustering, final_centers


def align_centers(center_stack, k, seed):
    """Cluster stacked run centers so runs share one label space.

    ``center_stack`` holds every run's centers row-wise.  Returns 1-based
    aligned labels per stacked row, compacted to 1..K' when some aligned
    group ends up empty.
    """
    clustering, _ = kmeans_run(center_stack, k, seed)
    return clustering.assignment


def counts_matrix(aligned_runs, k_total=None):
    """Vote counts over a common aligned label space.

    ``aligned_runs`` is a list of Clusterings or 1-based label arrays that
    share one label space (a single run may leave some aligned label
    unused, which is why raw arrays are accepted).
    """
    arrays = [
        run.assignment if isinstance(run, Clustering) else np.asarray(run, dtype=int)
        for run in aligned_runs
    ]
    if not arrays:
        raise ValueError("no runs to aggregate")
    n = arrays[0].size
    for arr in arrays:
        if arr.size != n:
            raise ValueError("runs cluster different numbers of items")
    k = int(k_total) if k_total is not None else max(int(arr.max()) for arr in arrays)
    counts = np.zeros((n, k), dtype=int)
    for arr in arrays:
        counts[np.arange(n), arr - 1] += 1
    return CountsMatrix(counts=counts, runs=len(arrays))


def aggregate_clusterings(aligned_runs, k_total=None):
    """Majority-vote aggregation of aligned clustering runs.

    Each item goes to the cluster most runs put it in.  Ties go to the tied
    cluster with the largest total population over all items, then to the
    lowest cluster index.  Empty final clusters are compacted away.  The
    result does not depend on the order of the runs.
    """
    q = counts_matrix(aligned_runs, k_total=k_total)
    counts = q.counts
    col_tot = counts.sum(axis=0)
    labels = np.empty(counts.shape[0], dtype=int)
    for i in range(counts.shape[0]):
        row = counts[i]
        tied = np.flatnonzero(row == row.max())
        winner = tied[np.argmax(col_tot[tied])]
        labels[i] = winner + 1
    return clustering_from_labels(labels)


def stat_clustering(points, k, p_runs, seed):
    """Statistically deterministic clustering from p_runs aggregated k-means runs.

    Runs seeded k-means p_runs times, aligns the runs' clusters by
    clustering the stacked centers, then majority-votes the aligned
    assignments.  A single run is returned unchanged.
    """
    if p_runs < 1:
        raise ValueError(f"p_runs must be at least 1, got {p_runs}")
    if p_runs == 1:
        clustering, _ = kmeans_run(points, k, derive_seed(seed, 0, 0))
        return clustering

    runs = [kmeans_run(points, k, derive_seed(seed, 0, r)) for r in range(p_runs)]
    stack = np.vstack([centers for _, centers in runs])
    labels = align_centers(stack, k, derive_seed(seed, 1))

    aligned = []
    offset = 0
    for clustering, centers in runs:
        run_map = labels[offset : offset + centers.shape[0]]
        offset += centers.shape[0]
        aligned.append(run_map[clustering.assignment - 1])
    return aggregate_clusterings(aligned, k_total=int(labels.max()))


def star_kmeans(points, k, p_runs, m_sets, seed):
    """Most frequent statistical clustering over m_sets independent sets.

    Clusterings are compared up to relabeling.  Returns the modal
    clustering (first seen among ties) and its frequency.
    """
    if m_sets < 1:
        raise ValueError(f"m_sets must be at least 1, got {m_sets}")
    tally = {}
    for m in range(m_sets):
        clustering = stat_clustering(points, k, p_runs, derive_seed(seed, 2, m))
        key = partition_sets(clustering)
        if key in tally:
            tally[key][1] += 1
        else:
            tally[key] = [clustering, 1]
    best = None
    best_count = 0
    for clustering, count in tally.values():
        if count > best_count:
            best, best_count = clustering, count
    return best, best_count


def _indicator_rss(points, clustering):
    """Per-item residual sum of squares from the cluster-indicator fit.

    Observations are the N items; each of the T columns of ``points`` is
    regressed on an intercept plus the indicator matrix, and squared
    residuals are summed per item.
    """
    n = points.shape[0]
    design = np.hstack([np.ones((n, 1)), clustering.indicator.astype(float)])
    coef, *_ = np.linalg.lstsq(design, points, rcond=None)
    resid = points - design @ coef
    return (resid**2).sum(axis=1)


def verify_stability(points, k, p_runs, repetitions, seed):
    """Check that repeated statistical clusterings explain the data identically.

    Builds ``repetitions`` independent statistical clusterings and compares
    their per-item regression residuals; returns True iff every
    repetition's residual vector matches the first after rounding to 10
    decimals.  Instability is a flag, not an error, so callers can escalate
    to the modal clustering.
    """
    if repetitions < 2:
        raise ValueError(f"repetitions must be at least 2, got {repetitions}")
    points = np.asarray(points, dtype=float)
    rss = []
    for j in range(repetitions):
        clustering = stat_clustering(points, k, p_runs, derive_seed(seed, 3, j))
        rss.append(_indicator_rss(points, clustering))
    base = rss[0]
    for vec in rss[1:]:
        if (np.round(vec - base, 10) != 0).any():
            return False
    return True
