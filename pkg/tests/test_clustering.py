"""Tests for seeded k-means and its vote-based deterministic aggregation."""

import numpy as np
import pytest

from yieldfactors import (
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
from yieldfactors.seeds import derive_seed


def two_blobs(rng, per_side=3, gap=10.0):
    left = rng.normal(0.0, 0.1, size=(per_side, 2))
    right = rng.normal(gap, 0.1, size=(per_side, 2))
    return np.vstack([left, right])


def test_labels_compact_and_keep_order():
    c = clustering_from_labels([3, 7, 7, 3, 9])
    assert c.assignment.tolist() == [1, 2, 2, 1, 3]
    assert c.k_effective == 3
    assert c.indicator.shape == (5, 3)
    assert (c.indicator.sum(axis=1) == 1).all()
    assert c.indicator[:, 1].tolist() == [0, 1, 1, 0, 0]


def test_labels_validation():
    with pytest.raises(ValueError, match="1-based"):
        clustering_from_labels([0, 1])
    with pytest.raises(ValueError, match="nonempty"):
        clustering_from_labels([])


def test_compaction_preserves_comembership():
    rng = np.random.default_rng(0)
    for _ in range(20):
        labels = rng.integers(1, 9, size=12)
        c = clustering_from_labels(labels)
        assert partition_sets(c) == partition_sets(labels)


def test_partition_sets_relabel_invariant():
    assert partition_sets(np.array([1, 2, 2])) == partition_sets(np.array([2, 1, 1]))
    assert partition_sets(np.array([1, 1, 2])) != partition_sets(np.array([1, 2, 2]))


def test_kmeans_separates_two_clumps():
    points = np.array([[0.0], [0.1], [10.0], [10.1]])
    want = partition_sets(np.array([1, 1, 2, 2]))
    for seed in range(20):
        clustering, centers = kmeans_run(points, 2, seed=seed)
        assert partition_sets(clustering) == want
        assert sorted(centers[:, 0].tolist()) == pytest.approx([0.05, 10.05])


def test_kmeans_centers_are_cluster_means():
    rng = np.random.default_rng(1)
    points = two_blobs(rng)
    clustering, centers = kmeans_run(points, 2, seed=5)
    for c in range(1, clustering.k_effective + 1):
        members = points[clustering.assignment == c]
        assert np.allclose(centers[c - 1], members.mean(axis=0))


def test_kmeans_k_equals_n_isolates_every_point():
    points = np.array([[0.0], [1.0], [5.0]])
    clustering, centers = kmeans_run(points, 3, seed=2)
    assert clustering.k_effective == 3
    assert sorted(centers[:, 0].tolist()) == [0.0, 1.0, 5.0]


def test_kmeans_k_above_n_is_an_error():
    with pytest.raises(ValueError, match="k must be between 1 and 3"):
        kmeans_run(np.ones((3, 2)), 4, seed=0)


def test_kmeans_identical_points_collapse_to_one_cluster():
    points = np.ones((4, 3))
    for seed in range(10):
        clustering, centers = kmeans_run(points, 2, seed=seed)
        assert clustering.k_effective == 1
        assert np.allclose(centers, np.ones((1, 3)))


def test_kmeans_never_worse_than_forgy_start():
    """The final within-cluster sum of squares never exceeds the start's."""
    rng = np.random.default_rng(3)
    for seed in range(20):
        points = rng.standard_normal((10, 2))
        k = 3
        clustering, centers = kmeans_run(points, k, seed=seed)
        start = points[np.random.default_rng(seed).choice(10, size=k, replace=False)]
        d0 = ((points[:, None, :] - start[None, :, :]) ** 2).sum(axis=2).min(axis=1)
        final = ((points - centers[clustering.assignment - 1]) ** 2).sum()
        assert final <= d0.sum() + 1e-9


def test_align_centers_matches_duplicated_rows():
    rng = np.random.default_rng(4)
    base = np.array([[0.0, 0.0], [5.0, 5.0], [9.0, 0.0]])
    for seed in range(10):
        perms = [rng.permutation(3) for _ in range(4)]
        stack = np.vstack([base[p] for p in perms])
        labels = align_centers(stack, 3, seed=seed)
        origin = np.concatenate(perms)
        for i in range(stack.shape[0]):
            for j in range(stack.shape[0]):
                assert (labels[i] == labels[j]) == (origin[i] == origin[j])


def test_align_centers_degenerate_stack_compacts():
    stack = np.ones((6, 2))
    labels = align_centers(stack, 2, seed=0)
    assert labels.tolist() == [1] * 6


def test_counts_matrix_row_sums_equal_runs():
    runs = [clustering_from_labels([1, 1, 2, 2]) for _ in range(5)]
    q = counts_matrix(runs)
    assert q.runs == 5
    assert (q.counts.sum(axis=1) == 5).all()
    assert q.counts[0].tolist() == [5, 0]


def test_counts_matrix_accepts_raw_label_arrays():
    q = counts_matrix([np.array([1, 3]), np.array([1, 1])], k_total=3)
    assert q.counts.shape == (2, 3)
    assert q.counts[1].tolist() == [1, 0, 1]


def test_counts_matrix_validation():
    with pytest.raises(ValueError, match="no runs"):
        counts_matrix([])
    with pytest.raises(ValueError, match="different numbers"):
        counts_matrix([np.array([1, 2]), np.array([1])])


def test_aggregate_majority_wins():
    runs = [[1, 1, 2, 2], [1, 1, 2, 2], [1, 2, 2, 2]]
    agg = aggregate_clusterings([np.array(r) for r in runs])
    assert agg.assignment.tolist() == [1, 1, 2, 2]


def test_aggregate_tie_prefers_globally_larger_cluster():
    """Item 0 is split 2-2; cluster 2 holds more votes overall and wins."""
    runs = [
        np.array([1, 1, 2, 2]),
        np.array([1, 1, 2, 2]),
        np.array([2, 1, 2, 2]),
        np.array([2, 1, 2, 2]),
    ]
    agg = aggregate_clusterings(runs)
    assert agg.assignment.tolist() == [2, 1, 2, 2]


def test_aggregate_tie_falls_back_to_lowest_index():
    """With overall populations tied too, the lower cluster id wins."""
    runs = [
        np.array([1, 1, 2]),
        np.array([1, 1, 2]),
        np.array([2, 1, 2]),
        np.array([2, 1, 2]),
    ]
    agg = aggregate_clusterings(runs)
    assert agg.assignment.tolist() == [1, 1, 2]


def test_aggregate_is_order_invariant():
    rng = np.random.default_rng(5)
    runs = [rng.integers(1, 4, size=8) for _ in range(9)]
    base = aggregate_clusterings(runs, k_total=3).assignment
    for _ in range(10):
        shuffled = [runs[i] for i in rng.permutation(len(runs))]
        again = aggregate_clusterings(shuffled, k_total=3).assignment
        assert np.array_equal(base, again)


def test_aggregate_single_run_is_identity():
    run = clustering_from_labels([2, 1, 2, 3])
    agg = aggregate_clusterings([run])
    assert np.array_equal(agg.assignment, run.assignment)


def test_stat_clustering_recovers_planted_partition():
    rng = np.random.default_rng(6)
    points = two_blobs(rng)
    want = partition_sets(np.array([1, 1, 1, 2, 2, 2]))
    for seed in range(5):
        clustering = stat_clustering(points, 2, p_runs=10, seed=seed)
        assert partition_sets(clustering) == want


def test_stat_clustering_single_run_equals_kmeans():
    rng = np.random.default_rng(7)
    points = two_blobs(rng)
    single = stat_clustering(points, 2, p_runs=1, seed=42)
    direct, _ = kmeans_run(points, 2, seed=derive_seed(42, 0, 0))
    assert np.array_equal(single.assignment, direct.assignment)


def test_stat_clustering_validates_runs():
    with pytest.raises(ValueError, match="p_runs"):
        stat_clustering(np.ones((3, 2)), 1, p_runs=0, seed=0)


def test_star_kmeans_unanimous_on_planted_data():
    rng = np.random.default_rng(8)
    points = two_blobs(rng)
    clustering, freq = star_kmeans(points, 2, p_runs=5, m_sets=7, seed=1)
    assert freq == 7
    assert partition_sets(clustering) == partition_sets(np.array([1, 1, 1, 2, 2, 2]))


def test_star_kmeans_single_set():
    rng = np.random.default_rng(9)
    points = two_blobs(rng)
    clustering, freq = star_kmeans(points, 2, p_runs=3, m_sets=1, seed=2)
    assert freq == 1
    assert clustering.k_effective == 2
    with pytest.raises(ValueError, match="m_sets"):
        star_kmeans(points, 2, p_runs=3, m_sets=0, seed=2)


def test_verify_stability_true_on_planted_data():
    rng = np.random.default_rng(10)
    points = two_blobs(rng)
    assert verify_stability(points, 2, p_runs=10, repetitions=5, seed=3) is True


def test_verify_stability_requires_two_repetitions():
    with pytest.raises(ValueError, match="repetitions"):
        verify_stability(np.ones((4, 2)), 2, p_runs=2, repetitions=1, seed=0)


def ambiguous_points():
    """Three tight pairs on a line; single runs fall into different optima."""
    base = np.array([[0.0], [4.0], [10.0]])
    jitter = np.array([[0.05], [-0.05], [0.02]])
    return np.vstack([base, base + jitter])


def test_verify_stability_flags_ambiguous_data():
    points = ambiguous_points()
    flags = [
        verify_stability(points, 2, p_runs=1, repetitions=8, seed=seed)
        for seed in range(10)
    ]
    assert False in flags


def test_star_kmeans_settles_ambiguous_data():
    points = ambiguous_points()
    clustering, freq = star_kmeans(points, 2, p_runs=1, m_sets=25, seed=0)
    assert freq > 25 // 2
    assert partition_sets(clustering) == partition_sets(np.array([1, 1, 2, 1, 1, 2]))
