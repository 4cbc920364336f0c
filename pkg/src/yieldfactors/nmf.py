"""Single-run nonnegative matrix factorization.

Multiplicative updates for the Frobenius objective ||x - W F||^2, with the
weight-column normalization convention: after convergence each column of W
is divided by its sum and the matching row of F is multiplied by it, so
weight columns sum to 1.
"""

from dataclasses import dataclass

import numpy as np

from .linalg import rank1_truncate
from .seeds import derive_seed

_EPS = 1e-12


@dataclass(frozen=True)
class NmfRun:
    """Result of one factorization run.

    ``weights`` is N x K with columns summing to 1 (save for degenerate
    all-zero columns, listed in ``degenerate``), ``factors`` is K x T,
    ``objective`` the final squared Frobenius error, and
    ``objective_history`` the per-sweep objective values.
    """

    weights: np.ndarray
    factors: np.ndarray
    objective: float
    seed: int
    iterations: int
    objective_history: tuple
    degenerate: tuple


def nmf_run(x, k, seed, max_iter=2000, tol=1e-9):
    """Factor a nonnegative matrix as W F with k factors.

    Starts from seeded uniform-random W and F scaled so the initial
    product's mean matches the data mean, then alternates multiplicative
    updates (W first, then F) until the relative objective decrease drops
    below ``tol`` or ``max_iter`` sweeps have run.  Deterministic given
    (x, k, seed).
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 2:
        raise ValueError(f"expected a 2-dimensional matrix, got shape {x.shape}")
    if (x < 0).any():
        raise ValueError("matrix must be nonnegative entrywise")
    n, t = x.shape
    if not 1 <= k <= min(n, t):
        raise ValueError(f"k must be between 1 and {min(n, t)}, got {k}")

    rng = np.random.default_rng(seed)
    mean = x.mean()
    scale = np.sqrt(mean / (k / 4.0)) if mean > 0 else 1.0
    w = (1.0 - rng.random((n, k))) * scale
    f = (1.0 - rng.random((k, t))) * scale

    history = []
    prev = None
    iterations = 0
    for _ in range(max_iter):
        w *= (x @ f.T) / np.maximum(w @ (f @ f.T), _EPS)
        f *= (w.T @ x) / np.maximum((w.T @ w) @ f, _EPS)
        iterations += 1
        obj = float(((x - w @ f) ** 2).sum())
        history.append(obj)
        if prev is not None and prev - obj < tol * max(prev, _EPS):
            break
        prev = obj

    col_sums = w.sum(axis=0)
    degenerate = tuple(int(j) for j in np.flatnonzero(col_sums == 0))
    safe = np.where(col_sums == 0, 1.0, col_sums)
    w = w / safe
    f = f * col_sums[:, None]

    objective = float(((x - w @ f) ** 2).sum())
    return NmfRun(
        weights=w,
        factors=f,
        objective=objective,
        seed=int(seed),
        iterations=iterations,
        objective_history=tuple(history),
        degenerate=degenerate,
    )


def compare_one_factor_nmf(n, m, seed):
    """Frobenius errors of one-factor NMF vs the rank-1 truncation.

    Draws an n x m matrix of absolute values of standard normals, fits it
    with a single NMF factor and with the optimal rank-1 truncation, and
    returns ``(nmf_error, svd_error)``.  The truncation is the global
    optimum, so svd_error <= nmf_error up to roundoff.
    """
    if n < 1 or m < 1:
        raise ValueError(f"matrix dimensions must be positive, got {n} x {m}")
    rng = np.random.default_rng(derive_seed(seed, 0))
    x = np.abs(rng.standard_normal((n, m)))
    run = nmf_run(x, 1, derive_seed(seed, 1))
    col, row = rank1_truncate(x)
    svd_error = float(((x - np.outer(col, row)) ** 2).sum())
    return run.objective, svd_error
