"""Dense linear-algebra kernels.

Serial correlation matrices, symmetric eigendecomposition, spectral-entropy
effective rank, and the positive rank-1 truncation used for one-factor
models within clusters.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class CorrelationMatrix:
    """Symmetric correlation matrix with row identities."""

    entries: np.ndarray
    labels: tuple

    def average_offdiagonal(self):
        """Mean of the off-diagonal entries (the average pairwise correlation)."""
        n = self.entries.shape[0]
        mask = ~np.eye(n, dtype=bool)
        return float(self.entries[mask].mean())


@dataclass(frozen=True)
class SymEigen:
    """Eigendecomposition of a symmetric matrix, eigenvalues descending."""

    values: np.ndarray
    vectors: np.ndarray


def serial_correlation(rows, labels=None):
    """Pearson correlation across the time index for every row pair.

    ``rows`` is an N x T matrix whose rows are series.  Every row must have
    nonzero variance and T must be at least 2.
    """
    rows = np.asarray(rows, dtype=float)
    if rows.ndim != 2:
        raise ValueError(f"expected a 2-dimensional matrix, got shape {rows.shape}")
    n, t = rows.shape
    if t < 2:
        raise ValueError(f"need at least 2 columns to correlate, got {t}")
    if labels is None:
        labels = tuple(range(n))
    labels = tuple(labels)
    sd = rows.std(axis=1)
    for i in np.flatnonzero(sd == 0):
        raise ValueError(f"row {labels[i]!r} has zero variance")
    corr = np.corrcoef(rows)
    corr = (corr + corr.T) / 2.0
    corr = np.clip(corr, -1.0, 1.0)
    np.fill_diagonal(corr, 1.0)
    return CorrelationMatrix(entries=corr, labels=labels)


def sym_eigen(m):
    """Full descending eigendecomposition of a symmetric matrix.

    The input is symmetrized by averaging first; asymmetry beyond 1e-9 is
    an error.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not np.isfinite(m).all():
        raise ValueError("matrix contains non-finite values")
    asym = np.abs(m - m.T).max() if m.size else 0.0
    if asym > 1e-9:
        raise ValueError(f"matrix is not symmetric (max asymmetry {asym:g})")
    sym = (m + m.T) / 2.0
    values, vectors = np.linalg.eigh(sym)
    order = np.argsort(values)[::-1]
    return SymEigen(values=values[order], vectors=vectors[:, order])


def erank(eigenvalues, exclude_first=False):
    """Effective rank: exp of the Shannon entropy of the normalized spectrum.

    Non-positive eigenvalues are dropped.  With ``exclude_first`` the largest
    eigenvalue is removed before the entropy and 1 is added to the result,
    which turns the measure into the first-mode-removed variant.
    """
    vals = np.asarray(eigenvalues, dtype=float)
    vals = np.sort(vals[vals > 0])[::-1]
    if exclude_first:
        vals = vals[1:]
    if vals.size == 0:
        raise ValueError("no positive eigenvalues left to measure")
    p = vals / vals.sum()
    h = -(p * np.log(p)).sum()
    result = float(np.exp(h))
    if exclude_first:
        result += 1.0
    return result


def rank1_truncate(a):
    """Best rank-1 approximation factors of a strictly positive matrix.

    Returns ``(col, row)`` with ``col`` = sqrt(top eigenvalue) times the
    positive top eigenvector of a a^T and ``row`` the positive unit top
    eigenvector of a^T a, so that ``np.outer(col, row)`` is the
    Frobenius-optimal rank-1 approximation of ``a``.  Positivity of the
    entries guarantees both eigenvectors can be taken entrywise positive.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-dimensional matrix, got shape {a.shape}")
    if not (a > 0).all():
        raise ValueError("matrix must be strictly positive entrywise")
    left = sym_eigen(a @ a.T)
    right = sym_eigen(a.T @ a)
    col = np.sqrt(left.values[0]) * np.abs(left.vectors[:, 0])
    row = np.abs(right.vectors[:, 0])
    return col, row
