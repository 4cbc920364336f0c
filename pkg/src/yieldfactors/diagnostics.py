"""Fit and interpretation statistics.

Per-maturity fit quality of a reconstruction, the level/slope/curvature
series of a yield panel, serial correlations among factors and against the
classic curve descriptors, and the exponential-decay loadings used to
interpret factors against the standard three-factor curve parametrization.
"""

from dataclasses import dataclass

import numpy as np

from .linalg import erank, sym_eigen

LEVEL_DEFINITIONS = ("min_yield", "max_yield", "ten_year")


@dataclass(frozen=True)
class FitReport:
    """Per-row fit: serial correlation (percent) and squared error.

    A row whose fitted series has zero variance gets NaN for the
    correlation (rendered as "NA" in reports); the error is always
    computed.
    """

    correlations: np.ndarray
    errors: np.ndarray


@dataclass(frozen=True)
class CurveSeries:
    """Level, slope and curvature series of a yield panel.

    Slope is the 10 Yr minus 3 Mo yield; curvature is twice the 2 Yr
    yield minus the 10 Yr and 3 Mo yields; the level is the per-date
    minimum, maximum, or the 10 Yr yield, per ``level_definition``.
    """

    level: np.ndarray
    slope: np.ndarray
    curvature: np.ndarray
    level_definition: str


@dataclass(frozen=True)
class NelsonSiegelLoadings:
    """Exponential-decay loadings for slope and curvature interpretation."""

    decay: float
    loadings1: np.ndarray
    loadings2: np.ndarray


def _pearson(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    da = a - a.mean()
    db = b - b.mean()
    denom = np.sqrt((da**2).sum() * (db**2).sum())
    return float((da * db).sum() / denom)


def correlation_percent(rows, others=None):
    """Pairwise serial correlations between row series, in percent.

    With ``others`` given the result is the cross matrix (rows x others);
    otherwise the square matrix of ``rows`` against itself.  A pair with a
    zero-variance member yields NaN.
    """
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    cols = rows if others is None else np.atleast_2d(np.asarray(others, dtype=float))
    if rows.shape[1] != cols.shape[1]:
        raise ValueError(
            f"series lengths differ: {rows.shape[1]} and {cols.shape[1]}"
        )
    out = np.empty((rows.shape[0], cols.shape[0]))
    for i in range(rows.shape[0]):
        for j in range(cols.shape[0]):
            if rows[i].std() == 0 or cols[j].std() == 0:
                out[i, j] = np.nan
            else:
                out[i, j] = 100.0 * _pearson(rows[i], cols[j])
    return out


def fit_report(data, fitted):
    """Serial correlation (percent) and squared error per row of the fit."""
    data = np.asarray(data, dtype=float)
    fitted = np.asarray(fitted, dtype=float)
    if data.shape != fitted.shape or data.ndim != 2:
        raise ValueError(f"shapes differ: data {data.shape}, fitted {fitted.shape}")
    if (data.std(axis=1) == 0).any():
        bad = int(np.flatnonzero(data.std(axis=1) == 0)[0])
        raise ValueError(f"data row {bad} has zero variance")
    n = data.shape[0]
    corr = np.empty(n)
    for i in range(n):
        if fitted[i].std() == 0:
            corr[i] = np.nan
        else:
            corr[i] = 100.0 * _pearson(data[i], fitted[i])
    errors = ((data - fitted) ** 2).sum(axis=1)
    return FitReport(correlations=corr, errors=errors)


def curve_series(panel, level_definition="ten_year"):
    """Level, slope and curvature series from a panel."""
    if level_definition not in LEVEL_DEFINITIONS:
        raise ValueError(
            f"level_definition must be one of {LEVEL_DEFINITIONS}, got {level_definition!r}"
        )
    needed = ["3 Mo", "2 Yr", "10 Yr"]
    for lbl in needed:
        if lbl not in panel.maturities:
            raise ValueError(f"panel is missing the {lbl!r} maturity")
    row = {lbl: panel.yields[panel.maturities.index(lbl)] for lbl in needed}
    slope = row["10 Yr"] - row["3 Mo"]
    curvature = 2.0 * row["2 Yr"] - row["10 Yr"] - row["3 Mo"]
    if level_definition == "min_yield":
        level = panel.yields.min(axis=0)
    elif level_definition == "max_yield":
        level = panel.yields.max(axis=0)
    else:
        level = row["10 Yr"].copy()
    return CurveSeries(
        level=level, slope=slope, curvature=curvature, level_definition=level_definition
    )


def _require_variance(series, what):
    series = np.asarray(series, dtype=float)
    if series.ndim != 1 or series.size < 2:
        raise ValueError(f"{what} must be a series of at least 2 values")
    if series.std() == 0:
        raise ValueError(f"{what} has zero variance")
    return series


def factor_correlations(factors, level):
    """Serial correlations among factors and of each factor with the level.

    Returns ``(phi, theta)`` in percent: phi is the K x K factor
    correlation matrix, theta the length-K factor-vs-level correlations.
    """
    factors = np.asarray(factors, dtype=float)
    if factors.ndim != 2:
        raise ValueError(f"expected a K x T factor matrix, got shape {factors.shape}")
    level = _require_variance(level, "level")
    k = factors.shape[0]
    for a in range(k):
        _require_variance(factors[a], f"factor {a + 1}")
    phi = 100.0 * np.corrcoef(factors) if k > 1 else np.array([[100.0]])
    if k > 1:
        np.fill_diagonal(phi, 100.0)
    theta = np.array([100.0 * _pearson(factors[a], level) for a in range(k)])
    return phi, theta


def interpretation_correlations(factors, series):
    """Each factor's serial correlation with level, slope and curvature.

    Returns a K x 3 matrix in percent with columns (level, slope,
    curvature).
    """
    factors = np.asarray(factors, dtype=float)
    if factors.ndim != 2:
        raise ValueError(f"expected a K x T factor matrix, got shape {factors.shape}")
    targets = [
        _require_variance(series.level, "level"),
        _require_variance(series.slope, "slope"),
        _require_variance(series.curvature, "curvature"),
    ]
    out = np.empty((factors.shape[0], 3))
    for a in range(factors.shape[0]):
        fa = _require_variance(factors[a], f"factor {a + 1}")
        for j, target in enumerate(targets):
            out[a, j] = 100.0 * _pearson(fa, target)
    return out


def nelson_siegel_loadings(maturities_years, decay):
    """Slope and curvature loadings at the given maturities.

    ``loadings1`` = (1 - exp(-decay*tau)) / (decay*tau) decreases from 1
    toward 0; ``loadings2`` = loadings1 - exp(-decay*tau) vanishes at both
    ends and peaks at an intermediate maturity.
    """
    tau = np.asarray(maturities_years, dtype=float)
    if decay <= 0:
        raise ValueError(f"decay must be positive, got {decay}")
    if (tau <= 0).any():
        raise ValueError("maturities must be positive")
    x = decay * tau
    loadings1 = (1.0 - np.exp(-x)) / x
    loadings2 = loadings1 - np.exp(-x)
    return NelsonSiegelLoadings(decay=float(decay), loadings1=loadings1, loadings2=loadings2)


def level_slope_curvature_correlations(series):
    """Serial correlation matrix among level, slope and curvature.

    Returns ``(matrix, effective_rank)``: the 3 x 3 correlation matrix in
    percent and the effective rank of the underlying correlation matrix.
    """
    stack = np.vstack(
        [
            _require_variance(series.level, "level"),
            _require_variance(series.slope, "slope"),
            _require_variance(series.curvature, "curvature"),
        ]
    )
    corr = np.corrcoef(stack)
    eig = sym_eigen(corr)
    return 100.0 * corr, erank(eig.values)
