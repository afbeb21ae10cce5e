"""Inferential machinery for the validation and application tables.

Correlation coefficients (Pearson, Spearman, tie-corrected Kendall),
one-sample t-tests with a hypothesized-mean sweep, OLS with absorbed dummy
sets and HC1 robust errors, locally weighted polynomial smoothing with a
tricube kernel, and percentile ranks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

import numpy as np
from scipy.special import betainc

from .errors import DegenerateInputError, InputError, NumericalError


@dataclass(frozen=True)
class TTestResult:
    rho0: float
    t_stat: float
    p_value: float
    df: int


@dataclass(frozen=True)
class SweepResult:
    first_non_rejected: Optional[float]
    results: tuple[TTestResult, ...]


@dataclass(frozen=True)
class OlsResult:
    coefficient_on_measure: float
    robust_se: float
    t_stat: float
    r2: float
    adj_r2: float
    n_obs: int
    spec_flags: tuple[str, ...]


@dataclass(frozen=True)
class SmoothCurve:
    grid_x: np.ndarray
    fitted_y: np.ndarray
    bandwidth: float


def _as_float_array(values: Sequence[float], name: str, min_len: int = 2) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1 or len(arr) < min_len:
        raise InputError(f"{name} must be a 1-d series of at least {min_len} values")
    if not np.all(np.isfinite(arr)):
        raise InputError(f"{name} contains non-finite values")
    return arr


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    """Product-moment correlation."""
    xa = _as_float_array(x, "x")
    ya = _as_float_array(y, "y")
    if len(xa) != len(ya):
        raise InputError(f"length mismatch: {len(xa)} vs {len(ya)}")
    xc = xa - xa.mean()
    yc = ya - ya.mean()
    sx = np.sqrt(np.dot(xc, xc))
    sy = np.sqrt(np.dot(yc, yc))
    if sx == 0.0 or sy == 0.0:
        raise DegenerateInputError("constant series has no defined correlation")
    return float(np.dot(xc, yc) / (sx * sy))


def midranks(values: Sequence[float]) -> np.ndarray:
    """1-based ranks with ties replaced by the average of their positions."""
    arr = np.asarray(values, dtype=np.float64)
    order = np.argsort(arr, kind="stable")
    ranks = np.empty(len(arr))
    i = 0
    while i < len(arr):
        j = i
        while j + 1 < len(arr) and arr[order[j + 1]] == arr[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def spearman(x: Sequence[float], y: Sequence[float]) -> float:
    """Pearson correlation of midranks."""
    xa = _as_float_array(x, "x")
    ya = _as_float_array(y, "y")
    if len(xa) != len(ya):
        raise InputError(f"length mismatch: {len(xa)} vs {len(ya)}")
    return pearson(midranks(xa), midranks(ya))


def kendall_tau(x: Sequence[float], y: Sequence[float]) -> float:
    """Tie-corrected Kendall rank correlation (tau-b)."""
    xa = _as_float_array(x, "x")
    ya = _as_float_array(y, "y")
    if len(xa) != len(ya):
        raise InputError(f"length mismatch: {len(xa)} vs {len(ya)}")
    n = len(xa)
    sx = np.sign(xa[:, None] - xa[None, :])
    sy = np.sign(ya[:, None] - ya[None, :])
    s = float(np.sum(np.triu(sx * sy, k=1)))
    n0 = n * (n - 1) / 2.0
    n1 = sum(c * (c - 1) / 2.0 for c in np.unique(xa, return_counts=True)[1])
    n2 = sum(c * (c - 1) / 2.0 for c in np.unique(ya, return_counts=True)[1])
    denom = math.sqrt((n0 - n1) * (n0 - n2))
    if denom == 0.0:
        raise DegenerateInputError("a fully tied series has no defined tau")
    return s / denom


def student_t_sf2(t: float, df: int) -> float:
    """Two-sided tail probability of Student's t via the incomplete beta."""
    if df < 1:
        raise InputError(f"degrees of freedom must be positive, got {df}")
    x = df / (df + t * t)
    return float(betainc(df / 2.0, 0.5, x))


def t_test_mean(values: Sequence[float], mu0: float) -> TTestResult:
    """One-sample two-sided t-test of the mean against mu0."""
    arr = _as_float_array(values, "values", min_len=3)
    n = len(arr)
    sd = arr.std(ddof=1)
    if sd == 0.0:
        raise DegenerateInputError("zero sample standard deviation")
    t = (arr.mean() - mu0) / (sd / math.sqrt(n))
    return TTestResult(rho0=mu0, t_stat=float(t), p_value=student_t_sf2(t, n - 1), df=n - 1)


def rho_sweep(
    values: Sequence[float],
    grid: Optional[Sequence[float]] = None,
    alpha: float = 0.05,
) -> SweepResult:
    """Test the mean against each grid value; report the first non-rejection."""
    if grid is None:
        grid = np.round(np.arange(1, 100) / 100.0, 2)
    results = tuple(t_test_mean(values, float(rho0)) for rho0 in grid)
    first = next((r.rho0 for r in results if r.p_value > alpha), None)
    return SweepResult(first_non_rejected=first, results=results)


# ---------------------------------------------------------------------------
# OLS with absorbed dummy sets


def _group_codes(labels: Sequence) -> tuple[np.ndarray, int]:
    codes, inverse = np.unique(np.asarray(labels), return_inverse=True)
    return inverse, len(codes)


def ols_fixed_effects(
    y: Sequence[float],
    measure: Sequence[float],
    dummy_sets: Optional[Mapping[str, Sequence]] = None,
    max_sweeps: int = 10_000,
    tol: float = 1e-10,
) -> OlsResult:
    """OLS of y on the measure with dummy sets absorbed by demeaning.

    Each dummy set is a full vector of group labels. The intercept and all
    dummies are swept out by alternating within-group demeaning of both
    series; the coefficient, HC1 standard error, and (adjusted) R-squared
    match the explicit-dummy regression with intercept and drop-first
    dummy columns.
    """
    ya = _as_float_array(y, "y")
    xa = _as_float_array(measure, "measure")
    if len(ya) != len(xa):
        raise InputError(f"length mismatch: {len(ya)} vs {len(xa)}")
    n = len(ya)
    dummy_sets = dict(dummy_sets or {})
    flags = tuple(sorted(dummy_sets))

    sets: list[tuple[np.ndarray, int]] = [(np.zeros(n, dtype=np.intp), 1)]  # intercept
    for name in flags:
        labels = dummy_sets[name]
        if len(labels) != n:
            raise InputError(f"dummy set {name!r} has {len(labels)} labels for {n} rows")
        sets.append(_group_codes(labels))

    n_params = 2 + sum(g - 1 for _, g in sets[1:])
    if n <= n_params:
        raise InputError(f"{n} observations cannot support {n_params} parameters")

    yt = ya.copy()
    xt = xa.copy()
    for sweep in range(max_sweeps):
        delta = 0.0
        for codes, g in sets:
            counts = np.bincount(codes, minlength=g).astype(np.float64)
            ym = np.bincount(codes, weights=yt, minlength=g) / counts
            xm = np.bincount(codes, weights=xt, minlength=g) / counts
            delta = max(delta, float(np.max(np.abs(ym))), float(np.max(np.abs(xm))))
            yt -= ym[codes]
            xt -= xm[codes]
        if delta < tol:
            break
    else:
        raise NumericalError(f"demeaning did not converge in {max_sweeps} sweeps")

    sxx = float(np.dot(xt, xt))
    if sxx / n < 1e-12:
        raise DegenerateInputError(
            "measure is collinear with the dummies (absorbed variance < 1e-12)"
        )
    beta = float(np.dot(xt, yt)) / sxx
    resid = yt - beta * xt

    meat = float(np.dot(xt * xt, resid * resid))
    var = (n / (n - n_params)) * meat / (sxx * sxx)
    se = math.sqrt(var)
    t = beta / se if se > 0 else math.copysign(math.inf, beta) if beta else 0.0

    sst = float(np.dot(ya - ya.mean(), ya - ya.mean()))
    sse = float(np.dot(resid, resid))
    if sst == 0.0:
        raise DegenerateInputError("y is constant")
    r2 = 1.0 - sse / sst
    adj_r2 = 1.0 - (1.0 - r2) * (n - 1) / (n - n_params)
    return OlsResult(
        coefficient_on_measure=beta,
        robust_se=se,
        t_stat=t,
        r2=r2,
        adj_r2=adj_r2,
        n_obs=n,
        spec_flags=flags,
    )


# ---------------------------------------------------------------------------
# Locally weighted polynomial smoothing


def _local_fit(
    x: np.ndarray, y: np.ndarray, x0: float, k: int, degree: int
) -> Optional[float]:
    """Weighted polynomial fit at x0 over the k nearest points, or None if
    the local design is singular."""
    dist = np.abs(x - x0)
    idx = np.argsort(dist, kind="stable")[:k]
    h = dist[idx].max()
    if h == 0.0:
        return None
    u = dist[idx] / h
    w = np.clip(1.0 - u**3, 0.0, None) ** 3
    active = w > 0
    if len(np.unique(x[idx][active])) < degree + 1:
        return None
    centered = x[idx] - x0
    design = np.vander(centered, N=degree + 1, increasing=True)
    sw = np.sqrt(w)
    coef, *_ = np.linalg.lstsq(design * sw[:, None], y[idx] * sw, rcond=None)
    return float(coef[0])


def local_poly_smooth(
    x: Sequence[float],
    y: Sequence[float],
    degree: int = 2,
    bandwidth: float = 0.6,
    grid: Optional[Sequence[float]] = None,
) -> SmoothCurve:
    """Tricube-weighted local polynomial regression on a percentile grid.

    At each grid point the nearest ceil(bandwidth*n) points are fit with a
    degree-``degree`` polynomial; a singular local design widens the window
    once before failing.
    """
    xa = _as_float_array(x, "x", min_len=degree + 2)
    ya = _as_float_array(y, "y", min_len=degree + 2)
    if len(xa) != len(ya):
        raise InputError(f"length mismatch: {len(xa)} vs {len(ya)}")
    if not (0.0 < bandwidth <= 1.0):
        raise InputError(f"bandwidth {bandwidth} outside (0, 1]")
    n = len(xa)
    k = max(math.ceil(bandwidth * n), degree + 2)
    grid_x = np.linspace(0.0, 100.0, 101) if grid is None else np.asarray(grid, float)
    fitted = np.empty(len(grid_x))
    for gi, x0 in enumerate(grid_x):
        value = _local_fit(xa, ya, float(x0), k, degree)
        if value is None:
            value = _local_fit(xa, ya, float(x0), min(2 * k, n), degree)
        if value is None:
            raise NumericalError(
                f"singular local design at grid point {x0} even after widening"
            )
        fitted[gi] = value
    if not np.all(np.isfinite(fitted)):
        raise NumericalError("smoother produced non-finite fitted values")
    return SmoothCurve(grid_x=grid_x, fitted_y=fitted, bandwidth=bandwidth)


def percentile_rank(values: Sequence[float]) -> np.ndarray:
    """Midrank-based percentiles spanning [0, 100]."""
    arr = _as_float_array(values, "values")
    n = len(arr)
    return 100.0 * (midranks(arr) - 1.0) / (n - 1)


def zscores(values: Sequence[float]) -> np.ndarray:
    """Standardize to zero mean and unit sample standard deviation."""
    arr = _as_float_array(values, "values")
    sd = arr.std(ddof=1)
    if sd == 0.0:
        raise DegenerateInputError("cannot standardize a constant series")
    return (arr - arr.mean()) / sd
