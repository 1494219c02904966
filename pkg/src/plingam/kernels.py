"""Pairwise statistics used by the exogeneity search.

Every routine works along the last axis, so the same code handles a single
vector ``(m,)`` and a batch of rows ``(b, m)``.  The ordering search calls
the batched forms with preallocated buffers; the 1-D public functions call
the very same primitives, which is what makes the sequential and parallel
searches agree bit for bit.

Means are ``ndarray.mean`` along the last axis of C-contiguous rows. NumPy
reduces each row with the same fixed pairwise schedule regardless of how
many rows are in the batch or which thread runs it.
"""
from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .errors import LengthMismatchError, TooShortError, ZeroVarianceError

# Maximum-entropy approximation constants (Hyvarinen 1998 / Hyvarinen & Smith 2013).
K1 = 79.047
K2 = 7.4129
GAMMA = 0.37457
GAUSSIAN_ENTROPY = (1.0 + math.log(2.0 * math.pi)) / 2.0
_LOG2 = math.log(2.0)

# Spread at or below this fraction of the data scale counts as zero variance.
SPREAD_RTOL = 1e-12


def is_degenerate_spread(std, scale) -> np.ndarray | bool:
    """True where a standard deviation is indistinguishable from rounding noise."""
    scale = np.max(np.abs(scale)) if np.ndim(scale) else abs(scale)
    return np.asarray(std) <= SPREAD_RTOL * scale


def _rows(x) -> np.ndarray:
    a = np.asarray(x, dtype=np.float64)
    return np.ascontiguousarray(a.reshape(1, -1) if a.ndim == 1 else a)


def _std_rows(x: np.ndarray, tmp: np.ndarray) -> np.ndarray:
    np.subtract(x, x.mean(axis=-1, keepdims=True), out=tmp)
    np.multiply(tmp, tmp, out=tmp)
    return np.sqrt(tmp.mean(axis=-1))


class Centered(NamedTuple):
    c: np.ndarray  # rows minus their means
    mean: np.ndarray  # (rows, 1)
    var: np.ndarray  # (rows, 1), population variance

    def rows(self, lo: int, hi: int) -> "Centered":
        return Centered(self.c[lo:hi], self.mean[lo:hi], self.var[lo:hi])


def _center_rows(x: np.ndarray) -> Centered:
    mean = x.mean(axis=-1, keepdims=True)
    c = x - mean
    return Centered(c, mean, (c * c).mean(axis=-1, keepdims=True))


def _residual_into(xi: Centered, xj: Centered, out: np.ndarray) -> np.ndarray:
    """Residual of ``xi`` regressed on ``xj``, row-wise with broadcasting.

    Evaluates ``xi - slope * xj`` as ``(xi_c - slope * xj_c) + (mean_i -
    slope * mean_j)``, which keeps the residual exactly orthogonal to
    ``xj`` up to rounding even when the means dwarf the spreads. The caller
    rejects flat regressors beforehand.
    """
    np.multiply(xi.c, xj.c, out=out)
    slope = out.mean(axis=-1, keepdims=True) / xj.var
    np.multiply(xj.c, slope, out=out)
    np.subtract(xi.c, out, out=out)
    np.add(out, xi.mean - slope * xj.mean, out=out)
    return out


def _entropy_into(u: np.ndarray, t1: np.ndarray, t2: np.ndarray) -> np.ndarray:
    # log cosh(u) = |u| + log(1 + exp(-2|u|)) - log 2, finite for any |u|
    np.abs(u, out=t1)
    np.multiply(t1, -2.0, out=t2)
    np.exp(t2, out=t2)
    np.add(t2, 1.0, out=t2)
    np.log(t2, out=t2)
    np.add(t2, t1, out=t2)
    log_cosh = t2.mean(axis=-1) - _LOG2
    np.multiply(u, u, out=t1)
    np.multiply(t1, -0.5, out=t1)
    np.exp(t1, out=t1)
    np.multiply(t1, u, out=t1)
    gauss = t1.mean(axis=-1)
    c1 = log_cosh - GAMMA
    return GAUSSIAN_ENTROPY - K1 * (c1 * c1) - K2 * (gauss * gauss)


def _scalar_or_rows(values: np.ndarray, like) -> float | np.ndarray:
    return float(values[0]) if np.ndim(like) == 1 else values


def standardize(x) -> np.ndarray:
    """Zero-mean, unit population-variance copy of ``x`` (row-wise for 2-D input)."""
    rows = _rows(x)
    if rows.shape[-1] < 2:
        raise TooShortError(f"need at least 2 values, got {rows.shape[-1]}")
    z = standardize_rows(rows)
    return z[0] if np.ndim(x) == 1 else z


def standardize_rows(rows: np.ndarray) -> np.ndarray:
    """Batched standardize; raises ZeroVarianceError(row) on the first flat row.

    Centering takes two passes: the second removes the rounding error the
    first leaves behind when a row's mean is large against its spread, so
    the output is standardized to working precision and re-standardizing
    it is a no-op.
    """
    out = np.empty_like(rows)
    std = _std_rows(rows, out)
    for r in range(rows.shape[0]):
        if is_degenerate_spread(std[r], rows[r]):
            raise ZeroVarianceError(r if rows.shape[0] > 1 else None)
    np.subtract(rows, rows.mean(axis=-1, keepdims=True), out=out)
    out -= out.mean(axis=-1, keepdims=True)
    np.divide(out, _std_rows(out, np.empty_like(out))[:, None], out=out)
    return out


def residual(xi, xj) -> np.ndarray:
    """``xi - cov(xi, xj) / var(xj) * xj`` using population moments."""
    a, b = _rows(xi), _rows(xj)
    if a.shape[-1] != b.shape[-1]:
        raise LengthMismatchError(f"lengths {a.shape[-1]} and {b.shape[-1]} differ")
    if a.shape[-1] < 2:
        raise TooShortError("need at least 2 values")
    bstd = _std_rows(b, np.empty_like(b))
    for r in range(b.shape[0]):
        if is_degenerate_spread(bstd[r], b[r]):
            raise ZeroVarianceError(r if b.shape[0] > 1 else None)
    out = np.empty(np.broadcast_shapes(a.shape, b.shape))
    r = _residual_into(_center_rows(a), _center_rows(b), out)
    return r[0] if np.ndim(xi) == 1 and np.ndim(xj) == 1 else r


def entropy_approx(u) -> float | np.ndarray:
    """Maximum-entropy approximation of differential entropy.

    ``u`` must already be standardized; this is not re-checked.
    """
    rows = _rows(u)
    h = _entropy_into(rows, np.empty_like(rows), np.empty_like(rows))
    return _scalar_or_rows(h, u)


def normalized_residual_entropy(r: np.ndarray, tmp: np.ndarray, tmp2: np.ndarray) -> np.ndarray:
    """Entropy of each residual row after scaling it to unit standard deviation.

    ``r`` is overwritten. Raises ZeroVarianceError(row) on a degenerate row.
    """
    std = _std_rows(r, tmp)
    degenerate = is_degenerate_spread(std, 1.0)
    if np.any(degenerate):
        raise ZeroVarianceError(int(np.argmax(degenerate)))
    np.divide(r, std[:, None], out=r)
    return _entropy_into(r, tmp, tmp2)


def diff_mutual_info(xi_std, xj_std, ri_j, rj_i) -> float:
    """Difference of mutual informations; positive favours ``i -> j``.

    All inputs are standardized variables or residuals between them, so the
    zero-spread check on the residuals uses unit scale.
    """
    vecs = [_rows(v) for v in (xi_std, xj_std, ri_j, rj_i)]
    if len({v.shape for v in vecs}) != 1:
        raise LengthMismatchError("all four vectors must have the same length")
    h_i, h_j = (float(entropy_approx(v[0])) for v in vecs[:2])
    h_rij, h_rji = (
        float(normalized_residual_entropy(v.copy(), np.empty_like(v), np.empty_like(v))[0])
        for v in vecs[2:]
    )
    return (h_j + h_rij) - (h_i + h_rji)
