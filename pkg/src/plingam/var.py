"""VarLiNGAM: VAR(k) by least squares, DirectLiNGAM on the innovations.

The lagged causal matrices are ``B_tau = (I - B0) @ M_tau`` where ``M_tau``
are the reduced-form VAR coefficients and ``B0`` the instantaneous DAG.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .direct import DirectLingamConfig, fit
from .errors import InsufficientRowsError, NonFiniteError, NumericError, SingularDesignError
from .types import DataMatrix, VarModel, WeightedDag


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """``T x d`` series, row ``t`` is the observation at time ``t``."""

    values: np.ndarray
    timestamps: np.ndarray | None = None
    var_names: tuple[str, ...] = ()

    def __post_init__(self):
        v = np.array(self.values, dtype=np.float64)
        if v.ndim == 1:
            v = v[:, None]
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        if not self.var_names:
            object.__setattr__(self, "var_names", tuple(f"x{j}" for j in range(v.shape[1])))
        finite = np.isfinite(v)
        if not finite.all():
            row, col = np.argwhere(~finite)[0]
            raise NonFiniteError(int(row), int(col))

    @property
    def n_obs(self) -> int:
        return self.values.shape[0]

    @property
    def n_vars(self) -> int:
        return self.values.shape[1]


def _lag_design(x: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    T, d = x.shape
    n = T - k
    Z = np.empty((n, 1 + k * d))
    Z[:, 0] = 1.0
    for tau in range(1, k + 1):
        Z[:, 1 + (tau - 1) * d : 1 + tau * d] = x[k - tau : T - tau]
    return Z, x[k:]


def estimate_var(ts: TimeSeries, k: int = 1) -> tuple[list[np.ndarray], DataMatrix]:
    """Least-squares VAR(k) with intercept.

    Returns the coefficient matrices ``M_1..M_k`` (``M_tau[i, j]`` is the
    effect of ``x_j(t - tau)`` on ``x_i(t)``) and the ``T - k`` residual rows.
    """
    if k < 1:
        raise ValueError(f"lag must be >= 1, got {k}")
    T, d = ts.values.shape
    n_params = 1 + k * d
    if T < k + 2 * d or T - k <= n_params:
        raise InsufficientRowsError(
            f"{T} rows cannot support a VAR({k}) with {d} variables"
        )
    Z, Y = _lag_design(ts.values, k)
    coef, _, rank, _ = np.linalg.lstsq(Z, Y, rcond=None)
    if rank < n_params:
        raise SingularDesignError(
            f"VAR design matrix has rank {rank} < {n_params} (constant or collinear series)"
        )
    resid = Y - Z @ coef
    m_raw = [coef[1 + (tau - 1) * d : 1 + tau * d].T.copy() for tau in range(1, k + 1)]
    return m_raw, DataMatrix(resid, ts.var_names)


def fit_varlingam(ts: TimeSeries, k: int = 1, cfg: DirectLingamConfig | None = None) -> VarModel:
    """VAR(k) estimation, DirectLiNGAM on its residuals, then the lag transform."""
    m_raw, resid = estimate_var(ts, k)
    b0 = fit(resid, cfg)
    lhs = np.eye(ts.n_vars) - b0.weights
    b_lagged = [lhs @ m for m in m_raw]
    if not all(np.array_equal(b, lhs @ m) for b, m in zip(b_lagged, m_raw)):
        raise NumericError("lagged causal matrices disagree with (I - B0) @ M")
    return VarModel(b0, tuple(b_lagged), tuple(m_raw), k, resid)


def degree_distribution(b0: WeightedDag | np.ndarray, threshold: float = 0.0) -> tuple[np.ndarray, np.ndarray]:
    """Per-node in- and out-degrees of the thresholded instantaneous graph."""
    W = b0.weights if isinstance(b0, WeightedDag) else np.asarray(b0)
    A = np.abs(W) > threshold
    np.fill_diagonal(A, False)
    return A.sum(axis=1).astype(int), A.sum(axis=0).astype(int)


class Influence(NamedTuple):
    var: int
    lag: int  # 0 for instantaneous, tau for x(t - tau)
    score: float
    name: str = ""

    @property
    def tag(self) -> str:
        return f"{self.name or self.var}_t" if self.lag == 0 else f"{self.name or self.var}_t-{self.lag}"


def _rank(per_lag: np.ndarray, top_n: int, names: Sequence[str]) -> list[Influence]:
    # per_lag: (k + 1) x d contributions
    total = per_lag.sum(axis=0)
    ranked = sorted(
        (v for v in range(per_lag.shape[1]) if total[v] > 0),
        key=lambda v: (-total[v], v),
    )
    return [
        Influence(v, int(np.argmax(per_lag[:, v])), float(total[v]), names[v] if names else "")
        for v in ranked[:top_n]
    ]


def influence_ranking(
    model: VarModel,
    threshold: float = 0.0,
    top_n: int = 5,
    names: Sequence[str] = (),
) -> tuple[list[Influence], list[Influence]]:
    """Top exerting and top receiving variables by total absolute effect.

    A variable's exerting score sums ``|weight|`` over its outgoing edges in
    every matrix ``B0..Bk`` after thresholding; the receiving score does the
    same over incoming edges. Self-lag (diagonal) effects are excluded. Each
    entry is tagged with the lag contributing most to its score.
    """
    if top_n < 1:
        raise ValueError("top_n must be >= 1")
    mats = np.stack(model.matrices())
    A = np.where(np.abs(mats) > threshold, np.abs(mats), 0.0)
    if not names and model.residuals is not None:
        names = model.residuals.var_names
    idx = np.arange(model.n_vars)
    A[:, idx, idx] = 0.0
    exerting = _rank(A.sum(axis=1), top_n, names)
    receiving = _rank(A.sum(axis=2), top_n, names)
    return exerting, receiving
