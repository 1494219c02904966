"""DirectLiNGAM: causal ordering followed by least-squares adjacency estimation."""
from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .ordering import DEFAULT_BLOCK, causal_order
from .types import (
    CausalOrder,
    DataMatrix,
    EdgeSet,
    WeightedDag,
    as_data_matrix,
    validate,
)


@dataclass(frozen=True)
class DirectLingamConfig:
    """Fitting options.

    Parameters
    ----------
    parallel : bool
        Spread each ordering round over a thread pool. Never changes results.
    workers : int
        Pool size when ``parallel`` is set.
    edge_threshold : float
        ``|weight|`` above which an entry counts as an edge in reports.
    block : int
        Regressor rows processed per vectorized kernel call.
    """

    parallel: bool = False
    workers: int = 1
    edge_threshold: float = 0.05
    block: int = DEFAULT_BLOCK

    def __post_init__(self):
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")
        if self.edge_threshold < 0:
            raise ValueError("edge_threshold must be nonnegative")
        if self.block < 1:
            raise ValueError("block must be >= 1")


def estimate_weights(X: DataMatrix, order: CausalOrder) -> tuple[np.ndarray, list[str]]:
    """OLS of each centered variable on all its predecessors in ``order``.

    Rank-deficient designs fall back to the minimum-norm solution and add a
    message to the returned warnings.
    """
    Xc = X.values - X.values.mean(axis=0)
    d = X.n_vars
    W = np.zeros((d, d))
    warnings = []
    for p in range(1, d):
        i = order[p]
        preds = list(order.order[:p])
        coef, _, rank, _ = np.linalg.lstsq(Xc[:, preds], Xc[:, i], rcond=None)
        if rank < len(preds):
            warnings.append(
                f"singular design for {X.var_names[i]} (rank {rank} < {len(preds)}); "
                "used minimum-norm solution"
            )
        W[i, preds] = coef
    return W, warnings


def fit(X, cfg: DirectLingamConfig | None = None, timings: dict | None = None) -> WeightedDag:
    """Fit DirectLiNGAM to ``X`` (samples x variables).

    ``timings``, if given, is filled with ``total_seconds``,
    ``ordering_seconds`` (time inside the exogeneity searches) and
    ``weights_seconds``. Instrumentation does not touch the numerics.
    """
    cfg = cfg or DirectLingamConfig()
    t_start = time.perf_counter()
    X = as_data_matrix(X)
    validate(X)
    stats: dict = {}
    order = causal_order(X, cfg.parallel, cfg.workers, cfg.block, stats=stats)
    t_w = time.perf_counter()
    W, warnings = estimate_weights(X, order)
    t_end = time.perf_counter()
    if timings is not None:
        timings["ordering_seconds"] = stats.get("search_seconds", 0.0)
        timings["weights_seconds"] = t_end - t_w
        timings["total_seconds"] = t_end - t_start
    return WeightedDag(W, order, warnings=tuple(warnings))


def to_edges(dag: WeightedDag, threshold: float) -> EdgeSet:
    """Edge ``j -> i`` for every ``|weights[i, j]| > threshold``."""
    if threshold < 0:
        raise ValueError("threshold must be nonnegative")
    return EdgeSet.from_weights(dag.weights, threshold)
