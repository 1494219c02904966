"""Graph-recovery metrics and the pairwise causal-asymmetry check."""
from __future__ import annotations

import enum
from dataclasses import asdict, dataclass

import numpy as np

from . import kernels
from .errors import InvalidIndexError, LengthMismatchError
from .types import EdgeSet


@dataclass(frozen=True)
class MetricsReport:
    f1: float
    precision: float
    recall: float
    shd: int
    n_true_edges: int
    n_est_edges: int

    def as_dict(self) -> dict:
        return asdict(self)


def _pair_states(edges: frozenset) -> dict[tuple[int, int], set]:
    states: dict[tuple[int, int], set] = {}
    for s, t in edges:
        states.setdefault((min(s, t), max(s, t)), set()).add((s, t))
    return states


def shd(est: EdgeSet, truth: EdgeSet, reversal_cost: int = 1) -> int:
    """Structural Hamming distance between two directed graphs.

    With ``reversal_cost=1`` every node pair whose connection differs costs
    one, so a reversed edge counts once. ``reversal_cost=2`` counts each
    differing directed edge separately.
    """
    if reversal_cost == 2:
        return len(est.edges ^ truth.edges)
    if reversal_cost != 1:
        raise ValueError("reversal_cost must be 1 or 2")
    a, b = _pair_states(est.edges), _pair_states(truth.edges)
    return sum(a.get(p, set()) != b.get(p, set()) for p in a.keys() | b.keys())


def compare_graphs(est: EdgeSet, truth: EdgeSet, d: int, reversal_cost: int = 1) -> MetricsReport:
    """Directed-edge precision, recall, F1 and SHD of ``est`` against ``truth``.

    Conventions for empty graphs: two empty graphs agree perfectly (all
    scores 1); otherwise a 0/0 ratio is reported as 0.
    """
    for e in est.edges | truth.edges:
        if not (0 <= e[0] < d and 0 <= e[1] < d):
            raise InvalidIndexError(f"edge {e} has an endpoint outside 0..{d - 1}")
    n_est, n_true = len(est.edges), len(truth.edges)
    tp = len(est.edges & truth.edges)
    if n_est == 0 and n_true == 0:
        precision = recall = f1 = 1.0
    else:
        precision = tp / n_est if n_est else 0.0
        recall = tp / n_true if n_true else 0.0
        denom = precision + recall
        f1 = 2 * precision * recall / denom if denom > 0 else 0.0
    return MetricsReport(
        f1=f1,
        precision=precision,
        recall=recall,
        shd=shd(est, truth, reversal_cost),
        n_true_edges=n_true,
        n_est_edges=n_est,
    )


class Direction(enum.Enum):
    X_CAUSES_Y = "x->y"
    Y_CAUSES_X = "y->x"


def asymmetry_direction(x, y) -> tuple[Direction, float]:
    """Likelier causal direction between two variables, with its score.

    The score is the mutual-information difference on the standardized
    pair: positive means ``x -> y``. A score of exactly zero reports
    ``x -> y``.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        raise LengthMismatchError(f"shapes {x.shape} and {y.shape} differ")
    xs, ys = kernels.standardize(x), kernels.standardize(y)
    score = kernels.diff_mutual_info(xs, ys, kernels.residual(xs, ys), kernels.residual(ys, xs))
    return (Direction.X_CAUSES_Y if score >= 0 else Direction.Y_CAUSES_X), score
