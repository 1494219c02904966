"""Domain types shared by the fitting, simulation and metrics modules.

All containers are frozen and hold read-only numpy arrays, so they can be
handed to worker threads without copying.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DimensionMismatchError,
    InvalidIndexError,
    NonFiniteError,
    TooFewSamplesError,
    ZeroVarianceError,
)
from .kernels import is_degenerate_spread


def _frozen(a, order: str = "C") -> np.ndarray:
    arr = np.array(a, dtype=np.float64, order=order, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class DataMatrix:
    """Dense ``m x d`` observation matrix (rows are samples).

    Storage is column-major so ``column(j)`` is a contiguous view.
    """

    values: np.ndarray
    var_names: tuple[str, ...] = ()

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim == 1:
            values = values[:, None]
        if values.ndim != 2:
            raise DimensionMismatchError(f"expected a 2-D matrix, got shape {values.shape}")
        object.__setattr__(self, "values", _frozen(values, order="F"))
        names = tuple(self.var_names) or tuple(f"x{j}" for j in range(values.shape[1]))
        if len(names) != values.shape[1]:
            raise DimensionMismatchError(
                f"{len(names)} variable names for {values.shape[1]} columns"
            )
        object.__setattr__(self, "var_names", tuple(str(n) for n in names))

    @property
    def n_samples(self) -> int:
        return self.values.shape[0]

    @property
    def n_vars(self) -> int:
        return self.values.shape[1]

    def column(self, j: int) -> np.ndarray:
        return self.values[:, j]

    def columns_as_rows(self) -> np.ndarray:
        """``d x m`` C-contiguous view: one variable per row."""
        return self.values.T


def validate(data: DataMatrix) -> None:
    """Raise if ``data`` violates any DataMatrix invariant.

    Checks are ordered: sample count, finiteness, then per-column spread.
    """
    m, d = data.values.shape
    if m < 2:
        raise TooFewSamplesError(f"need at least 2 samples, got {m}")
    if d < 1:
        raise DimensionMismatchError("need at least one variable")
    finite = np.isfinite(data.values)
    if not finite.all():
        row, col = np.argwhere(~finite)[0]
        raise NonFiniteError(int(row), int(col))
    for j in range(d):
        col = data.values[:, j]
        if is_degenerate_spread(col.std(), col):
            raise ZeroVarianceError(j, data.var_names[j])


@dataclass(frozen=True)
class CausalOrder:
    """Permutation of variable indices; ``order[p]`` sits at causal position ``p``."""

    order: tuple[int, ...]

    def __post_init__(self):
        order = tuple(int(i) for i in self.order)
        if sorted(order) != list(range(len(order))):
            raise InvalidIndexError(f"{order} is not a permutation of 0..{len(order) - 1}")
        object.__setattr__(self, "order", order)

    def __len__(self):
        return len(self.order)

    def __iter__(self):
        return iter(self.order)

    def __getitem__(self, p):
        return self.order[p]

    def position(self, var: int) -> int:
        """Causal position k(var)."""
        return self.order.index(var)


@dataclass(frozen=True, eq=False)
class WeightedDag:
    """Weighted adjacency with ``weights[i, j]`` the effect of ``x_j`` on ``x_i``."""

    weights: np.ndarray
    order: CausalOrder
    intercepts: np.ndarray | None = None
    warnings: tuple[str, ...] = ()

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise DimensionMismatchError(f"weights must be square, got shape {w.shape}")
        object.__setattr__(self, "weights", _frozen(w))
        if not isinstance(self.order, CausalOrder):
            object.__setattr__(self, "order", CausalOrder(tuple(self.order)))
        c = np.zeros(w.shape[0]) if self.intercepts is None else self.intercepts
        object.__setattr__(self, "intercepts", _frozen(c))

    @property
    def n_vars(self) -> int:
        return self.weights.shape[0]

    def __eq__(self, other):
        if not isinstance(other, WeightedDag):
            return NotImplemented
        return (
            self.order == other.order
            and np.array_equal(self.weights, other.weights)
            and np.array_equal(self.intercepts, other.intercepts)
        )

    __hash__ = None


def permuted_is_lower_triangular(dag: WeightedDag) -> bool:
    """True iff no variable receives an edge from itself or a later variable."""
    d = dag.weights.shape[0]
    if len(dag.order) != d:
        raise DimensionMismatchError(
            f"order has {len(dag.order)} entries for a {d}x{d} weight matrix"
        )
    p = np.asarray(dag.order.order, dtype=np.intp)
    permuted = dag.weights[np.ix_(p, p)]
    return not np.any(np.triu(permuted) != 0)


@dataclass(frozen=True)
class EdgeSet:
    """Directed edges ``(src, dst)``; no self-loops."""

    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        edges = frozenset((int(s), int(t)) for s, t in self.edges)
        loops = [e for e in edges if e[0] == e[1]]
        if loops:
            raise InvalidIndexError(f"self-loops are not allowed: {sorted(loops)}")
        object.__setattr__(self, "edges", edges)

    @classmethod
    def of(cls, pairs: Iterable[tuple[int, int]]) -> "EdgeSet":
        return cls(frozenset(pairs))

    @classmethod
    def from_weights(cls, weights: np.ndarray, threshold: float = 0.0) -> "EdgeSet":
        """Edges ``j -> i`` wherever ``|weights[i, j]| > threshold``."""
        w = np.asarray(weights)
        dst, src = np.nonzero(np.abs(w) > threshold)
        return cls(frozenset((int(s), int(t)) for s, t in zip(src, dst) if s != t))

    def to_matrix(self, d: int) -> np.ndarray:
        """Binary adjacency in the ``[dst, src]`` convention used by WeightedDag."""
        a = np.zeros((d, d), dtype=np.int8)
        for s, t in self.edges:
            a[t, s] = 1
        return a

    def __len__(self):
        return len(self.edges)

    def __iter__(self):
        return iter(sorted(self.edges))

    def __contains__(self, e):
        return tuple(e) in self.edges


@dataclass(frozen=True, eq=False)
class VarModel:
    """Fitted structural VAR: instantaneous DAG plus causal lagged matrices.

    ``b_lagged[t]`` holds the lag ``t + 1`` effects and equals
    ``(I - B0) @ m_raw[t]``.
    """

    b0: WeightedDag
    b_lagged: tuple[np.ndarray, ...]
    m_raw: tuple[np.ndarray, ...]
    lag: int
    residuals: DataMatrix | None = None

    def __post_init__(self):
        object.__setattr__(self, "b_lagged", tuple(_frozen(b) for b in self.b_lagged))
        object.__setattr__(self, "m_raw", tuple(_frozen(m) for m in self.m_raw))
        if self.lag < 1 or len(self.b_lagged) != self.lag or len(self.m_raw) != self.lag:
            raise DimensionMismatchError(
                f"lag {self.lag} with {len(self.b_lagged)} causal and {len(self.m_raw)} raw matrices"
            )

    @property
    def n_vars(self) -> int:
        return self.b0.n_vars

    def matrices(self) -> list[np.ndarray]:
        """``[B0, B1, ..., Bk]``."""
        return [self.b0.weights, *self.b_lagged]

    def __eq__(self, other):
        if not isinstance(other, VarModel):
            return NotImplemented
        return (
            self.lag == other.lag
            and self.b0 == other.b0
            and all(np.array_equal(a, b) for a, b in zip(self.b_lagged, other.b_lagged))
            and all(np.array_equal(a, b) for a, b in zip(self.m_raw, other.m_raw))
        )

    __hash__ = None


def as_data_matrix(x, var_names: Sequence[str] | None = None) -> DataMatrix:
    if isinstance(x, DataMatrix):
        return x
    return DataMatrix(np.asarray(x, dtype=np.float64), tuple(var_names or ()))
