"""Synthetic ground truth: two-level LiNGAM DAGs and structural VAR series.

Randomness comes from ``numpy.random.Generator(PCG64)`` seeded with
``[seed, stream]``, one stream per generator, so the graph and the data
drawn for the same seed are independent but both reproducible.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionMismatchError, UnstableSystemError
from .types import CausalOrder, DataMatrix, WeightedDag, permuted_is_lower_triangular

_GRAPH_STREAM = 0
_DATA_STREAM = 1
_SVAR_STREAM = 2

# Simulated magnitudes beyond this are treated as divergence.
OVERFLOW_GUARD = 1e100


@dataclass(frozen=True)
class SimSpec:
    dims: int
    samples: int
    seed: int = 0
    edge_prob: float = 0.5
    noise_low: float = 0.0
    noise_high: float = 1.0

    def __post_init__(self):
        if self.dims < 2:
            raise ValueError(f"simulation needs dims >= 2, got {self.dims}")
        if self.samples < 2:
            raise ValueError(f"simulation needs samples >= 2, got {self.samples}")
        if not 0.0 < self.edge_prob <= 1.0:
            raise ValueError(f"edge_prob must lie in (0, 1], got {self.edge_prob}")
        if not self.noise_low < self.noise_high:
            raise ValueError("noise_low must be below noise_high")

    @property
    def noise_variance(self) -> float:
        return (self.noise_high - self.noise_low) ** 2 / 12.0

    def rng(self, stream: int) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64([self.seed, stream]))


def level_split(spec: SimSpec) -> tuple[list[int], list[int]]:
    """Variable indices at level 0 and level 1 for ``spec``.

    Positions ``0..ceil(d/2)-1`` form level 0; a seeded permutation maps
    positions to variable labels.
    """
    return _split_levels(spec.rng(_GRAPH_STREAM), spec.dims)


def _split_levels(rng: np.random.Generator, d: int) -> tuple[list[int], list[int]]:
    labels = rng.permutation(d)
    n0 = math.ceil(d / 2)
    return sorted(int(v) for v in labels[:n0]), sorted(int(v) for v in labels[n0:])


def gen_two_level_dag(spec: SimSpec) -> WeightedDag:
    """Bipartite DAG with ``N(0, 1)`` weights on level-0 -> level-1 edges."""
    rng = spec.rng(_GRAPH_STREAM)
    level0, level1 = _split_levels(rng, spec.dims)
    present = rng.random((len(level1), len(level0))) < spec.edge_prob
    theta = rng.standard_normal((len(level1), len(level0)))
    weights = np.zeros((spec.dims, spec.dims))
    weights[np.ix_(level1, level0)] = np.where(present, theta, 0.0)
    return WeightedDag(weights, CausalOrder(tuple(level0 + level1)))


def sample_lingam(dag: WeightedDag, spec: SimSpec) -> DataMatrix:
    """Draw ``spec.samples`` rows of ``x_i = sum_j w_ij x_j + e_i`` in causal order.

    Noise is ``Uniform(noise_low, noise_high)`` and is not centered.
    """
    if dag.n_vars != spec.dims:
        raise DimensionMismatchError(f"dag has {dag.n_vars} variables, spec has {spec.dims}")
    if not permuted_is_lower_triangular(dag):
        raise ValueError("dag is not acyclic under its order")
    rng = spec.rng(_DATA_STREAM)
    noise = rng.uniform(spec.noise_low, spec.noise_high, size=(spec.samples, spec.dims))
    X = np.zeros_like(noise)
    W = dag.weights
    for i in dag.order:
        parents = np.flatnonzero(W[i])
        X[:, i] = noise[:, i]
        if parents.size:
            X[:, i] += X[:, parents] @ W[i, parents]
    return DataMatrix(X)


def companion_spectral_radius(lagged: Sequence[np.ndarray]) -> float:
    """Spectral radius of the VAR companion matrix built from reduced-form lags."""
    k = len(lagged)
    d = lagged[0].shape[0]
    C = np.zeros((k * d, k * d))
    C[:d, :] = np.hstack(lagged)
    if k > 1:
        C[d:, :-d] = np.eye((k - 1) * d)
    return float(np.max(np.abs(np.linalg.eigvals(C))))


def sample_svar(
    b0: WeightedDag,
    m_lagged: Sequence[np.ndarray],
    T: int,
    burn_in: int,
    spec: SimSpec,
):
    """Simulate ``x(t) = B0 x(t) + sum_tau B_tau x(t - tau) + e(t)``.

    ``m_lagged`` holds the structural lag matrices ``B_1..B_k``. Each step
    solves the instantaneous system, i.e. applies ``(I - B0)^-1``. Returns a
    :class:`plingam.var.TimeSeries` of ``T`` rows after ``burn_in``.
    """
    from .var import TimeSeries

    d = b0.n_vars
    lagged = [np.asarray(b, dtype=np.float64) for b in m_lagged]
    if any(b.shape != (d, d) for b in lagged):
        raise DimensionMismatchError("lag matrices must match B0's shape")
    if not permuted_is_lower_triangular(b0):
        raise ValueError("B0 is not acyclic under its order")
    mix = np.linalg.inv(np.eye(d) - b0.weights)
    reduced = [mix @ b for b in lagged]
    k = len(reduced)
    rng = spec.rng(_SVAR_STREAM)
    n = T + burn_in
    shocks = rng.uniform(spec.noise_low, spec.noise_high, size=(n, d)) @ mix.T
    x = np.zeros((n + k, d))
    for t in range(k, n + k):
        acc = shocks[t - k].copy()
        for tau, M in enumerate(reduced, start=1):
            acc += M @ x[t - tau]
        if not np.all(np.abs(acc) < OVERFLOW_GUARD):
            raise UnstableSystemError(f"series diverged at step {t - k}")
        x[t] = acc
    return TimeSeries(x[k + burn_in :])
