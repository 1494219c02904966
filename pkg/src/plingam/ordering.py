"""Exogenous-variable search and the recursive causal-ordering loop.

One search round scores every candidate ``i`` by

    k_i = -sum_{j != i} min(0, mi_diff(i, j))**2

and picks the largest. The pair statistic needs the entropy of the
normalized residual of ``i`` on ``j`` and of ``j`` on ``i``; each of those
is computed exactly once per round, by the task that owns the regressand.
Candidate tasks write disjoint rows of a shared matrix, so the parallel
variant needs no locks and cannot depend on scheduling. The per-candidate
sums are then accumulated over ``j`` in ascending order, identically for
both variants.
"""
from __future__ import annotations

import os
import time
from concurrent.futures import Executor, ThreadPoolExecutor
from contextlib import nullcontext
from typing import NamedTuple, Sequence

import numpy as np

from . import kernels
from .errors import EmptyCandidatesError, InvalidIndexError, ZeroVarianceError
from .types import CausalOrder, DataMatrix, as_data_matrix

# Rows of the regressor batch handled per vectorized kernel call.
DEFAULT_BLOCK = 8


class SearchResult(NamedTuple):
    chosen: int
    scores: np.ndarray  # length d; -inf outside the candidate set


def default_workers() -> int:
    env = os.environ.get("PLINGAM_WORKERS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _check_candidates(U: Sequence[int], d: int) -> list[int]:
    cand = [int(i) for i in U]
    if not cand:
        raise EmptyCandidatesError("candidate set is empty")
    if len(set(cand)) != len(cand):
        raise InvalidIndexError(f"duplicate candidates in {cand}")
    bad = [i for i in cand if not 0 <= i < d]
    if bad:
        raise InvalidIndexError(f"candidate indices {bad} out of range for {d} variables")
    return sorted(cand)


def _block_ranges(n: int, skip: int, block: int):
    for lo, hi in ((0, skip), (skip + 1, n)):
        for s in range(lo, hi, block):
            yield s, min(s + block, hi)


def _residual_entropy_row(
    S: kernels.Centered,
    a: int,
    R: np.ndarray,
    block: int,
    cand: list[int],
) -> None:
    """Fill ``R[a, b]`` with the normalized-residual entropy of ``Z[a]`` on ``Z[b]``."""
    n, m = S.c.shape
    buf = np.empty((3, min(block, max(n - 1, 1)), m))
    xi = S.rows(a, a + 1)
    for lo, hi in _block_ranges(n, a, block):
        w = hi - lo
        r = kernels._residual_into(xi, S.rows(lo, hi), buf[0, :w])
        try:
            R[a, lo:hi] = kernels.normalized_residual_entropy(r, buf[1, :w], buf[2, :w])
        except ZeroVarianceError as exc:
            j = cand[lo + exc.col]
            raise ZeroVarianceError(
                cand[a], detail=f"residual on column {j} vanishes (collinear pair)"
            ) from None


def _scores_from_entropies(H: np.ndarray, R: np.ndarray) -> np.ndarray:
    n = H.shape[0]
    k = np.zeros(n)
    for b in range(n):
        # mi[a] = mi_diff(a, b) = (H_b + R_ab) - (H_a + R_ba)
        mi = (H[b] + R[:, b]) - (H + R[b, :])
        c = np.minimum(0.0, mi)
        c *= c
        c[b] = 0.0
        k += c
    return -k


def _search_rows(
    rows: np.ndarray,
    U: Sequence[int],
    executor: Executor | None = None,
    block: int = DEFAULT_BLOCK,
) -> SearchResult:
    d = rows.shape[0]
    cand = _check_candidates(U, d)
    scores = np.full(d, -np.inf)
    if len(cand) == 1:
        scores[cand[0]] = 0.0
        return SearchResult(cand[0], scores)

    try:
        Z = kernels.standardize_rows(np.ascontiguousarray(rows[cand]))
    except ZeroVarianceError as exc:
        raise ZeroVarianceError(cand[exc.col]) from None
    n = len(cand)
    H = kernels._entropy_into(Z, np.empty_like(Z), np.empty_like(Z))
    S = kernels._center_rows(Z)
    R = np.zeros((n, n))

    def task(a: int) -> None:
        _residual_entropy_row(S, a, R, block, cand)

    if executor is None:
        for a in range(n):
            task(a)
    else:
        # list() re-raises the first worker exception
        list(executor.map(task, range(n)))

    k = _scores_from_entropies(H, R)
    scores[cand] = k
    # np.argmax returns the first maximum, i.e. the smallest index
    return SearchResult(cand[int(np.argmax(k))], scores)


def search_causal_order(X, U: Sequence[int], block: int = DEFAULT_BLOCK) -> SearchResult:
    """Sequential exogeneity search over the candidate columns ``U`` of ``X``."""
    X = as_data_matrix(X)
    return _search_rows(np.ascontiguousarray(X.columns_as_rows()), U, None, block)


def search_causal_order_parallel(
    X,
    U: Sequence[int],
    workers: int,
    executor: Executor | None = None,
    block: int = DEFAULT_BLOCK,
) -> SearchResult:
    """Same result as :func:`search_causal_order`, candidates spread over threads.

    Pass ``executor`` to reuse a pool across rounds; otherwise one with
    ``workers`` threads is created for this call.
    """
    if workers < 1:
        raise ValueError("workers must be >= 1")
    X = as_data_matrix(X)
    rows = np.ascontiguousarray(X.columns_as_rows())
    if executor is not None:
        return _search_rows(rows, U, executor, block)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return _search_rows(rows, U, pool, block)


def _regress_out_rows(rows: np.ndarray, exog: int, remaining: Sequence[int]) -> None:
    if not remaining:
        return
    idx = list(remaining)
    try:
        rows[idx] = kernels.residual(rows[idx], rows[exog])
    except ZeroVarianceError:
        raise ZeroVarianceError(exog) from None


def regress_out(X, exog: int, remaining: Sequence[int]) -> DataMatrix:
    """Columns ``remaining`` of ``X`` with the least-squares effect of ``exog`` removed."""
    X = as_data_matrix(X)
    remaining = [int(r) for r in remaining]
    if exog in remaining:
        raise InvalidIndexError(f"exogenous column {exog} is also listed as remaining")
    rows = np.array(X.columns_as_rows(), order="C")
    _regress_out_rows(rows, exog, remaining)
    return DataMatrix(rows[remaining].T, tuple(X.var_names[r] for r in remaining))


def causal_order(
    X,
    parallel: bool = False,
    workers: int = 1,
    block: int = DEFAULT_BLOCK,
    stats: dict | None = None,
) -> CausalOrder:
    """Estimate a causal order by repeated search and regression.

    ``stats``, when given, receives ``search_seconds`` (time spent inside
    the exogeneity searches) and ``rounds``.
    """
    X = as_data_matrix(X)
    d = X.n_vars
    rows = np.array(X.columns_as_rows(), order="C")
    U = list(range(d))
    K: list[int] = []
    search_seconds = 0.0
    pool = ThreadPoolExecutor(max_workers=workers) if parallel else nullcontext()
    try:
        with pool as executor:
            while len(U) > 1:
                t0 = time.perf_counter()
                chosen, _ = _search_rows(rows, U, executor, block)
                search_seconds += time.perf_counter() - t0
                K.append(chosen)
                U.remove(chosen)
                _regress_out_rows(rows, chosen, U)
    except ZeroVarianceError as exc:
        if exc.name is None and exc.col is not None:
            raise ZeroVarianceError(exc.col, X.var_names[exc.col], exc.detail) from None
        raise
    K.extend(U)
    if stats is not None:
        stats["search_seconds"] = stats.get("search_seconds", 0.0) + search_seconds
        stats["rounds"] = stats.get("rounds", 0) + max(d - 1, 0)
    return CausalOrder(tuple(K))
