"""Time-series cleanup applied before VarLiNGAM: interpolate, drop, difference."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DataError, EmptyAfterPreprocessingError


@dataclass
class PreprocessLog:
    steps: list[str] = field(default_factory=list)
    interpolated_cells: int = 0
    dropped_columns: list[str] = field(default_factory=list)
    rows_in: int = 0
    rows_out: int = 0


def interpolate_linear(values: np.ndarray, timestamps: np.ndarray | None = None) -> tuple[np.ndarray, int]:
    """Fill interior gaps by linear interpolation in time.

    Gaps before the first or after the last observation of a column are
    left missing. Without timestamps, rows are assumed unit-spaced.
    """
    v = np.array(values, dtype=np.float64)
    T = v.shape[0]
    t = np.arange(T, dtype=np.float64) if timestamps is None else np.asarray(timestamps, dtype=np.float64)
    if np.any(np.diff(t) <= 0):
        raise DataError("timestamps must be strictly increasing")
    filled = 0
    for c in range(v.shape[1]):
        obs = np.flatnonzero(~np.isnan(v[:, c]))
        if obs.size < 2:
            continue
        gap = np.isnan(v[:, c])
        gap[: obs[0]] = False
        gap[obs[-1] + 1 :] = False
        if gap.any():
            v[gap, c] = np.interp(t[gap], t[obs], v[obs, c])
            filled += int(gap.sum())
    return v, filled


def drop_incomplete(values: np.ndarray, names: list[str]) -> tuple[np.ndarray, list[str], list[str]]:
    """Remove columns that still contain missing values."""
    keep = ~np.isnan(values).any(axis=0)
    dropped = [n for n, k in zip(names, keep) if not k]
    return values[:, keep], [n for n, k in zip(names, keep) if k], dropped


def first_difference(values: np.ndarray) -> np.ndarray:
    return np.diff(values, axis=0)


def preprocess(
    values: np.ndarray,
    names: list[str],
    timestamps: np.ndarray | None = None,
    interpolate: bool = False,
    difference: bool = False,
) -> tuple[np.ndarray, list[str], PreprocessLog]:
    """Apply interpolate -> drop incomplete columns -> first difference."""
    log = PreprocessLog(rows_in=values.shape[0])
    v = np.asarray(values, dtype=np.float64)
    if interpolate:
        v, log.interpolated_cells = interpolate_linear(v, timestamps)
        log.steps.append("interpolate")
    v, names, log.dropped_columns = drop_incomplete(v, list(names))
    log.steps.append("drop_incomplete")
    if difference:
        v = first_difference(v)
        log.steps.append("difference")
    log.rows_out = v.shape[0]
    if v.shape[1] == 0 or v.shape[0] < 2:
        raise EmptyAfterPreprocessingError(
            f"{v.shape[1]} columns and {v.shape[0]} rows left after preprocessing"
        )
    return v, names, log
