"""CSV interchange: data tables, adjacency matrices, order files.

Dialect: comma separated, mandatory header row, ``.`` decimal point. Floats
are written with ``repr`` so files round-trip exactly and identical arrays
always produce identical bytes.
"""
from __future__ import annotations

import csv
import hashlib
import io
from datetime import datetime
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import DimensionMismatchError, ParseError

MISSING_TOKENS = frozenset({"", "na", "nan", "null", "none"})
TIME_COLUMN = "t"


def file_digest(path: str | Path) -> str:
    return "sha256:" + hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _parse_time(token: str, line: int) -> float:
    try:
        return float(token)
    except ValueError:
        pass
    try:
        return datetime.fromisoformat(token).timestamp()
    except ValueError:
        raise ParseError(line, 1, f"cannot parse timestamp {token!r}") from None


def read_table(
    path: str | Path,
    allow_missing: bool = False,
    time_column: bool = False,
) -> tuple[list[str], np.ndarray, np.ndarray | None]:
    """Read a numeric CSV into ``(names, values, timestamps)``.

    With ``time_column`` a leading column named ``t`` is split off as
    timestamps. Missing cells become NaN when ``allow_missing`` is set and
    raise :class:`ParseError` otherwise.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows or not any(cell.strip() for cell in rows[0]):
        raise ParseError(1, None, "missing header row")
    header = [h.strip() for h in rows[0]]
    has_time = time_column and header[0] == TIME_COLUMN
    start = 1 if has_time else 0
    names = header[start:]
    if not names:
        raise ParseError(1, None, "no data columns")
    body = [r for r in rows[1:] if r]
    values = np.empty((len(body), len(names)))
    stamps = np.empty(len(body)) if has_time else None
    for r, row in enumerate(body):
        line = r + 2
        if len(row) != len(header):
            raise ParseError(line, None, f"expected {len(header)} fields, found {len(row)}")
        if has_time:
            stamps[r] = _parse_time(row[0].strip(), line)
        for c, token in enumerate(row[start:]):
            token = token.strip()
            if token.lower() in MISSING_TOKENS:
                if not allow_missing:
                    raise ParseError(line, c + start + 1, "missing value")
                values[r, c] = np.nan
                continue
            try:
                values[r, c] = float(token)
            except ValueError:
                raise ParseError(line, c + start + 1, f"not a number: {token!r}") from None
            if not np.isfinite(values[r, c]):
                raise ParseError(line, c + start + 1, f"non-finite value {token!r}")
    return names, values, stamps


def format_table(names: Sequence[str], values: np.ndarray, index: Sequence | None = None,
                 index_name: str = "") -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(([index_name] if index is not None else []) + list(names))
    for r, row in enumerate(np.asarray(values)):
        lead = [index[r]] if index is not None else []
        w.writerow(lead + [repr(float(v)) for v in row])
    return buf.getvalue()


def write_table(path: str | Path, names: Sequence[str], values: np.ndarray) -> None:
    Path(path).write_text(format_table(names, values), encoding="utf-8")


def write_adjacency(path: str | Path, names: Sequence[str], weights: np.ndarray) -> None:
    """Row ``i``, column ``j`` holds ``weights[i, j]`` (effect of ``j`` on ``i``)."""
    write_table(path, names, weights)


def read_adjacency(path: str | Path) -> tuple[list[str], np.ndarray]:
    names, values, _ = read_table(path)
    if values.shape != (len(names), len(names)):
        raise DimensionMismatchError(
            f"{path}: adjacency must be square, got {values.shape[0]} rows for {len(names)} columns"
        )
    return names, values


def write_order(path: str | Path, order: Sequence[int]) -> None:
    Path(path).write_text("".join(f"{i}\n" for i in order), encoding="utf-8")


def read_order(path: str | Path) -> list[int]:
    out = []
    for n, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if line.strip():
            try:
                out.append(int(line))
            except ValueError:
                raise ParseError(n, None, f"not an index: {line!r}") from None
    return out
