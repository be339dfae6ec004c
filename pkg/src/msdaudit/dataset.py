"""Tabular loading, binarization and the two-group binary dataset."""

from __future__ import annotations

import csv
import math
import re
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .terms import Term

MU, NU = 0, 1
KINDS = ("continuous", "categorical", "binary")
N_BINS = 10


class DataError(ValueError):
    """Raised for malformed input tables."""


@dataclass(frozen=True)
class RawColumn:
    name: str
    kind: str
    values: tuple


@dataclass(frozen=True)
class RawTable:
    """Protected columns plus a per-row group label (``MU`` or ``NU``).

    ``group_values`` keeps the original labels, ``group_values[MU]`` being the
    lexicographically smaller one.
    """

    columns: tuple[RawColumn, ...]
    groups: np.ndarray
    group_values: tuple[str, str] = ("mu", "nu")

    def __post_init__(self):
        groups = np.asarray(self.groups, dtype=np.int8)
        groups.setflags(write=False)
        object.__setattr__(self, "groups", groups)
        n = len(groups)
        for col in self.columns:
            if col.kind not in KINDS:
                raise DataError(f"unknown column kind {col.kind!r} for {col.name!r}")
            if len(col.values) != n:
                raise DataError(f"column {col.name!r} has {len(col.values)} values, expected {n}")
        if not np.isin(groups, (MU, NU)).all():
            raise DataError("group labels must be MU (0) or NU (1)")
        if (groups == MU).sum() == 0 or (groups == NU).sum() == 0:
            raise DataError("each group needs at least one row")

    @property
    def n_rows(self) -> int:
        return len(self.groups)

    def column(self, name: str) -> RawColumn:
        for col in self.columns:
            if col.name == name:
                return col
        raise KeyError(name)


def _parse_binary(text: str) -> int:
    t = text.strip().lower()
    if t in ("1", "1.0", "true", "yes"):
        return 1
    if t in ("0", "0.0", "false", "no"):
        return 0
    raise ValueError(f"not a binary value: {text!r}")


def load_csv(
    path: str | Path,
    group_column: str,
    protected_columns: Sequence[str],
    column_kinds: Mapping[str, str] | None = None,
) -> RawTable:
    """Read a header-first UTF-8 CSV into a :class:`RawTable`.

    Columns missing from ``column_kinds`` are treated as categorical. The
    group column must hold exactly two distinct values; the smaller one in
    sorted order becomes ``MU``.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"no such file: {path}")
    column_kinds = dict(column_kinds or {})
    for name, kind in column_kinds.items():
        if kind not in KINDS:
            raise DataError(f"unknown column kind {kind!r} for {name!r}")

    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise DataError(f"{path} is empty") from None
        rows = [r for r in reader if r]

    wanted = [group_column, *protected_columns]
    for name in wanted:
        if name not in header:
            raise DataError(f"unknown column {name!r}; header has {header}")
    for name in column_kinds:
        if name not in protected_columns:
            raise DataError(f"kind given for non-protected column {name!r}")
    pos = {name: header.index(name) for name in wanted}

    for i, row in enumerate(rows):
        if len(row) != len(header):
            raise DataError(f"row {i + 1}: expected {len(header)} cells, found {len(row)}")
        for name in wanted:
            if row[pos[name]].strip() == "":
                raise DataError(f"row {i + 1}, column {name!r}: missing value")
    if not rows:
        raise DataError(f"{path} has no data rows")

    labels = [row[pos[group_column]].strip() for row in rows]
    distinct = sorted(set(labels))
    if len(distinct) != 2:
        raise DataError(
            f"group column must be binary: {group_column!r} has {len(distinct)} distinct values"
        )
    groups = np.array([MU if lab == distinct[0] else NU for lab in labels], dtype=np.int8)

    columns = []
    for name in protected_columns:
        kind = column_kinds.get(name, "categorical")
        values = []
        for i, row in enumerate(rows):
            cell = row[pos[name]].strip()
            try:
                if kind == "continuous":
                    v = float(cell)
                    if not math.isfinite(v):
                        raise ValueError(cell)
                elif kind == "binary":
                    v = _parse_binary(cell)
                else:
                    v = cell
            except ValueError:
                raise DataError(f"row {i + 1}, column {name!r}: cannot parse {cell!r} as {kind}") from None
            values.append(v)
        columns.append(RawColumn(name, kind, tuple(values)))
    return RawTable(tuple(columns), groups, (distinct[0], distinct[1]))


def _fmt(x: float) -> str:
    return f"{x:g}"


@dataclass(frozen=True)
class ColumnEncoding:
    """How one raw column maps onto a contiguous block of literal columns."""

    name: str
    kind: str
    offset: int
    width: int
    low: float = 0.0
    high: float = 0.0
    categories: tuple = ()
    degenerate: bool = False

    def edges(self) -> tuple[float, ...]:
        if self.kind != "continuous":
            return ()
        if self.degenerate:
            return (self.low, self.high)
        step = (self.high - self.low) / N_BINS
        return tuple(self.low + k * step for k in range(N_BINS)) + (self.high,)

    def bin_index(self, v: float) -> int:
        if self.degenerate:
            return 0
        b = math.floor((v - self.low) * N_BINS / (self.high - self.low))
        return min(max(b, 0), N_BINS - 1)

    def literal_name(self, k: int, positive: bool = True) -> str:
        if self.kind == "binary":
            return f"{self.name} = {1 if positive else 0}"
        if self.kind == "categorical":
            op = "=" if positive else "!="
            return f'{self.name} {op} "{self.categories[k]}"'
        e = self.edges()
        close = "]" if k == self.width - 1 else ")"
        op = "∈" if positive else "∉"
        return f"{self.name} {op} [{_fmt(e[k])}, {_fmt(e[k + 1])}{close}"


@dataclass(frozen=True)
class EncodingSchema:
    columns: tuple[ColumnEncoding, ...]

    @property
    def n_features(self) -> int:
        return sum(c.width for c in self.columns)

    @property
    def literal_names(self) -> tuple[str, ...]:
        return tuple(c.literal_name(k) for c in self.columns for k in range(c.width))

    def decode(self, index: int) -> tuple[str, object]:
        """Map a literal column index back to ``(raw column, bin index or category)``."""
        for c in self.columns:
            if c.offset <= index < c.offset + c.width:
                k = index - c.offset
                if c.kind == "categorical":
                    return c.name, c.categories[k]
                if c.kind == "binary":
                    return c.name, 1
                return c.name, k
        raise IndexError(f"literal index {index} out of range")

    def _owner(self, index: int) -> ColumnEncoding:
        for c in self.columns:
            if c.offset <= index < c.offset + c.width:
                return c
        raise IndexError(f"literal index {index} out of range")

    def describe(self, term: Term) -> str:
        """Human-readable conjunction for ``term``; ``TRUE`` for the empty term."""
        if not len(term):
            return "TRUE"
        parts = []
        for f, p in term:
            c = self._owner(f)
            parts.append(c.literal_name(f - c.offset, p))
        return " AND ".join(parts)

    def parse(self, text: str) -> Term:
        """Inverse of :meth:`describe`."""
        text = text.strip()
        if text == "TRUE":
            return Term()
        lookup = {}
        for c in self.columns:
            for k in range(c.width):
                lookup[c.literal_name(k, True)] = (c.offset + k, True)
                lookup[c.literal_name(k, False)] = (c.offset + k, False)
        lits = []
        for part in re.split(r" AND (?=(?:[^\"]*\"[^\"]*\")*[^\"]*$)", text):
            if part not in lookup:
                raise ValueError(f"unknown literal {part!r}")
            lits.append(lookup[part])
        return Term(tuple(lits))


def fit_encoding(table: RawTable) -> EncodingSchema:
    """Equal-width binning (10 bins over the pooled range) and one-hot encoding."""
    if table.n_rows == 0:
        raise DataError("cannot fit an encoding on an empty table")
    cols = []
    offset = 0
    for col in table.columns:
        if col.kind == "continuous":
            lo, hi = float(min(col.values)), float(max(col.values))
            degenerate = lo == hi
            if degenerate:
                warnings.warn(f"column {col.name!r} is constant ({lo:g}); emitting a single bin")
            width = 1 if degenerate else N_BINS
            enc = ColumnEncoding(col.name, col.kind, offset, width, lo, hi, degenerate=degenerate)
        elif col.kind == "categorical":
            cats = tuple(sorted(set(col.values), key=str))
            enc = ColumnEncoding(col.name, col.kind, offset, len(cats), categories=cats)
        else:
            enc = ColumnEncoding(col.name, col.kind, offset, 1)
        cols.append(enc)
        offset += enc.width
    return EncodingSchema(tuple(cols))


@dataclass(frozen=True)
class BinaryDataset:
    """Immutable 0/1 literal matrix with a two-group labelling.

    ``X`` has one row per sample; ``groups[i]`` is ``MU`` (0) or ``NU`` (1).
    """

    X: np.ndarray
    groups: np.ndarray
    feature_names: tuple[str, ...] = ()
    clamped: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        X = np.asarray(self.X)
        if X.ndim != 2:
            raise DataError("X must be a 2-d array")
        if X.size and not np.isin(X, (0, 1)).all():
            raise DataError("all entries must be 0 or 1")
        X = X.astype(np.uint8, copy=True)
        groups = np.asarray(self.groups).astype(np.int8, copy=True)
        if groups.shape != (X.shape[0],):
            raise DataError("one group label per row required")
        if not np.isin(groups, (MU, NU)).all():
            raise DataError("group labels must be 0 (MU) or 1 (NU)")
        if (groups == MU).sum() == 0 or (groups == NU).sum() == 0:
            raise DataError("each group needs at least one row")
        X.setflags(write=False)
        groups.setflags(write=False)
        names = tuple(self.feature_names) or tuple(f"x{j}" for j in range(X.shape[1]))
        if len(names) != X.shape[1]:
            raise DataError("feature_names length does not match X")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "groups", groups)
        object.__setattr__(self, "feature_names", names)
        object.__setattr__(self, "clamped", dict(self.clamped))

    @classmethod
    def from_groups(cls, mu_rows, nu_rows, feature_names: Sequence[str] = ()) -> "BinaryDataset":
        mu = np.asarray(mu_rows, dtype=np.uint8)
        nu = np.asarray(nu_rows, dtype=np.uint8)
        if mu.ndim == 1:
            mu = mu.reshape(-1, nu.shape[1] if nu.ndim == 2 else 1)
        if nu.ndim == 1:
            nu = nu.reshape(-1, mu.shape[1])
        X = np.vstack([mu, nu])
        groups = np.r_[np.full(len(mu), MU), np.full(len(nu), NU)]
        return cls(X, groups, tuple(feature_names))

    @property
    def n_features(self) -> int:
        return self.X.shape[1]

    @property
    def n_samples(self) -> int:
        return self.X.shape[0]

    @property
    def n_mu(self) -> int:
        return int((self.groups == MU).sum())

    @property
    def n_nu(self) -> int:
        return int((self.groups == NU).sum())

    @property
    def mu_rows(self) -> np.ndarray:
        return self.X[self.groups == MU]

    @property
    def nu_rows(self) -> np.ndarray:
        return self.X[self.groups == NU]

    def swapped(self) -> "BinaryDataset":
        """The same samples with MU and NU exchanged."""
        return BinaryDataset(self.X, 1 - self.groups, self.feature_names)

    def subset(self, rows) -> "BinaryDataset":
        return BinaryDataset(self.X[rows], self.groups[rows], self.feature_names)


def encode(table: RawTable, schema: EncodingSchema) -> BinaryDataset:
    """Binarize ``table`` with a fitted schema.

    Continuous values outside the fitted range land in the nearest edge bin and
    are tallied in ``BinaryDataset.clamped``.
    """
    if [c.name for c in table.columns] != [c.name for c in schema.columns]:
        raise DataError("schema was fitted on different columns")
    X = np.zeros((table.n_rows, schema.n_features), dtype=np.uint8)
    clamped = {}
    for col, enc in zip(table.columns, schema.columns):
        if enc.kind == "continuous":
            v = np.asarray(col.values, dtype=float)
            out = int(((v < enc.low) | (v > enc.high)).sum())
            if out:
                clamped[col.name] = out
            if enc.degenerate:
                bins = np.zeros(len(v), dtype=int)
            else:
                bins = np.floor((v - enc.low) * N_BINS / (enc.high - enc.low)).astype(int)
                bins = np.clip(bins, 0, N_BINS - 1)
            X[np.arange(len(v)), enc.offset + bins] = 1
        elif enc.kind == "categorical":
            index = {c: k for k, c in enumerate(enc.categories)}
            for i, v in enumerate(col.values):
                if v not in index:
                    raise DataError(f"row {i + 1}, column {col.name!r}: unseen category {v!r}")
                X[i, enc.offset + index[v]] = 1
        else:
            X[:, enc.offset] = np.asarray(col.values, dtype=np.uint8)
    return BinaryDataset(X, table.groups, schema.literal_names, clamped)
