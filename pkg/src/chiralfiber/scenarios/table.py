"""Result tables persisted as CSV with a commented metadata header.

Floats are written with ``repr`` so that parsing the file reproduces the
table bit for bit.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigError


@dataclass(eq=False)
class ResultTable:
    columns: list
    data: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.columns = list(self.columns)
        self.data = np.asarray(self.data, dtype=float).reshape(-1, len(self.columns))
        if len(set(self.columns)) != len(self.columns):
            raise ValueError("duplicate column names")

    def __eq__(self, other):
        if not isinstance(other, ResultTable):
            return NotImplemented
        return (
            self.columns == other.columns
            and self.metadata == other.metadata
            and self.data.shape == other.data.shape
            and np.array_equal(self.data, other.data, equal_nan=True)
        )

    def __len__(self):
        return self.data.shape[0]

    def column(self, name: str) -> np.ndarray:
        return self.data[:, self.columns.index(name)]

    def __getitem__(self, name: str) -> np.ndarray:
        return self.column(name)

    @classmethod
    def from_columns(cls, cols: dict, metadata=None) -> "ResultTable":
        names = list(cols)
        n = {len(np.atleast_1d(v)) for v in cols.values()}
        if len(n) > 1:
            raise ValueError("columns have different lengths")
        data = np.column_stack([np.asarray(cols[k], dtype=float) for k in names]) if names else np.empty((0, 0))
        return cls(names, data, dict(metadata or {}))

    @classmethod
    def from_rows(cls, columns, rows, metadata=None) -> "ResultTable":
        rows = [list(r) for r in rows]
        for r in rows:
            if len(r) != len(columns):
                raise ValueError("row length does not match the column count")
        data = np.array(rows, dtype=float) if rows else np.empty((0, len(columns)))
        return cls(list(columns), data, dict(metadata or {}))

    # -- CSV

    def to_csv(self) -> str:
        buf = io.StringIO()
        for key in sorted(self.metadata):
            buf.write(f"# {key}: {json.dumps(self.metadata[key])}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for row in self.data:
            w.writerow([repr(float(x)) for x in row])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "ResultTable":
        meta = {}
        lines = text.splitlines()
        i = 0
        while i < len(lines) and lines[i].startswith("#"):
            key, _, val = lines[i][1:].strip().partition(": ")
            meta[key] = json.loads(val)
            i += 1
        if i >= len(lines):
            raise ConfigError("CSV has no header row")
        rows = list(csv.reader(lines[i:]))
        columns, body = rows[0], rows[1:]
        data = [[float(x) for x in r] for r in body]
        return cls.from_rows(columns, data, meta)

    def write(self, path: str):
        with open(path, "w", newline="") as fh:
            fh.write(self.to_csv())

    @classmethod
    def read(cls, path: str) -> "ResultTable":
        with open(path) as fh:
            return cls.from_csv(fh.read())
