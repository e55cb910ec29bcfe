"""Decision-system data model, CSV/schema ingestion and a seeded generator.

A decision system is a table of samples described by condition attributes
plus one decision column. Numeric attributes are min-max normalized to
[0, 1]; categorical attributes are interned to integer symbol ids and only
ever compared for equality.
"""
from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

log = logging.getLogger(__name__)

NUMERIC = "numeric"
CATEGORICAL = "categorical"
DECISION = "decision"
IGNORE = "ignore"
_KINDS = (NUMERIC, CATEGORICAL, DECISION, IGNORE)
_ON_MISSING = ("error", "drop", "category")


class SchemaError(ValueError):
    """Schema file is malformed or does not match the data file."""


class ParseError(ValueError):
    """A data cell could not be interpreted."""

    def __init__(self, message: str, row: int, column: str):
        super().__init__(f"row {row}, column {column!r}: {message}")
        self.row = row
        self.column = column


class MissingValueError(ParseError):
    pass


class SynthError(ValueError):
    pass


def sample_set(indices: Iterable[int] | np.ndarray) -> np.ndarray:
    """Canonical sample-set representation: sorted, unique int64 indices."""
    arr = np.unique(np.asarray(list(indices) if not isinstance(indices, np.ndarray) else indices,
                               dtype=np.int64))
    return arr


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr)
    arr.setflags(write=False)
    return arr


def _intern(symbols: Sequence) -> tuple[np.ndarray, tuple]:
    """Map symbols to ids in order of first appearance."""
    table: dict = {}
    ids = np.empty(len(symbols), dtype=np.int64)
    for i, s in enumerate(symbols):
        ids[i] = table.setdefault(s, len(table))
    return ids, tuple(table)


def minmax(values: np.ndarray) -> np.ndarray:
    values = np.asarray(values, dtype=np.float64)
    lo, hi = values.min(), values.max()
    if hi == lo:
        return np.zeros_like(values)
    out = (values - lo) / (hi - lo)
    # guard the endpoints against rounding
    out[values == lo] = 0.0
    out[values == hi] = 1.0
    return out


@dataclass(frozen=True, eq=False)
class AttributeColumn:
    id: int
    name: str
    kind: str
    values: np.ndarray
    alphabet: tuple = ()

    def __post_init__(self):
        if self.kind not in (NUMERIC, CATEGORICAL):
            raise ValueError(f"bad attribute kind {self.kind!r}")
        dtype = np.float64 if self.kind == NUMERIC else np.int64
        object.__setattr__(self, "values", _frozen(np.asarray(self.values, dtype=dtype)))
        if self.kind == CATEGORICAL:
            if len(self.values) and (self.values.min() < 0 or self.values.max() >= len(self.alphabet)):
                raise ValueError(f"column {self.name!r}: symbol id outside alphabet")

    @classmethod
    def categorical(cls, id: int, name: str, symbols: Sequence) -> "AttributeColumn":
        ids, alphabet = _intern(list(symbols))
        return cls(id, name, CATEGORICAL, ids, tuple(str(s) for s in alphabet))

    @property
    def is_numeric(self) -> bool:
        return self.kind == NUMERIC

    @cached_property
    def codes(self) -> np.ndarray:
        """Integer equality codes (exact value equality for numeric columns)."""
        if self.kind == CATEGORICAL:
            return self.values
        _, inv = np.unique(self.values, return_inverse=True)
        return _frozen(inv.astype(np.int64))

    @cached_property
    def n_codes(self) -> int:
        return int(self.codes.max()) + 1 if len(self.codes) else 0


@dataclass(frozen=True, eq=False)
class DecisionSystem:
    columns: tuple[AttributeColumn, ...]
    decision: np.ndarray
    class_names: tuple = ()
    decision_name: str = "class"

    def __post_init__(self):
        object.__setattr__(self, "columns", tuple(self.columns))
        object.__setattr__(self, "decision", _frozen(np.asarray(self.decision, dtype=np.int64)))
        n = len(self.decision)
        if n < 1:
            raise ValueError("a decision system needs at least one sample")
        if not self.columns:
            raise ValueError("a decision system needs at least one condition attribute")
        for i, col in enumerate(self.columns):
            if col.id != i:
                raise ValueError(f"column {col.name!r} has id {col.id}, expected {i}")
            if len(col.values) != n:
                raise ValueError(f"column {col.name!r} has {len(col.values)} values, expected {n}")
            if col.is_numeric and len(col.values) and (col.values.min() < 0 or col.values.max() > 1):
                raise ValueError(f"numeric column {col.name!r} is not normalized to [0, 1]")
        k = int(self.decision.max()) + 1
        if self.decision.min() < 0 or len(np.unique(self.decision)) != k:
            raise ValueError("decision labels must form a contiguous range 0..k-1")
        if not self.class_names:
            object.__setattr__(self, "class_names", tuple(str(i) for i in range(k)))

    @property
    def n_samples(self) -> int:
        return len(self.decision)

    @property
    def n_attributes(self) -> int:
        return len(self.columns)

    @property
    def n_classes(self) -> int:
        return int(self.decision.max()) + 1

    @property
    def names(self) -> list[str]:
        return [c.name for c in self.columns]

    @property
    def universe(self) -> np.ndarray:
        return np.arange(self.n_samples, dtype=np.int64)

    def kinds(self) -> dict[str, int]:
        out = {NUMERIC: 0, CATEGORICAL: 0}
        for c in self.columns:
            out[c.kind] += 1
        return out

    def check_attrs(self, attrs: Iterable[int]) -> list[int]:
        attrs = [int(a) for a in attrs]
        for a in attrs:
            if not 0 <= a < self.n_attributes:
                raise IndexError(f"attribute index {a} out of range 0..{self.n_attributes - 1}")
        return attrs

    def same_as(self, other: "DecisionSystem") -> bool:
        """Value-level equality (names, kinds, values, alphabets, decisions)."""
        if self.n_attributes != other.n_attributes or self.n_samples != other.n_samples:
            return False
        if self.class_names != other.class_names or not np.array_equal(self.decision, other.decision):
            return False
        for a, b in zip(self.columns, other.columns):
            if (a.name, a.kind, a.alphabet) != (b.name, b.kind, b.alphabet):
                return False
            if not np.array_equal(a.values, b.values):
                return False
        return True


def make_system(columns: Mapping[str, Sequence] | Sequence[Sequence], decision: Sequence,
                kinds: Sequence[str] | None = None, normalize: bool = True) -> DecisionSystem:
    """Build a system from raw column values.

    ``columns`` is either a mapping name -> values or a list of value lists
    (named a1, a2, ...). Numeric columns are min-max normalized unless
    ``normalize`` is false, in which case they must already lie in [0, 1].
    """
    if isinstance(columns, Mapping):
        names, raw = list(columns), list(columns.values())
    else:
        raw = list(columns)
        names = [f"a{i + 1}" for i in range(len(raw))]
    kinds = list(kinds) if kinds is not None else [NUMERIC] * len(raw)
    cols = []
    for i, (name, vals, kind) in enumerate(zip(names, raw, kinds)):
        if kind == NUMERIC:
            vals = np.asarray(vals, dtype=np.float64)
            cols.append(AttributeColumn(i, name, NUMERIC, minmax(vals) if normalize else vals))
        else:
            cols.append(AttributeColumn.categorical(i, name, [str(v) for v in vals]))
    labels, class_names = _intern([str(d) for d in decision])
    return DecisionSystem(tuple(cols), labels, class_names)


# --------------------------------------------------------------------- CSV

@dataclass
class Schema:
    """Column-kind declaration for a CSV file.

    Text format, one directive or column per line, ``#`` starts a comment::

        @header true           # first row holds column names (default true)
        @missing ?             # token marking a missing cell (default: none)
        @on_missing error      # error | drop | category
        @delimiter ,           # "," (default), space, tab or ";"
        sepal_length: numeric
        colour: categorical
        patient_id: ignore
        species: decision

    Column lines are listed in file order. ``drop`` discards rows with a
    missing cell; ``category`` keeps a missing categorical cell as its own
    symbol and drops rows missing a numeric value.
    """

    columns: list[tuple[str, str]]
    header: bool = True
    missing: str | None = None
    on_missing: str = "error"
    delimiter: str = ","

    def __post_init__(self):
        names = [n for n, _ in self.columns]
        if len(set(names)) != len(names):
            raise SchemaError("duplicate column names in schema")
        for name, kind in self.columns:
            if kind not in _KINDS:
                raise SchemaError(f"column {name!r}: unknown kind {kind!r}")
        n_dec = sum(k == DECISION for _, k in self.columns)
        if n_dec != 1:
            raise SchemaError(f"schema must declare exactly one decision column, found {n_dec}")
        if not any(k in (NUMERIC, CATEGORICAL) for _, k in self.columns):
            raise SchemaError("schema declares no condition attributes")
        if self.on_missing not in _ON_MISSING:
            raise SchemaError(f"@on_missing must be one of {_ON_MISSING}")

    @classmethod
    def parse(cls, text: str) -> "Schema":
        columns, opts = [], {}
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if line.startswith("@"):
                key, _, value = line[1:].partition(" ")
                opts[key.strip()] = value.strip()
                continue
            name, sep, kind = line.rpartition(":")
            if not sep or not name.strip():
                raise SchemaError(f"schema line {lineno}: expected 'name: kind'")
            columns.append((name.strip(), kind.strip().lower()))
        header = opts.pop("header", "true").lower()
        if header not in ("true", "false"):
            raise SchemaError("@header must be true or false")
        missing = opts.pop("missing", None) or None
        on_missing = opts.pop("on_missing", "error")
        delim = opts.pop("delimiter", ",")
        delim = {"space": " ", "tab": "\t"}.get(delim, delim)
        if delim not in (",", " ", "\t", ";"):
            raise SchemaError(f"unsupported @delimiter {delim!r}")
        if opts:
            raise SchemaError(f"unknown schema directives: {sorted(opts)}")
        return cls(columns, header == "true", missing, on_missing, delim)

    @classmethod
    def read(cls, path: str | Path) -> "Schema":
        return cls.parse(Path(path).read_text())

    def dump(self) -> str:
        lines = [f"@header {'true' if self.header else 'false'}"]
        if self.missing is not None:
            lines.append(f"@missing {self.missing}")
        if self.on_missing != "error":
            lines.append(f"@on_missing {self.on_missing}")
        if self.delimiter != ",":
            lines.append(f"@delimiter { {' ': 'space', chr(9): 'tab'}.get(self.delimiter, self.delimiter)}")
        lines += [f"{name}: {kind}" for name, kind in self.columns]
        return "\n".join(lines) + "\n"


def load_csv(path: str | Path, schema: Schema | str | Path) -> DecisionSystem:
    if not isinstance(schema, Schema):
        schema = Schema.read(schema)
    path = Path(path)
    with path.open(newline="") as fh:
        if schema.delimiter == " ":
            rows = [line.split() for line in fh]
        else:
            rows = list(csv.reader(fh, delimiter=schema.delimiter))
        rows = [r for r in rows if r and any(c.strip() for c in r)]
    declared = [n for n, _ in schema.columns]
    if schema.header:
        if not rows:
            raise SchemaError(f"{path}: empty file")
        header = [h.strip() for h in rows[0]]
        rows = rows[1:]
        missing = [n for n in declared if n not in header]
        extra = [h for h in header if h not in declared]
        if missing or extra or len(header) != len(declared):
            raise SchemaError(f"{path}: header/schema mismatch (missing {missing}, extra {extra})")
        kind_of = dict(schema.columns)
        layout = [(h, kind_of[h]) for h in header]
    else:
        layout = list(schema.columns)
    width = len(layout)
    if not rows:
        raise SchemaError(f"{path}: no data rows")

    first = 2 if schema.header else 1
    keep, cells = [], []
    for offset, row in enumerate(rows):
        lineno = first + offset
        if len(row) != width:
            raise SchemaError(f"{path}: row {lineno} has {len(row)} cells, expected {width}")
        row = [c.strip() for c in row]
        drop = False
        for (name, kind), cell in zip(layout, row):
            is_missing = cell == "" or (schema.missing is not None and cell == schema.missing)
            if not is_missing or kind == IGNORE:
                continue
            if schema.on_missing == "error" or kind == DECISION:
                raise MissingValueError("missing value", lineno, name)
            if schema.on_missing == "drop" or kind == NUMERIC:
                drop = True
        if not drop:
            keep.append(lineno)
            cells.append(row)
    if not cells:
        raise SchemaError(f"{path}: every row was dropped for missing values")
    if len(cells) < len(rows):
        log.warning("%s: dropped %d of %d rows with missing values", path, len(rows) - len(cells), len(rows))

    columns, decision = [], None
    for j, (name, kind) in enumerate(layout):
        raw = [r[j] for r in cells]
        if kind == NUMERIC:
            vals = np.empty(len(raw))
            for i, cell in enumerate(raw):
                try:
                    vals[i] = float(cell)
                except ValueError:
                    raise ParseError(f"cannot parse {cell!r} as a number", keep[i], name) from None
                if not math.isfinite(vals[i]):
                    raise ParseError(f"non-finite value {cell!r}", keep[i], name)
            columns.append(AttributeColumn(len(columns), name, NUMERIC, minmax(vals)))
        elif kind == CATEGORICAL:
            columns.append(AttributeColumn.categorical(len(columns), name, raw))
        elif kind == DECISION:
            decision = (name, raw)
    labels, class_names = _intern(decision[1])
    return DecisionSystem(tuple(columns), labels, tuple(class_names), decision[0])


def write_csv(sys: DecisionSystem, path: str | Path, schema_path: str | Path | None = None) -> Schema:
    """Write the (normalized) system; ``load_csv`` on the output reproduces it exactly."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(sys.names + [sys.decision_name])
        for i in range(sys.n_samples):
            row = []
            for c in sys.columns:
                row.append(repr(float(c.values[i])) if c.is_numeric else c.alphabet[c.values[i]])
            row.append(sys.class_names[sys.decision[i]])
            w.writerow(row)
    schema = Schema([(c.name, c.kind) for c in sys.columns] + [(sys.decision_name, DECISION)])
    if schema_path is not None:
        Path(schema_path).write_text(schema.dump())
    return schema


# --------------------------------------------------------------- generator

def _check_duplicates(duplicate_of: Mapping[int, int], m: int) -> dict[int, int]:
    dup = {int(b): int(a) for b, a in duplicate_of.items()}
    for b, a in dup.items():
        if not (0 <= a < m and 0 <= b < m):
            raise SynthError(f"duplicate {b}->{a} references an attribute outside 0..{m - 1}")
        if a >= b:
            raise SynthError(f"duplicate {b}->{a} must point to a lower-indexed attribute")
    return dup


def synth(seed: int, n: int, numeric_attrs: int, categorical_attrs: int = 0,
          duplicate_of: Mapping[int, int] | None = None, classes: int = 2,
          informative: int | None = 2) -> DecisionSystem:
    """Seeded synthetic decision system with known redundancy.

    Attributes ``0..numeric_attrs-1`` are numeric, the rest categorical.
    Every ``b -> a`` in ``duplicate_of`` makes column ``b`` an exact copy of
    column ``a`` (it takes ``a``'s kind). Labels come from binning a random
    linear score over the first ``informative`` non-duplicate attributes
    into ``classes`` equal-frequency bins; weights halve from one
    informative attribute to the next.
    """
    m = numeric_attrs + categorical_attrs
    if n < 1 or m < 1 or classes < 1 or numeric_attrs < 0 or categorical_attrs < 0:
        raise SynthError("counts must be positive")
    dup = _check_duplicates(duplicate_of or {}, m)
    rng = np.random.default_rng(seed)

    raw: list[tuple[str, np.ndarray]] = []
    for j in range(m):
        if j < numeric_attrs:
            raw.append((NUMERIC, minmax(rng.random(n))))
        else:
            size = int(rng.integers(2, 6))
            raw.append((CATEGORICAL, rng.integers(0, size, n)))
    for b in sorted(dup):
        raw[b] = raw[dup[b]]

    base = [j for j in range(m) if j not in dup]
    k = len(base) if informative is None else max(1, min(informative, len(base)))
    score = np.zeros(n)
    for rank, j in enumerate(base[:k]):
        kind, vals = raw[j]
        # halving weights keep the first informative attribute dominant, so
        # it alone already separates the extreme classes
        weight = 0.5 ** rank
        if kind == NUMERIC:
            score += weight * vals
        else:
            score += weight * rng.random(int(vals.max()) + 1)[vals]
    if classes == 1:
        labels = np.zeros(n, dtype=np.int64)
    else:
        edges = np.quantile(score, np.linspace(0, 1, classes + 1)[1:-1])
        labels = np.searchsorted(edges, score, side="right")
    labels, _ = _intern(list(labels))

    cols = []
    for j, (kind, vals) in enumerate(raw):
        name = f"a{j}"
        if kind == NUMERIC:
            cols.append(AttributeColumn(j, name, NUMERIC, vals))
        else:
            cols.append(AttributeColumn.categorical(j, name, [f"s{v}" for v in vals]))
    return DecisionSystem(tuple(cols), labels, tuple(f"c{i}" for i in range(int(labels.max()) + 1)))
