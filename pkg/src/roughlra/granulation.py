"""Set-algebra primitives for classic and neighborhood rough sets.

Sample sets are sorted ``int64`` index arrays (see :func:`roughlra.data.sample_set`).
A :class:`Partition` stores one canonical block id per universe member; a
:class:`GranuleView` stores, for every member x of a universe, the granule
``N_R(x)`` restricted to that universe as a boolean row.

Neighborhood granules use the max-norm: numeric attributes contribute the
absolute difference of normalized values, categorical attributes 0 or 1,
and ``y`` is in ``N_B(x)`` iff the largest per-attribute distance is <= radius.
Under that combiner ``N_{B+a}(x) = N_B(x) & N_a(x)`` holds exactly.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .data import DecisionSystem, sample_set

# Cells per temporary chunk in pairwise computations.
CHUNK_CELLS = 1 << 22
# Largest |U'|^2 a GranuleView materializes; above it rows are recomputed on demand.
DENSE_LIMIT = 100_000_000


class DomainError(ValueError):
    pass


@dataclass(frozen=True)
class NeighborhoodConfig:
    radius: float = 0.16

    def __post_init__(self):
        if not self.radius > 0:
            raise DomainError(f"neighborhood radius must be positive, got {self.radius}")


@dataclass(frozen=True, eq=False)
class PositiveRegion:
    members: np.ndarray
    universe_size: int

    def __len__(self) -> int:
        return len(self.members)

    def __eq__(self, other) -> bool:
        return isinstance(other, PositiveRegion) and np.array_equal(self.members, other.members)

    def __hash__(self):
        return hash(self.members.tobytes())


def canonical_labels(keys: np.ndarray) -> np.ndarray:
    """Relabel group keys so block ids follow order of first appearance."""
    if len(keys) == 0:
        return np.zeros(0, dtype=np.int64)
    _, first, inv = np.unique(keys, return_index=True, return_inverse=True, axis=0 if keys.ndim > 1 else None)
    rank = np.empty(len(first), dtype=np.int64)
    rank[np.argsort(first, kind="stable")] = np.arange(len(first))
    return rank[inv.reshape(-1)]


@dataclass(frozen=True, eq=False)
class Partition:
    """Equivalence classes of ``universe``; ``labels[i]`` is the block of ``universe[i]``.

    Labels are canonical (blocks numbered by smallest member), so two
    partitions of the same universe are equal iff their label arrays are.
    """

    universe: np.ndarray
    labels: np.ndarray

    @classmethod
    def from_keys(cls, universe: np.ndarray, keys: np.ndarray) -> "Partition":
        return cls(np.asarray(universe, dtype=np.int64), canonical_labels(np.asarray(keys)))

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]]) -> "Partition":
        blocks = [sample_set(b) for b in blocks]
        universe = sample_set(np.concatenate(blocks)) if blocks else np.zeros(0, np.int64)
        if sum(len(b) for b in blocks) != len(universe) or any(len(b) == 0 for b in blocks):
            raise DomainError("blocks must be non-empty and pairwise disjoint")
        keys = np.empty(len(universe), dtype=np.int64)
        for i, b in enumerate(blocks):
            keys[np.searchsorted(universe, b)] = i
        return cls.from_keys(universe, keys)

    @property
    def n_blocks(self) -> int:
        return int(self.labels.max()) + 1 if len(self.labels) else 0

    @property
    def blocks(self) -> list[np.ndarray]:
        order = np.argsort(self.labels, kind="stable")
        bounds = np.cumsum(np.bincount(self.labels, minlength=self.n_blocks))[:-1]
        return np.split(self.universe[order], bounds)

    def block_sets(self) -> set[frozenset]:
        return {frozenset(b.tolist()) for b in self.blocks}

    def validate(self) -> None:
        u = self.universe
        if len(u) and (np.any(np.diff(u) <= 0)):
            raise DomainError("partition universe must be strictly increasing")
        if len(self.labels) != len(u):
            raise DomainError("one label per universe member required")
        if len(u) and not np.array_equal(canonical_labels(self.labels), self.labels):
            raise DomainError("labels are not canonical")

    def __eq__(self, other) -> bool:
        return (isinstance(other, Partition) and np.array_equal(self.universe, other.universe)
                and np.array_equal(self.labels, other.labels))

    def __repr__(self) -> str:
        return f"Partition({[b.tolist() for b in self.blocks]})"


# ------------------------------------------------------------ classic mode

def partition(sys: DecisionSystem, universe: np.ndarray, R: Iterable[int]) -> Partition:
    R = sys.check_attrs(R)
    universe = np.asarray(universe, dtype=np.int64)
    if not R:
        return Partition(universe, np.zeros(len(universe), dtype=np.int64))
    keys = np.stack([sys.columns[a].codes[universe] for a in R], axis=1)
    return Partition.from_keys(universe, keys)


def refine(p: Partition, sys: DecisionSystem, a: int) -> Partition:
    (a,) = sys.check_attrs([a])
    col = sys.columns[a]
    keys = p.labels * col.n_codes + col.codes[p.universe]
    return Partition.from_keys(p.universe, keys)


def split_blocks(labels: np.ndarray, codes: np.ndarray, dec: np.ndarray, n_codes: int):
    """Refine blocks given by ``labels`` with attribute ``codes``.

    Returns ``(sub, split, pure)``: sub-block keys per row, whether the row's
    block is split by the attribute, and whether the row's refined block is
    decision-pure. Only the rows passed in are looked at, so callers must
    pass whole blocks.
    """
    keys = labels * n_codes + codes
    uniq, sub = np.unique(keys, return_inverse=True)
    n_sub = np.bincount(np.searchsorted(np.unique(labels), uniq // n_codes))
    split = (n_sub > 1)[np.searchsorted(np.unique(labels), labels)]
    k = int(dec.max()) + 1 if len(dec) else 1
    pairs = np.unique(sub * k + dec)
    pure_sub = np.bincount(pairs // k, minlength=len(uniq)) == 1
    return keys, split, pure_sub[sub]


def positive_region_classic(p: Partition, sys: DecisionSystem) -> PositiveRegion:
    if len(p.universe) == 0:
        return PositiveRegion(p.universe, 0)
    dec = sys.decision[p.universe]
    nb = p.n_blocks
    lo = np.full(nb, np.iinfo(np.int64).max)
    hi = np.full(nb, -1)
    np.minimum.at(lo, p.labels, dec)
    np.maximum.at(hi, p.labels, dec)
    pure = (lo == hi)[p.labels]
    return PositiveRegion(p.universe[pure], len(p.universe))


def dependency(pos: PositiveRegion, n_total: int) -> float:
    if n_total < 1:
        raise DomainError("n_total must be at least 1")
    return len(pos.members) / n_total


# ------------------------------------------------------- neighborhood mode

def within(sys: DecisionSystem, a: int, rows: np.ndarray, cols: np.ndarray,
           cfg: NeighborhoodConfig, out: np.ndarray | None = None) -> np.ndarray:
    """Boolean matrix ``d_a(rows[i], cols[j]) <= radius``."""
    col = sys.columns[a]
    if col.is_numeric:
        v = col.values
        d = np.subtract.outer(v[rows], v[cols])
        np.abs(d, out=d)
        return np.less_equal(d, cfg.radius, out=out)
    if cfg.radius >= 1:
        res = np.ones((len(rows), len(cols)), dtype=bool) if out is None else out
        res[...] = True
        return res
    c = col.values
    return np.equal.outer(c[rows], c[cols]) if out is None else np.equal(
        c[rows][:, None], c[cols][None, :], out=out)


def granule_mask(sys: DecisionSystem, B: Iterable[int], rows: np.ndarray, cols: np.ndarray,
                 cfg: NeighborhoodConfig) -> np.ndarray:
    """``mask[i, j]`` iff ``cols[j]`` lies in ``N_B(rows[i])``; ``B = {}`` gives all-true."""
    mask = np.ones((len(rows), len(cols)), dtype=bool)
    for a in B:
        mask &= within(sys, a, rows, cols, cfg)
    return mask


def _chunks(n_rows: int, n_cols: int):
    step = max(1, CHUNK_CELLS // max(1, n_cols))
    for s in range(0, n_rows, step):
        yield slice(s, min(n_rows, s + step))


def neighborhood(sys: DecisionSystem, x: int, B: Iterable[int], cfg: NeighborhoodConfig,
                 universe: np.ndarray | None = None) -> np.ndarray:
    B = sys.check_attrs(B)
    if not B:
        raise DomainError("neighborhood needs a non-empty attribute set")
    universe = sys.universe if universe is None else np.asarray(universe, dtype=np.int64)
    pos = np.searchsorted(universe, x)
    if pos >= len(universe) or universe[pos] != x:
        raise DomainError(f"sample {x} is not in the universe")
    mask = granule_mask(sys, B, np.array([x]), universe, cfg)[0]
    return universe[mask]


def positive_region_nbr(sys: DecisionSystem, universe: np.ndarray, B: Iterable[int],
                        cfg: NeighborhoodConfig) -> PositiveRegion:
    B = sys.check_attrs(B)
    if not B:
        raise DomainError("positive_region_nbr needs a non-empty attribute set")
    universe = np.asarray(universe, dtype=np.int64)
    dec = sys.decision[universe]
    pure = np.empty(len(universe), dtype=bool)
    for sl in _chunks(len(universe), len(universe)):
        mask = granule_mask(sys, B, universe[sl], universe, cfg)
        pure[sl] = ~(mask & (dec[sl, None] != dec[None, :])).any(axis=1)
    return PositiveRegion(universe[pure], len(universe))


class GranuleView:
    """Granules ``N_R(x) & universe`` for every x in ``universe``.

    Rows are materialized as a dense boolean matrix when ``|universe|^2`` is
    at most :data:`DENSE_LIMIT`; otherwise they are recomputed from the
    attribute set whenever asked for.
    """

    def __init__(self, sys: DecisionSystem, universe: np.ndarray, attrs: Iterable[int],
                 cfg: NeighborhoodConfig, matrix: np.ndarray | None = None):
        self.sys = sys
        self.universe = np.asarray(universe, dtype=np.int64)
        self.attrs = tuple(attrs)
        self.cfg = cfg
        n = len(self.universe)
        if matrix is None and n * n <= DENSE_LIMIT:
            matrix = np.empty((n, n), dtype=bool)
            for sl in _chunks(n, n):
                matrix[sl] = granule_mask(sys, self.attrs, self.universe[sl], self.universe, cfg)
        self.matrix = matrix
        self._dec = sys.decision[self.universe]

    @classmethod
    def build(cls, sys, universe, attrs, cfg) -> "GranuleView":
        return cls(sys, universe, sys.check_attrs(attrs), cfg)

    @property
    def dense(self) -> bool:
        return self.matrix is not None

    def __len__(self) -> int:
        return len(self.universe)

    def rows(self, pos: np.ndarray | slice) -> np.ndarray:
        """Granule rows for the members at positions ``pos``."""
        if self.matrix is not None:
            return self.matrix[pos]
        return granule_mask(self.sys, self.attrs, self.universe[pos], self.universe, self.cfg)

    def impure_rows(self, pos: np.ndarray | slice) -> np.ndarray:
        rows = self.rows(pos)
        return (rows & (self._dec[pos][:, None] != self._dec[None, :])).any(axis=1)

    def positive(self) -> np.ndarray:
        """Members whose granule (within this universe) is decision-pure."""
        pure = np.empty(len(self), dtype=bool)
        for sl in _chunks(len(self), len(self)):
            pure[sl] = ~self.impure_rows(sl)
        return self.universe[pure]

    def scan(self, a: int, pos: np.ndarray, need_changed: bool = True, keep_rows: bool = False):
        """Refine the rows at ``pos`` by attribute ``a``.

        Returns ``(new_rows, changed, pure)``: refined granule rows (only with
        ``keep_rows`` on a dense view), whether ``a`` shrank each row's
        granule, and whether the refined granule is decision-pure.
        """
        pos = np.asarray(pos, dtype=np.int64)
        cols = self.universe
        new_rows = np.empty((len(pos), len(cols)), dtype=bool) if keep_rows and self.dense else None
        changed = np.zeros(len(pos), dtype=bool)
        pure = np.empty(len(pos), dtype=bool)
        for sl in _chunks(len(pos), len(cols)):
            p = pos[sl]
            base = self.rows(p)
            cand = within(self.sys, a, self.universe[p], cols, self.cfg)
            if need_changed:
                changed[sl] = (base & ~cand).any(axis=1)
            cand &= base
            pure[sl] = ~(cand & (self._dec[p][:, None] != self._dec[None, :])).any(axis=1)
            if new_rows is not None:
                new_rows[sl] = cand
        return new_rows, changed, pure

    def with_rows(self, a: int, pos: np.ndarray, new_rows: np.ndarray | None) -> "GranuleView":
        """View for ``attrs + a`` whose rows at ``pos`` are replaced by ``new_rows``."""
        matrix = None
        if self.dense:
            matrix = self.matrix.copy()
            matrix[pos] = new_rows
        return GranuleView(self.sys, self.universe, self.attrs + (a,), self.cfg, matrix)

    def restrict(self, universe: np.ndarray) -> "GranuleView":
        """Same attribute set on a sub-universe."""
        keep = np.searchsorted(self.universe, universe)
        matrix = self.matrix[np.ix_(keep, keep)] if self.dense else None
        return GranuleView(self.sys, universe, self.attrs, self.cfg, matrix)

    def same_granules(self, other: "GranuleView") -> bool:
        if not np.array_equal(self.universe, other.universe):
            return False
        for sl in _chunks(len(self), len(self)):
            if not np.array_equal(self.rows(sl), other.rows(sl)):
                return False
        return True
