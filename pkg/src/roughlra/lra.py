"""Local-redundancy acceleration of forward attribute reduction.

Two facts drive the speedup.

* A candidate that refines nothing on ``U' = U - POS_R(D)`` refines nothing
  for any superset of ``R`` either, so it can be dropped for good.
* A candidate can only change the blocks (or granules) it straddles, its
  *active region*. Everything outside is carried over untouched, so only
  the active region has to be scanned. Once a member leaves the active
  region it never returns, so each iteration re-scans only what was active
  last time.

In neighborhood mode "block inside a block of U/a" becomes
``N_R(x) & U' <= N_a(x)``, which is exact because granules under the
max-norm intersect attribute by attribute.
"""
from __future__ import annotations

import os

import numpy as np

from .data import DecisionSystem
from .granulation import GranuleView, NeighborhoodConfig, Partition
from .reduction import (Instrumentation, _absorb, check_config, commit, map_candidates,
                        mark_redundant, pick, positions, refine_rows, scan)
from .state import CLASSIC, ReductState

# Cross-check every restricted refinement against a full one (slow).
DEBUG = os.environ.get("ROUGHLRA_DEBUG", "") not in ("", "0")


class StaleRegionError(RuntimeError):
    """An active region does not match the structure it is used with."""


def _positions_in(structure, samples: np.ndarray) -> np.ndarray:
    samples = np.asarray(samples, dtype=np.int64)
    pos = np.searchsorted(structure.universe, samples)
    ok = (pos < len(structure.universe))
    ok[ok] = structure.universe[pos[ok]] == samples[ok]
    if not ok.all():
        raise StaleRegionError("active region contains samples outside the universe")
    return pos


def _whole_blocks(p: Partition, pos: np.ndarray) -> bool:
    sizes = np.bincount(p.labels, minlength=p.n_blocks)
    seen = np.bincount(p.labels[pos], minlength=p.n_blocks)
    return bool(np.all((seen == 0) | (seen == sizes)))


def _pure_rows(structure, sys: DecisionSystem, pos: np.ndarray) -> np.ndarray:
    if isinstance(structure, GranuleView):
        return ~structure.impure_rows(pos) if len(pos) else np.zeros(0, bool)
    labels = structure.labels[pos]
    dec = sys.decision[structure.universe[pos]]
    k = sys.n_classes
    pairs = np.unique(labels * k + dec)
    n_dec = np.bincount(pairs // k, minlength=structure.n_blocks)
    return n_dec[labels] == 1


def _structure(sys, universe, p, mode, cfg):
    check_config(mode, cfg)
    if p.universe is not universe and not np.array_equal(p.universe, universe):
        raise StaleRegionError("structure was built over a different universe")
    if (mode == CLASSIC) != isinstance(p, Partition):
        raise TypeError("classic mode takes a Partition, neighborhood mode a GranuleView")
    return p


def detect_redundant(state: ReductState, sys: DecisionSystem, mode: str,
                     cfg: NeighborhoodConfig | None = None) -> list[int]:
    """Live candidates that refine nothing on the current ``U'``.

    These can be retired for good: adding them later never changes the
    positive region of any superset of the selected attributes.
    """
    check_config(mode, cfg)
    structure = state.structure
    everything = np.arange(len(structure.universe))
    return [a for a in state.candidates if not scan(structure, sys, a, everything)[0].any()]


def active_region(sys: DecisionSystem, universe: np.ndarray, p: Partition | GranuleView, a: int,
                  mode: str, cfg: NeighborhoodConfig | None = None) -> np.ndarray:
    """Members of ``universe`` whose block (granule) under ``R`` is not inside one of ``a``'s."""
    p = _structure(sys, universe, p, mode, cfg)
    changed, _ = scan(p, sys, a, np.arange(len(p.universe)))
    return p.universe[changed]


def restricted_refine(sys: DecisionSystem, universe: np.ndarray, p: Partition | GranuleView, a: int,
                      active: np.ndarray, mode: str, cfg: NeighborhoodConfig | None = None,
                      counters: Instrumentation | None = None):
    """Refine ``p`` by ``a`` touching only ``active``.

    Returns ``(refined, pos_gain)`` where ``pos_gain`` counts members of
    ``universe`` that are decision-consistent under ``R + a`` but were not
    under ``R``. Raises :class:`StaleRegionError` if ``active`` is not the
    active region of ``a`` (fully checked only when :data:`DEBUG` is set).
    """
    p = _structure(sys, universe, p, mode, cfg)
    pos = _positions_in(p, active)
    if isinstance(p, Partition) and not _whole_blocks(p, pos):
        raise StaleRegionError("active region must be a union of whole blocks")
    if len(pos):
        changed, _ = scan(p, sys, a, pos)
        if not changed.all():
            raise StaleRegionError("active region contains members that attribute does not refine")
    before = _pure_rows(p, sys, pos)
    refined, after = refine_rows(p, sys, a, pos, counters)
    if DEBUG:
        _check_exact(p, sys, a, pos, refined)
    return refined, int(np.count_nonzero(after & ~before))


def _check_exact(p, sys, a, pos, refined) -> None:
    full, _ = refine_rows(p, sys, a, np.arange(len(p.universe)))
    same = (refined == full) if isinstance(p, Partition) else refined.same_granules(full)
    if not same:
        raise StaleRegionError(f"restricted refinement by attribute {a} differs from full refinement")


def lra_step(state: ReductState, sys: DecisionSystem, mode: str,
             cfg: NeighborhoodConfig | None = None, workers: int = 1) -> ReductState:
    """One accelerated iteration of the forward search.

    Each live candidate's previous active region (intersected with the
    current ``U'``) is re-scanned once. The scan yields the new active
    region and the refined blocks inside it together, so candidates whose
    region comes back empty are retired as redundant at no further cost and
    the rest are scored from the same pass. The best candidate is then
    committed and ``U'`` shrinks by the newly consistent samples.
    """
    if not state.candidates or len(state.universe_remaining) == 0:
        state.terminal = True
        return state
    structure = state.structure
    candidates = list(state.candidates)

    def evaluate(a):
        local = Instrumentation()
        region = state.active[a]
        changed, pure = scan(structure, sys, a, positions(structure, region), local)
        return region[changed], int(np.count_nonzero(pure & changed)), local

    results = map_candidates(evaluate, candidates, workers)
    best, best_gain, fallback = None, 0, None
    for a, (region, gain, local) in zip(candidates, results):
        _absorb(state.counters, local)
        if len(region) == 0:
            mark_redundant(state, a)
            continue
        state.active[a] = region
        if fallback is None:
            fallback = a
        if gain > best_gain:
            best, best_gain = a, gain
    best = pick(best, fallback)
    if best is None:
        state.terminal = True
        return state

    region = state.active[best]
    pos = positions(structure, region)
    refined, pure = refine_rows(structure, sys, best, pos, state.counters)
    if DEBUG:
        _check_exact(structure, sys, best, pos, refined)
    commit(state, sys, best, region[pure], refined, shrink=True)
    remaining = state.universe_remaining
    for a in state.candidates:
        state.active[a] = np.intersect1d(state.active[a], remaining, assume_unique=True)
    return state
