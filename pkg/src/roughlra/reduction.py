"""Forward greedy attribute reduction and its baseline variants.

All variants share one search skeleton. Each iteration scores every live
candidate ``a`` by the number of samples that become decision-consistent
under ``R + a`` and commits the best one (ties go to the lowest index).
When no candidate gains anything, the lowest-index candidate that still
refines the undecided samples is committed instead; the search stops once
no candidate refines them, at which point ``POS_R = POS_C``.

``plain``
    scores on the full universe every iteration.
``fspa``
    scores on the shrinking universe ``U' = U - POS_R(D)``.
``farnemf``
    as ``fspa``, and drops for good any candidate that does not refine the
    current structure on ``U'``.
``lra``
    as ``farnemf``, and scores each candidate on its active region only
    (see :mod:`roughlra.lra`).

The ``fspa`` and ``farnemf`` variants are behavioural reconstructions of
the published baselines, not ports of their code.
"""
from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence

import numpy as np

from .data import DecisionSystem
from .granulation import (GranuleView, NeighborhoodConfig, Partition, PositiveRegion,
                          partition, refine, split_blocks)
from .state import (CLASSIC, MODES, NEIGHBORHOOD, VARIANTS, ConfigError, Instrumentation,
                    ReductionReport, ReductState)

THREADS_ENV = "ROUGHLRA_THREADS"


def _workers(workers: int | None) -> int:
    cap = os.environ.get(THREADS_ENV)
    n = workers if workers is not None else 1
    if cap:
        n = min(n, max(1, int(cap)))
    return max(1, n)


def check_config(mode: str, cfg: NeighborhoodConfig | None) -> None:
    if mode not in MODES:
        raise ConfigError(f"unknown mode {mode!r}; expected one of {MODES}")
    if mode == NEIGHBORHOOD and cfg is None:
        raise ConfigError("neighborhood mode requires a NeighborhoodConfig")
    if mode == CLASSIC and cfg is not None:
        raise ConfigError("classic mode takes no NeighborhoodConfig")


def empty_structure(sys: DecisionSystem, universe: np.ndarray, mode: str,
                    cfg: NeighborhoodConfig | None) -> Partition | GranuleView:
    if mode == CLASSIC:
        return partition(sys, universe, [])
    return GranuleView(sys, universe, (), cfg)


def positions(structure: Partition | GranuleView, samples: np.ndarray) -> np.ndarray:
    return np.searchsorted(structure.universe, samples)


# ---------------------------------------------------------- shared kernels

def scan(structure: Partition | GranuleView, sys: DecisionSystem, a: int, pos: np.ndarray,
         counters: Instrumentation | None = None, need_changed: bool = True):
    """Refine the members at positions ``pos`` by ``a``.

    Returns ``(changed, pure)`` per scanned member: whether ``a`` splits its
    block / shrinks its granule, and whether the refined block or granule is
    decision-pure. Classic callers must pass whole blocks.
    """
    pos = np.asarray(pos, dtype=np.int64)
    if len(pos) == 0:
        return np.zeros(0, bool), np.zeros(0, bool)
    if isinstance(structure, Partition):
        col = sys.columns[a]
        keys, changed, pure = split_blocks(structure.labels[pos], col.codes[structure.universe[pos]],
                                           sys.decision[structure.universe[pos]], col.n_codes)
        if counters is not None:
            counters.samples_touched += len(pos)
            counters.granule_evals += len(np.unique(keys))
        return changed, pure
    _, changed, pure = structure.scan(a, pos, need_changed=need_changed)
    if counters is not None:
        counters.samples_touched += len(pos)
        counters.granule_evals += len(pos)
        counters.pair_evals += len(pos) * len(structure)
    return changed, pure


def refine_rows(structure: Partition | GranuleView, sys: DecisionSystem, a: int, pos: np.ndarray,
                counters: Instrumentation | None = None):
    """Structure under ``R + a`` obtained by refining only the members at ``pos``.

    Members outside ``pos`` are carried over verbatim, which is exact when
    ``a`` does not refine them. Also returns, for each member at ``pos``,
    whether its refined block or granule is decision-pure.
    """
    pos = np.asarray(pos, dtype=np.int64)
    if counters is not None:
        counters.samples_touched += len(pos)
    if isinstance(structure, Partition):
        col = sys.columns[a]
        members = structure.universe[pos]
        _, _, pure = split_blocks(structure.labels[pos], col.codes[members],
                                  sys.decision[members], col.n_codes)
        width = col.n_codes + 1
        keys = structure.labels * width + col.n_codes
        keys[pos] = structure.labels[pos] * width + col.codes[members]
        refined = Partition.from_keys(structure.universe, keys)
        if counters is not None:
            counters.granule_evals += len(np.unique(keys[pos]))
        return refined, pure
    new_rows, _, pure = structure.scan(a, pos, need_changed=False, keep_rows=True)
    if counters is not None:
        counters.granule_evals += len(pos)
        counters.pair_evals += len(pos) * len(structure)
    return structure.with_rows(a, pos, new_rows), pure


def restrict(structure: Partition | GranuleView, universe: np.ndarray) -> Partition | GranuleView:
    if isinstance(structure, Partition):
        keep = positions(structure, universe)
        return Partition.from_keys(universe, structure.labels[keep])
    return structure.restrict(universe)


def map_candidates(fn: Callable[[int], tuple], candidates: Sequence[int], workers: int) -> list[tuple]:
    """Evaluate candidates, possibly concurrently; results keep candidate order."""
    if workers <= 1 or len(candidates) <= 1:
        return [fn(a) for a in candidates]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, candidates))


def init_state(sys: DecisionSystem, mode: str, cfg: NeighborhoodConfig | None,
               variant: str) -> ReductState:
    universe = sys.universe
    # under the empty attribute set everything is one block, pure iff one class
    start = universe if len(np.unique(sys.decision)) == 1 else np.zeros(0, dtype=np.int64)
    state = ReductState(
        selected=[],
        universe_remaining=np.setdiff1d(universe, start),
        candidates=list(range(sys.n_attributes)),
        redundant=[],
        pos_accum=PositiveRegion(start.copy(), sys.n_samples),
        structure=empty_structure(sys, universe, mode, cfg),
    )
    if variant == "lra":
        state.active = {a: state.universe_remaining for a in state.candidates}
    return state


def commit(state: ReductState, sys: DecisionSystem, a: int, new_pos: np.ndarray,
           refined: Partition | GranuleView, shrink: bool) -> None:
    """Select ``a``, fold ``new_pos`` into the positive region, shrink ``U'``."""
    state.selected.append(a)
    state.candidates.remove(a)
    state.active.pop(a, None)
    members = np.union1d(state.pos_accum.members, new_pos)
    state.pos_accum = PositiveRegion(members, sys.n_samples)
    state.universe_remaining = np.setdiff1d(state.universe_remaining, new_pos, assume_unique=True)
    state.structure = restrict(refined, state.universe_remaining) if shrink else refined
    state.gamma_trace.append(len(members))
    state.counters.iterations += 1


def mark_redundant(state: ReductState, a: int) -> None:
    state.candidates.remove(a)
    state.redundant.append(a)
    state.redundant_at[a] = len(state.selected)
    state.active.pop(a, None)


def baseline_step(state: ReductState, sys: DecisionSystem, variant: str,
                  workers: int = 1) -> ReductState:
    """One iteration of the plain / fspa / farnemf search."""
    shrink = variant != "plain"
    eliminate = variant == "farnemf"
    if not state.candidates or len(state.universe_remaining) == 0:
        state.terminal = True
        return state
    structure = state.structure
    everything = np.arange(len(structure.universe))
    # members of the evaluation universe not yet in the positive region
    open_rows = np.isin(structure.universe, state.universe_remaining, assume_unique=True)

    def evaluate(a):
        local = Instrumentation()
        changed, pure = scan(structure, sys, a, everything, local)
        gain = int(np.count_nonzero(pure & open_rows))
        return gain, bool((changed & open_rows).any()), local

    candidates = list(state.candidates)
    results = map_candidates(evaluate, candidates, workers)
    best, best_gain, refiners = None, 0, []
    for a, (gain, changed, local) in zip(candidates, results):
        _absorb(state.counters, local)
        if not changed:
            if eliminate:
                mark_redundant(state, a)
            continue
        refiners.append(a)
        if gain > best_gain:
            best, best_gain = a, gain
    fallback = refiners[0] if refiners else None
    if best is None and not shrink and isinstance(structure, GranuleView):
        # a granule over U can shrink by shedding positive samples only; the
        # fallback must refine the undecided samples, as for the other variants
        fallback = _first_refiner(restrict(structure, state.universe_remaining), sys, refiners,
                                  state.counters)
    best = pick(best, fallback)
    if best is None:
        state.terminal = True
        return state
    refined, pure = refine_rows(structure, sys, best, everything, state.counters)
    new_pos = structure.universe[open_rows & pure]
    commit(state, sys, best, new_pos, refined, shrink)
    return state


def _first_refiner(structure, sys, candidates, counters) -> int | None:
    everything = np.arange(len(structure.universe))
    for a in candidates:
        changed, _ = scan(structure, sys, a, everything, counters)
        if changed.any():
            return a
    return None


def pick(best: int | None, fallback: int | None) -> int | None:
    """Attribute to commit this iteration.

    The largest positive gain wins. With no positive gain the search goes
    on with the lowest-index candidate that still refines ``U'``; when none
    does, ``POS_R`` already equals ``POS_C`` and the search stops.
    """
    return best if best is not None else fallback


def _absorb(total: Instrumentation, part: Instrumentation) -> None:
    total.candidate_evals += 1
    total.samples_touched += part.samples_touched
    total.granule_evals += part.granule_evals
    total.pair_evals += part.pair_evals


def sr_test(sys: DecisionSystem, universe: np.ndarray, R: Iterable[int], b: int, mode: str,
            cfg: NeighborhoodConfig | None = None) -> bool:
    """Whether ``b`` refines nothing on ``universe`` given ``R``.

    Classic: ``universe/R == universe/(R + b)``. Neighborhood: every
    granule ``N_R(x) & universe`` lies inside ``N_b(x)``.
    """
    check_config(mode, cfg)
    R = sys.check_attrs(R)
    (b,) = sys.check_attrs([b])
    if b in R:
        raise ValueError("sr_test expects b outside R")
    universe = np.asarray(universe, dtype=np.int64)
    if mode == CLASSIC:
        p = partition(sys, universe, R)
        return refine(p, sys, b) == p
    view = GranuleView.build(sys, universe, R, cfg)
    changed, _ = scan(view, sys, b, np.arange(len(universe)))
    return not changed.any()


def reduce(sys: DecisionSystem, mode: str = CLASSIC, variant: str = "lra",
           cfg: NeighborhoodConfig | None = None, workers: int | None = None,
           meta: dict | None = None) -> ReductionReport:
    check_config(mode, cfg)
    if variant not in VARIANTS:
        raise ConfigError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    n_workers = _workers(workers)
    start = time.perf_counter()
    state = init_state(sys, mode, cfg, variant)
    if variant == "lra":
        from . import lra
        step = lambda s: lra.lra_step(s, sys, mode, cfg, workers=n_workers)  # noqa: E731
    else:
        step = lambda s: baseline_step(s, sys, variant, n_workers)  # noqa: E731
    while not state.terminal:
        step(state)
    state.counters.wall_time = time.perf_counter() - start
    config = {"delta": cfg.radius if cfg else None, "workers": n_workers,
              "n_attributes": sys.n_attributes}
    config.update(meta or {})
    return ReductionReport(
        algorithm=variant,
        mode=mode,
        reduct=list(state.selected),
        reduct_names=[sys.columns[a].name for a in state.selected],
        final_pos_size=len(state.pos_accum),
        n_samples=sys.n_samples,
        gamma_trace=list(state.gamma_trace),
        redundant=sorted(state.redundant),
        counters=state.counters,
        config=config,
    )


def run_state(sys: DecisionSystem, mode: str, variant: str,
              cfg: NeighborhoodConfig | None = None) -> ReductState:
    """Run a search and return its final state (used by audits)."""
    check_config(mode, cfg)
    state = init_state(sys, mode, cfg, variant)
    if variant == "lra":
        from . import lra
        while not state.terminal:
            lra.lra_step(state, sys, mode, cfg)
    else:
        while not state.terminal:
            baseline_step(state, sys, variant)
    return state
