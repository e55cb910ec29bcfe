"""Brute-force ground truth for small decision systems.

Nothing here reuses the pruned code paths: blocks are grouped from raw
values with dicts, and granules come from a full max-norm distance matrix
rather than from per-attribute intersection.
"""
from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass, field
from typing import Any, Iterable

import numpy as np

from .data import CATEGORICAL, NUMERIC, AttributeColumn, DecisionSystem
from .granulation import GranuleView, NeighborhoodConfig, PositiveRegion, partition
from .lra import active_region, restricted_refine
from .reduction import check_config, run_state, sr_test
from .state import CLASSIC, NEIGHBORHOOD, VARIANTS


class BudgetExceeded(ValueError):
    pass


@dataclass(frozen=True)
class OracleBudget:
    max_samples: int = 64
    max_attributes: int = 10

    def admits(self, sys: DecisionSystem) -> bool:
        return sys.n_samples <= self.max_samples and sys.n_attributes <= self.max_attributes

    def require(self, sys: DecisionSystem) -> None:
        if not self.admits(sys):
            raise BudgetExceeded(
                f"system of {sys.n_samples} samples x {sys.n_attributes} attributes exceeds "
                f"budget {self.max_samples} x {self.max_attributes}")


@dataclass
class Counterexample:
    trial: int
    kind: str
    detail: dict[str, Any]


# ------------------------------------------------------------ definitions

def _raw(sys: DecisionSystem, a: int, x: int):
    col = sys.columns[a]
    return float(col.values[x]) if col.is_numeric else col.alphabet[col.values[x]]


def blocks_direct(sys: DecisionSystem, universe: Iterable[int], R: Iterable[int]) -> set[frozenset]:
    R = list(R)
    groups: dict[tuple, list[int]] = {}
    for x in universe:
        groups.setdefault(tuple(_raw(sys, a, x) for a in R), []).append(int(x))
    return {frozenset(g) for g in groups.values()}


def distance_matrix(sys: DecisionSystem, B: Iterable[int], universe: np.ndarray) -> np.ndarray:
    """Max-norm distances over ``B`` between all pairs of ``universe`` (0 for empty B)."""
    universe = np.asarray(universe, dtype=np.int64)
    dist = np.zeros((len(universe), len(universe)))
    for a in B:
        col = sys.columns[a]
        v = col.values[universe]
        d = np.abs(v[:, None] - v[None, :]) if col.is_numeric else (v[:, None] != v[None, :]).astype(float)
        dist = np.maximum(dist, d)
    return dist


def granules_direct(sys: DecisionSystem, universe: Iterable[int], B: Iterable[int],
                    cfg: NeighborhoodConfig) -> dict[int, frozenset]:
    universe = np.asarray(sorted(universe), dtype=np.int64)
    near = distance_matrix(sys, B, universe) <= cfg.radius
    return {int(x): frozenset(universe[near[i]].tolist()) for i, x in enumerate(universe)}


def pos_direct(sys: DecisionSystem, R: Iterable[int], mode: str,
               cfg: NeighborhoodConfig | None = None, universe: Iterable[int] | None = None) -> frozenset:
    """Members of ``universe`` whose block / granule within ``universe`` is decision-pure."""
    universe = list(range(sys.n_samples)) if universe is None else [int(x) for x in universe]
    dec = sys.decision
    R = list(R)
    if mode == CLASSIC or not R:
        # with no attributes every granule is the whole universe, as in the classic case
        out = set()
        for block in blocks_direct(sys, universe, R):
            if len({int(dec[y]) for y in block}) == 1:
                out |= block
        return frozenset(out)
    return frozenset(x for x, g in granules_direct(sys, universe, R, cfg).items()
                     if all(dec[y] == dec[x] for y in g))


def exhaustive_pos_table(sys: DecisionSystem, mode: str = CLASSIC, cfg: NeighborhoodConfig | None = None,
                         budget: OracleBudget = OracleBudget()) -> dict[frozenset, PositiveRegion]:
    check_config(mode, cfg)
    budget.require(sys)
    table = {}
    attrs = range(sys.n_attributes)
    for k in range(1, sys.n_attributes + 1):
        for subset in itertools.combinations(attrs, k):
            members = np.array(sorted(pos_direct(sys, subset, mode, cfg)), dtype=np.int64)
            table[frozenset(subset)] = PositiveRegion(members, sys.n_samples)
    return table


# -------------------------------------------------------- random systems

GRID = np.round(np.linspace(0.0, 1.0, 11), 10)


def random_system(rng: np.random.Generator, budget: OracleBudget = OracleBudget()) -> DecisionSystem:
    """Small mixed-type system with numeric values on a 0.1 grid."""
    n = int(rng.integers(4, min(32, budget.max_samples) + 1))
    m = int(rng.integers(2, min(6, budget.max_attributes) + 1))
    cols = []
    for j in range(m):
        if rng.random() < 0.6:
            levels = GRID[rng.choice(11, size=int(rng.integers(2, 6)), replace=False)]
            cols.append(AttributeColumn(j, f"a{j}", NUMERIC, rng.choice(levels, n)))
        else:
            k = int(rng.integers(2, 4))
            cols.append(AttributeColumn.categorical(j, f"a{j}", [f"s{v}" for v in rng.integers(0, k, n)]))
    classes = int(rng.integers(2, 4))
    dec = rng.integers(0, classes, n)
    _, dec = np.unique(dec, return_inverse=True)
    return DecisionSystem(tuple(cols), dec)


def replace_column(sys: DecisionSystem, b: int, values: np.ndarray, kind: str) -> DecisionSystem:
    cols = list(sys.columns)
    if kind == NUMERIC:
        cols[b] = AttributeColumn(b, cols[b].name, NUMERIC, values)
    else:
        cols[b] = AttributeColumn.categorical(b, cols[b].name, [str(v) for v in values])
    return DecisionSystem(tuple(cols), sys.decision, sys.class_names, sys.decision_name)


def _coarsen(rng, sys: DecisionSystem, r: int, mode: str) -> tuple[np.ndarray, str]:
    """Column that can never split what attribute ``r`` groups together."""
    col = sys.columns[r]
    choice = rng.integers(3)
    if choice == 0:
        return np.zeros(sys.n_samples), NUMERIC
    if choice == 1:
        return col.values.copy(), col.kind
    if col.is_numeric:
        if mode == CLASSIC:
            return np.floor(col.values * 2.5) / 2.5 / 0.8, NUMERIC
        return col.values * 0.5, NUMERIC
    if mode == CLASSIC:
        return col.values % 2, CATEGORICAL
    return col.values.copy(), CATEGORICAL


def _views(sys, universe, R, mode, cfg):
    if mode == CLASSIC:
        return partition(sys, universe, R)
    return GranuleView.build(sys, universe, R, cfg)


def _granules_on(struct, sys) -> dict[int, frozenset]:
    rows = struct.rows(slice(None))
    return {int(x): frozenset(struct.universe[rows[i]].tolist()) for i, x in enumerate(struct.universe)}


def _mode_cfg(mode: str, cfg: NeighborhoodConfig | None):
    if mode == NEIGHBORHOOD and cfg is None:
        cfg = NeighborhoodConfig(0.16)
    check_config(mode, cfg)
    return cfg


def verify_sr(seed: int, trials: int, budget: OracleBudget = OracleBudget(), mode: str = CLASSIC,
              cfg: NeighborhoodConfig | None = None, stats: dict | None = None) -> list[Counterexample]:
    """Check redundancy stability on random ``(system, R, a, b)`` tuples.

    Whenever ``b`` refines nothing on ``U' = U - POS_R`` (checked from the
    definition), ``POS_{R+a+b}`` must equal ``POS_{R+a}`` on the full
    universe for every other attribute ``a``. The library's ``sr_test`` must
    also agree with the definitional premise.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    cfg = _mode_cfg(mode, cfg)
    rng = np.random.default_rng(seed)
    out: list[Counterexample] = []
    tally = {"trials": trials, "premise_held": 0, "conclusions_checked": 0}
    for t in range(trials):
        sys = random_system(rng, budget)
        m = sys.n_attributes
        R = sorted(rng.choice(m, size=int(rng.integers(0, m)), replace=False).tolist())
        others = [j for j in range(m) if j not in R]
        b_in_R = bool(R) and rng.random() < 0.05
        b = int(rng.choice(R)) if b_in_R else int(rng.choice(others))
        if R and not b_in_R and rng.random() < 0.5:
            vals, kind = _coarsen(rng, sys, int(rng.choice(R)), mode)
            sys = replace_column(sys, b, vals, kind)
        U = range(sys.n_samples)
        pos_R = pos_direct(sys, R, mode, cfg)
        rest = sorted(set(U) - pos_R)
        Rb = sorted(set(R) | {b})
        if mode == CLASSIC:
            premise = blocks_direct(sys, rest, R) == blocks_direct(sys, rest, Rb)
        else:
            premise = granules_direct(sys, rest, R, cfg) == granules_direct(sys, rest, Rb, cfg)
        if not b_in_R:
            fast = sr_test(sys, np.array(rest, dtype=np.int64), R, b, mode,
                           cfg if mode == NEIGHBORHOOD else None)
            if fast != premise:
                out.append(Counterexample(t, "sr_test_disagrees",
                                          {"R": R, "b": b, "sr_test": fast, "definition": premise}))
        if not premise:
            continue
        tally["premise_held"] += 1
        for a in range(m):
            if a in Rb:
                continue
            tally["conclusions_checked"] += 1
            with_b = pos_direct(sys, sorted(set(Rb) | {a}), mode, cfg)
            without = pos_direct(sys, sorted(set(R) | {a}), mode, cfg)
            if with_b != without:
                out.append(Counterexample(t, "pos_changed", {
                    "R": R, "a": a, "b": b, "pos_R_a_b": sorted(with_b), "pos_R_a": sorted(without)}))
    if stats is not None:
        stats.update(tally)
    return out


def verify_slr(seed: int, trials: int, budget: OracleBudget = OracleBudget(), mode: str = CLASSIC,
               cfg: NeighborhoodConfig | None = None, stats: dict | None = None) -> list[Counterexample]:
    """Check that refining only the active region equals full refinement.

    For random ``(system, R, a, U')`` the active region from the library is
    compared with the definition, and the restricted refinement (structure
    and consistency gain) with a from-scratch computation under ``R + a``.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    cfg = _mode_cfg(mode, cfg)
    ncfg = cfg if mode == NEIGHBORHOOD else None
    rng = np.random.default_rng(seed)
    out: list[Counterexample] = []
    tally = {"trials": trials, "empty_active": 0, "proper_active": 0, "full_active": 0}
    for t in range(trials):
        sys = random_system(rng, budget)
        m, n = sys.n_attributes, sys.n_samples
        R = sorted(rng.choice(m, size=int(rng.integers(0, m)), replace=False).tolist())
        a = int(rng.choice([j for j in range(m) if j not in R]))
        roll = rng.random()
        if roll < 0.15:
            sys = replace_column(sys, a, np.full(n, 0.3), NUMERIC)
        elif roll < 0.35 and R:
            vals, kind = _coarsen(rng, sys, int(rng.choice(R)), mode)
            sys = replace_column(sys, a, vals, kind)
        if rng.random() < 0.5:
            universe = sorted(set(range(n)) - pos_direct(sys, R, mode, cfg))
        else:
            universe = sorted(rng.choice(n, size=int(rng.integers(1, n + 1)), replace=False).tolist())
        if not universe:
            universe = [0]
        U = np.array(universe, dtype=np.int64)
        Ra = sorted(set(R) | {a})
        dec = sys.decision

        # definition of the active region
        if mode == CLASSIC:
            a_blocks = blocks_direct(sys, universe, [a])
            expect_active = set()
            for block in blocks_direct(sys, universe, R):
                if not any(block <= ab for ab in a_blocks):
                    expect_active |= block
        else:
            gR = granules_direct(sys, universe, R, cfg)
            ga = granules_direct(sys, range(n), [a], cfg)
            expect_active = {x for x in universe if not gR[x] <= ga[x]}

        p = _views(sys, U, R, mode, cfg)
        got_active = set(active_region(sys, U, p, a, mode, ncfg).tolist())
        if got_active != expect_active:
            out.append(Counterexample(t, "active_region", {
                "R": R, "a": a, "universe": universe,
                "got": sorted(got_active), "expected": sorted(expect_active)}))
            continue
        size = len(expect_active)
        tally["empty_active" if size == 0 else "full_active" if size == len(universe) else "proper_active"] += 1

        refined, gain = restricted_refine(sys, U, p, a, np.array(sorted(got_active), dtype=np.int64),
                                          mode, ncfg)
        if mode == CLASSIC:
            same = refined.block_sets() == blocks_direct(sys, universe, Ra)
        else:
            same = _granules_on(refined, sys) == granules_direct(sys, universe, Ra, cfg)
        before = pos_direct(sys, R, mode, cfg, universe)
        after = pos_direct(sys, Ra, mode, cfg, universe)
        expect_gain = len(after - before)
        if not same or gain != expect_gain:
            out.append(Counterexample(t, "restricted_refine", {
                "R": R, "a": a, "universe": universe, "structure_equal": bool(same),
                "gain": gain, "expected_gain": expect_gain}))
    if stats is not None:
        stats.update(tally)
    return out


# ------------------------------------------------------------------ audit

@dataclass
class AuditRecord:
    mode: str
    reducts: dict[str, list[int]]
    final_pos: dict[str, int]
    pos_full: int | None = None
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d["ok"] = self.ok
        return d


def audit_reducts(sys: DecisionSystem, cfg: NeighborhoodConfig | None = None, mode: str | None = None,
                  budget: OracleBudget = OracleBudget()) -> AuditRecord:
    """Run every variant and report disagreements instead of raising.

    Within budget the common positive-region size is also compared with the
    exhaustive table, and every attribute retired as redundant is checked
    to add nothing on top of the final reduct.
    """
    mode = mode or (NEIGHBORHOOD if cfg is not None else CLASSIC)
    check_config(mode, cfg)
    states = {v: run_state(sys, mode, v, cfg) for v in VARIANTS}
    rec = AuditRecord(mode, {v: list(s.selected) for v, s in states.items()},
                      {v: len(s.pos_accum) for v, s in states.items()})
    ref = rec.reducts["plain"]
    for v in VARIANTS[1:]:
        if rec.reducts[v] != ref:
            rec.violations.append(f"{v} reduct {rec.reducts[v]} != plain reduct {ref}")
        if rec.final_pos[v] != rec.final_pos["plain"]:
            rec.violations.append(f"{v} final_pos {rec.final_pos[v]} != plain {rec.final_pos['plain']}")
    for v, s in states.items():
        truth = pos_direct(sys, s.selected, mode, cfg)
        if frozenset(s.pos_accum.members.tolist()) != truth:
            rec.violations.append(f"{v} accumulated positive region differs from POS of its reduct")
        for b in s.redundant:
            if pos_direct(sys, s.selected + [b], mode, cfg) != truth:
                rec.violations.append(f"{v} retired attribute {b} still changes POS of the final reduct")
    if budget.admits(sys):
        table = exhaustive_pos_table(sys, mode, cfg, budget)
        rec.pos_full = len(table[frozenset(range(sys.n_attributes))])
    return rec
