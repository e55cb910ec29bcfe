import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from roughlra.data import make_system, synth
from roughlra.granulation import NeighborhoodConfig
from roughlra.oracle import pos_direct
from roughlra.reduction import THREADS_ENV, reduce, run_state, sr_test
from roughlra.state import VARIANTS, ConfigError, ReductionReport

from helpers import column_system, systems

CFG = NeighborhoodConfig(0.16)


def test_s1_classic_plain_trace(S1):
    r = reduce(S1, "classic", "plain")
    assert r.reduct == [0, 1]
    assert r.reduct_names == ["a1", "a2"]
    assert r.gamma_trace == [2, 4]
    assert r.final_pos_size == 4 and r.dependency == 1.0


@pytest.mark.parametrize("variant", VARIANTS)
def test_s1_every_variant(S1, variant):
    r = reduce(S1, "classic", variant)
    assert r.reduct == [0, 1] and r.gamma_trace == [2, 4]


@pytest.mark.parametrize("variant", VARIANTS)
def test_gap_system_needs_one_attribute(variant):
    s = column_system([0.0, 0.05, 0.9, 0.95], [0, 0, 1, 1])
    r = reduce(s, "neighborhood", variant, CFG)
    assert r.reduct == [0] and r.final_pos_size == 4


@pytest.mark.parametrize("variant", VARIANTS)
@pytest.mark.parametrize("mode", ["classic", "neighborhood"])
def test_constant_attributes(variant, mode):
    cfg = CFG if mode == "neighborhood" else None
    mixed = make_system([[3, 3, 3, 3], [1, 1, 1, 1]], [0, 1, 0, 1])
    r = reduce(mixed, mode, variant, cfg)
    assert r.reduct == [] and r.final_pos_size == 0
    single = make_system([[3, 3, 3], [1, 1, 1]], [0, 0, 0])
    r = reduce(single, mode, variant, cfg)
    assert r.reduct == [] and r.final_pos_size == 3


def test_config_errors(S1):
    with pytest.raises(ConfigError):
        reduce(S1, "neighborhood", "lra", None)
    with pytest.raises(ConfigError):
        reduce(S1, "classic", "lra", CFG)
    with pytest.raises(ConfigError):
        reduce(S1, "fuzzy", "lra")
    with pytest.raises(ConfigError):
        reduce(S1, "classic", "fast")


def test_sr_test_examples(S1):
    s = synth(7, 50, 4, 0, {3: 0})
    assert sr_test(s, s.universe, [0], 3, "classic")
    assert sr_test(s, s.universe, [0], 3, "neighborhood", CFG)
    assert not sr_test(S1, S1.universe, [0], 1, "classic")
    const = make_system([[0, 1, 0, 1], [5, 5, 5, 5]], [0, 1, 1, 0])
    for R in ([], [0]):
        assert sr_test(const, const.universe, R, 1, "classic")
        assert sr_test(const, const.universe, R, 1, "neighborhood", CFG)
    with pytest.raises(ValueError):
        sr_test(S1, S1.universe, [0], 0, "classic")


def test_duplicate_never_selected():
    s = synth(7, 200, 6, 0, {5: 0}, classes=3)
    for variant in VARIANTS:
        assert 5 not in reduce(s, "classic", variant).reduct
        assert 5 not in reduce(s, "neighborhood", variant, CFG).reduct


@given(systems(max_n=14, max_m=5), st.sampled_from(["classic", "neighborhood"]))
def test_variants_agree_and_reach_full_pos(sys, mode):
    cfg = CFG if mode == "neighborhood" else None
    reports = {v: reduce(sys, mode, v, cfg) for v in VARIANTS}
    ref = reports["plain"]
    full = pos_direct(sys, range(sys.n_attributes), mode, cfg)
    for v, r in reports.items():
        assert r.reduct == ref.reduct, v
        assert r.gamma_trace == ref.gamma_trace, v
        assert r.final_pos_size == len(full), v
    c = {v: r.counters.samples_touched for v, r in reports.items()}
    assert c["lra"] <= c["farnemf"] <= c["fspa"] <= c["plain"]


@given(systems(max_n=14, max_m=5), st.sampled_from(["classic", "neighborhood"]))
def test_state_invariants_and_permanent_redundancy(sys, mode):
    cfg = CFG if mode == "neighborhood" else None
    for variant in ("farnemf", "lra"):
        state = run_state(sys, mode, variant, cfg)
        state.check(sys.n_attributes, sys.n_samples)
        final = pos_direct(sys, state.selected, mode, cfg)
        assert set(state.pos_accum.members.tolist()) == set(final)
        for b in state.redundant:
            assert pos_direct(sys, state.selected + [b], mode, cfg) == final


def test_gamma_trace_non_decreasing():
    s = synth(3, 150, 8, 2, classes=3)
    r = reduce(s, "neighborhood", "lra", CFG)
    assert all(a <= b for a, b in zip(r.gamma_trace, r.gamma_trace[1:]))
    assert r.gamma_trace[-1] == r.final_pos_size


def test_report_json_roundtrip(S1):
    r = reduce(S1, "classic", "lra", meta={"dataset": "s1"})
    d = json.loads(r.to_json())
    assert d["config"]["dataset"] == "s1"
    assert set(d["counters"]) >= {"granule_evals", "candidate_evals", "samples_touched", "wall_time"}
    assert ReductionReport.from_dict(d) == r


def test_counters_are_deterministic():
    s = synth(5, 300, 10, 0, {8: 0, 9: 1})
    a = reduce(s, "neighborhood", "lra", CFG)
    b = reduce(s, "neighborhood", "lra", CFG)
    assert a.counters.deterministic() == b.counters.deterministic()


def test_workers_do_not_change_the_result(monkeypatch):
    s = synth(5, 300, 10, 2, {11: 0})
    one = reduce(s, "neighborhood", "lra", CFG, workers=1)
    four = reduce(s, "neighborhood", "lra", CFG, workers=4)
    assert four.config["workers"] == 4
    assert one.reduct == four.reduct
    assert one.counters.deterministic() == four.counters.deterministic()
    monkeypatch.setenv(THREADS_ENV, "2")
    assert reduce(s, "classic", "plain", workers=4).config["workers"] == 2


def test_lra_touches_fewer_samples_with_duplicates():
    s = synth(7, 500, 12, 0, {10: 0, 11: 1})
    r = {v: reduce(s, "neighborhood", v, CFG) for v in VARIANTS}
    assert r["lra"].counters.samples_touched < r["plain"].counters.samples_touched
    assert set(r["lra"].redundant) >= {10, 11} - set(r["lra"].reduct)
