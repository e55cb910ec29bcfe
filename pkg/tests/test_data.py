import numpy as np
import pytest
from hypothesis import given, strategies as st

from roughlra.data import (DecisionSystem, MissingValueError, ParseError, Schema, SchemaError,
                           SynthError, load_csv, make_system, synth, write_csv)
from roughlra.granulation import partition

from helpers import systems


def write(tmp_path, text, schema):
    data = tmp_path / "d.csv"
    data.write_text(text)
    sch = tmp_path / "d.schema"
    sch.write_text(schema)
    return data, sch


SCHEMA = "num: numeric\ncat: categorical\ny: decision\n"


def test_load_csv_normalizes_numeric(tmp_path):
    data, sch = write(tmp_path, "num,cat,y\n2,a,0\n4,b,1\n6,a,1\n10,c,0\n", SCHEMA)
    s = load_csv(data, sch)
    np.testing.assert_array_equal(s.columns[0].values, [0.0, 0.25, 0.5, 1.0])
    assert s.columns[1].alphabet == ("a", "b", "c")
    np.testing.assert_array_equal(s.columns[1].values, [0, 1, 0, 2])
    np.testing.assert_array_equal(s.decision, [0, 1, 1, 0])
    assert s.n_samples == 4 and s.n_attributes == 2


def test_header_order_may_differ_from_schema(tmp_path):
    data, sch = write(tmp_path, "y,cat,num\n0,a,1\n1,b,3\n", SCHEMA)
    s = load_csv(data, sch)
    assert s.names == ["cat", "num"]
    np.testing.assert_array_equal(s.columns[1].values, [0.0, 1.0])


def test_single_class_is_valid(tmp_path):
    data, sch = write(tmp_path, "num,cat,y\n1,a,x\n2,b,x\n", SCHEMA)
    s = load_csv(data, sch)
    assert s.n_classes == 1


def test_constant_numeric_column_is_zero(tmp_path):
    data, sch = write(tmp_path, "num,cat,y\n5,a,0\n5,b,1\n", SCHEMA)
    np.testing.assert_array_equal(load_csv(data, sch).columns[0].values, [0.0, 0.0])


@pytest.mark.parametrize("header", ["num,cat\n", "num,cat,y,extra\n", "num,kat,y\n"])
def test_schema_mismatch(tmp_path, header):
    data, sch = write(tmp_path, header + "1,a,0\n", SCHEMA)
    with pytest.raises(SchemaError):
        load_csv(data, sch)


def test_parse_error_reports_row_and_column(tmp_path):
    data, sch = write(tmp_path, "num,cat,y\n1,a,0\nabc,b,1\n", SCHEMA)
    with pytest.raises(ParseError) as err:
        load_csv(data, sch)
    assert err.value.row == 3 and err.value.column == "num"


def test_missing_values_rejected_by_default(tmp_path):
    data, sch = write(tmp_path, "num,cat,y\n1,,0\n2,b,1\n", SCHEMA)
    with pytest.raises(MissingValueError):
        load_csv(data, sch)


def test_missing_value_policies(tmp_path):
    text = "1,?,0\n?,b,1\n3,a,1\n"
    base = "@header false\n@missing ?\n" + SCHEMA
    data, sch = write(tmp_path, text, base + "@on_missing drop\n")
    assert load_csv(data, sch).n_samples == 1
    data, sch = write(tmp_path, text, base + "@on_missing category\n")
    s = load_csv(data, sch)
    assert s.n_samples == 2
    assert s.columns[1].alphabet == ("?", "a")


def test_ignore_column_and_space_delimiter(tmp_path):
    data, sch = write(tmp_path, "7 1 a 0\n8 2 b 1\n",
                      "@header false\n@delimiter space\nid: ignore\n" + SCHEMA)
    s = load_csv(data, sch)
    assert s.names == ["num", "cat"]


@pytest.mark.parametrize("text", [
    "a: numeric\n",                          # no decision
    "a: numeric\nb: decision\nc: decision\n",
    "a: real\nb: decision\n",
    "b: decision\n",                         # no condition attribute
    "@colour red\na: numeric\nb: decision\n",
])
def test_bad_schemas(text):
    with pytest.raises(SchemaError):
        Schema.parse(text)


def test_schema_dump_roundtrip():
    s = Schema.parse("@header false\n@missing ?\n@on_missing drop\n@delimiter tab\n" + SCHEMA)
    assert Schema.parse(s.dump()) == s


@given(systems(max_n=12, max_m=4))
def test_write_load_roundtrip(tmp_path_factory, sys):
    # normalize first: the round trip is the identity on normalized systems
    cols = {c.name: (c.values if c.is_numeric else [c.alphabet[v] for v in c.values]) for c in sys.columns}
    normed = make_system(cols, [sys.class_names[d] for d in sys.decision], kinds=[c.kind for c in sys.columns])
    path = tmp_path_factory.mktemp("rt") / "x.csv"
    schema = write_csv(normed, path)
    assert load_csv(path, schema).same_as(normed)


@given(st.lists(st.floats(-1e6, 1e6, allow_nan=False), min_size=2, max_size=30))
def test_normalization_is_monotone(values):
    s = make_system({"x": values}, [0] * len(values))
    v = s.columns[0].values
    assert v.min() >= 0 and v.max() <= 1
    raw = np.array(values)
    for i in range(len(raw)):
        for j in range(len(raw)):
            if raw[i] < raw[j]:
                assert v[i] <= v[j]


def test_system_invariants():
    from roughlra.data import AttributeColumn
    col = AttributeColumn(0, "x", "numeric", np.array([0.0, 1.0]))
    with pytest.raises(ValueError):
        DecisionSystem((col,), np.array([0, 2]))
    with pytest.raises(ValueError):
        DecisionSystem((AttributeColumn(0, "x", "numeric", np.array([0.0, 2.0])),), np.array([0, 1]))
    with pytest.raises(ValueError):
        DecisionSystem((), np.array([0, 1]))


def test_arrays_are_read_only():
    s = synth(7, 10, 2)
    with pytest.raises(ValueError):
        s.columns[0].values[0] = 0.5
    with pytest.raises(ValueError):
        s.decision[0] = 1


def test_synth_duplicate_is_exact_copy():
    s = synth(7, 50, 4, 0, {3: 0}, classes=2)
    np.testing.assert_array_equal(s.columns[3].values, s.columns[0].values)


def test_synth_is_deterministic():
    a = synth(7, 50, 4, 2, {3: 0}, classes=3)
    b = synth(7, 50, 4, 2, {3: 0}, classes=3)
    assert a.same_as(b)
    assert not a.same_as(synth(8, 50, 4, 2, {3: 0}, classes=3))


def test_synth_duplicate_does_not_refine():
    s = synth(7, 50, 4, 0, {3: 0}, classes=2)
    assert partition(s, s.universe, [0]) == partition(s, s.universe, [0, 3])


@given(st.integers(0, 1000), st.integers(1, 3), st.integers(0, 3))
def test_synth_duplicate_never_refines_any_superset(seed, extra, cat):
    m = 3 + cat
    s = synth(seed, 40, 3, cat, {m - 1: 0}, classes=2)
    R = [0] + list(range(1, min(extra + 1, m - 1)))
    assert partition(s, s.universe, R) == partition(s, s.universe, R + [m - 1])


@pytest.mark.parametrize("dup", [{0: 3}, {2: 2}, {5: 0}])
def test_synth_rejects_forward_or_self_references(dup):
    with pytest.raises(SynthError):
        synth(7, 10, 4, 0, dup)


def test_synth_categorical_duplicate_keeps_kind():
    s = synth(3, 30, 1, 2, {2: 1})
    assert s.columns[2].kind == "categorical"
    np.testing.assert_array_equal(s.columns[2].values, s.columns[1].values)
