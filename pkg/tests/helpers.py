import numpy as np
from hypothesis import strategies as st

from roughlra.data import AttributeColumn, DecisionSystem, make_system

GRID = [round(0.1 * i, 1) for i in range(11)]


def s1():
    """Four samples, two binary attributes, decisions (0, 1, 1, 1)."""
    return make_system([[0, 0, 1, 1], [0, 1, 0, 1]], [0, 1, 1, 1], kinds=["categorical"] * 2)


def column_system(values, decision):
    return make_system({"a1": values}, decision, normalize=False)


@st.composite
def systems(draw, max_n=16, max_m=5, min_m=1):
    n = draw(st.integers(2, max_n))
    m = draw(st.integers(min_m, max_m))
    cols = []
    for j in range(m):
        if draw(st.booleans()):
            levels = draw(st.lists(st.sampled_from(GRID), min_size=1, max_size=4, unique=True))
            vals = draw(st.lists(st.sampled_from(levels), min_size=n, max_size=n))
            cols.append(AttributeColumn(j, f"a{j}", "numeric", np.array(vals)))
        else:
            vals = draw(st.lists(st.integers(0, 2), min_size=n, max_size=n))
            cols.append(AttributeColumn.categorical(j, f"a{j}", [f"s{v}" for v in vals]))
    dec = draw(st.lists(st.integers(0, 2), min_size=n, max_size=n))
    _, dec = np.unique(dec, return_inverse=True)
    return DecisionSystem(tuple(cols), dec)


# acceptance lines, echoed in the terminal summary
GATE: list[str] = []
