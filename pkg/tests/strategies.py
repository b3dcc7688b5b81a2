"""hypothesis strategies shared by the test modules"""
from hypothesis import strategies as st

from hypermon.formula import (
    FALSE, TRUE, And, Atom, Finally, Globally, Iff, Implies, Next, Not, Or,
    Release, Until, WeakNext, WeakUntil,
)

PROPS = ("a", "b")

atoms = st.builds(Atom, st.sampled_from(PROPS), st.integers(0, 1))
literals = st.one_of(atoms, atoms.map(Not), st.sampled_from([TRUE, FALSE]))


def _core_step(children):
    unary = st.sampled_from([Next, WeakNext])
    binary = st.sampled_from([And, Or, Until, Release])
    return st.one_of(
        st.builds(lambda op, x: op(x), unary, children),
        st.builds(lambda op, x, y: op(x, y), binary, children, children),
    )


def _full_step(children):
    unary = st.sampled_from([Not, Next, WeakNext, Globally, Finally])
    binary = st.sampled_from([And, Or, Implies, Iff, Until, Release, WeakUntil])
    return st.one_of(
        st.builds(lambda op, x: op(x), unary, children),
        st.builds(lambda op, x, y: op(x, y), binary, children, children),
    )


core_formulas = st.recursive(literals, _core_step, max_leaves=8)
full_formulas = st.recursive(st.one_of(atoms, st.sampled_from([TRUE, FALSE])), _full_step, max_leaves=8)

events = st.frozensets(st.sampled_from(PROPS))


def traces(min_size=1, max_size=6):
    return st.lists(events, min_size=min_size, max_size=max_size).map(tuple)


@st.composite
def trace_pairs(draw, max_size=6):
    n = draw(st.integers(1, max_size))
    return draw(traces(n, n)), draw(traces(n, n))
