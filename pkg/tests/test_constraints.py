import pytest
from hypothesis import given, settings

from hypermon.constraints import (
    BOT, TOP, Conj, Imp, Neg, NodeTree, Prop, Var, conj, constr, disj, encode_trace, open_vars,
    rewrite_step, shift, split_conjuncts,
)
from hypermon.formula import Atom, Next, Not, Release, Until, WeakNext, WeakUntil, desugar, parse_spec, to_nnf
from hypermon.sat import SatEngine
from hypermon.semantics import eval_ltlfin, project
from cnf_oracle import brute_sat, leaves
from strategies import core_formulas, trace_pairs, traces

A, B, AB, E = frozenset("a"), frozenset("b"), frozenset("ab"), frozenset()
a0, a1, b1 = Atom("a", 0), Atom("a", 1), Atom("b", 1)


def sat(c) -> bool:
    eng = SatEngine()
    eng.assert_formula(c)
    return eng.check().sat


def test_canonical_constructors():
    p, q = Prop("a", 0), Prop("b", 0)
    assert conj(q, p, TOP, p) == Conj((p, q))
    assert conj(p, BOT) == BOT
    assert disj(p, TOP) == TOP
    assert disj(BOT) == BOT
    assert conj(conj(p, q), p) == Conj((p, q))
    assert disj(q, Neg(p)) == disj(Neg(p), q)


def test_rewrite_literals_and_next():
    assert rewrite_step(a0, A, 3) == TOP
    assert rewrite_step(Not(a0), A, 3) == BOT
    assert rewrite_step(a1, E, 3) == Prop("a", 3)
    assert rewrite_step(Next(a1), E, 3) == Var(False, a1, 4)
    assert rewrite_step(WeakNext(a1), E, 3) == Var(True, a1, 4)


def test_rewrite_until_release():
    u = Until(a0, a1)
    assert rewrite_step(u, A, 0) == disj(Prop("a", 0), Var(False, u, 1))
    assert rewrite_step(u, E, 0) == Prop("a", 0)
    r = Release(a0, a1)
    assert rewrite_step(r, A, 0) == Prop("a", 0)
    assert rewrite_step(r, E, 0) == conj(Prop("a", 0), Var(True, r, 1))
    w = WeakUntil(a0, b1)
    assert rewrite_step(w, A, 0) == disj(Prop("b", 0), Var(True, w, 1))


def test_rewrite_rejects_sugar():
    with pytest.raises(ValueError):
        rewrite_step(Not(Next(a0)), A, 0)


def test_enc_example():
    enc = encode_trace([A, AB], ("a", "b"))
    assert enc == conj(Prop("a", 0), Neg(Prop("b", 0)), Prop("a", 1), Prop("b", 1))
    assert encode_trace([], ("a",)) == TOP


def test_constr_example():
    # X a_pi' on a one-event trace: the strong obligation is closed to false
    c = constr(Next(a1), (A,))
    assert c == conj(Var(False, a1, 1), Neg(Var(False, a1, 1)))
    assert not sat(c)


def test_constr_rejects_empty():
    with pytest.raises(ValueError):
        constr(a1, ())


@settings(max_examples=300, deadline=None)
@given(core_formulas, trace_pairs())
def test_equisatisfiable_with_projection(f, pair):
    t, tp = pair
    c = conj(encode_trace(tp, ("a", "b")), constr(f, t))
    expected = eval_ltlfin(project(f, t), tp)
    assert sat(c) == expected
    if len(leaves(c)) <= 14:
        assert brute_sat(c) == expected


@settings(max_examples=100, deadline=None)
@given(core_formulas, traces())
def test_shift(f, t):
    assert constr(f, t, start=2) == shift(constr(f, t), 2)


@settings(max_examples=100, deadline=None)
@given(core_formulas, traces())
def test_frontier_positions(f, t):
    # every open placeholder after k events points at position k
    c = rewrite_step(f, t[0], 0)
    for v in open_vars(c):
        assert v.pos == 1


def test_split_conjuncts():
    p, v = Prop("a", 1), Var(True, a1, 2)
    assert split_conjuncts(conj(p, v)) == [p, v]
    assert split_conjuncts(TOP) == []
    assert split_conjuncts(p) == [p]


def test_splitting_example_shares_recurrence():
    body = to_nnf(desugar(parse_spec("forall p1, p2. G((a_p1 <-> a_p2) | (b_p1 <-> b_p2))").body))
    s = Var(True, body, 2)
    r1 = split_conjuncts(rewrite_step(body, A, 1))
    r2 = split_conjuncts(rewrite_step(body, AB, 1))
    assert set(r1) == {disj(Prop("a", 1), Neg(Prop("b", 1))), s}
    assert set(r2) == {disj(Prop("a", 1), Prop("b", 1)), s}
    tree = NodeTree(body)
    new = []
    for t in ((A, A, A), (A, AB, A)):
        out = tree.begin_trace()
        for i, e in enumerate(t):
            out += tree.step(e, i)
        out += tree.end_trace()
        new.append(out)
    # the second trace only contributes the differing conjunct
    assert len(new[1]) == 1
    assert isinstance(new[1][0], Imp) and new[1][0].body == disj(Prop("a", 1), Prop("b", 1))


def test_node_tree_duplicate_trace_adds_nothing():
    body = to_nnf(desugar(parse_spec("forall p1, p2. (a_p1 U b_p2) | X(a_p1 <-> a_p2)").body))
    tree = NodeTree(body)
    runs = []
    for _ in range(3):
        out = tree.begin_trace()
        for i, e in enumerate((A, B, AB)):
            out += tree.step(e, i)
        runs.append(out + tree.end_trace())
    assert runs[0] and runs[1] == [] and runs[2] == []


def test_od_rewrite_matches_displayed_formula():
    body = to_nnf(desugar(parse_spec("forall p1, p2. (out_p1 <-> out_p2) W !(in_p1 <-> in_p2)").body, keep_weak_until=True))
    got = rewrite_step(body, frozenset({"in", "out"}), 0)
    assert got == disj(Neg(Prop("in", 0)), conj(Prop("out", 0), Var(True, body, 1)))
