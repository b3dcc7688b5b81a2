import itertools
import random

from hypothesis import given, settings, strategies as st

from hypermon.constraints import BOT, TOP, Imp, Neg, Prop, Var, conj, disj
from hypermon.formula import Atom
from hypermon.sat import SatEngine, Solver, _luby
from cnf_oracle import brute_sat


def brute_cnf(n, clauses, assumptions=()):
    for bits in itertools.product((False, True), repeat=n):
        val = lambda l: bits[abs(l) - 1] == (l > 0)
        if all(val(a) for a in assumptions) and all(any(val(l) for l in c) for c in clauses):
            return True
    return False


def random_cnf(rng, n, m, k=3):
    return [[rng.choice((1, -1)) * rng.randint(1, n) for _ in range(rng.randint(1, k))] for _ in range(m)]


def test_luby_prefix():
    assert [_luby(i) for i in range(15)] == [1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]


def test_random_cnf_against_enumeration():
    rng = random.Random(7)
    for _ in range(300):
        n = rng.randint(1, 10)
        clauses = random_cnf(rng, n, rng.randint(1, 5 * n))
        s = Solver()
        for c in clauses:
            s.add_clause(c)
        res = s.solve()
        assert res.sat == brute_cnf(n, clauses)
        if res.sat:
            assert all(any(res.model[abs(l)] == (l > 0) for l in c) for c in clauses)


def test_assumptions_are_temporary():
    rng = random.Random(11)
    for _ in range(200):
        n = rng.randint(2, 8)
        clauses = random_cnf(rng, n, rng.randint(1, 3 * n))
        s = Solver()
        for c in clauses:
            s.add_clause(c)
        for _ in range(3):
            assumps = [rng.choice((1, -1)) * v for v in rng.sample(range(1, n + 1), rng.randint(1, n))]
            assert s.solve(assumps).sat == brute_cnf(n, clauses, assumps)
        assert s.solve().sat == brute_cnf(n, clauses)


def test_incremental_clauses():
    s = Solver()
    s.add_clause([1, 2])
    assert s.solve().sat
    s.add_clause([-1])
    res = s.solve()
    assert res.sat and res.model[2]
    s.add_clause([-2])
    assert not s.solve().sat
    s.add_clause([3])  # unsat is sticky
    assert not s.solve().sat and not s.ok


def test_empty_clause():
    s = Solver()
    assert not s.add_clause([])
    assert not s.solve().sat


def test_hard_pigeonhole():
    # 5 pigeons, 4 holes
    var = lambda p, h: p * 4 + h + 1
    s = Solver()
    for p in range(5):
        s.add_clause([var(p, h) for h in range(4)])
    for h in range(4):
        for p, q in itertools.combinations(range(5), 2):
            s.add_clause([-var(p, h), -var(q, h)])
    assert not s.solve().sat


leaves = st.one_of(
    st.builds(Prop, st.sampled_from("abcde"), st.integers(0, 1)),
    st.builds(lambda w, p: Var(w, Atom("a", 1), p), st.booleans(), st.integers(0, 3)),
)
lits = st.one_of(leaves, leaves.map(Neg), st.sampled_from([TOP, BOT]))
cnodes = st.recursive(
    lits,
    lambda ch: st.one_of(
        st.lists(ch, min_size=1, max_size=3).map(lambda xs: conj(*xs)),
        st.lists(ch, min_size=1, max_size=3).map(lambda xs: disj(*xs)),
        st.builds(Imp, leaves.filter(lambda x: isinstance(x, Var)), ch),
    ),
    max_leaves=12,
)


@settings(max_examples=300, deadline=None)
@given(cnodes)
def test_tseitin_equisatisfiable(c):
    eng = SatEngine()
    eng.assert_formula(c)
    assert eng.check().sat == brute_sat(c)


@settings(max_examples=100, deadline=None)
@given(cnodes, cnodes)
def test_engine_incremental_conjunction(c1, c2):
    eng = SatEngine()
    eng.assert_formula(c1)
    assert eng.check().sat == brute_sat(c1)
    eng.assert_formula(c2)
    assert eng.check().sat == brute_sat(conj(c1, c2))


def test_aux_definitions_emitted_once():
    p, q, r = (Prop(x, 0) for x in "pqr")
    c = disj(conj(p, q), r)
    eng = SatEngine()
    first = eng.to_cnf(c)
    again = eng.to_cnf(c)
    assert len(again) == 1 and len(first) > 1


def test_check_with_literal_assumptions():
    p, q = Prop("p", 0), Prop("q", 0)
    eng = SatEngine()
    eng.assert_formula(disj(p, q))
    assert eng.check([Neg(p)]).sat
    assert not eng.check([Neg(p), Neg(q)]).sat
    assert eng.check().sat


def test_dimacs_dump():
    p, q = Prop("p", 0), Prop("q", 0)
    eng = SatEngine()
    eng.assert_formula(conj(p, disj(Neg(p), q)))
    text = eng.to_dimacs()
    lines = text.splitlines()
    assert lines[0] == "p cnf 2 2"
    assert lines[1:3] == ["1 0", "2 -1 0"]
    assert "c 1 p0" in lines and "c 2 q0" in lines
