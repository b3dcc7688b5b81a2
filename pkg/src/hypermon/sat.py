"""Embedded incremental SAT engine.

``Solver`` is a plain CDCL solver over DIMACS-style integer literals (two
watched literals, first-UIP learning, activity-based branching with phase
saving, Luby restarts, assumptions). ``SatEngine`` maps constraint formulas
onto it with a polarity-aware definitional (Tseitin) encoding.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

from .constraints import CNode, Conj, Disj, Imp, Neg, PConst, Prop, Var


@dataclass(frozen=True)
class SolveResult:
    sat: bool
    model: tuple[bool, ...] | None = None

    def value(self, var: int) -> bool:
        return self.model[var]


def _luby(i: int) -> int:
    size, seq = 1, 0
    while size < i + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != i:
        size = (size - 1) >> 1
        seq -= 1
        i = i % size
    return 1 << seq


class Solver:
    def __init__(self):
        self.nvars = 0
        self.clauses: list[list[int]] = []
        self.original: list[list[int]] = []
        self.watches: dict[int, list[int]] = {}
        self.value = [0]  # per variable: 1 true, -1 false, 0 unassigned
        self.level = [0]
        self.reason = [-1]
        self.phase = [False]
        self.activity = [0.0]
        self.heap: list[tuple[float, int]] = []
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.ok = True
        self.var_inc = 1.0
        self.conflicts = 0

    def new_var(self) -> int:
        self.nvars += 1
        v = self.nvars
        self.value.append(0)
        self.level.append(0)
        self.reason.append(-1)
        self.phase.append(False)
        self.activity.append(0.0)
        self.watches[v] = []
        self.watches[-v] = []
        heapq.heappush(self.heap, (0.0, v))
        return v

    def _lit_value(self, lit: int) -> int:
        v = self.value[lit] if lit > 0 else -self.value[-lit]
        return v

    def _enqueue(self, lit: int, reason: int) -> None:
        v = abs(lit)
        self.value[v] = 1 if lit > 0 else -1
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(lit)

    def add_clause(self, lits: Iterable[int]) -> bool:
        """Add a permanent clause; returns False once the clause set is UNSAT."""
        lits = list(dict.fromkeys(lits))
        for lit in lits:
            while abs(lit) > self.nvars:
                self.new_var()
        self.original.append(list(lits))
        if not self.ok:
            return False
        if any(-lit in lits for lit in lits):
            return True
        self._cancel_until(0)
        kept = []
        for lit in lits:
            val = self._lit_value(lit)
            if val == 1:
                return True
            if val == 0:
                kept.append(lit)
        if not kept:
            self.ok = False
            return False
        if len(kept) == 1:
            self._enqueue(kept[0], -1)
            if self._propagate() != -1:
                self.ok = False
            return self.ok
        self._attach(kept)
        return True

    def _attach(self, lits: list[int]) -> int:
        idx = len(self.clauses)
        self.clauses.append(lits)
        self.watches[lits[0]].append(idx)
        self.watches[lits[1]].append(idx)
        return idx

    def _propagate(self) -> int:
        value = self.value
        clauses = self.clauses
        watches = self.watches
        while self.qhead < len(self.trail):
            p = self.trail[self.qhead]
            self.qhead += 1
            false_lit = -p
            ws = watches[false_lit]
            keep = []
            i = 0
            n = len(ws)
            while i < n:
                ci = ws[i]
                i += 1
                c = clauses[ci]
                if c[0] == false_lit:
                    c[0], c[1] = c[1], false_lit
                first = c[0]
                fv = value[first] if first > 0 else -value[-first]
                if fv == 1:
                    keep.append(ci)
                    continue
                for k in range(2, len(c)):
                    lit = c[k]
                    lv = value[lit] if lit > 0 else -value[-lit]
                    if lv != -1:
                        c[1], c[k] = lit, false_lit
                        watches[lit].append(ci)
                        break
                else:
                    keep.append(ci)
                    if fv == -1:
                        keep.extend(ws[i:])
                        watches[false_lit] = keep
                        self.qhead = len(self.trail)
                        return ci
                    self._enqueue(first, ci)
            watches[false_lit] = keep
        return -1

    def _bump(self, v: int) -> None:
        self.activity[v] += self.var_inc
        if self.activity[v] > 1e100:
            for u in range(1, self.nvars + 1):
                self.activity[u] *= 1e-100
            self.var_inc *= 1e-100
            self.heap = [(-self.activity[u], u) for u in range(1, self.nvars + 1) if self.value[u] == 0]
            heapq.heapify(self.heap)
        if self.value[v] == 0:
            heapq.heappush(self.heap, (-self.activity[v], v))

    def _analyze(self, confl: int) -> tuple[list[int], int]:
        seen = set()
        learnt = [0]
        counter = 0
        p = 0
        idx = len(self.trail) - 1
        current = len(self.trail_lim)
        while True:
            for lit in self.clauses[confl]:
                if p != 0 and lit == p:
                    continue
                v = abs(lit)
                if v in seen or self.level[v] == 0:
                    continue
                seen.add(v)
                self._bump(v)
                if self.level[v] >= current:
                    counter += 1
                else:
                    learnt.append(lit)
            while abs(self.trail[idx]) not in seen:
                idx -= 1
            p = self.trail[idx]
            idx -= 1
            confl = self.reason[abs(p)]
            seen.discard(abs(p))
            counter -= 1
            if counter == 0:
                break
        learnt[0] = -p
        if len(learnt) == 1:
            return learnt, 0
        best = max(range(1, len(learnt)), key=lambda k: self.level[abs(learnt[k])])
        learnt[1], learnt[best] = learnt[best], learnt[1]
        return learnt, self.level[abs(learnt[1])]

    def _cancel_until(self, lvl: int) -> None:
        if len(self.trail_lim) <= lvl:
            return
        start = self.trail_lim[lvl]
        for lit in reversed(self.trail[start:]):
            v = abs(lit)
            self.phase[v] = lit > 0
            self.value[v] = 0
            self.reason[v] = -1
            heapq.heappush(self.heap, (-self.activity[v], v))
        del self.trail[start:]
        del self.trail_lim[lvl:]
        self.qhead = len(self.trail)

    def _pick(self) -> int:
        while self.heap:
            _, v = heapq.heappop(self.heap)
            if self.value[v] == 0:
                return v
        return 0

    def solve(self, assumptions: Sequence[int] = ()) -> SolveResult:
        for lit in assumptions:
            while abs(lit) > self.nvars:
                self.new_var()
        if not self.ok:
            return SolveResult(False)
        self._cancel_until(0)
        if self._propagate() != -1:
            self.ok = False
            return SolveResult(False)
        restart_no = 0
        budget = 100 * _luby(restart_no)
        local_conflicts = 0
        while True:
            confl = self._propagate()
            if confl != -1:
                self.conflicts += 1
                local_conflicts += 1
                if not self.trail_lim:
                    self.ok = False
                    return SolveResult(False)
                learnt, back = self._analyze(confl)
                self._cancel_until(back)
                if len(learnt) == 1:
                    self._enqueue(learnt[0], -1)
                else:
                    ci = self._attach(learnt)
                    self._enqueue(learnt[0], ci)
                self.var_inc *= 1.05
                continue
            if local_conflicts >= budget:
                restart_no += 1
                budget = 100 * _luby(restart_no)
                local_conflicts = 0
                self._cancel_until(0)
                continue
            lvl = len(self.trail_lim)
            if lvl < len(assumptions):
                a = assumptions[lvl]
                val = self._lit_value(a)
                self.trail_lim.append(len(self.trail))
                if val == -1:
                    self._cancel_until(0)
                    return SolveResult(False)
                if val == 0:
                    self._enqueue(a, -1)
                continue
            v = self._pick()
            if v == 0:
                model = tuple([False] + [x == 1 for x in self.value[1:]])
                self._cancel_until(0)
                return SolveResult(True, model)
            self.trail_lim.append(len(self.trail))
            self._enqueue(v if self.phase[v] else -v, -1)


class SatEngine:
    """Clause store keyed by constraint-formula identities."""

    def __init__(self):
        self.solver = Solver()
        self.registry: dict[Hashable, int] = {}
        self.names: list[Hashable] = [None]
        self.aux_done: set[int] = set()
        self.clauses_added = 0

    @property
    def num_vars(self) -> int:
        return self.solver.nvars

    @property
    def unsat(self) -> bool:
        return not self.solver.ok

    def var(self, key: Hashable) -> int:
        v = self.registry.get(key)
        if v is None:
            v = self.solver.new_var()
            self.registry[key] = v
            self.names.append(key)
        return v

    def literal(self, c: CNode) -> int:
        if isinstance(c, Neg):
            return -self.var(c.arg)
        if isinstance(c, (Prop, Var)):
            return self.var(c)
        raise TypeError(f"not a literal: {c!r}")

    def to_cnf(self, c: CNode) -> list[list[int]]:
        """Clauses for asserting ``c``; auxiliary definitions are emitted once per subformula."""
        out: list[list[int]] = []
        self._clauses(c, [], out)
        return out

    def _aux(self, c: CNode, out: list) -> int:
        x = self.var(("aux", c))
        if x not in self.aux_done:
            self.aux_done.add(x)
            self._clauses(c, [-x], out)
        return x

    def _clauses(self, c: CNode, pre: list[int], out: list) -> None:
        if isinstance(c, PConst):
            if not c.value:
                out.append(list(pre))
        elif isinstance(c, (Prop, Var, Neg)):
            out.append(pre + [self.literal(c)])
        elif isinstance(c, Conj):
            for a in c.args:
                self._clauses(a, pre, out)
        elif isinstance(c, Imp):
            self._clauses(c.body, pre + [-self.literal(c.var)], out)
        elif isinstance(c, Disj):
            lits = list(pre)
            for a in c.args:
                if isinstance(a, PConst):
                    if a.value:
                        return
                    continue
                if isinstance(a, (Prop, Var, Neg)):
                    lits.append(self.literal(a))
                else:
                    lits.append(self._aux(a, out))
            out.append(lits)
        else:
            raise TypeError(c)

    def add_clauses(self, clauses: Iterable[list[int]]) -> int:
        n = 0
        for cl in clauses:
            self.solver.add_clause(cl)
            n += 1
        self.clauses_added += n
        return n

    def assert_formula(self, c: CNode) -> int:
        return self.add_clauses(self.to_cnf(c))

    def check(self, assumptions: Iterable[CNode] = ()) -> SolveResult:
        return self.solver.solve([self.literal(a) for a in assumptions])

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.solver.nvars} {len(self.solver.original)}"]
        for cl in self.solver.original:
            lines.append(" ".join(str(l) for l in cl) + " 0")
        lines.append("c variable map")
        for v in range(1, len(self.names)):
            lines.append(f"c {v} {_describe(self.names[v])}")
        return "\n".join(lines) + "\n"


def _describe(key) -> str:
    if isinstance(key, tuple) and key and key[0] == "aux":
        return "aux"
    return str(key)
