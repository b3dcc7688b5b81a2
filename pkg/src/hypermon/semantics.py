"""Ground-truth finite-trace semantics and the brute-force monitor oracle.

A pair of traces is evaluated position-wise over the zip of both traces,
truncated to the shorter one. ``X`` is strong (false at the last position),
``WX`` is weak (true at the last position).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .formula import (
    FALSE,
    TRUE,
    And,
    Atom,
    Const,
    Finally,
    Formula,
    Globally,
    Iff,
    Implies,
    Next,
    Not,
    Or,
    Prop,
    Release,
    Spec,
    Until,
    WeakNext,
    WeakUntil,
    desugar,
    to_nnf,
)

Event = frozenset
Trace = tuple


def make_event(props: Iterable[str] = ()) -> frozenset[str]:
    return frozenset(props)


def make_trace(events: Iterable[Iterable[str]]) -> tuple[frozenset[str], ...]:
    trace = tuple(frozenset(e) for e in events)
    if not trace:
        raise ValueError("traces must contain at least one event")
    return trace


@dataclass(frozen=True)
class Verdict:
    violation: bool
    trace_index: int | None = None
    event_index: int | None = None

    def __str__(self) -> str:
        if not self.violation:
            return "NO_VIOLATION"
        return f"VIOLATION trace={self.trace_index} event={self.event_index}"


NO_VIOLATION = Verdict(False)


def _holds(f: Formula, look, i: int, m: int) -> bool:
    """Truth of ``f`` at position ``i`` of a length-``m`` word, by the quantifier definitions."""
    if isinstance(f, Const):
        return f.value
    if isinstance(f, (Atom, Prop)):
        return look(f, i)
    if isinstance(f, Not):
        return not _holds(f.arg, look, i, m)
    if isinstance(f, And):
        return _holds(f.left, look, i, m) and _holds(f.right, look, i, m)
    if isinstance(f, Or):
        return _holds(f.left, look, i, m) or _holds(f.right, look, i, m)
    if isinstance(f, Implies):
        return not _holds(f.left, look, i, m) or _holds(f.right, look, i, m)
    if isinstance(f, Iff):
        return _holds(f.left, look, i, m) == _holds(f.right, look, i, m)
    if isinstance(f, Next):
        return i + 1 < m and _holds(f.arg, look, i + 1, m)
    if isinstance(f, WeakNext):
        return i + 1 >= m or _holds(f.arg, look, i + 1, m)
    if isinstance(f, Globally):
        return all(_holds(f.arg, look, j, m) for j in range(i, m))
    if isinstance(f, Finally):
        return any(_holds(f.arg, look, j, m) for j in range(i, m))
    if isinstance(f, (Until, WeakUntil)):
        for j in range(i, m):
            if _holds(f.right, look, j, m):
                return all(_holds(f.left, look, k, m) for k in range(i, j))
        return isinstance(f, WeakUntil) and all(_holds(f.left, look, k, m) for k in range(i, m))
    if isinstance(f, Release):
        if all(_holds(f.right, look, j, m) for j in range(i, m)):
            return True
        return any(
            _holds(f.left, look, j, m) and all(_holds(f.right, look, k, m) for k in range(i, j + 1))
            for j in range(i, m)
        )
    raise TypeError(f"cannot evaluate {f!r}")


def eval_pair(body: Formula, t: Sequence[frozenset], tp: Sequence[frozenset]) -> bool:
    """Does the assignment pi -> t, pi' -> tp satisfy ``body``?"""
    pair = (t, tp)

    def look(atom, i):
        if isinstance(atom, Prop):
            raise TypeError("single-trace proposition in a two-trace body")
        return atom.prop in pair[atom.trace][i]

    return _holds(body, look, 0, min(len(t), len(tp)))


def lang_member(body: Formula, t, tp) -> bool:
    return eval_pair(body, t, tp) and eval_pair(body, tp, t)


def eval_ltlfin(f: Formula, t: Sequence[frozenset]) -> bool:
    def look(atom, i):
        if isinstance(atom, Atom):
            raise TypeError("trace-indexed atom in an LTL formula")
        return atom.name in t[i]

    return _holds(f, look, 0, len(t))


def project(body: Formula, t: Sequence[frozenset]) -> Formula:
    """Partially evaluate ``body`` against ``t`` as pi; the result is LTL over pi'.

    No simplification is applied, so the output mirrors the recursion exactly.
    """
    if isinstance(body, Const):
        return body
    if isinstance(body, Atom):
        if body.trace == 0:
            return TRUE if body.prop in t[0] else FALSE
        return Prop(body.prop)
    if isinstance(body, Not) and isinstance(body.arg, Atom):
        a = body.arg
        if a.trace == 0:
            return TRUE if a.prop not in t[0] else FALSE
        return Not(Prop(a.prop))
    if isinstance(body, And):
        return And(project(body.left, t), project(body.right, t))
    if isinstance(body, Or):
        return Or(project(body.left, t), project(body.right, t))
    last = len(t) <= 1
    if isinstance(body, Next):
        return FALSE if last else Next(project(body.arg, t[1:]))
    if isinstance(body, WeakNext):
        return TRUE if last else WeakNext(project(body.arg, t[1:]))
    if isinstance(body, Until):
        now = project(body.right, t)
        if last:
            return now
        return Or(now, And(project(body.left, t), Next(project(body, t[1:]))))
    if isinstance(body, Release):
        now = project(body.right, t)
        if last:
            return now
        return And(now, Or(project(body.left, t), WeakNext(project(body, t[1:]))))
    if isinstance(body, WeakUntil):
        now = project(body.right, t)
        if last:
            return Or(now, project(body.left, t))
        return Or(now, And(project(body.left, t), WeakNext(project(body, t[1:]))))
    raise ValueError(f"project expects a core NNF body, got {type(body).__name__}")


# ---------------------------------------------------------------------------
# Brute-force monitor
# ---------------------------------------------------------------------------

COMPLETION_CAP = 4096


def _pairs_ok(body, stored, u) -> bool:
    if not eval_pair(body, u, u):
        return False
    return all(eval_pair(body, s, u) and eval_pair(body, u, s) for s in stored)


def oracle_monitor(spec: Spec, traces: Sequence[Sequence[frozenset]]) -> Verdict:
    """Check every ordered pair of ``traces`` (self-pairs included).

    The blamed trace is the first one that fails against itself or an earlier
    trace. The blamed event is the earliest prefix of that trace for which no
    same-length completion satisfies all pairs, searched exhaustively while the
    completion space stays under ``COMPLETION_CAP``.
    """
    body = to_nnf(desugar(spec.body))
    traces = [tuple(t) for t in traces]
    for j, t in enumerate(traces):
        stored = traces[:j]
        if _pairs_ok(body, stored, t):
            continue
        return Verdict(True, j, _blame_event(body, spec.alphabet, stored, t))
    return NO_VIOLATION


def _blame_event(body, alphabet, stored, t) -> int:
    letters = [frozenset(c) for r in range(len(alphabet) + 1) for c in itertools.combinations(sorted(alphabet), r)]
    n = len(t)
    for k in range(n):
        free = n - k - 1
        if len(letters) ** free > COMPLETION_CAP:
            continue
        prefix = tuple(t[: k + 1])
        if not any(_pairs_ok(body, stored, prefix + rest) for rest in itertools.product(letters, repeat=free)):
            return k
    return n - 1
