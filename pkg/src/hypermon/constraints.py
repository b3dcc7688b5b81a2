"""Propositional constraints produced by rewriting a two-trace body event by event.

Leaves are indexed propositions ``a_i`` (the pi' trace at position ``i``) and
placeholder variables standing for the obligation ``formula`` from position
``pos`` onward. Strong placeholders (``weak=False``) come from ``X`` and the
until-unrolling and default to false at trace end; weak ones come from ``WX``,
release and weak-until and default to true.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

from .formula import And, Atom, Const, Formula, Next, Not, Or, Release, Until, WeakNext, WeakUntil


class CNode:
    __slots__ = ()

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True, slots=True)
class PConst(CNode):
    value: bool


TOP = PConst(True)
BOT = PConst(False)


@dataclass(frozen=True, slots=True)
class Prop(CNode):
    name: str
    pos: int


@dataclass(frozen=True, slots=True)
class Var(CNode):
    weak: bool
    formula: Formula
    pos: int
    scope: Hashable = None


@dataclass(frozen=True, slots=True)
class Neg(CNode):
    arg: Prop | Var


@dataclass(frozen=True, slots=True)
class Conj(CNode):
    args: tuple


@dataclass(frozen=True, slots=True)
class Disj(CNode):
    args: tuple


@dataclass(frozen=True, slots=True)
class Imp(CNode):
    var: Var
    body: CNode


def render(c: CNode) -> str:
    if isinstance(c, PConst):
        return "T" if c.value else "F"
    if isinstance(c, Prop):
        return f"{c.name}{c.pos}"
    if isinstance(c, Var):
        mark = "+" if c.weak else "-"
        scope = "" if c.scope is None else f"#{c.scope}"
        return f"v{mark}[{c.formula}]{c.pos}{scope}"
    if isinstance(c, Neg):
        return "!" + render(c.arg)
    if isinstance(c, Conj):
        return "(" + " & ".join(render(a) for a in c.args) + ")"
    if isinstance(c, Disj):
        return "(" + " | ".join(render(a) for a in c.args) + ")"
    if isinstance(c, Imp):
        return f"({render(c.var)} -> {render(c.body)})"
    raise TypeError(c)


_RANK = {PConst: 0, Prop: 1, Neg: 2, Var: 3, Disj: 4, Conj: 5, Imp: 6}


@functools.lru_cache(maxsize=1 << 16)
def order_key(c: CNode) -> tuple:
    return (_RANK[type(c)], render(c))


def _nary(cls, unit: PConst, zero: PConst, args) -> CNode:
    flat = set()
    for a in args:
        if a == zero:
            return zero
        if a == unit:
            continue
        if type(a) is cls:
            flat.update(a.args)
        else:
            flat.add(a)
    if not flat:
        return unit
    if len(flat) == 1:
        return flat.pop()
    return cls(tuple(sorted(flat, key=order_key)))


def conj(*args: CNode) -> CNode:
    """Canonical conjunction: flattened, deduplicated, sorted, constants folded."""
    return _nary(Conj, TOP, BOT, args)


def disj(*args: CNode) -> CNode:
    return _nary(Disj, BOT, TOP, args)


def imp(var: Var, body: CNode) -> CNode:
    return TOP if body == TOP else Imp(var, body)


# ---------------------------------------------------------------------------
# Rewriting and encoding
# ---------------------------------------------------------------------------


@functools.lru_cache(maxsize=1 << 16)
def rewrite_step(body: Formula, e: frozenset, i: int) -> CNode:
    """Rewrite ``body`` against event ``e`` (as pi) at position ``i``."""
    if isinstance(body, Const):
        return TOP if body.value else BOT
    if isinstance(body, Atom):
        if body.trace == 0:
            return TOP if body.prop in e else BOT
        return Prop(body.prop, i)
    if isinstance(body, Not) and isinstance(body.arg, Atom):
        a = body.arg
        if a.trace == 0:
            return BOT if a.prop in e else TOP
        return Neg(Prop(a.prop, i))
    if isinstance(body, And):
        return conj(rewrite_step(body.left, e, i), rewrite_step(body.right, e, i))
    if isinstance(body, Or):
        return disj(rewrite_step(body.left, e, i), rewrite_step(body.right, e, i))
    if isinstance(body, Next):
        return Var(False, body.arg, i + 1)
    if isinstance(body, WeakNext):
        return Var(True, body.arg, i + 1)
    if isinstance(body, Until):
        return disj(rewrite_step(body.right, e, i), conj(rewrite_step(body.left, e, i), Var(False, body, i + 1)))
    if isinstance(body, Release):
        return conj(rewrite_step(body.right, e, i), disj(rewrite_step(body.left, e, i), Var(True, body, i + 1)))
    if isinstance(body, WeakUntil):
        return disj(rewrite_step(body.right, e, i), conj(rewrite_step(body.left, e, i), Var(True, body, i + 1)))
    raise ValueError(f"rewrite_step expects a core NNF body, got {type(body).__name__}")


def encode_event(e: Iterable[str], alphabet: Iterable[str], i: int) -> CNode:
    e = frozenset(e)
    return conj(*(Prop(a, i) if a in e else Neg(Prop(a, i)) for a in alphabet))


def encode_trace(t: Sequence[Iterable[str]], alphabet: Iterable[str], start: int = 0) -> CNode:
    alphabet = tuple(alphabet)
    return conj(*(encode_event(e, alphabet, start + k) for k, e in enumerate(t)))


def encoding_literals(e: Iterable[str], alphabet: Iterable[str], i: int) -> list[CNode]:
    e = frozenset(e)
    return [Prop(a, i) if a in e else Neg(Prop(a, i)) for a in sorted(alphabet)]


def open_vars(c: CNode) -> set[Var]:
    out = set()
    stack = [c]
    while stack:
        n = stack.pop()
        if isinstance(n, Var):
            out.add(n)
        elif isinstance(n, (Conj, Disj)):
            stack.extend(n.args)
        elif isinstance(n, Imp):
            stack.append(n.var)
            stack.append(n.body)
        elif isinstance(n, Neg):
            stack.append(n.arg)
    return out


def close_trace(pending: Iterable[Var]) -> set[CNode]:
    return {v if v.weak else Neg(v) for v in pending}


def rescope(c: CNode, scope: Hashable) -> CNode:
    """Tag every placeholder in ``c`` with ``scope``."""
    if isinstance(c, Var):
        return Var(c.weak, c.formula, c.pos, scope)
    if isinstance(c, (PConst, Prop)):
        return c
    if isinstance(c, Neg):
        return Neg(rescope(c.arg, scope))
    if isinstance(c, Conj):
        return Conj(tuple(rescope(a, scope) for a in c.args))
    if isinstance(c, Disj):
        return Disj(tuple(rescope(a, scope) for a in c.args))
    if isinstance(c, Imp):
        return Imp(rescope(c.var, scope), rescope(c.body, scope))
    raise TypeError(c)


def shift(c: CNode, n: int) -> CNode:
    if n == 0:
        return c
    if isinstance(c, PConst):
        return c
    if isinstance(c, Prop):
        return Prop(c.name, c.pos + n)
    if isinstance(c, Var):
        return Var(c.weak, c.formula, c.pos + n, c.scope)
    if isinstance(c, Neg):
        return Neg(shift(c.arg, n))
    if isinstance(c, Conj):
        return Conj(tuple(shift(a, n) for a in c.args))
    if isinstance(c, Disj):
        return Disj(tuple(shift(a, n) for a in c.args))
    if isinstance(c, Imp):
        return Imp(shift(c.var, n), shift(c.body, n))
    raise TypeError(c)


def constr(body: Formula, t: Sequence[frozenset], start: int = 0) -> CNode:
    """Batch constraint system for ``body`` against the whole trace ``t``."""
    if not t:
        raise ValueError("constr needs a nonempty trace")
    first = rewrite_step(body, frozenset(t[0]), start)
    parts = [first]
    frontier = open_vars(first)
    for i, e in enumerate(t[1:], start=start + 1):
        nxt: set[Var] = set()
        for v in sorted(frontier, key=order_key):
            r = rewrite_step(v.formula, frozenset(e), i)
            parts.append(imp(v, r))
            nxt |= open_vars(r)
        frontier = nxt
    parts.extend(close_trace(frontier))
    return conj(*parts)


def split_conjuncts(c: CNode) -> list[CNode]:
    if c == TOP:
        return []
    if isinstance(c, Conj):
        return list(c.args)
    return [c]


# ---------------------------------------------------------------------------
# Node tree
# ---------------------------------------------------------------------------

FORCED = "*"


@dataclass(eq=False)
class _Node:
    depth: int
    frontier: tuple
    children: dict = field(default_factory=dict)
    instances: list = field(default_factory=list)
    ended: _Instance | None = None


@dataclass(eq=False)
class _Instance:
    scope: int
    sigs: list = field(default_factory=list)
    ended: bool = False


class NodeTree:
    """Deduplicating store of rewrite results shared across traces.

    Placeholders that every model must make true (the root, and any placeholder
    that forms a whole top-level conjunct of a forced placeholder's rewrite)
    are global and named by ``(polarity, formula, position)``; their
    definitions from different traces simply accumulate.

    All other placeholders sit under a disjunction and belong to one trace
    history. Each step of a trace is summarised by a signature (the non-forced
    conjuncts opened by forced placeholders plus the rewrites of the open
    non-forced placeholders), and the signatures form a tree. Traces that walk
    the same path share one instance of its variables; a trace that leaves an
    instance's path gets a fresh copy of the prefix, so no variable is ever
    defined by two different histories.
    """

    def __init__(self, body: Formula, split: bool = True):
        self.body = body
        self.split = split
        self.root = Var(True, body, 0, FORCED)
        self.top = _Node(0, ())
        self.emitted: set[CNode] = set()
        self.instances = 0
        self.nodes_created = 0
        self.hits = 0
        self.forced: set[Var] = set()
        self.node = self.top
        self.inst: _Instance | None = None

    def _emit(self, c: CNode, out: list) -> None:
        if c in self.emitted:
            self.hits += 1
            return
        self.nodes_created += 1
        self.emitted.add(c)
        out.append(c)

    def begin_trace(self) -> list[CNode]:
        out: list[CNode] = []
        self._emit(self.root, out)
        self.forced = {self.root}
        self.node = self.top
        if self.top.instances:
            self.inst = self.top.instances[0]
        else:
            self.inst = self._new_instance()
            self.top.instances.append(self.inst)
        return out

    def step(self, e: frozenset, i: int) -> list[CNode]:
        out: list[CNode] = []
        opened = []
        nxt: set[Var] = set()
        for owner in sorted(self.forced, key=order_key):
            c = rewrite_step(owner.formula, e, i)
            parts = split_conjuncts(c) if self.split else ([] if c == TOP else [c])
            for k in parts:
                if isinstance(k, Var):
                    g = rescope(k, FORCED)
                    self._emit(Imp(owner, g), out)
                    nxt.add(g)
                elif not open_vars(k):
                    self._emit(Imp(owner, k), out)
                else:
                    opened.append((owner, k))
        self.forced = nxt
        node = self.node
        sig = (tuple(opened), tuple(rewrite_step(v.formula, e, i) for v in node.frontier))
        child = node.children.get(sig)
        if child is not None:
            self.hits += 1
            if not any(x is self.inst for x in child.instances):
                self.inst = child.instances[0]
        else:
            frontier: set[Var] = set()
            for _, k in opened:
                frontier |= open_vars(k)
            for r in sig[1]:
                frontier |= open_vars(r)
            child = _Node(node.depth + 1, tuple(sorted(frontier, key=order_key)))
            node.children[sig] = child
            self.nodes_created += 1
            if self._at_tip(self.inst, node):
                self.inst.sigs.append(sig)
                self._step_constraints(node, sig, self.inst.scope, out)
                child.instances.append(self.inst)
            else:
                self.inst = self._copy(self.inst.sigs[: node.depth] + [sig], out)
        self.node = child
        return out

    def end_trace(self) -> list[CNode]:
        out: list[CNode] = []
        for unit in sorted(close_trace(self.forced), key=order_key):
            self._emit(unit, out)
        node, inst = self.node, self.inst
        if node.ended is not None:
            self.hits += 1
        else:
            if not self._at_tip(inst, node):
                inst = self._copy(inst.sigs[: node.depth], out)
            for v in node.frontier:
                out.append(rescope(v, inst.scope) if v.weak else Neg(rescope(v, inst.scope)))
            inst.ended = True
            node.ended = inst
        self.forced = set()
        self.node = self.top
        self.inst = None
        return out

    def _new_instance(self) -> _Instance:
        self.instances += 1
        return _Instance(self.instances)

    @staticmethod
    def _at_tip(inst: _Instance, node: _Node) -> bool:
        return not inst.ended and len(inst.sigs) == node.depth

    @staticmethod
    def _step_constraints(node: _Node, sig, scope, out: list) -> None:
        opened, rewrites = sig
        for owner, k in opened:
            out.append(Imp(owner, rescope(k, scope)))
        for v, r in zip(node.frontier, rewrites):
            c = imp(rescope(v, scope), rescope(r, scope))
            if c != TOP:
                out.append(c)

    def _copy(self, sigs: list, out: list) -> _Instance:
        inst = self._new_instance()
        inst.sigs = list(sigs)
        node = self.top
        node.instances.append(inst)
        for sig in sigs:
            self._step_constraints(node, sig, inst.scope, out)
            node = node.children[sig]
            node.instances.append(inst)
        return inst
