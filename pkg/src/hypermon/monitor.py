"""Online constraint-based monitoring of forall-two HyperLTL specifications."""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass
from typing import Iterable, Sequence

from .constraints import (
    TOP,
    CNode,
    Neg,
    NodeTree,
    Var,
    close_trace,
    encoding_literals,
    imp,
    open_vars,
    order_key,
    rescope,
    rewrite_step,
    split_conjuncts,
)
from .formula import Spec, monitor_formula
from .sat import SatEngine
from .semantics import NO_VIOLATION, Verdict

log = logging.getLogger(__name__)


class MonitorError(RuntimeError):
    pass


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class MonitorConfig:
    node_tree: bool = True
    split: bool = True
    alphabet: frozenset[str] = frozenset()
    stats: bool = False
    keep_weak_until: bool = False

    def validate(self) -> None:
        if not all(isinstance(p, str) and p for p in self.alphabet):
            raise ConfigError("alphabet entries must be non-empty proposition names")


@dataclass
class Stats:
    sat_calls: int = 0
    sat_calls_skipped: int = 0
    variables_created: int = 0
    clauses_created: int = 0
    tree_nodes_created: int = 0
    tree_hits: int = 0

    def as_dict(self) -> dict[str, int]:
        return asdict(self)


class _FlatStore:
    """Per-trace constraints with trace-private placeholder names (no sharing).

    With ``split`` each top-level conjunct of a rewrite result becomes its own
    implication; without a tree to share them this only changes the CNF shape.
    """

    def __init__(self, body, split: bool = False):
        self.body = body
        self.split = split
        self.scope = 0
        self.frontier: set[Var] = set()

    def begin_trace(self) -> list[CNode]:
        self.scope += 1
        root = Var(True, self.body, 0, ("t", self.scope))
        self.frontier = {root}
        return [root]

    def step(self, e: frozenset, i: int) -> list[CNode]:
        out = []
        nxt: set[Var] = set()
        for v in sorted(self.frontier, key=order_key):
            r = rewrite_step(v.formula, e, i)
            r = rescope(r, v.scope)
            for k in split_conjuncts(r) if self.split else [r]:
                c = imp(v, k)
                if c != TOP:
                    out.append(c)
            nxt |= open_vars(r)
        self.frontier = nxt
        return out

    def end_trace(self) -> list[CNode]:
        units = sorted(close_trace(self.frontier), key=order_key)
        self.frontier = set()
        return units


class MonitorSession:
    """Sequential monitoring session; traces are fed event by event.

    Constraints of finished traces stay in the solver; the encoding of the
    trace currently being fed is passed as assumptions so that it constrains
    only the checks of that trace.
    """

    def __init__(self, spec: Spec, config: MonitorConfig | None = None):
        self.config = config or MonitorConfig()
        self.config.validate()
        self.spec = spec
        self.alphabet = tuple(sorted(spec.alphabet | frozenset(self.config.alphabet)))
        self.formula = monitor_formula(spec.body, self.config.keep_weak_until)
        self.engine = SatEngine()
        self.store = NodeTree(self.formula, self.config.split) if self.config.node_tree else _FlatStore(self.formula, self.config.split)
        self.stats = Stats()
        self.verdict: Verdict = NO_VIOLATION
        self.trace_index = -1
        self.position = 0
        self.open = False
        self.assumptions: list[CNode] = []
        self._model = None
        self._model_clauses = -1
        self._warned: set[str] = set()

    # -- driving -------------------------------------------------------------

    def begin_trace(self) -> None:
        if self.open:
            raise MonitorError("a trace is already open")
        self.open = True
        self.trace_index += 1
        self.position = 0
        self.assumptions = []
        if self.verdict.violation:
            return
        self._assert(self.store.begin_trace())

    def feed_event(self, event: Iterable[str]) -> Verdict:
        if not self.open:
            raise MonitorError("no open trace")
        i = self.position
        self.position += 1
        if self.verdict.violation:
            return self.verdict
        e = self._filter(event)
        self.assumptions.extend(encoding_literals(e, self.alphabet, i))
        added = self._assert(self.store.step(e, i))
        self._check(added, i)
        return self.verdict

    def end_trace(self) -> Verdict:
        if not self.open:
            raise MonitorError("no open trace")
        if self.position == 0:
            raise MonitorError("traces must contain at least one event")
        self.open = False
        if self.verdict.violation:
            return self.verdict
        added = self._assert(self.store.end_trace())
        self._check(added, self.position - 1)
        self.assumptions = []
        return self.verdict

    def finish(self) -> tuple[Verdict, Stats]:
        if self.open:
            raise MonitorError("a trace is still open")
        return self.verdict, self.stats

    # -- internals -------------------------------------------------------------

    def _filter(self, event: Iterable[str]) -> frozenset[str]:
        e = frozenset(event)
        extra = e.difference(self.alphabet)
        for prop in sorted(extra - self._warned):
            log.warning("proposition %r is not in the alphabet and is ignored", prop)
            self._warned.add(prop)
        return e - extra if extra else e

    def _assert(self, constraints: Sequence[CNode]) -> int:
        added = 0
        for c in constraints:
            added += self.engine.assert_formula(c)
        self.stats.clauses_created += added
        self.stats.variables_created = self.engine.num_vars
        if isinstance(self.store, NodeTree):
            self.stats.tree_nodes_created = self.store.nodes_created
            self.stats.tree_hits = self.store.hits
        return added

    def _skippable(self, added: int) -> bool:
        if not self.config.node_tree or added or self._model is None:
            return False
        if self._model_clauses != self.engine.clauses_added:
            return False
        model = self._model
        registry = self.engine.registry
        for lit in self.assumptions:
            positive = not isinstance(lit, Neg)
            v = registry.get(lit if positive else lit.arg)
            if v is not None and v < len(model) and model[v] != positive:
                return False
        return True

    def _check(self, added: int, event_index: int) -> None:
        if self._skippable(added):
            self.stats.sat_calls_skipped += 1
            return
        self.stats.sat_calls += 1
        result = self.engine.check(self.assumptions)
        self.stats.variables_created = self.engine.num_vars
        if result.sat:
            self._model = result.model
            self._model_clauses = self.engine.clauses_added
        else:
            self._model = None
            self.verdict = Verdict(True, self.trace_index, event_index)


def new_session(spec: Spec, config: MonitorConfig | None = None) -> MonitorSession:
    return MonitorSession(spec, config)


def monitor_offline(
    spec: Spec, traces: Sequence[Sequence[Iterable[str]]], config: MonitorConfig | None = None
) -> tuple[Verdict, Stats]:
    session = MonitorSession(spec, config)
    for t in traces:
        session.begin_trace()
        for e in t:
            if session.feed_event(e).violation:
                break
        session.end_trace()
        if session.verdict.violation:
            break
    return session.finish()
