"""Seeded random bodies, traces and trace sets for property and differential runs."""

from __future__ import annotations

import random

from .formula import (
    FALSE,
    TRUE,
    And,
    Atom,
    Finally,
    Formula,
    Globally,
    Iff,
    Implies,
    Next,
    Not,
    Or,
    Release,
    Until,
    WeakNext,
    WeakUntil,
)

CORE_BINARY = (And, Or, Until, Release)
CORE_UNARY = (Next, WeakNext)
FULL_BINARY = (And, Or, Implies, Iff, Until, Release, WeakUntil)
FULL_UNARY = (Not, Next, WeakNext, Globally, Finally)


def random_literal(rng: random.Random, props=("a", "b")) -> Formula:
    roll = rng.random()
    if roll < 0.08:
        return rng.choice((TRUE, FALSE))
    atom = Atom(rng.choice(props), rng.randrange(2))
    return Not(atom) if rng.random() < 0.4 else atom


def random_core(rng: random.Random, depth: int = 4, props=("a", "b"), weak_until: bool = False) -> Formula:
    """Random core NNF body of nesting depth at most ``depth``."""
    if depth == 0 or rng.random() < 0.25:
        return random_literal(rng, props)
    binary = CORE_BINARY + ((WeakUntil,) if weak_until else ())
    if rng.random() < 0.3:
        return rng.choice(CORE_UNARY)(random_core(rng, depth - 1, props, weak_until))
    op = rng.choice(binary)
    return op(random_core(rng, depth - 1, props, weak_until), random_core(rng, depth - 1, props, weak_until))


def random_body(rng: random.Random, depth: int = 4, props=("a", "b")) -> Formula:
    """Random body over the full surface operator set."""
    if depth == 0 or rng.random() < 0.25:
        return Atom(rng.choice(props), rng.randrange(2)) if rng.random() > 0.08 else rng.choice((TRUE, FALSE))
    if rng.random() < 0.35:
        return rng.choice(FULL_UNARY)(random_body(rng, depth - 1, props))
    op = rng.choice(FULL_BINARY)
    return op(random_body(rng, depth - 1, props), random_body(rng, depth - 1, props))


def random_event(rng: random.Random, props=("a", "b")) -> frozenset[str]:
    return frozenset(p for p in props if rng.random() < 0.5)


def random_trace(rng: random.Random, length: int, props=("a", "b")) -> tuple[frozenset[str], ...]:
    return tuple(random_event(rng, props) for _ in range(length))


def random_trace_set(rng: random.Random, max_traces: int = 4, max_length: int = 5, props=("a", "b"), dup_rate: float = 0.3):
    """Equal-length trace list; some traces repeat or share prefixes to exercise sharing."""
    n = rng.randint(1, max_traces)
    length = rng.randint(1, max_length)
    out: list[tuple[frozenset[str], ...]] = []
    for _ in range(n):
        roll = rng.random()
        if out and roll < dup_rate:
            out.append(rng.choice(out))
        elif out and roll < 2 * dup_rate:
            base = rng.choice(out)
            cut = rng.randrange(length)
            out.append(base[:cut] + random_trace(rng, length - cut, props))
        else:
            out.append(random_trace(rng, length, props))
    return out
