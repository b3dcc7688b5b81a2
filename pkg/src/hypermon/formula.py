"""Abstract syntax, concrete syntax and normal forms for forall-two HyperLTL.

Atoms carry a trace index: 0 for the first quantified trace variable (pi) and
1 for the second (pi'). The user-facing names are kept on :class:`Spec` only.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field


class Formula:
    __slots__ = ()

    def __str__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True, slots=True)
class Const(Formula):
    value: bool


TRUE = Const(True)
FALSE = Const(False)


@dataclass(frozen=True, slots=True)
class Atom(Formula):
    prop: str
    trace: int


@dataclass(frozen=True, slots=True)
class Prop(Formula):
    """Single-trace atomic proposition (LTL side of the projection)."""

    name: str


@dataclass(frozen=True, slots=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True, slots=True)
class _Unary(Formula):
    arg: Formula


@dataclass(frozen=True, slots=True)
class _Binary(Formula):
    left: Formula
    right: Formula


class Next(_Unary):
    __slots__ = ()


class WeakNext(_Unary):
    __slots__ = ()


class Globally(_Unary):
    __slots__ = ()


class Finally(_Unary):
    __slots__ = ()


class And(_Binary):
    __slots__ = ()


class Or(_Binary):
    __slots__ = ()


class Implies(_Binary):
    __slots__ = ()


class Iff(_Binary):
    __slots__ = ()


class Until(_Binary):
    __slots__ = ()


class Release(_Binary):
    __slots__ = ()


class WeakUntil(_Binary):
    __slots__ = ()


_UNARY_SYMBOL = {Not: "!", Next: "X ", WeakNext: "WX ", Globally: "G ", Finally: "F "}
_BINARY_SYMBOL = {
    And: "&",
    Or: "|",
    Implies: "->",
    Iff: "<->",
    Until: "U",
    Release: "R",
    WeakUntil: "W",
}

CORE_NNF = (Const, Atom, And, Or, Next, WeakNext, Until, Release)


def format_formula(f: Formula, names: tuple[str, str] = ("p1", "p2")) -> str:
    """Print ``f`` in the concrete syntax; binary operators are fully parenthesised."""
    if isinstance(f, Const):
        return "true" if f.value else "false"
    if isinstance(f, Atom):
        return f"{f.prop}_{names[f.trace]}"
    if isinstance(f, Prop):
        return f.name
    if isinstance(f, (Not, _Unary)):
        return _UNARY_SYMBOL[type(f)] + format_formula(f.arg, names)
    if isinstance(f, _Binary):
        op = _BINARY_SYMBOL[type(f)]
        return f"({format_formula(f.left, names)} {op} {format_formula(f.right, names)})"
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# Specifications and parsing
# ---------------------------------------------------------------------------


class SpecError(ValueError):
    pass


class SpecSyntaxError(SpecError):
    def __init__(self, message: str, position: int, expected: tuple[str, ...] = ()):
        self.position = position
        self.expected = expected
        detail = f" (expected {', '.join(expected)})" if expected else ""
        super().__init__(f"{message} at offset {position}{detail}")


class UnsupportedFragment(SpecError):
    pass


class UndeclaredTraceVariable(SpecError):
    pass


@dataclass(frozen=True)
class Spec:
    trace_vars: tuple[str, str]
    body: Formula
    alphabet: frozenset[str] = field(default=frozenset())

    def __post_init__(self):
        if len(self.trace_vars) != 2 or self.trace_vars[0] == self.trace_vars[1]:
            raise UnsupportedFragment("exactly two distinct universally quantified trace variables required")
        object.__setattr__(self, "alphabet", frozenset(self.alphabet) | atoms_of(self.body))

    def with_alphabet(self, extra) -> Spec:
        return Spec(self.trace_vars, self.body, self.alphabet | frozenset(extra))

    def __str__(self) -> str:
        a, b = self.trace_vars
        return f"forall {a}, {b}. {format_formula(self.body, self.trace_vars)}"


def atoms_of(f: Formula) -> frozenset[str]:
    out: set[str] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Atom):
            out.add(g.prop)
        elif isinstance(g, Prop):
            out.add(g.name)
        elif isinstance(g, (Not, _Unary)):
            stack.append(g.arg)
        elif isinstance(g, _Binary):
            stack.extend((g.left, g.right))
    return frozenset(out)


_TOKEN = re.compile(r"\s*(?:(<->|->|[!&|().,])|([A-Za-z_][A-Za-z0-9_']*))")
_QUANTIFIERS = {"forall", "exists"}
_UNARY_KW = {"X": Next, "WX": WeakNext, "G": Globally, "F": Finally}
_TEMPORAL_KW = {"U": Until, "R": Release, "W": WeakUntil}
_KEYWORDS = _QUANTIFIERS | set(_UNARY_KW) | set(_TEMPORAL_KW) | {"true", "false"}


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise SpecSyntaxError(f"unexpected character {text[pos]!r}", pos)
        tok = m.group(1) or m.group(2)
        tokens.append((tok, m.start(1) if m.group(1) else m.start(2)))
        pos = m.end()
    tokens.append(("<eof>", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0
        self.names: tuple[str, str] = ("", "")

    @property
    def tok(self) -> str:
        return self.tokens[self.i][0]

    @property
    def pos(self) -> int:
        return self.tokens[self.i][1]

    def advance(self) -> str:
        tok = self.tok
        self.i += 1
        return tok

    def expect(self, tok: str) -> None:
        if self.tok != tok:
            raise SpecSyntaxError(f"unexpected token {self.tok!r}", self.pos, (repr(tok),))
        self.advance()

    def spec(self) -> Spec:
        if self.tok == "exists":
            raise UnsupportedFragment("existential quantifiers are outside the forall-two fragment")
        self.expect("forall")
        names = [self.ident()]
        while self.tok == ",":
            self.advance()
            names.append(self.ident())
        self.expect(".")
        if len(names) != 2:
            raise UnsupportedFragment(f"expected two trace variables, got {len(names)}")
        if names[0] == names[1]:
            raise UnsupportedFragment("trace variables must be distinct")
        if self.tok in _QUANTIFIERS:
            raise UnsupportedFragment("nested quantifiers are outside the forall-two fragment")
        self.names = (names[0], names[1])
        body = self.iff()
        if self.tok != "<eof>":
            raise SpecSyntaxError(
                f"unexpected token {self.tok!r}", self.pos, ("'<->'", "'->'", "'|'", "'&'", "'U'", "'R'", "'W'", "end of input")
            )
        return Spec(self.names, body)

    def ident(self) -> str:
        tok = self.tok
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", tok) or tok in _KEYWORDS:
            raise SpecSyntaxError(f"unexpected token {tok!r}", self.pos, ("identifier",))
        self.advance()
        return tok

    def iff(self) -> Formula:
        left = self.implies()
        if self.tok == "<->":
            self.advance()
            return Iff(left, self.iff())
        return left

    def implies(self) -> Formula:
        left = self.disjunction()
        if self.tok == "->":
            self.advance()
            return Implies(left, self.implies())
        return left

    def disjunction(self) -> Formula:
        f = self.conjunction()
        while self.tok == "|":
            self.advance()
            f = Or(f, self.conjunction())
        return f

    def conjunction(self) -> Formula:
        f = self.temporal()
        while self.tok == "&":
            self.advance()
            f = And(f, self.temporal())
        return f

    def temporal(self) -> Formula:
        left = self.unary()
        op = _TEMPORAL_KW.get(self.tok)
        if op is not None:
            self.advance()
            return op(left, self.temporal())
        return left

    def unary(self) -> Formula:
        tok = self.tok
        if tok == "!":
            self.advance()
            return Not(self.unary())
        if tok in _UNARY_KW:
            self.advance()
            return _UNARY_KW[tok](self.unary())
        return self.primary()

    def primary(self) -> Formula:
        tok, pos = self.tok, self.pos
        if tok == "(":
            self.advance()
            f = self.iff()
            self.expect(")")
            return f
        if tok == "true":
            self.advance()
            return TRUE
        if tok == "false":
            self.advance()
            return FALSE
        if tok in _QUANTIFIERS:
            raise UnsupportedFragment("quantifiers inside the body are outside the forall-two fragment")
        if re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", tok) and tok not in _KEYWORDS:
            self.advance()
            return self.atom(tok, pos)
        raise SpecSyntaxError(
            f"unexpected token {tok!r}", pos, ("atom", "'('", "'!'", "'X'", "'WX'", "'G'", "'F'", "'true'", "'false'")
        )

    def atom(self, tok: str, pos: int) -> Atom:
        # longest declared trace-variable suffix wins
        for idx in sorted((0, 1), key=lambda k: -len(self.names[k])):
            suffix = "_" + self.names[idx]
            if tok.endswith(suffix) and len(tok) > len(suffix):
                prop = tok[: -len(suffix)]
                if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", prop):
                    raise SpecSyntaxError(f"malformed proposition name {prop!r}", pos)
                return Atom(prop, idx)
        if "_" in tok.strip("_"):
            var = tok.rsplit("_", 1)[1]
            raise UndeclaredTraceVariable(f"atom {tok!r} at offset {pos} references undeclared trace variable {var!r}")
        raise SpecSyntaxError(f"atom {tok!r} lacks a trace variable suffix", pos, ("name_<tracevar>",))


def strip_comments(text: str) -> str:
    return "\n".join(line.split("#", 1)[0] for line in text.splitlines())


def parse_spec(text: str) -> Spec:
    """Parse ``forall p1, p2. <body>``; ``#`` starts a line comment."""
    return _Parser(strip_comments(text)).spec()


# ---------------------------------------------------------------------------
# Transformations
# ---------------------------------------------------------------------------


def desugar(f: Formula, keep_weak_until: bool = False) -> Formula:
    """Rewrite ``-> <-> F G W`` into the core operators.

    ``W`` is rewritten as ``psi R (phi | psi)`` unless ``keep_weak_until`` is set,
    in which case it stays as a native operator.
    """
    if isinstance(f, (Const, Atom, Prop)):
        return f
    if isinstance(f, Not):
        return Not(desugar(f.arg, keep_weak_until))
    if isinstance(f, (Next, WeakNext)):
        return type(f)(desugar(f.arg, keep_weak_until))
    if isinstance(f, Globally):
        return Release(FALSE, desugar(f.arg, keep_weak_until))
    if isinstance(f, Finally):
        return Until(TRUE, desugar(f.arg, keep_weak_until))
    left = desugar(f.left, keep_weak_until)
    right = desugar(f.right, keep_weak_until)
    if isinstance(f, Implies):
        return Or(Not(left), right)
    if isinstance(f, Iff):
        return And(Or(Not(left), right), Or(Not(right), left))
    if isinstance(f, WeakUntil) and not keep_weak_until:
        return Release(right, Or(left, right))
    return type(f)(left, right)


_DUAL = {And: Or, Or: And, Until: Release, Release: Until, Next: WeakNext, WeakNext: Next}


def to_nnf(f: Formula) -> Formula:
    """Push negations down to atoms. Input must be desugared (``W`` allowed)."""
    return _nnf(f, False)


def _nnf(f: Formula, neg: bool) -> Formula:
    if isinstance(f, Const):
        return Const(f.value != neg)
    if isinstance(f, (Atom, Prop)):
        return Not(f) if neg else f
    if isinstance(f, Not):
        return _nnf(f.arg, not neg)
    if isinstance(f, (Next, WeakNext)):
        return (_DUAL[type(f)] if neg else type(f))(_nnf(f.arg, neg))
    if isinstance(f, WeakUntil):
        if neg:
            # !(a W b) = !b U (!a & !b)
            nb = _nnf(f.right, True)
            return Until(nb, And(_nnf(f.left, True), nb))
        return WeakUntil(_nnf(f.left, False), _nnf(f.right, False))
    if isinstance(f, (And, Or, Until, Release)):
        op = _DUAL[type(f)] if neg else type(f)
        return op(_nnf(f.left, neg), _nnf(f.right, neg))
    raise ValueError(f"to_nnf expects a desugared formula, got {type(f).__name__}")


def swap_traces(f: Formula) -> Formula:
    if isinstance(f, Atom):
        return Atom(f.prop, 1 - f.trace)
    if isinstance(f, (Const, Prop)):
        return f
    if isinstance(f, (Not, _Unary)):
        return type(f)(swap_traces(f.arg))
    return type(f)(swap_traces(f.left), swap_traces(f.right))


def symmetric_closure(f: Formula) -> Formula:
    return And(f, swap_traces(f))


def is_core_nnf(f: Formula, allow_weak_until: bool = False) -> bool:
    if isinstance(f, Not):
        return isinstance(f.arg, Atom)
    if isinstance(f, WeakUntil):
        return allow_weak_until and is_core_nnf(f.left, True) and is_core_nnf(f.right, True)
    if not isinstance(f, CORE_NNF):
        return False
    if isinstance(f, _Unary):
        return is_core_nnf(f.arg, allow_weak_until)
    if isinstance(f, _Binary):
        return is_core_nnf(f.left, allow_weak_until) and is_core_nnf(f.right, allow_weak_until)
    return True


def monitor_formula(body: Formula, keep_weak_until: bool = False) -> Formula:
    """The formula a monitor tracks: NNF of the desugared symmetric closure."""
    return to_nnf(desugar(symmetric_closure(body), keep_weak_until))
