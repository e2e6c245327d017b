"""Term language: signatures, terms, equations, parsing and printing,
substitution, one-way matching, positions and definition expansion.

Surface syntax (ASCII)::

    ^    meet                  v    join
    ->>  strong implication    ->   weak implication
    ~    negation              !    the "ceiling" operator (x -> ~1)
    0 1  constants             identifiers are variables

Precedence, loosest first: ``=``, ``->>``/``->`` (right associative),
``v``, ``^``, prefix ``~``/``!``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Optional, Union


class ParseError(ValueError):
    """Syntax or signature error while reading a term; carries a byte offset."""

    def __init__(self, message: str, offset: int = 0):
        super().__init__(f"{message} (at offset {offset})")
        self.message = message
        self.offset = offset


# ---------------------------------------------------------------------------
# Terms


@dataclass(frozen=True, slots=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True, slots=True)
class Const:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True, slots=True)
class App:
    op: str
    args: tuple

    def __str__(self):
        return format_term(self)


Term = Union[Var, Const, App]
Position = tuple


def app(op: str, *args: Term) -> App:
    return App(op, tuple(args))


@dataclass(frozen=True, slots=True)
class Equation:
    lhs: Term
    rhs: Term

    def swapped(self) -> "Equation":
        return Equation(self.rhs, self.lhs)

    def variables(self) -> list[str]:
        return sorted(set(variables(self.lhs)) | set(variables(self.rhs)))

    def __str__(self):
        return format_equation(self)


# ---------------------------------------------------------------------------
# Signatures


@dataclass(frozen=True)
class Signature:
    name: str
    operations: tuple  # ((name, arity), ...)
    constants: tuple = ()

    def __post_init__(self):
        names = [op for op, _ in self.operations]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate operation names in {self.name}")
        if any(arity < 1 for _, arity in self.operations):
            raise ValueError("operation arities must be >= 1")
        if set(names) & set(self.constants):
            raise ValueError("constants must be disjoint from operation names")

    def arity(self, op: str) -> Optional[int]:
        for name, k in self.operations:
            if name == op:
                return k
        return None

    def has_symbol(self, sym: str) -> bool:
        return sym in self.constants or self.arity(sym) is not None

    def extend(self, name: str, operations=(), constants=()) -> "Signature":
        return Signature(name, tuple(self.operations) + tuple(operations),
                         tuple(self.constants) + tuple(constants))


NELSON = Signature("nelson", (("^", 2), ("v", 2), ("->", 2), ("~", 1)), ("1",))
BRIGNOLE = Signature("brignole", (("^", 2), ("->>", 2)), ("0",))

# Base signatures plus the symbols that are definable in them.
NELSON_EXT = NELSON.extend("nelson+", (("->>", 2), ("!", 1)), ("0",))
BRIGNOLE_EXT = BRIGNOLE.extend("brignole+", (("v", 2), ("->", 2), ("~", 1), ("!", 1)), ("1",))

BINARY_SYMBOLS = ("->>", "->", "v", "^")
UNARY_SYMBOLS = ("~", "!")
RESERVED = {"v", "0", "1"}


# ---------------------------------------------------------------------------
# Parsing

_TOKEN = re.compile(r"\s*(->>|->|[()=^~!]|[A-Za-z_][A-Za-z0-9_']*|[0-9]+)")


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip() == "":
                break
            offset = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParseError(f"unexpected character {text[offset]!r}", offset)
        tokens.append((m.group(1), m.start(1)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str, sig: Signature):
        self.text = text
        self.sig = sig
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> Optional[str]:
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def offset(self) -> int:
        return self.tokens[self.i][1] if self.i < len(self.tokens) else len(self.text)

    def take(self, expected: Optional[str] = None) -> str:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", len(self.text))
        if expected is not None and tok != expected:
            raise ParseError(f"expected {expected!r}, found {tok!r}", self.offset())
        self.i += 1
        return tok

    def make(self, op: str, args: list, offset: int) -> App:
        arity = self.sig.arity(op)
        if arity is None:
            raise ParseError(f"unknown operation {op!r} in signature {self.sig.name}", offset)
        if arity != len(args):
            raise ParseError(f"operation {op!r} has arity {arity}, used with {len(args)}", offset)
        return App(op, tuple(args))

    # implication level, right associative
    def implication(self) -> Term:
        left = self.join()
        tok = self.peek()
        if tok in ("->>", "->"):
            offset = self.offset()
            self.take()
            right = self.implication()
            return self.make(tok, [left, right], offset)
        return left

    def join(self) -> Term:
        left = self.meet()
        while self.peek() == "v":
            offset = self.offset()
            self.take()
            left = self.make("v", [left, self.meet()], offset)
        return left

    def meet(self) -> Term:
        left = self.unary()
        while self.peek() == "^":
            offset = self.offset()
            self.take()
            left = self.make("^", [left, self.unary()], offset)
        return left

    def unary(self) -> Term:
        tok = self.peek()
        offset = self.offset()
        if tok in UNARY_SYMBOLS:
            self.take()
            return self.make(tok, [self.unary()], offset)
        if tok == "(":
            self.take()
            t = self.implication()
            self.take(")")
            return t
        if tok is None:
            raise ParseError("unexpected end of input", offset)
        if tok[0].isdigit():
            self.take()
            if tok not in self.sig.constants:
                raise ParseError(f"unknown constant {tok!r} in signature {self.sig.name}", offset)
            return Const(tok)
        if tok[0].isalpha() or tok[0] == "_":
            if tok in RESERVED:
                raise ParseError(f"reserved symbol {tok!r} used as operand", offset)
            self.take()
            return Var(tok)
        raise ParseError(f"unexpected token {tok!r}", offset)

    def finish(self):
        if self.peek() is not None:
            raise ParseError(f"unexpected token {self.peek()!r}", self.offset())


def parse_term(text: str, sig: Signature = BRIGNOLE_EXT) -> Term:
    p = _Parser(text, sig)
    t = p.implication()
    p.finish()
    return t


def parse_equation(text: str, sig: Signature = BRIGNOLE_EXT) -> Equation:
    p = _Parser(text, sig)
    lhs = p.implication()
    if p.peek() != "=":
        raise ParseError("missing '=' in equation", p.offset())
    p.take("=")
    rhs = p.implication()
    p.finish()
    return Equation(lhs, rhs)


# ---------------------------------------------------------------------------
# Printing


def format_term(t: Term) -> str:
    if isinstance(t, (Var, Const)):
        return t.name
    if len(t.args) == 1:
        a = t.args[0]
        inner = format_term(a)
        if isinstance(a, App) and len(a.args) != 1:
            inner = f"({inner})"
        return f"{t.op}{inner}"
    parts = []
    for a in t.args:
        s = format_term(a)
        parts.append(f"({s})" if isinstance(a, App) and len(a.args) > 1 else s)
    if len(t.args) == 2:
        return f"{parts[0]} {t.op} {parts[1]}"
    raise ValueError(f"no surface syntax for {len(t.args)}-ary operation {t.op!r}")


def format_equation(e: Equation) -> str:
    return f"{format_term(e.lhs)} = {format_term(e.rhs)}"


# ---------------------------------------------------------------------------
# Structure


def variables(t: Term) -> list[str]:
    """Variables of ``t`` in order of first occurrence."""
    seen: dict[str, None] = {}
    stack = [t]
    while stack:
        s = stack.pop()
        if isinstance(s, Var):
            seen.setdefault(s.name)
        elif isinstance(s, App):
            stack.extend(reversed(s.args))
    return list(seen)


def size(t: Term) -> int:
    if isinstance(t, App):
        return 1 + sum(size(a) for a in t.args)
    return 1


def symbols(t: Term) -> set[str]:
    """Operation and constant symbols occurring in ``t``."""
    if isinstance(t, Var):
        return set()
    if isinstance(t, Const):
        return {t.name}
    out = {t.op}
    for a in t.args:
        out |= symbols(a)
    return out


def apply_substitution(t: Term, s: Mapping[str, Term]) -> Term:
    """Simultaneous substitution; variables outside ``s`` are kept."""
    if isinstance(t, Var):
        return s.get(t.name, t)
    if isinstance(t, Const):
        return t
    return App(t.op, tuple(apply_substitution(a, s) for a in t.args))


def substitute_equation(e: Equation, s: Mapping[str, Term]) -> Equation:
    return Equation(apply_substitution(e.lhs, s), apply_substitution(e.rhs, s))


def match_pattern(pattern: Term, subject: Term,
                  bindings: Optional[dict] = None) -> Optional[dict]:
    """One-way matching: a substitution ``s`` with ``pattern s == subject``.

    Variables of ``subject`` are treated as opaque symbols.  Returns the
    (unique) most general match restricted to the pattern's variables, or
    None.  ``bindings`` pre-binds pattern variables and is not mutated.
    """
    s = dict(bindings) if bindings else {}
    stack = [(pattern, subject)]
    while stack:
        p, t = stack.pop()
        if isinstance(p, Var):
            bound = s.get(p.name)
            if bound is None:
                s[p.name] = t
            elif bound != t:
                return None
        elif isinstance(p, Const):
            if p != t:
                return None
        else:
            if not isinstance(t, App) or t.op != p.op or len(t.args) != len(p.args):
                return None
            stack.extend(zip(p.args, t.args))
    return s


def match_equation(pattern: Equation, subject: Equation,
                   bindings: Optional[dict] = None) -> Optional[dict]:
    s = match_pattern(pattern.lhs, subject.lhs, bindings)
    if s is None:
        return None
    return match_pattern(pattern.rhs, subject.rhs, s)


def positions(t: Term) -> list[Position]:
    """All positions of ``t`` in pre-order; ``()`` is the root."""
    out = []

    def walk(s, path):
        out.append(path)
        if isinstance(s, App):
            for i, a in enumerate(s.args):
                walk(a, path + (i,))

    walk(t, ())
    return out


def subterm_at(t: Term, p: Position) -> Term:
    for i in p:
        if not isinstance(t, App) or not 0 <= i < len(t.args):
            raise IndexError(f"invalid position {p}")
        t = t.args[i]
    return t


def replace_at(t: Term, p: Position, r: Term) -> Term:
    if not p:
        return r
    if not isinstance(t, App) or not 0 <= p[0] < len(t.args):
        raise IndexError(f"invalid position {p}")
    i = p[0]
    args = list(t.args)
    args[i] = replace_at(args[i], p[1:], r)
    return App(t.op, tuple(args))


def rename_apart(e: Equation, prefix: str) -> tuple[Equation, dict]:
    ren = {v: Var(prefix + v) for v in e.variables()}
    return substitute_equation(e, ren), ren


def _alpha_map(a: Term, b: Term, fwd: dict, bwd: dict) -> bool:
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        if isinstance(x, Var):
            if not isinstance(y, Var):
                return False
            if fwd.setdefault(x.name, y.name) != y.name:
                return False
            if bwd.setdefault(y.name, x.name) != x.name:
                return False
        elif isinstance(x, Const):
            if x != y:
                return False
        else:
            if not isinstance(y, App) or x.op != y.op or len(x.args) != len(y.args):
                return False
            stack.extend(zip(x.args, y.args))
    return True


def alpha_equal_terms(a: Term, b: Term) -> bool:
    return _alpha_map(a, b, {}, {})


def alpha_equal(e1: Equation, e2: Equation) -> bool:
    """True iff ``e2`` is ``e1`` under a bijective renaming of variables.

    Orientation matters; test ``e1.swapped()`` separately for symmetry.
    """
    fwd: dict = {}
    bwd: dict = {}
    return _alpha_map(e1.lhs, e2.lhs, fwd, bwd) and _alpha_map(e1.rhs, e2.rhs, fwd, bwd)


# ---------------------------------------------------------------------------
# Definitions


class DefinitionError(KeyError):
    pass


@dataclass(frozen=True)
class Definition:
    symbol: str
    params: tuple  # variable names
    body: Term

    @property
    def arity(self) -> int:
        return len(self.params)

    def head(self) -> Term:
        if not self.params:
            return Const(self.symbol)
        return App(self.symbol, tuple(Var(p) for p in self.params))

    def equation(self) -> Equation:
        return Equation(self.head(), self.body)


@dataclass
class DefinitionTable:
    """Ordered, non-recursive definitions over a base signature.

    A body may use base symbols and symbols defined earlier in the table.
    """
    base: Signature
    definitions: list = field(default_factory=list)
    _expanded: dict = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self):
        defs, self.definitions = self.definitions, []
        for d in defs:
            self.add(d)

    def add(self, d: Definition):
        if self.base.has_symbol(d.symbol) or d.symbol in self._expanded:
            raise ValueError(f"symbol {d.symbol!r} is already defined or primitive")
        extra = set(variables(d.body)) - set(d.params)
        if extra:
            raise ValueError(f"definition of {d.symbol!r} has free variables {sorted(extra)}")
        for sym in symbols(d.body):
            if not self.base.has_symbol(sym) and sym not in self._expanded:
                raise ValueError(f"definition of {d.symbol!r} uses undefined symbol {sym!r}")
        self.definitions.append(d)
        self._expanded[d.symbol] = (d.params, self.expand(d.body))

    def __getitem__(self, symbol: str) -> Definition:
        for d in self.definitions:
            if d.symbol == symbol:
                return d
        raise DefinitionError(symbol)

    def __contains__(self, symbol: str) -> bool:
        return symbol in self._expanded

    def signature(self) -> Signature:
        ops = tuple((d.symbol, d.arity) for d in self.definitions if d.params)
        consts = tuple(d.symbol for d in self.definitions if not d.params)
        return self.base.extend(self.base.name + "+", ops, consts)

    def expand(self, t: Term) -> Term:
        """Eliminate every defined symbol, innermost first."""
        if isinstance(t, Var):
            return t
        if isinstance(t, Const):
            if t.name in self._expanded:
                return self._expanded[t.name][1]
            if t.name in self.base.constants:
                return t
            raise DefinitionError(f"no definition for constant {t.name!r}")
        args = tuple(self.expand(a) for a in t.args)
        if t.op in self._expanded:
            params, body = self._expanded[t.op]
            return apply_substitution(body, dict(zip(params, args)))
        if self.base.arity(t.op) is None:
            raise DefinitionError(f"no definition for operation {t.op!r}")
        return App(t.op, args)

    def expand_equation(self, e: Equation) -> Equation:
        return Equation(self.expand(e.lhs), self.expand(e.rhs))


def expand_definitions(t: Term, defs: DefinitionTable) -> Term:
    return defs.expand(t)


def iter_subterms(t: Term) -> Iterator[tuple[Position, Term]]:
    stack = [((), t)]
    while stack:
        p, s = stack.pop()
        yield p, s
        if isinstance(s, App):
            for i in range(len(s.args) - 1, -1, -1):
                stack.append((p + (i,), s.args[i]))
