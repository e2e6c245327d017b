"""Finite algebras given by operation tables.

The carrier is always ``{0, ..., n-1}``; element names from files are kept
for display and mapped to indices in declaration order.  Identity checking
is plain brute force over all assignments, compiled to a small Python
function per equation so that the loops run without interpretive overhead.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .terms import (BRIGNOLE, NELSON, Const, Equation, Signature, Term,
                    Var, format_equation, symbols)


class AlgebraError(ValueError):
    """Invalid table data or a malformed algebra file."""

    def __init__(self, message: str, line: Optional[int] = None):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


@dataclass(frozen=True, eq=False)
class FiniteAlgebra:
    name: str
    size: int
    signature: Signature
    tables: Mapping[str, tuple]  # op -> flat row-major table of length n**arity
    constants: Mapping[str, int]
    elements: tuple = ()

    def __post_init__(self):
        if not self.elements:
            object.__setattr__(self, "elements", tuple(str(i) for i in range(self.size)))

    def op(self, name: str, *args: int) -> int:
        idx = 0
        for a in args:
            idx = idx * self.size + a
        return self.tables[name][idx]

    def key(self) -> tuple:
        """Constants (signature order) followed by tables (signature order)."""
        out = [self.constants[c] for c in self.signature.constants]
        for op, _ in self.signature.operations:
            out.extend(self.tables[op])
        return tuple(out)

    def same_tables(self, other: "FiniteAlgebra") -> bool:
        return (self.size == other.size and self.signature == other.signature
                and self.key() == other.key())

    def __eq__(self, other):
        return isinstance(other, FiniteAlgebra) and self.same_tables(other)

    def __hash__(self):
        return hash((self.size, self.signature.name, self.key()))

    def name_of(self, element: int) -> str:
        return self.elements[element]

    def element(self, name: str) -> int:
        try:
            return self.elements.index(name)
        except ValueError:
            raise KeyError(f"no element named {name!r} in {self.name}") from None

    def relabel(self, perm: Sequence[int], name: Optional[str] = None,
                elements: Optional[Sequence[str]] = None) -> "FiniteAlgebra":
        """Image of the algebra under the bijection ``i -> perm[i]``."""
        n = self.size
        inv = [0] * n
        for i, p in enumerate(perm):
            inv[p] = i
        tables = {}
        for op, k in self.signature.operations:
            t = self.tables[op]
            new = [0] * (n ** k)
            for idx, args in enumerate(itertools.product(range(n), repeat=k)):
                old = 0
                for a in args:
                    old = old * n + inv[a]
                new[idx] = perm[t[old]]
            tables[op] = tuple(new)
        consts = {c: perm[v] for c, v in self.constants.items()}
        if elements is None:
            elements = [self.elements[inv[i]] for i in range(n)]
        return FiniteAlgebra(name or self.name, n, self.signature, tables, consts, tuple(elements))

    def with_index_names(self, name: Optional[str] = None) -> "FiniteAlgebra":
        return FiniteAlgebra(name or self.name, self.size, self.signature, self.tables,
                             self.constants, tuple(str(i) for i in range(self.size)))


def build_algebra(name: str, size: int, signature: Signature,
                  tables: Mapping[str, Sequence], constants: Mapping[str, object],
                  elements: Optional[Sequence[str]] = None) -> FiniteAlgebra:
    """Validate table data and return a :class:`FiniteAlgebra`.

    ``tables`` values may be flat sequences or nested rows; entries and
    constants may be indices or element names.
    """
    if size < 1:
        raise AlgebraError("size must be positive")
    elements = tuple(elements) if elements else tuple(str(i) for i in range(size))
    if len(elements) != size:
        raise AlgebraError(f"expected {size} element names, got {len(elements)}")
    if len(set(elements)) != size:
        raise AlgebraError("duplicate element names")
    lookup = {e: i for i, e in enumerate(elements)}

    def value(v, where):
        if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
            if 0 <= v < size:
                return int(v)
            raise AlgebraError(f"{where}: entry {v} out of range for size {size}")
        if isinstance(v, str) and v in lookup:
            return lookup[v]
        raise AlgebraError(f"{where}: unknown element {v!r}")

    def flatten(rows):
        out = []
        for r in rows:
            if isinstance(r, (list, tuple)):
                out.extend(flatten(r))
            else:
                out.append(r)
        return out

    built = {}
    for op, k in signature.operations:
        if op not in tables:
            raise AlgebraError(f"missing table for operation {op!r}")
        flat = flatten(tables[op])
        if len(flat) != size ** k:
            raise AlgebraError(f"table {op!r} has {len(flat)} entries, expected {size ** k}")
        built[op] = tuple(value(v, f"table {op!r}") for v in flat)
    extra = set(tables) - {op for op, _ in signature.operations}
    if extra:
        raise AlgebraError(f"tables for operations outside the signature: {sorted(extra)}")
    consts = {}
    for c in signature.constants:
        if c not in constants:
            raise AlgebraError(f"constant {c!r} is not assigned")
        consts[c] = value(constants[c], f"constant {c!r}")
    extra = set(constants) - set(signature.constants)
    if extra:
        raise AlgebraError(f"constants outside the signature: {sorted(extra)}")
    return FiniteAlgebra(name, size, signature, built, consts, elements)


# ---------------------------------------------------------------------------
# Evaluation


def _prepare(A: FiniteAlgebra, e: Equation) -> Equation:
    """Expand defined symbols that are not primitive in ``A``'s signature."""
    needed = symbols(e.lhs) | symbols(e.rhs)
    if all(A.signature.has_symbol(s) for s in needed):
        return e
    from .catalog import definitions_for
    return definitions_for(A.signature).expand_equation(e)


def eval_term(A: FiniteAlgebra, t: Term, v: Mapping[str, int]) -> int:
    if isinstance(t, Var):
        try:
            return v[t.name]
        except KeyError:
            raise KeyError(f"variable {t.name!r} is not assigned") from None
    if isinstance(t, Const):
        if t.name in A.constants:
            return A.constants[t.name]
        from .catalog import definitions_for
        return eval_term(A, definitions_for(A.signature).expand(t), v)
    if t.op not in A.tables:
        from .catalog import definitions_for
        return eval_term(A, definitions_for(A.signature).expand(t), v)
    args = [eval_term(A, a, v) for a in t.args]
    return A.op(t.op, *args)


def _expr(t: Term, n: int, names: dict, varmap: dict) -> str:
    if isinstance(t, Var):
        return varmap[t.name]
    if isinstance(t, Const):
        return names[("c", t.name)]
    table = names[("t", t.op)]
    args = [_expr(a, n, names, varmap) for a in t.args]
    idx = args[0]
    for a in args[1:]:
        idx = f"({idx})*{n}+{a}"
    return f"{table}[{idx}]"


_CHECKER_CACHE: dict = {}


def _compile_checker(A: FiniteAlgebra, e: Equation):
    """Function returning ``None`` or ``(tuple, lhs, rhs)`` for the first
    falsifying assignment in lexicographic order of sorted variables."""
    vs = e.variables()
    names = {}
    args = []
    for i, (op, _) in enumerate(A.signature.operations):
        names[("t", op)] = f"T{i}"
        args.append(f"T{i}")
    for i, c in enumerate(A.signature.constants):
        names[("c", c)] = f"C{i}"
        args.append(f"C{i}")
    varmap = {v: f"v{i}" for i, v in enumerate(vs)}
    n = A.size
    lhs = _expr(e.lhs, n, names, varmap)
    rhs = _expr(e.rhs, n, names, varmap)
    body = []
    indent = "    "
    for i in range(len(vs)):
        body.append(f"{indent}for v{i} in R:")
        indent += "    "
    tup = "(" + "".join(f"v{i}," for i in range(len(vs))) + ")"
    body.append(f"{indent}l = {lhs}")
    body.append(f"{indent}r = {rhs}")
    body.append(f"{indent}if l != r: return {tup}, l, r")
    src = f"def _check({', '.join(args + ['R'])}):\n" + "\n".join(body) + "\n    return None\n"
    ns: dict = {}
    exec(src, ns)
    return ns["_check"], vs


@dataclass
class Verdict:
    id: str
    equation: Equation
    holds: bool
    witness: dict = field(default_factory=dict)  # variable -> element index
    lhs_value: Optional[int] = None
    rhs_value: Optional[int] = None

    def describe(self, A: FiniteAlgebra) -> str:
        if self.holds:
            return f"{self.id}: holds"
        w = ", ".join(f"{k}={A.name_of(v)}" for k, v in self.witness.items())
        return (f"{self.id}: FAILS at {w} "
                f"(lhs={A.name_of(self.lhs_value)}, rhs={A.name_of(self.rhs_value)})")

    def to_dict(self, A: FiniteAlgebra) -> dict:
        d = {"id": self.id, "equation": format_equation(self.equation), "holds": self.holds}
        if not self.holds:
            d["witness"] = {k: A.name_of(v) for k, v in self.witness.items()}
            d["lhs"] = A.name_of(self.lhs_value)
            d["rhs"] = A.name_of(self.rhs_value)
        return d


@dataclass
class CheckReport:
    algebra: FiniteAlgebra
    verdicts: list

    @property
    def all_hold(self) -> bool:
        return all(v.holds for v in self.verdicts)

    @property
    def failing(self) -> list[str]:
        return [v.id for v in self.verdicts if not v.holds]

    def __getitem__(self, id_: str) -> Verdict:
        for v in self.verdicts:
            if v.id == id_:
                return v
        raise KeyError(id_)

    def text(self) -> str:
        lines = [f"algebra {self.algebra.name} (size {self.algebra.size})"]
        lines += ["  " + v.describe(self.algebra) for v in self.verdicts]
        fails = self.failing
        lines.append(f"  failing: {', '.join(fails) if fails else 'none'}")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {"algebra": self.algebra.name, "size": self.algebra.size,
                "verdicts": [v.to_dict(self.algebra) for v in self.verdicts],
                "failing": self.failing}


def check_identity(A: FiniteAlgebra, e: Equation, id_: str = "") -> Verdict:
    """Check ``e`` on every assignment; report the first witness if it fails.

    Assignments are visited in lexicographic order with variables sorted
    alphabetically, so the reported witness is deterministic.
    """
    e = _prepare(A, e)
    ck = (A.signature, A.size, e)
    if ck not in _CHECKER_CACHE:
        if len(_CHECKER_CACHE) > 20000:
            _CHECKER_CACHE.clear()
        _CHECKER_CACHE[ck] = _compile_checker(A, e)
    fn, vs = _CHECKER_CACHE[ck]
    res = fn(*[A.tables[op] for op, _ in A.signature.operations],
             *[A.constants[c] for c in A.signature.constants], range(A.size))
    if res is None:
        return Verdict(id_, e, True)
    tup, l, r = res
    return Verdict(id_, e, False, dict(zip(vs, tup)), l, r)


def holds(A: FiniteAlgebra, e: Equation) -> bool:
    return check_identity(A, e).holds


def all_witnesses(A: FiniteAlgebra, e: Equation, limit: Optional[int] = None) -> list:
    """Every falsifying assignment as ``(assignment, lhs, rhs)``, in the same
    order :func:`check_identity` uses."""
    e = _prepare(A, e)
    vs = e.variables()
    out = []
    for tup in itertools.product(range(A.size), repeat=len(vs)):
        v = dict(zip(vs, tup))
        l, r = eval_term(A, e.lhs, v), eval_term(A, e.rhs, v)
        if l != r:
            out.append((v, l, r))
            if limit is not None and len(out) >= limit:
                break
    return out


def check_axiom_set(A: FiniteAlgebra, axioms: Iterable) -> CheckReport:
    """Verdict per named equation, in the given order."""
    verdicts = []
    for ax in axioms:
        if isinstance(ax, Equation):
            verdicts.append(check_identity(A, ax, format_equation(ax)))
        else:
            verdicts.append(check_identity(A, ax.equation, ax.id))
    return CheckReport(A, verdicts)


# ---------------------------------------------------------------------------
# Isomorphism


def find_isomorphism(A: FiniteAlgebra, B: FiniteAlgebra) -> Optional[list[int]]:
    """A bijection ``f`` (as a list) with ``f(op_A(a..)) = op_B(f(a)..)``.

    Backtracking over images of elements in index order; every forced image
    (constants, results of fully mapped arguments) is propagated before the
    next choice.
    """
    if A.signature != B.signature:
        raise ValueError("algebras have different signatures")
    if A.size != B.size:
        return None
    n = A.size
    ops = A.signature.operations
    f = [-1] * n
    used = [False] * n

    def assign(a, b, trail):
        if f[a] == b:
            return True
        if f[a] != -1 or used[b]:
            return False
        f[a] = b
        used[b] = True
        trail.append(a)
        return True

    def propagate(trail) -> bool:
        changed = True
        while changed:
            changed = False
            for op, k in ops:
                ta, tb = A.tables[op], B.tables[op]
                for idx, args in enumerate(itertools.product(range(n), repeat=k)):
                    if any(f[x] == -1 for x in args):
                        continue
                    j = 0
                    for x in args:
                        j = j * n + f[x]
                    ra, rb = ta[idx], tb[j]
                    if f[ra] == -1:
                        if not assign(ra, rb, trail):
                            return False
                        changed = True
                    elif f[ra] != rb:
                        return False
        return True

    def undo(trail):
        for a in trail:
            used[f[a]] = False
            f[a] = -1

    trail0: list = []
    for c in A.signature.constants:
        if not assign(A.constants[c], B.constants[c], trail0):
            return None
    if not propagate(trail0):
        return None

    def search() -> bool:
        try:
            a = f.index(-1)
        except ValueError:
            return True
        for b in range(n):
            if used[b]:
                continue
            trail: list = []
            assign(a, b, trail)
            if propagate(trail) and search():
                return True
            undo(trail)
        return False

    return list(f) if search() else None


def _permutations(n: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(n))), dtype=np.int16).reshape(-1, n)


_PERM_CACHE: dict = {}


def canonical_labeling(A: FiniteAlgebra) -> list[int]:
    """Permutation ``p`` such that ``A.relabel(p)`` is the canonical form.

    Exhaustive over all ``n!`` relabelings (vectorised), ``n <= 8``.  The
    comparison key lists constants first, then tables row-major.
    """
    n = A.size
    if n > 8:
        raise ValueError("canonical form is only supported for n <= 8")
    if n not in _PERM_CACHE:
        _PERM_CACHE[n] = _permutations(n)
    P = _PERM_CACHE[n]  # rows: candidate p (old -> new)
    Q = np.argsort(P, axis=1)  # inverse: new -> old
    cols = []
    for c in A.signature.constants:
        cols.append(P[:, A.constants[c]][:, None])
    for op, k in A.signature.operations:
        t = np.asarray(A.tables[op], dtype=np.int16).reshape((n,) * k)
        idx = tuple(Q[(slice(None),) + (None,) * i + (slice(None),) + (None,) * (k - 1 - i)]
                    for i in range(k))
        old_results = t[idx].reshape(len(P), -1)
        cols.append(np.take_along_axis(P, old_results.astype(np.int64), axis=1))
    keys = np.concatenate(cols, axis=1)
    cand = np.arange(len(P))
    for col in range(keys.shape[1]):
        column = keys[cand, col]
        m = column.min()
        cand = cand[column == m]
        if len(cand) == 1:
            break
    return [int(x) for x in P[cand[0]]]


def canonical_form(A: FiniteAlgebra) -> FiniteAlgebra:
    """Lexicographically least relabeling of ``A``; element names become indices."""
    p = canonical_labeling(A)
    return A.relabel(p, elements=[str(i) for i in range(A.size)])


# ---------------------------------------------------------------------------
# File format


def _known_signature(ops: list, consts: list) -> Signature:
    for sig in (BRIGNOLE, NELSON):
        if sorted(sig.operations) == sorted(ops) and sorted(sig.constants) == sorted(consts):
            return sig
    return Signature("custom", tuple(ops), tuple(consts))


def parse_algebra(text: str) -> FiniteAlgebra:
    """Read the ``algebra/size/elements/op/const`` text format."""
    lines = []
    for no, raw in enumerate(text.splitlines(), 1):
        s = raw.split("#", 1)[0].strip()
        if s:
            lines.append((no, s.split()))
    name = None
    size = None
    elements = None
    tables: dict = {}
    ops: list = []
    consts: dict = {}
    i = 0
    while i < len(lines):
        no, words = lines[i]
        kw = words[0]
        if kw == "algebra":
            if len(words) != 2:
                raise AlgebraError("expected 'algebra <name>'", no)
            name = words[1]
        elif kw == "size":
            if len(words) != 2 or not words[1].isdigit() or int(words[1]) < 1:
                raise AlgebraError("expected 'size <positive integer>'", no)
            size = int(words[1])
        elif kw == "elements":
            elements = words[1:]
        elif kw == "op":
            if size is None:
                raise AlgebraError("'op' before 'size'", no)
            if len(words) != 3 or not words[2].isdigit() or int(words[2]) < 1:
                raise AlgebraError("expected 'op <name> <arity>'", no)
            op, k = words[1], int(words[2])
            if op in tables:
                raise AlgebraError(f"duplicate table for {op!r}", no)
            nrows = size ** (k - 1)
            rows = lines[i + 1:i + 1 + nrows]
            if len(rows) < nrows:
                raise AlgebraError(f"table {op!r} expects {nrows} rows", no)
            flat = []
            for rno, row in rows:
                if row[0] in ("op", "const", "algebra", "size", "elements"):
                    raise AlgebraError(f"table {op!r} expects {nrows} rows", rno)
                if len(row) != size:
                    raise AlgebraError(f"row of table {op!r} has {len(row)} entries, expected {size}", rno)
                flat.extend(row)
            tables[op] = flat
            ops.append((op, k))
            i += nrows
        elif kw == "const":
            if len(words) != 3:
                raise AlgebraError("expected 'const <name> <element>'", no)
            consts[words[1]] = words[2]
        else:
            raise AlgebraError(f"unknown keyword {kw!r}", no)
        i += 1
    if size is None:
        raise AlgebraError("missing 'size'")
    if elements is None:
        elements = [str(k) for k in range(size)]
    sig = _known_signature(ops, list(consts))
    return build_algebra(name or "unnamed", size, sig, tables, consts, elements)


def format_algebra(A: FiniteAlgebra) -> str:
    n = A.size
    out = [f"algebra {A.name}", f"size {n}", "elements " + " ".join(A.elements)]
    for op, k in A.signature.operations:
        out.append(f"op {op} {k}")
        t = A.tables[op]
        for r in range(n ** (k - 1)):
            out.append(" ".join(A.elements[x] for x in t[r * n:(r + 1) * n]))
    for c in A.signature.constants:
        out.append(f"const {c} {A.elements[A.constants[c]]}")
    return "\n".join(out) + "\n"


def load_algebra(path) -> FiniteAlgebra:
    with open(path) as fh:
        return parse_algebra(fh.read())


def save_algebra(A: FiniteAlgebra, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_algebra(A))
