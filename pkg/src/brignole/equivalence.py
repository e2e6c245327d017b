"""Table-level translations between Nelson and Brignole algebras.

Each translated operation is computed cell by cell by evaluating its
defining term in the source algebra.  Translations refuse non-models
unless ``check=False`` is passed, which is meant for exploration only.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

from .algebra import CheckReport, FiniteAlgebra, build_algebra, check_axiom_set, eval_term
from .catalog import brignole_axioms, nelson_axioms
from .terms import BRIGNOLE, BRIGNOLE_EXT, NELSON, NELSON_EXT, Signature, parse_term


class TranslationError(ValueError):
    """The input algebra is not a model of the source axioms."""

    def __init__(self, report: CheckReport):
        A = report.algebra
        details = "; ".join(report[i].describe(A) for i in report.failing)
        super().__init__(f"{A.name} is not a model: {details}")
        self.report = report


# Defining terms for the target operations, written in the source signature
# (defined symbols are expanded by the evaluator).
N2B_TERMS = {"^": "x ^ y", "->>": "(x -> y) ^ (~y -> ~x)", "0": "~1"}
B2N_TERMS = {"^": "x ^ y", "v": "x v y", "->": "x -> y", "~": "~x", "1": "0 ->> 0"}


def _derive(A: FiniteAlgebra, target: Signature, terms: dict, source_sig: Signature,
            name: str) -> FiniteAlgebra:
    n = A.size
    tables = {}
    for op, k in target.operations:
        t = parse_term(terms[op], source_sig)
        names = ["x", "y", "z"][:k]
        tables[op] = [eval_term(A, t, dict(zip(names, args)))
                      for args in itertools.product(range(n), repeat=k)]
    consts = {c: eval_term(A, parse_term(terms[c], source_sig), {}) for c in target.constants}
    return build_algebra(name, n, target, tables, consts, A.elements)


def nelson_to_brignole(A: FiniteAlgebra, check: bool = True,
                       name: Optional[str] = None) -> FiniteAlgebra:
    """Brignole algebra with the same meet, ``x ->> y := (x->y) ^ (~y->~x)``, ``0 := ~1``."""
    if A.signature != NELSON:
        raise ValueError(f"expected an algebra over the Nelson signature, got {A.signature.name}")
    if check:
        rep = check_axiom_set(A, nelson_axioms())
        if not rep.all_hold:
            raise TranslationError(rep)
    return _derive(A, BRIGNOLE, N2B_TERMS, NELSON_EXT, name or f"{A.name}_b")


def brignole_to_nelson(A: FiniteAlgebra, check: bool = True,
                       name: Optional[str] = None) -> FiniteAlgebra:
    """Nelson algebra with the same meet and the defined join, weak implication,
    negation and ``1 := 0 ->> 0``."""
    if A.signature != BRIGNOLE:
        raise ValueError(f"expected an algebra over the Brignole signature, got {A.signature.name}")
    if check:
        rep = check_axiom_set(A, brignole_axioms())
        if not rep.all_hold:
            raise TranslationError(rep)
    return _derive(A, NELSON, B2N_TERMS, BRIGNOLE_EXT, name or f"{A.name}_n")


@dataclass
class TableComparison:
    op: str
    equal: bool
    first_difference: Optional[tuple] = None  # (argument tuple, expected, got)

    def describe(self, A: FiniteAlgebra) -> str:
        if self.equal:
            return f"{self.op}: identical"
        args, want, got = self.first_difference
        where = ",".join(A.name_of(a) for a in args)
        return f"{self.op}: differs at ({where}): expected {A.name_of(want)}, got {A.name_of(got)}"


@dataclass
class TranslationReport:
    input: FiniteAlgebra
    output: FiniteAlgebra
    verdicts: CheckReport  # axioms of the target variety, checked on ``output``
    roundtrip: list = field(default_factory=list)  # TableComparison entries
    back: Optional[FiniteAlgebra] = None  # result of translating ``output`` back

    @property
    def tables_identical(self) -> bool:
        return all(c.equal for c in self.roundtrip)

    @property
    def ok(self) -> bool:
        return self.verdicts.all_hold and self.tables_identical

    def text(self) -> str:
        lines = [self.verdicts.text()]
        if self.roundtrip:
            lines.append("round trip:")
            lines += ["  " + c.describe(self.input) for c in self.roundtrip]
            lines.append("tables identical" if self.tables_identical else "tables DIFFER")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "input": self.input.name,
            "output": self.output.name,
            "verdicts": self.verdicts.to_dict(),
            "roundtrip": [{"op": c.op, "equal": c.equal,
                           "first_difference": c.first_difference} for c in self.roundtrip],
            "tables_identical": self.tables_identical,
        }


def compare_tables(A: FiniteAlgebra, B: FiniteAlgebra, op: str,
                   table_b: Optional[list] = None) -> TableComparison:
    """Compare operation (or constant) ``op`` of ``A`` with that of ``B``."""
    if op in A.constants:
        want = A.constants[op]
        got = B.constants[op] if table_b is None else table_b[0]
        return TableComparison(op, want == got, None if want == got else ((), want, got))
    k = A.signature.arity(op)
    ta = A.tables[op]
    tb = B.tables[op] if table_b is None else table_b
    for idx, args in enumerate(itertools.product(range(A.size), repeat=k)):
        if ta[idx] != tb[idx]:
            return TableComparison(op, False, (args, ta[idx], tb[idx]))
    return TableComparison(op, True)


def roundtrip_nelson(A: FiniteAlgebra, check: bool = True) -> TranslationReport:
    """Nelson -> Brignole -> Nelson; every Nelson table must come back unchanged.

    Also compares the weak implication recomputed as ``x ->> (x ->> y)``
    in the intermediate Brignole algebra with the original ``->``.
    """
    B = nelson_to_brignole(A, check)
    verdicts = check_axiom_set(B, brignole_axioms())
    N = brignole_to_nelson(B, check=False, name=f"{A.name}_rt")
    comps = [compare_tables(A, N, op) for op, _ in NELSON.operations]
    comps += [compare_tables(A, N, c) for c in NELSON.constants]
    weak = [eval_term(B, parse_term("x ->> (x ->> y)", BRIGNOLE), {"x": a, "y": b})
            for a, b in itertools.product(range(A.size), repeat=2)]
    c = compare_tables(A, N, "->", weak)
    comps.append(TableComparison("x ->> (x ->> y) vs ->", c.equal, c.first_difference))
    return TranslationReport(A, B, verdicts, comps, N)


def roundtrip_brignole(A: FiniteAlgebra, check: bool = True) -> TranslationReport:
    """Brignole -> Nelson -> Brignole; meet, strong implication and 0 must come back."""
    N = brignole_to_nelson(A, check)
    verdicts = check_axiom_set(N, nelson_axioms())
    B = nelson_to_brignole(N, check=False, name=f"{A.name}_rt")
    comps = [compare_tables(A, B, op) for op, _ in BRIGNOLE.operations]
    comps += [compare_tables(A, B, c) for c in BRIGNOLE.constants]
    return TranslationReport(A, N, verdicts, comps, B)


def translate(A: FiniteAlgebra, direction: str, check: bool = True):
    """Dispatch used by the command line: ``n2b``, ``b2n`` or ``roundtrip``."""
    if direction == "n2b":
        B = nelson_to_brignole(A, check)
        return B, TranslationReport(A, B, check_axiom_set(B, brignole_axioms()))
    if direction == "b2n":
        N = brignole_to_nelson(A, check)
        return N, TranslationReport(A, N, check_axiom_set(N, nelson_axioms()))
    if direction == "roundtrip":
        rep = roundtrip_nelson(A, check) if A.signature == NELSON else roundtrip_brignole(A, check)
        return rep.back, rep
    raise ValueError(f"unknown direction {direction!r}")
