"""Equation-set files.

One equation per line, optionally prefixed by an id (``B1: (x ->> x) ->> y = y``).
A leading ``!`` marks an equation the searched model must falsify.  ``#``
starts a comment.  A ``signature nelson`` or ``signature brignole`` line
fixes the base signature; without one it is inferred from the symbols used.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from . import catalog
from .catalog import NamedEquation
from .terms import (BRIGNOLE, BRIGNOLE_EXT, NELSON, NELSON_EXT, ParseError,
                    Signature, format_equation, parse_equation, symbols)


class EquationFileError(ValueError):
    def __init__(self, message: str, line: int = 0):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


@dataclass
class EquationSet:
    signature: Signature
    hold: list = field(default_factory=list)  # NamedEquation
    fail: list = field(default_factory=list)  # NamedEquation

    def ids(self) -> list[str]:
        return [e.id for e in self.hold + self.fail]

    def without(self, id_: str) -> "EquationSet":
        return EquationSet(self.signature, [e for e in self.hold if e.id != id_], list(self.fail))


_ID = re.compile(r"^([A-Za-z][A-Za-z0-9_.]*)\s*:\s*(.*)$")
_SIGS = {"nelson": NELSON, "brignole": BRIGNOLE}
_NELSON_ONLY = {"v", "->", "~", "1"}
_BRIGNOLE_ONLY = {"->>", "0"}


def _infer(rows: list) -> Signature:
    used = set()
    for no, t in rows:
        try:
            e = parse_equation(t, BRIGNOLE_EXT)
        except ParseError as err:
            raise EquationFileError(str(err), no) from None
        used |= symbols(e.lhs) | symbols(e.rhs)
    if used & _BRIGNOLE_ONLY or not used & _NELSON_ONLY:
        return BRIGNOLE
    return NELSON


def parse_equation_set(text: str, signature: Signature | None = None) -> EquationSet:
    rows = []
    for no, raw in enumerate(text.splitlines(), 1):
        s = raw.split("#", 1)[0].strip()
        if not s:
            continue
        if s.startswith("signature "):
            name = s.split(None, 1)[1].strip()
            if name not in _SIGS:
                raise EquationFileError(f"unknown signature {name!r}", no)
            signature = _SIGS[name]
            continue
        must_fail = s.startswith("!")
        if must_fail:
            s = s[1:].strip()
        m = _ID.match(s)
        id_ = None
        if m and "=" not in m.group(1):
            id_, s = m.group(1), m.group(2)
        rows.append((no, id_, s, must_fail))
    if signature is None:
        signature = _infer([(r[0], r[2]) for r in rows])
    ext = NELSON_EXT if signature == NELSON else BRIGNOLE_EXT
    out = EquationSet(signature)
    seen = set()
    for no, id_, s, must_fail in rows:
        try:
            e = parse_equation(s, ext)
        except ParseError as err:
            raise EquationFileError(str(err), no) from None
        id_ = id_ or f"E{no}"
        if id_ in seen:
            raise EquationFileError(f"duplicate id {id_!r}", no)
        seen.add(id_)
        ne = NamedEquation(id_, e, signature, "equation file")
        (out.fail if must_fail else out.hold).append(ne)
    return out


def format_equation_set(es: EquationSet, header: str = "") -> str:
    lines = [f"# {header}"] if header else []
    lines.append(f"signature {es.signature.name}")
    lines += [f"{e.id}: {format_equation(e.equation)}" for e in es.hold]
    lines += [f"!{e.id}: {format_equation(e.equation)}" for e in es.fail]
    return "\n".join(lines) + "\n"


def load_equation_set(path) -> EquationSet:
    with open(path) as fh:
        return parse_equation_set(fh.read())


def resolve_equation(ref: str, es: EquationSet | None = None) -> NamedEquation:
    """An id from ``es`` or the catalog, or an equation written out in full."""
    if es is not None:
        for e in es.hold + es.fail:
            if e.id == ref:
                return e
    if "=" not in ref:
        return catalog.lookup(ref)
    sig = es.signature if es is not None else BRIGNOLE
    ext = NELSON_EXT if sig == NELSON else BRIGNOLE_EXT
    return NamedEquation(ref, parse_equation(ref, ext), sig, "command line")


def axiom_set_file(name: str) -> EquationSet:
    """The named catalog axiom set as an :class:`EquationSet`."""
    axioms = catalog.axiom_set(name)
    return EquationSet(axioms[0].signature, list(axioms))
