"""Named equations and definition tables for the two presentations.

Every identity used elsewhere in the package (axiom sets, lemma suites,
proof-script citations, fixtures) is looked up here by id.  Lemma items
stated as inequalities ``a <= b`` are stored in meet form ``a ^ b = a``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .terms import (BRIGNOLE, BRIGNOLE_EXT, NELSON, NELSON_EXT, Definition,
                    DefinitionTable, Equation, Signature, format_equation,
                    parse_equation, parse_term)


@dataclass(frozen=True)
class NamedEquation:
    id: str
    equation: Equation
    signature: Signature  # base signature the identity is meant for
    source: str = ""
    aliases: tuple = ()
    # lemma-store entries: "model-checked" unless an auxiliary proof exists
    status: str = "model-checked"
    note: str = ""

    def __str__(self):
        return f"{self.id}: {format_equation(self.equation)}"


def _ext(sig: Signature) -> Signature:
    return NELSON_EXT if sig.name == "nelson" else BRIGNOLE_EXT


def _eq(id_, text, sig, source="", aliases=(), **kw) -> NamedEquation:
    return NamedEquation(id_, parse_equation(text, _ext(sig)), sig, source, tuple(aliases), **kw)


# ---------------------------------------------------------------------------
# Definition tables


@lru_cache(maxsize=None)
def definitions(setting: str) -> DefinitionTable:
    """Definition table for ``"brignole"`` or ``"nelson"`` as the base."""
    if setting in ("brignole", BRIGNOLE.name):
        sig = BRIGNOLE_EXT
        rows = [
            ("1", (), "0 ->> 0"),
            ("~", ("x",), "x ->> 0"),
            ("v", ("x", "y"), "((x ->> 0) ^ (y ->> 0)) ->> 0"),
            ("->", ("x", "y"), "x ->> (x ->> y)"),
            ("!", ("x",), "x -> ~1"),
        ]
        base = BRIGNOLE
    elif setting in ("nelson", NELSON.name):
        sig = NELSON_EXT
        rows = [
            ("0", (), "~1"),
            ("->>", ("x", "y"), "(x -> y) ^ (~y -> ~x)"),
            ("!", ("x",), "x -> ~1"),
        ]
        base = NELSON
    else:
        raise KeyError(f"unknown setting {setting!r}")
    table = DefinitionTable(base)
    for sym, params, body in rows:
        table.add(Definition(sym, params, parse_term(body, sig)))
    return table


def definitions_for(sig: Signature) -> DefinitionTable:
    if sig.name.startswith("nelson"):
        return definitions("nelson")
    if sig.name.startswith("brignole"):
        return definitions("brignole")
    raise KeyError(f"no definition table for signature {sig.name!r}")


def expand(e: Equation, sig: Signature) -> Equation:
    return definitions_for(sig).expand_equation(e)


# ---------------------------------------------------------------------------
# Axioms

_NELSON_AXIOMS = [
    ("N1", "x ^ (x v y) = x"),
    ("N2", "x ^ (y v z) = (z ^ x) v (y ^ x)"),
    ("N3", "~~x = x"),
    ("N4", "~(x ^ y) = ~x v ~y"),
    ("N5", "x ^ ~x = (x ^ ~x) ^ (y v ~y)"),
    ("N6", "x -> x = 1"),
    ("N7", "x ^ (x -> y) = x ^ (~x v y)"),
    ("N8", "(x ^ y) -> z = x -> (y -> z)"),
]

_BRIGNOLE_AXIOMS = [
    ("B1", "(x ->> x) ->> y = y"),
    ("B2", "(x ->> y) ^ y = y"),
    ("B3", "x ^ ~(x ^ ~y) = x ^ (x ->> y)"),
    ("B4", "x ->> (y ^ z) = (x ->> y) ^ (x ->> z)"),
    ("B5", "x ->> y = ~y ->> ~x"),
    ("B6", "x ->> (x ->> (y ->> (y ->> z))) = (x ^ y) ->> ((x ^ y) ->> z)"),
    ("B7", "~(~x ^ y) ->> (x ->> y) = x ->> y"),
    ("B8", "x ^ (x v y) = x"),
    ("B9", "x ^ (y v z) = (z ^ x) v (y ^ x)"),
    ("B10", "(x ^ ~x) ^ (y v ~y) = x ^ ~x"),
]

REDUCED_IDS = ("B1", "B3", "B4", "B5", "B6", "B7", "B9", "B10")

# Axioms for which the independence section exhibits a separating model,
# and the list named in that section's theorem statement.  They differ.
INDEPENDENCE_MODELS = ("B1", "B3", "B5", "B6", "B9")
INDEPENDENCE_CLAIMED = ("B1", "B3", "B5", "B7", "B9")


def nelson_axioms() -> list[NamedEquation]:
    return [_eq(i, t, NELSON, "Nelson algebra axiom") for i, t in _NELSON_AXIOMS]


def brignole_axioms() -> list[NamedEquation]:
    return [_eq(i, t, BRIGNOLE, "Brignole algebra axiom") for i, t in _BRIGNOLE_AXIOMS]


def reduced_brignole_axioms() -> list[NamedEquation]:
    return [a for a in brignole_axioms() if a.id in REDUCED_IDS]


# ---------------------------------------------------------------------------
# Lemmas

# L1: properties of Nelson algebras.
_L1 = [
    ("a", "x -> (y ^ z) = (x -> y) ^ (x -> z)"),
    ("b", "1 -> x = x"),
    ("c", "~x ^ !x = ~x"),
    ("d", "(x -> x) ^ (~x -> ~x) = 1"),
    ("e", "~y ^ (y -> z) = ~y"),
    ("f", "y ^ (x -> y) = y"),
    ("g", "(x v y) -> z = (x -> z) ^ (y -> z)"),
    ("h", "x -> y = x ->> (x ->> y)"),
    ("i", "x -> (x -> y) = x -> y"),
]

# L2: Brignole operations computed inside a Nelson algebra.  The
# Brignole negation and join are written out through their definitions
# so that they stay distinct from the Nelson ones.
_L2 = [
    ("a", "x ->> 0 = ~x"),
    ("b", "((x ->> 0) ^ (y ->> 0)) ->> 0 = x v y"),
    ("c1", "x ^ (((x ->> 0) ^ (y ->> 0)) ->> 0) = x"),
    ("c2", "x ^ (((y ->> 0) ^ (z ->> 0)) ->> 0) = ((((z ^ x) ->> 0) ^ ((y ^ x) ->> 0)) ->> 0)"),
    ("c3", "(x ^ (x ->> 0)) ^ (((y ->> 0) ^ ((y ->> 0) ->> 0)) ->> 0) = x ^ (x ->> 0)"),
    ("d", "x ->> x = 1"),
    ("e", "x = x ^ (~x -> y)"),
    ("f", "1 ->> x = x"),
    ("g", "(x ->> x) ->> y = y"),
    ("h", "(x ->> y) ^ y = y"),
    ("i", "x ^ ~(x ^ ~y) = x ^ (x ->> y)"),
    ("j", "x ->> (y ^ z) = (x ->> y) ^ (x ->> z)"),
    ("k", "x ->> y = (y ->> 0) ->> (x ->> 0)"),
    ("l", "x ->> (x ->> (y ->> (y ->> z))) = (x ^ y) ->> ((x ^ y) ->> z)"),
    ("m", "~(~x ^ y) ->> (x ->> y) = x ->> y"),
]

# L4: properties of Brignole algebras.
_L4 = [
    ("a1", "x ^ (x v y) = x"),
    ("a2", "x ^ (y v z) = (z ^ x) v (y ^ x)"),
    ("a3", "(x ^ ~x) ^ (y v ~y) = x ^ ~x"),
    ("b", "~1 = 0"),
    ("c", "1 = 1 ->> 1"),
    ("d", "1 ->> x = x"),
    ("e", "~~x = x"),
    ("f", "~(x v y) = ~x ^ ~y"),
    ("g", "~(x ^ y) = ~x v ~y"),
    ("h", "x ^ (x -> y) = x ^ (~x v y)"),
    ("i", "x v 1 = 1"),
    ("j", "x ->> 1 = 1"),
    ("k", "(x ^ y) -> z = x -> (y -> z)"),
    ("l", "x ->> x = y ->> y"),
    ("l.1", "x ->> x = 1"),
    ("m", "x -> x = 1"),
]

# L5: consequences of the reduced axiom set.  Items restating an L4
# item are aliases of that entry.
_L5_ALIASES = {"a": "L4.b", "b": "L4.e", "c": "L4.l", "l1": "L4.f", "l2": "L4.g"}
_L5 = [
    ("d", "x = (x ->> 0) ->> (x ^ 0)"),
    ("e", "0 ^ 0 = 0"),
    ("f", "x ^ y = y ^ x"),
    ("g", "x ^ x = x"),
    ("h", "0 ^ 1 = 0"),
    ("i", "x ^ 0 = 0"),
    ("j", "x v x = x"),
    ("k", "x v y = y v x"),
    ("m", "x ^ (y v z) = (x ^ y) v (x ^ z)"),
    ("n", "x v 1 = 1"),
]


def lemma_catalog() -> list[NamedEquation]:
    """Every equational lemma item, Nelson lemmas first.

    Alias ids (restatements) are attached to the first entry and resolved
    by :func:`lookup`; they are not separate list entries.
    """
    out = []
    out += [_eq(f"L1.{k}", t, NELSON, "Nelson algebra property") for k, t in _L1]
    out += [_eq(f"L2.{k}", t, NELSON, "Brignole operations inside a Nelson algebra")
            for k, t in _L2]
    aliases: dict[str, list[str]] = {}
    for k, target in _L5_ALIASES.items():
        aliases.setdefault(target, []).append(f"L5.{k}")
    out += [_eq(f"L4.{k}", t, BRIGNOLE, "Brignole algebra property",
                aliases.get(f"L4.{k}", ())) for k, t in _L4]
    out += [_eq(f"L5.{k}", t, BRIGNOLE, "consequence of the reduced axiom set")
            for k, t in _L5]
    return out


# Extra lemma-store entries used by the bundled proof scripts.  They are
# not lemma items themselves; each records why it is admitted.
_AUX = [
    ("AUX.meet_zero_neg", "x ->> 0 = x ->> (0 ^ (x ->> 0))",
     "its citation does not determine a rewrite path; admitted from the "
     "lemma store and checked on small models only"),
]


def auxiliary_lemmas() -> list[NamedEquation]:
    return [_eq(i, t, BRIGNOLE, "auxiliary lemma-store entry", note=n) for i, t, n in _AUX]


@lru_cache(maxsize=None)
def _index() -> dict:
    idx = {}
    for ne in nelson_axioms() + brignole_axioms() + lemma_catalog() + auxiliary_lemmas():
        for key in (ne.id,) + ne.aliases:
            if key in idx:
                raise RuntimeError(f"duplicate catalog id {key}")
            idx[key] = ne
    return idx


def lookup(id_: str) -> NamedEquation:
    try:
        return _index()[id_]
    except KeyError:
        raise KeyError(f"unknown catalog id {id_!r}") from None


def all_ids() -> list[str]:
    return list(_index())


def lemma_suite(setting: str) -> list[NamedEquation]:
    base = NELSON if setting == "nelson" else BRIGNOLE
    return [ne for ne in lemma_catalog() if ne.signature == base]


AXIOM_SETS = {
    "nelson": nelson_axioms,
    "brignole": brignole_axioms,
    "reduced": reduced_brignole_axioms,
}


def axiom_set(name: str) -> list[NamedEquation]:
    try:
        return AXIOM_SETS[name]()
    except KeyError:
        raise KeyError(f"unknown axiom set {name!r}; choose from {sorted(AXIOM_SETS)}") from None


def dump() -> str:
    """Human-readable listing of the whole catalog, for auditing."""
    lines = []
    for setting in ("brignole", "nelson"):
        lines.append(f"# definitions over {setting}")
        for d in definitions(setting).definitions:
            lines.append(f"def {format_equation(d.equation())}")
    seen = set()
    for ne in nelson_axioms() + brignole_axioms() + lemma_catalog() + auxiliary_lemmas():
        if ne.id in seen:
            continue
        seen.add(ne.id)
        extra = f"  (aliases: {', '.join(ne.aliases)})" if ne.aliases else ""
        lines.append(f"{ne.id} [{ne.signature.name}] {format_equation(ne.equation)}{extra}")
    return "\n".join(lines) + "\n"
