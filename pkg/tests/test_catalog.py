import re

import pytest

from brignole.algebra import check_identity
from brignole.bundled import fixture_path, list_fixtures
from brignole.catalog import (INDEPENDENCE_CLAIMED, INDEPENDENCE_MODELS, all_ids, axiom_set,
                              brignole_axioms, definitions, dump, expand, lemma_catalog,
                              lemma_suite, lookup, nelson_axioms, reduced_brignole_axioms)
from brignole.eqfile import load_equation_set
from brignole.proof import load_proof
from brignole.terms import BRIGNOLE_EXT, NELSON_EXT, parse_equation, parse_term, variables


def eq(text, sig):
    return parse_equation(text, sig)


def test_nelson_axiom_examples():
    ax = nelson_axioms()
    assert len(ax) == 8
    assert [a.id for a in ax] == [f"N{i}" for i in range(1, 9)]
    assert lookup("N5").equation == eq("x ^ ~x = (x ^ ~x) ^ (y v ~y)", NELSON_EXT)
    assert lookup("N6").equation == eq("x -> x = 1", NELSON_EXT)


def test_brignole_axiom_examples():
    ax = brignole_axioms()
    assert len(ax) == 10
    assert lookup("B7").equation == eq("~(~x ^ y) ->> (x ->> y) = x ->> y", BRIGNOLE_EXT)
    assert lookup("B10").equation == eq("(x ^ ~x) ^ (y v ~y) = x ^ ~x", BRIGNOLE_EXT)


def test_reduced_set():
    ids = [a.id for a in reduced_brignole_axioms()]
    assert len(ids) == 8
    assert "B2" not in ids and "B8" not in ids and "B10" in ids
    assert ids == ["B1", "B3", "B4", "B5", "B6", "B7", "B9", "B10"]


def test_lemma_examples():
    assert lookup("L1.b").equation == eq("1 -> x = x", NELSON_EXT)
    assert lookup("L4.e").equation == eq("~~x = x", BRIGNOLE_EXT)
    assert lookup("L5.n").equation == eq("x v 1 = 1", BRIGNOLE_EXT)


def test_order_items_are_meet_encoded():
    # ~x <= !x is stored as ~x ^ !x = ~x
    assert lookup("L1.c").equation == eq("~x ^ !x = ~x", NELSON_EXT)


def test_restatements_are_aliases():
    assert lookup("L5.b") is lookup("L4.e")
    assert lookup("L5.a") is lookup("L4.b")
    ids = [ne.id for ne in lemma_catalog()]
    assert len(ids) == len(set(ids))
    assert "L5.b" not in ids


def test_definition_examples():
    b = {d.symbol: d for d in definitions("brignole").definitions}
    assert b["1"].body == parse_term("0 ->> 0")
    assert b["->"].body == parse_term("x ->> (x ->> y)")
    n = {d.symbol: d for d in definitions("nelson").definitions}
    assert n["->>"].body == parse_term("(x -> y) ^ (~y -> ~x)", NELSON_EXT)


def test_unknown_ids():
    with pytest.raises(KeyError):
        lookup("B11")
    with pytest.raises(KeyError):
        axiom_set("boolean")
    with pytest.raises(KeyError):
        definitions("heyting")


def _symbols(t, acc):
    if hasattr(t, "args"):
        acc.add(t.op)
        for a in t.args:
            _symbols(a, acc)
    elif type(t).__name__ == "Const":
        acc.add(t.name)
    return acc


@pytest.mark.parametrize("ne", [lookup(i) for i in dict.fromkeys(all_ids())], ids=str)
def test_every_entry_expands_to_base_signature(ne):
    e = expand(ne.equation, ne.signature)
    syms = _symbols(e.rhs, _symbols(e.lhs, set()))
    allowed = {op for op, _ in ne.signature.operations} | set(ne.signature.constants)
    assert syms <= allowed
    assert set(variables(e.lhs)) | set(variables(e.rhs)) <= set("xyz")


def test_lemma_suites_partition_catalog():
    n, b = lemma_suite("nelson"), lemma_suite("brignole")
    assert {x.id for x in n} | {x.id for x in b} == {x.id for x in lemma_catalog()}
    assert all(x.id.startswith(("L1.", "L2.")) for x in n)
    assert all(x.id.startswith(("L4.", "L5.")) for x in b)


def test_both_independence_lists_recorded():
    assert INDEPENDENCE_MODELS == ("B1", "B3", "B5", "B6", "B9")
    assert INDEPENDENCE_CLAIMED == ("B1", "B3", "B5", "B7", "B9")


def test_dump_lists_everything():
    text = dump()
    for i in all_ids():
        if i == lookup(i).id:
            assert re.search(rf"^{re.escape(i)} \[", text, re.M)
    assert "def 1 = 0 ->> 0" in text


# ---------------------------------------------------------------------------
# cross-reference: ids used by fixtures are exactly catalog ids


def _prf_ids():
    ids = set()
    for name in list_fixtures():
        if name.endswith(".prf"):
            for line in load_proof(fixture_path(name)).lines:
                j = line.justification
                if j.kind in ("axiom", "lemma"):
                    ids.add(j.ref)
    return ids


def test_proof_fixture_ids_resolve():
    ids = _prf_ids()
    assert ids
    for i in ids:
        lookup(i)


@pytest.mark.parametrize("name,expected", [
    ("nelson.eqs", nelson_axioms()),
    ("brignole.eqs", brignole_axioms()),
    ("reduced.eqs", reduced_brignole_axioms()),
])
def test_equation_set_fixtures_match_catalog(name, expected):
    es = load_equation_set(fixture_path(name))
    assert es.ids() == [a.id for a in expected]
    for got, a in zip(es.hold, expected):
        assert got.equation == a.equation, a.id
    assert es.fail == []


# ---------------------------------------------------------------------------
# semantic corroboration on small models


def test_brignole_lemmas_hold_in_small_models(brignole_models):
    violations = [(ne.id, A.name) for A in brignole_models for ne in lemma_suite("brignole")
                  if not check_identity(A, ne.equation).holds]
    assert violations == []


def test_nelson_lemmas_hold_in_small_models(nelson_models):
    violations = [(ne.id, A.name) for A in nelson_models for ne in lemma_suite("nelson")
                  if not check_identity(A, ne.equation).holds]
    assert violations == []


def test_lemma_catalog_is_not_vacuous():
    # sanity: a catalog entry can fail in a non-model (B1 fixture breaks L4.l)
    from brignole.bundled import load_fixture
    A = load_fixture("b1_fail.alg")
    assert not all(check_identity(A, ne.equation).holds for ne in lemma_suite("brignole"))
