import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from brignole.catalog import definitions, lookup
from brignole.terms import (BRIGNOLE, BRIGNOLE_EXT, NELSON, NELSON_EXT, App, Const, Equation,
                            ParseError, Signature, Var, alpha_equal, app, apply_substitution,
                            expand_definitions, format_equation, format_term, match_pattern,
                            parse_equation, parse_term, positions, replace_at, subterm_at,
                            variables)

x, y, z = Var("x"), Var("y"), Var("z")
ZERO, ONE = Const("0"), Const("1")


def imp(a, b):
    return app("->>", a, b)


def meet(a, b):
    return app("^", a, b)


def neg(a):
    return app("~", a)


# ---------------------------------------------------------------------------
# parsing


def test_parse_b1_lhs():
    assert parse_term("(x ->> x) ->> y") == imp(imp(x, x), y)


def test_parse_constant():
    assert parse_term("0") == ZERO


def test_parse_b3_lhs():
    assert parse_term("x ^ ~(x ^ ~y)") == meet(x, neg(meet(x, neg(y))))


def test_precedence_meet_binds_tighter_than_implication():
    assert parse_term("x ^ y ->> z") == imp(meet(x, y), z)
    assert parse_term("x ->> y ^ z") == imp(x, meet(y, z))


def test_precedence_join_between_meet_and_implication():
    assert parse_term("x v y ^ z -> u") == app("->", app("v", x, meet(y, z)), Var("u"))


def test_implication_is_right_associative():
    assert parse_term("x ->> y ->> z") == imp(x, imp(y, z))
    assert parse_term("x -> y ->> z") == app("->", x, imp(y, z))


def test_meet_and_join_are_left_associative():
    assert parse_term("x ^ y ^ z") == meet(meet(x, y), z)
    assert parse_term("x v y v z") == app("v", app("v", x, y), z)


def test_negation_binds_tightest():
    assert parse_term("~x ^ y") == meet(neg(x), y)
    assert parse_term("~~x") == neg(neg(x))
    assert parse_term("!x ->> 0") == imp(app("!", x), ZERO)


def test_parse_equation_b1():
    e = parse_equation("(x ->> x) ->> y = y")
    assert e == Equation(imp(imp(x, x), y), y)
    assert e == lookup("B1").equation


def test_parse_reflexive_equation():
    assert parse_equation("x = x") == Equation(x, x)


def test_parse_meet_zero_goal():
    assert parse_equation("x ^ 0 = 0") == Equation(meet(x, ZERO), ZERO)


def test_missing_equals():
    with pytest.raises(ParseError, match="missing '='"):
        parse_equation("x ->> y")


def test_syntax_error_reports_offset():
    with pytest.raises(ParseError) as info:
        parse_term("x ^ (y ->> )")
    assert info.value.offset == 11
    with pytest.raises(ParseError) as info:
        parse_term("x $ y")
    assert info.value.offset == 2


def test_unknown_operation_in_signature():
    with pytest.raises(ParseError, match="unknown operation"):
        parse_term("x ->> y", NELSON)
    with pytest.raises(ParseError, match="unknown operation"):
        parse_term("~x", BRIGNOLE)
    with pytest.raises(ParseError, match="unknown constant"):
        parse_term("1", BRIGNOLE)


def test_arity_mismatch():
    sig = Signature("odd", (("^", 1),), ())
    with pytest.raises(ParseError, match="arity"):
        parse_term("x ^ y", sig)


def test_reserved_names_are_not_variables():
    with pytest.raises(ParseError):
        parse_term("v ^ x")


def test_trailing_garbage():
    with pytest.raises(ParseError, match="unexpected token"):
        parse_term("x y")


def test_signature_validation():
    with pytest.raises(ValueError):
        Signature("bad", (("^", 2), ("^", 2)), ())
    with pytest.raises(ValueError):
        Signature("bad", (("^", 0),), ())
    with pytest.raises(ValueError):
        Signature("bad", (("c", 1),), ("c",))


# ---------------------------------------------------------------------------
# printing and round trips


def test_format_simple():
    assert format_term(imp(x, ZERO)) == "x ->> 0"
    assert format_term(lookup("B1").equation.lhs) == "(x ->> x) ->> y"
    assert format_term(neg(meet(x, y))) == "~(x ^ y)"


def test_format_b6_round_trip():
    e = lookup("B6").equation
    assert parse_equation(format_equation(e)) == e


def terms(sig=BRIGNOLE_EXT, max_leaves=30):
    leaves = st.sampled_from([Var("x"), Var("y"), Var("z"), Var("u")]
                             + [Const(c) for c in sig.constants])
    ops = list(sig.operations)

    def extend(children):
        choices = []
        for op, k in ops:
            choices.append(st.tuples(*[children] * k).map(lambda args, op=op: App(op, args)))
        return st.one_of(choices)

    return st.recursive(leaves, extend, max_leaves=max_leaves)


def depth(t):
    return 1 + max((depth(a) for a in t.args), default=0) if isinstance(t, App) else 1


@settings(max_examples=300)
@given(terms())
def test_parse_format_round_trip(t):
    assert parse_term(format_term(t)) == t


@settings(max_examples=100)
@given(terms(NELSON_EXT))
def test_parse_format_round_trip_nelson(t):
    assert parse_term(format_term(t), NELSON_EXT) == t


def test_round_trip_depth_eight():
    t = x
    for i in range(8):
        t = imp(meet(t, neg(y)), app("v", ZERO, t)) if i % 2 else app("->", t, app("!", z))
    assert depth(t) >= 8
    assert parse_term(format_term(t)) == t


# ---------------------------------------------------------------------------
# substitution and matching


def test_substitution_example():
    assert apply_substitution(imp(x, y), {"x": ZERO, "y": ZERO}) == imp(ZERO, ZERO)


def test_empty_substitution():
    t = lookup("B6").equation.lhs
    assert apply_substitution(t, {}) == t


def test_substitution_is_simultaneous():
    b1 = lookup("B1").equation.lhs
    assert apply_substitution(b1, {"x": y}) == imp(imp(y, y), y)
    assert apply_substitution(imp(x, y), {"x": y, "y": x}) == imp(y, x)


def naive_subst(t, s):
    if isinstance(t, Var):
        return s.get(t.name, t)
    if isinstance(t, Const):
        return t
    return App(t.op, tuple(naive_subst(a, s) for a in t.args))


@given(terms(), st.dictionaries(st.sampled_from("xyzu"), terms(max_leaves=5), max_size=4))
def test_substitution_matches_naive(t, s):
    assert apply_substitution(t, s) == naive_subst(t, s)


def test_match_ground_b1():
    a = Var("a")
    assert match_pattern(imp(imp(x, x), y), imp(imp(a, a), ZERO)) == {"x": a, "y": ZERO}


def test_match_variable_pattern():
    t = lookup("B3").equation.lhs
    assert match_pattern(x, t) == {"x": t}


def test_match_conflict():
    assert match_pattern(imp(x, x), imp(ZERO, ONE)) is None


def test_match_constant_mismatch():
    assert match_pattern(imp(x, ZERO), imp(y, ONE)) is None


@given(terms(max_leaves=12), st.dictionaries(st.sampled_from("xyzu"), terms(max_leaves=5)))
def test_match_recovers_substitution(p, s):
    subject = apply_substitution(p, s)
    m = match_pattern(p, subject)
    assert m is not None
    vs = variables(p)
    assert set(m) == set(vs)
    for v in vs:
        assert m[v] == s.get(v, Var(v))


# ---------------------------------------------------------------------------
# positions


def test_replace_and_subterm_examples():
    assert replace_at(imp(x, y), (1,), ZERO) == imp(x, ZERO)
    assert subterm_at(imp(imp(x, x), y), (0,)) == imp(x, x)


def count_nodes(t):
    return 1 + sum(count_nodes(a) for a in t.args) if isinstance(t, App) else 1


def test_positions_of_b3_lhs():
    t = lookup("B3").equation.lhs
    ps = positions(t)
    # x ^ ~(x ^ ~y) has seven nodes: ^, x, ~, ^, x, ~, y
    assert len(ps) == count_nodes(t) == 7
    assert ps[0] == () and len(set(ps)) == len(ps)


def test_positions_preorder():
    t = parse_term("(x ->> y) ^ ~z")
    assert positions(t) == [(), (0,), (0, 0), (0, 1), (1,), (1, 0)]


def test_invalid_position():
    with pytest.raises(IndexError):
        subterm_at(imp(x, y), (2,))
    with pytest.raises(IndexError):
        replace_at(x, (0,), y)


@given(terms())
def test_replace_with_own_subterm_is_identity(t):
    for p in positions(t):
        assert replace_at(t, p, subterm_at(t, p)) == t


# ---------------------------------------------------------------------------
# alpha equality


def test_alpha_equal_examples():
    assert alpha_equal(parse_equation("x ->> x = 1"), parse_equation("y ->> y = 1"))
    assert not alpha_equal(parse_equation("x ->> y = y"), parse_equation("x ->> x = x"))
    e = parse_equation("(x ->> 0) ->> 0 = x")
    assert alpha_equal(e, apply_substitution_eq(e, {"x": z}))


def apply_substitution_eq(e, s):
    return Equation(apply_substitution(e.lhs, s), apply_substitution(e.rhs, s))


def test_alpha_equal_is_orientation_sensitive():
    e = parse_equation("x ^ 0 = 0")
    assert not alpha_equal(e, e.swapped())
    assert alpha_equal(e.swapped(), parse_equation("0 = y ^ 0"))


@given(terms(max_leaves=10), terms(max_leaves=10))
def test_alpha_equal_equivalence(a, b):
    e = Equation(a, b)
    renamed = apply_substitution_eq(e, {"x": Var("p"), "y": Var("q"), "z": Var("r"), "u": Var("s")})
    assert alpha_equal(e, e)
    assert alpha_equal(e, renamed) and alpha_equal(renamed, e)
    back = apply_substitution_eq(renamed, {"p": x, "q": y, "r": z, "s": Var("u")})
    assert alpha_equal(renamed, back) and alpha_equal(e, back)


# ---------------------------------------------------------------------------
# definitions


def test_expand_negation():
    assert expand_definitions(parse_term("~x"), definitions("brignole")) == parse_term("x ->> 0")


def test_expand_join():
    got = expand_definitions(parse_term("x v y"), definitions("brignole"))
    assert got == parse_term("((x ->> 0) ^ (y ->> 0)) ->> 0")


def test_expand_weak_implication():
    got = expand_definitions(parse_term("x -> y"), definitions("brignole"))
    assert got == parse_term("x ->> (x ->> y)")


def test_expand_nelson_strong_implication():
    got = expand_definitions(parse_term("x ->> y", NELSON_EXT), definitions("nelson"))
    assert got == parse_term("(x -> y) ^ (~y -> ~x)", NELSON)


def test_expand_nested_and_constants():
    got = expand_definitions(parse_term("~1"), definitions("brignole"))
    assert got == parse_term("(0 ->> 0) ->> 0")
    got = expand_definitions(parse_term("!x"), definitions("brignole"))
    # !x := x -> ~1, all the way down to ->> and 0
    inner = parse_term("(0 ->> 0) ->> 0")
    assert got == imp(x, imp(x, inner))


@given(terms())
def test_expansion_is_idempotent_and_primitive(t):
    defs = definitions("brignole")
    once = expand_definitions(t, defs)
    assert expand_definitions(once, defs) == once
    parse_term(format_term(once), BRIGNOLE)  # only primitive symbols remain


def test_expansion_of_unknown_symbol():
    sig = BRIGNOLE_EXT.extend("odd", (("#", 1),))
    with pytest.raises(KeyError):
        expand_definitions(App("#", (x,)), definitions("brignole"))
    assert sig.has_symbol("#")
