"""Checking numbered equational proofs.

A proof script is a list of lines ``<idx>: <equation> ; <justification>``.
Justifications are an axiom instance, a definition, a lemma from the lemma
store, or ``by i [j]``: the claim follows from cited earlier lines by at
most ``depth`` rewrite steps.

``by`` lines are checked backwards.  Starting from the claim, cited
equations are applied as rewrite rules (either orientation, any side, any
position, one-way matching).  Rule variables that the match leaves unbound
become *holes*, placeholders for terms the forward proof chose.  The search
stops when the current equation unifies with a cited line (holes and the
cited line's variables are the unknowns; the claim's own variables are
rigid) or when its two sides unify with each other.  Every success is
turned into a :class:`StepCertificate` whose replay needs nothing beyond
substitution and subterm replacement.
"""
from __future__ import annotations

import functools
import itertools
import re
import time
from dataclasses import dataclass, field
from typing import Iterable, Optional

from . import catalog
from .algebra import check_identity
from .terms import (BRIGNOLE, BRIGNOLE_EXT, App, Equation, ParseError, Term, Var,
                    alpha_equal, apply_substitution, format_equation, format_term,
                    match_pattern, parse_equation, positions, replace_at,
                    subterm_at, variables)

DEFAULT_DEPTH = 2
LEMMA_CHECK_SIZE = 4


class ProofSyntaxError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


# ---------------------------------------------------------------------------
# Scripts


@dataclass(frozen=True)
class Justification:
    kind: str  # "axiom", "def", "lemma" or "by"
    ref: str = ""  # axiom id, defined symbol or lemma id
    cites: tuple = ()

    def __str__(self):
        if self.kind == "by":
            return "by " + " ".join(str(c) for c in self.cites)
        return f"{self.kind} {self.ref}"


@dataclass(frozen=True)
class ProofLine:
    index: int
    claim: Equation
    justification: Justification
    source_line: int = 0  # line number in the script file


@dataclass
class ProofScript:
    name: str
    goal: Optional[Equation]
    lines: list


_LINE = re.compile(r"^(\d+)\s*:\s*(.*?)\s*;\s*(.*)$")


def parse_justification(text: str, lineno: int) -> Justification:
    words = text.split()
    if not words:
        raise ProofSyntaxError("missing justification", lineno)
    kind = words[0]
    if kind in ("axiom", "def", "lemma"):
        if len(words) != 2:
            raise ProofSyntaxError(f"'{kind}' takes exactly one argument", lineno)
        return Justification(kind, words[1])
    if kind == "by":
        if not 2 <= len(words) <= 3 or not all(w.isdigit() for w in words[1:]):
            raise ProofSyntaxError("'by' takes one or two line numbers", lineno)
        return Justification("by", cites=tuple(int(w) for w in words[1:]))
    raise ProofSyntaxError(f"unknown justification {kind!r}", lineno)


def parse_proof(text: str) -> ProofScript:
    name = "proof"
    goal = None
    lines: list = []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        s = raw.split("#", 1)[0].strip()
        if not s:
            continue
        if s.startswith("proof "):
            name = s[6:].strip()
            continue
        if s.startswith("goal "):
            try:
                goal = parse_equation(s[5:], BRIGNOLE_EXT)
            except ParseError as e:
                raise ProofSyntaxError(f"goal: {e}", lineno) from None
            continue
        m = _LINE.match(s)
        if not m:
            raise ProofSyntaxError("expected '<idx>: <equation> ; <justification>'", lineno)
        idx = int(m.group(1))
        if idx in seen:
            raise ProofSyntaxError(f"duplicate line index {idx}", lineno)
        if lines and idx <= lines[-1].index:
            raise ProofSyntaxError("line indices must increase", lineno)
        try:
            claim = parse_equation(m.group(2), BRIGNOLE_EXT)
        except ParseError as e:
            raise ProofSyntaxError(str(e), lineno) from None
        just = parse_justification(m.group(3), lineno)
        for c in just.cites:
            if c >= idx:
                raise ProofSyntaxError(f"line {idx} cites line {c}, which is not earlier", lineno)
            if c not in seen:
                raise ProofSyntaxError(f"line {idx} cites unknown line {c}", lineno)
        seen.add(idx)
        lines.append(ProofLine(idx, claim, just, lineno))
    return ProofScript(name, goal, lines)


def format_proof(script: ProofScript) -> str:
    out = [f"proof {script.name}"]
    if script.goal is not None:
        out.append(f"goal {format_equation(script.goal)}")
    for ln in script.lines:
        out.append(f"{ln.index}: {format_equation(ln.claim)} ; {ln.justification}")
    return "\n".join(out) + "\n"


def load_proof(path) -> ProofScript:
    with open(path) as fh:
        return parse_proof(fh.read())


# ---------------------------------------------------------------------------
# Lemma store


@dataclass
class LemmaEntry:
    id: str
    equation: Equation
    trust: str  # "model-checked", "proved:<script>" or "refuted:<model>"
    note: str = ""

    @property
    def usable(self) -> bool:
        return not self.trust.startswith("refuted")


@functools.lru_cache(maxsize=None)
def reduced_models(max_size: int = LEMMA_CHECK_SIZE) -> tuple:
    """All models of the reduced axiom set with at most ``max_size`` elements."""
    from .finder import SearchProblem, enumerate_models
    models = []
    for n in range(1, max_size + 1):
        res = enumerate_models(SearchProblem(BRIGNOLE, n, catalog.reduced_brignole_axioms()),
                               name="reduced")
        models.extend(res.models)
    return tuple(models)


def validate_lemma(entry: LemmaEntry, max_size: int = LEMMA_CHECK_SIZE) -> Optional[str]:
    """Name of a small model of the reduced axioms refuting the entry, or None."""
    e = catalog.expand(entry.equation, BRIGNOLE)
    for A in reduced_models(max_size):
        if not check_identity(A, e).holds:
            return A.name
    return None


def default_lemma_store(validate: bool = True) -> dict:
    """Lemma-store entries admitted by ``lemma`` lines, keyed by id (aliases too).

    With ``validate`` every entry is checked on all models of the reduced
    axiom set up to size 4; a refuted entry stays in the store but cannot
    justify a line.
    """
    store = {}
    entries = [ne for ne in catalog.lemma_catalog() if ne.signature == BRIGNOLE]
    entries += catalog.auxiliary_lemmas()
    for ne in entries:
        entry = LemmaEntry(ne.id, ne.equation, "model-checked", ne.note)
        if validate:
            bad = validate_lemma(entry)
            if bad is not None:
                entry.trust = f"refuted:{bad}"
        for key in (ne.id,) + ne.aliases:
            store[key] = entry
    return store


# ---------------------------------------------------------------------------
# Unification.  Names starting with "?" (holes, renamed source variables)
# are unknowns; the parser never produces them, so claim variables stay rigid.


def _is_flex(name: str) -> bool:
    return name[0] == "?"


def _walk(t: Term, s: dict) -> Term:
    while isinstance(t, Var) and t.name in s:
        t = s[t.name]
    return t


def _occurs(name: str, t: Term, s: dict) -> bool:
    stack = [t]
    while stack:
        u = _walk(stack.pop(), s)
        if isinstance(u, Var):
            if u.name == name:
                return True
        elif isinstance(u, App):
            stack.extend(u.args)
    return False


def _unify(a: Term, b: Term, s: dict) -> Optional[dict]:
    stack = [(a, b)]
    s = dict(s)
    while stack:
        x, y = stack.pop()
        x, y = _walk(x, s), _walk(y, s)
        if x == y:
            continue
        if isinstance(x, Var) and _is_flex(x.name):
            if _occurs(x.name, y, s):
                return None
            s[x.name] = y
        elif isinstance(y, Var) and _is_flex(y.name):
            if _occurs(y.name, x, s):
                return None
            s[y.name] = x
        elif isinstance(x, App) and isinstance(y, App) and x.op == y.op:
            stack.extend(zip(x.args, y.args))
        else:
            return None
    return s


def _resolve(t: Term, s: dict) -> Term:
    t = _walk(t, s)
    if isinstance(t, App):
        return App(t.op, tuple(_resolve(a, s) for a in t.args))
    return t


# ---------------------------------------------------------------------------
# Certificates


@dataclass
class RewriteHop:
    rule_line: int
    orientation: str  # "lr" rewrites rule.lhs -> rule.rhs, "rl" the reverse
    side: int  # 0 = lhs, 1 = rhs of the current equation
    position: tuple
    substitution: dict  # rule variable -> Term

    def to_dict(self) -> dict:
        return {"rule": self.rule_line, "orientation": self.orientation, "side": self.side,
                "position": list(self.position),
                "substitution": {k: format_term(v) for k, v in sorted(self.substitution.items())}}


@dataclass
class StepCertificate:
    index: int
    kind: str  # "axiom", "def", "lemma", "rewrite", "reflexivity"
    ref: str = ""
    swapped: bool = False  # source used right-to-left
    source_line: Optional[int] = None  # None: start from reflexivity t = t
    substitution: dict = field(default_factory=dict)  # source variable -> Term
    start_term: Optional[Term] = None  # for reflexive starts
    hops: list = field(default_factory=list)  # forward order
    trust: str = ""

    def to_dict(self) -> dict:
        d = {"line": self.index, "kind": self.kind}
        if self.ref:
            d["ref"] = self.ref
        if self.trust:
            d["trust"] = self.trust
        if self.kind in ("axiom", "rewrite"):
            d["swapped"] = self.swapped
            d["source"] = self.source_line if self.source_line is not None else "reflexivity"
            d["substitution"] = {k: format_term(v) for k, v in sorted(self.substitution.items())}
            if self.start_term is not None:
                d["start"] = format_term(self.start_term)
            d["hops"] = [h.to_dict() for h in self.hops]
        return d


def _orient(e: Equation, swapped: bool) -> Equation:
    return e.swapped() if swapped else e


def replay(cert: StepCertificate, proved: dict, claim: Equation) -> bool:
    """Re-derive ``claim`` from a certificate using only substitution and
    subterm replacement.  ``proved`` maps line index -> Equation."""
    if cert.kind == "reflexivity":
        return claim.lhs == claim.rhs
    if cert.kind in ("def", "lemma"):
        return True  # checked by renaming against the table or store
    if cert.kind == "axiom":
        ax = _orient(catalog.lookup(cert.ref).equation, cert.swapped)
        cur = Equation(apply_substitution(ax.lhs, cert.substitution),
                       apply_substitution(ax.rhs, cert.substitution))
        if cur != claim:
            ax = catalog.expand(ax, BRIGNOLE)
            cur = Equation(apply_substitution(ax.lhs, cert.substitution),
                           apply_substitution(ax.rhs, cert.substitution))
        return cur == claim
    if cert.source_line is None:
        cur = Equation(cert.start_term, cert.start_term)
    else:
        src = _orient(proved[cert.source_line], cert.swapped)
        cur = Equation(apply_substitution(src.lhs, cert.substitution),
                       apply_substitution(src.rhs, cert.substitution))
    for hop in cert.hops:
        rule = proved[hop.rule_line]
        frm, to = (rule.lhs, rule.rhs) if hop.orientation == "lr" else (rule.rhs, rule.lhs)
        side = cur.lhs if hop.side == 0 else cur.rhs
        try:
            if subterm_at(side, hop.position) != apply_substitution(frm, hop.substitution):
                return False
        except IndexError:
            return False
        new = replace_at(side, hop.position, apply_substitution(to, hop.substitution))
        cur = Equation(new, cur.rhs) if hop.side == 0 else Equation(cur.lhs, new)
    return cur == claim


# ---------------------------------------------------------------------------
# Search for ``by`` lines


def _prefix_vars(e: Equation, prefix: str) -> Equation:
    ren = {v: Var(prefix + v) for v in e.variables()}
    return Equation(apply_substitution(e.lhs, ren), apply_substitution(e.rhs, ren))


def _canon_holes(e: Equation) -> Equation:
    """Rename holes by order of first occurrence (for duplicate detection)."""
    ren = {}
    for v in variables(e.lhs) + variables(e.rhs):
        if v.startswith("?") and v not in ren:
            ren[v] = Var(f"?{len(ren)}")
    if not ren:
        return e
    return Equation(apply_substitution(e.lhs, ren), apply_substitution(e.rhs, ren))


@dataclass
class _State:
    eq: Equation
    hops: list  # backward hops, latest last: (rule_line, orientation, side, pos, subst)


class _Search:
    def __init__(self, claim: Equation, cited: dict, depth: int, deadline: float):
        self.claim = claim
        self.depth = depth
        self.deadline = deadline
        self.rules = []  # (line, orientation, pattern, replacement, rule vars)
        self.sources = []  # (line, swapped, prefixed equation)
        self.hole_counter = itertools.count()
        for i, eq in cited.items():
            r = _prefix_vars(eq, f"?r{i}_")
            for orient, (a, b) in (("lr", (r.lhs, r.rhs)), ("rl", (r.rhs, r.lhs))):
                self.rules.append((i, orient, a, b, set(variables(a)) | set(variables(b))))
            s = _prefix_vars(eq, f"?s{i}_")
            self.sources.append((i, False, s))
            self.sources.append((i, True, s.swapped()))

    def terminal(self, eq: Equation):
        for i, swapped, s in self.sources:
            u = _unify(s.lhs, eq.lhs, {})
            if u is not None:
                u = _unify(s.rhs, eq.rhs, u)
            if u is not None:
                return (i, swapped, s), u
        u = _unify(eq.lhs, eq.rhs, {})
        if u is not None:
            return None, u
        return False

    def expand(self, st: _State):
        for line, orient, pat, rep, rvars in self.rules:
            pat_is_var = isinstance(pat, Var)
            for side in (0, 1):
                term = st.eq.lhs if side == 0 else st.eq.rhs
                for pos in positions(term):
                    sub = subterm_at(term, pos)
                    if pat_is_var and isinstance(sub, Var) and sub.name.startswith("?"):
                        continue
                    m = match_pattern(pat, sub)
                    if m is None:
                        continue
                    for v in rvars:
                        if v not in m:
                            m[v] = Var(f"?h{next(self.hole_counter)}")
                    new = replace_at(term, pos, apply_substitution(rep, m))
                    eq = Equation(new, st.eq.rhs) if side == 0 else Equation(st.eq.lhs, new)
                    yield _State(eq, st.hops + [(line, orient, side, pos, m)])

    def run(self):
        frontier = [_State(self.claim, [])]
        seen = {_canon_holes(self.claim)}
        for d in range(self.depth + 1):
            for st in frontier:
                t = self.terminal(st.eq)
                if t is not False:
                    return st, t
            if d == self.depth:
                break
            nxt = []
            for st in frontier:
                if time.monotonic() > self.deadline:
                    raise TimeoutError
                for child in self.expand(st):
                    key = _canon_holes(child.eq)
                    if key in seen:
                        continue
                    seen.add(key)
                    nxt.append(child)
            frontier = nxt
        return None


def _certificate_from(index: int, claim: Equation, st: _State, term_info) -> StepCertificate:
    source, unifier = term_info
    # every hole or source variable left unconstrained gets a fresh name
    used = set(claim.variables())
    fresh_names = (f"u{k}" for k in itertools.count(1))

    def fresh():
        for nm in fresh_names:
            if nm not in used:
                used.add(nm)
                return Var(nm)

    def close(t: Term) -> Term:
        t = _resolve(t, unifier)
        for v in variables(t):
            if _is_flex(v):
                if v not in unifier:
                    unifier[v] = fresh()
        return _resolve(t, unifier)

    hops = []
    for line, orient, side, pos, m in reversed(st.hops):
        # backward hop used rule (a -> b); forward replay rewrites b -> a
        fwd = "rl" if orient == "lr" else "lr"
        prefix = f"?r{line}_"
        sub = {k[len(prefix):]: close(v) for k, v in m.items()}
        hops.append(RewriteHop(line, fwd, side, pos, sub))
    if source is None:
        start = close(st.eq.lhs)
        return StepCertificate(index, "rewrite", start_term=start, hops=hops)
    line, swapped, s = source
    prefix = f"?s{line}_"
    subst = {}
    for v in s.variables():
        subst[v[len(prefix):]] = close(Var(v))
    return StepCertificate(index, "rewrite", swapped=swapped, source_line=line,
                           substitution=subst, hops=hops)


# ---------------------------------------------------------------------------
# Verification


class StepError(ValueError):
    def __init__(self, index: int, message: str, near_misses: Iterable = ()):
        super().__init__(f"line {index}: {message}")
        self.index = index
        self.message = message
        self.near_misses = list(near_misses)


def _alpha_either(a: Equation, b: Equation) -> Optional[bool]:
    """False/True for 'equal as is'/'equal after swapping', None otherwise."""
    if alpha_equal(a, b):
        return False
    if alpha_equal(a.swapped(), b):
        return True
    return None


def _instance_of(pattern: Equation, claim: Equation) -> Optional[tuple]:
    for swapped in (False, True):
        p = _orient(pattern, swapped)
        m = match_pattern(p.lhs, claim.lhs)
        if m is not None:
            m = match_pattern(p.rhs, claim.rhs, m)
        if m is not None:
            return swapped, m
    return None


@dataclass
class ProofState:
    proved: dict = field(default_factory=dict)  # line index -> Equation
    lemmas: dict = field(default_factory=default_lemma_store)


def derive(claim: Equation, cited: dict, index: int = 0, depth: int = DEFAULT_DEPTH,
           time_limit: float = 20.0) -> Optional[StepCertificate]:
    """Search for a rewrite derivation of ``claim`` from the ``cited`` equations."""
    search = _Search(claim, cited, depth, time.monotonic() + time_limit)
    try:
        found = search.run()
    except TimeoutError:
        return None
    if found is None:
        return None
    st, info = found
    return _certificate_from(index, claim, st, info)


def verify_step(state: ProofState, line: ProofLine, depth: int = DEFAULT_DEPTH,
                near_miss_window: int = 3) -> StepCertificate:
    claim = line.claim
    j = line.justification
    if claim.lhs == claim.rhs:
        return StepCertificate(line.index, "reflexivity")
    if j.kind == "axiom":
        try:
            ax = catalog.lookup(j.ref)
        except KeyError:
            raise StepError(line.index, f"unknown axiom {j.ref!r}") from None
        if not j.ref.startswith(("B", "N")) or "." in j.ref:
            raise StepError(line.index, f"{j.ref} is not an axiom")
        for pattern in (ax.equation, catalog.expand(ax.equation, ax.signature)):
            found = _instance_of(pattern, claim)
            if found is None:
                found = _instance_of(pattern, catalog.expand(claim, ax.signature))
                if found is not None and pattern is ax.equation:
                    found = None  # expanded claim only pairs with the expanded axiom
            if found is not None:
                swapped, m = found
                cert = StepCertificate(line.index, "axiom", j.ref, swapped, substitution=m)
                if replay(cert, state.proved, claim):
                    return cert
        raise StepError(line.index, f"claim is not an instance of {j.ref}")
    if j.kind == "def":
        defs = catalog.definitions("brignole")
        if j.ref not in defs:
            raise StepError(line.index, f"no definition for symbol {j.ref!r}")
        sw = _alpha_either(defs[j.ref].equation(), claim)
        if sw is None:
            raise StepError(line.index, f"claim is not the definition of {j.ref}")
        return StepCertificate(line.index, "def", j.ref, sw)
    if j.kind == "lemma":
        entry = state.lemmas.get(j.ref)
        if entry is None:
            raise StepError(line.index, f"unknown lemma {j.ref!r}")
        if not entry.usable:
            raise StepError(line.index, f"lemma {j.ref} is {entry.trust}")
        candidates = [(entry.equation, claim),
                      (catalog.expand(entry.equation, BRIGNOLE), catalog.expand(claim, BRIGNOLE))]
        for a, b in candidates:
            sw = _alpha_either(a, b)
            if sw is not None:
                return StepCertificate(line.index, "lemma", j.ref, sw, trust=entry.trust)
        raise StepError(line.index, f"claim does not match lemma {j.ref}")
    # rewrite step
    cited = {}
    for c in j.cites:
        if c not in state.proved:
            raise StepError(line.index, f"cited line {c} is not verified")
        cited[c] = state.proved[c]
    cert = derive(claim, cited, line.index, depth)
    if cert is not None and replay(cert, state.proved, claim):
        return cert
    near = _near_misses(state, line, depth, near_miss_window) if near_miss_window > 0 else []
    msg = f"no derivation from lines {', '.join(map(str, j.cites))} within {depth} rewrite steps"
    raise StepError(line.index, msg, near)


def _near_misses(state: ProofState, line: ProofLine, depth: int, window: int,
                 budget: float = 20.0) -> list:
    """Citation sets close to the given one that do derive the claim.

    First each cited index is shifted by up to ``window``; if that finds
    nothing, one citation is kept and the other replaced by any verified
    line.  Results are reported only, never accepted.
    """
    cites = line.justification.cites
    deadline = time.monotonic() + budget

    def scan(options):
        found = []
        for opt in options:
            remaining = deadline - time.monotonic()
            if remaining <= 0:
                break
            cert = derive(line.claim, {c: state.proved[c] for c in opt}, line.index, depth,
                          time_limit=min(1.0, remaining))
            if cert is not None:
                found.append(opt)
        return found

    shifted = set()
    for k, c in enumerate(cites):
        for delta in range(-window, window + 1):
            alt = c + delta
            if delta == 0 or alt not in state.proved:
                continue
            new = list(cites)
            new[k] = alt
            shifted.add(tuple(sorted(set(new))))
    found = scan(sorted(shifted))
    if found:
        return found
    replaced = []
    for keep in cites:
        for alt in sorted(state.proved):
            opt = tuple(sorted({keep, alt}))
            if opt != tuple(sorted(cites)) and opt not in shifted and opt not in replaced:
                replaced.append(opt)
    return scan(replaced)


@dataclass
class ProofReport:
    name: str
    total: int
    certificates: list
    failures: list  # StepError
    goal_matches: bool
    goal: Optional[Equation] = None
    seconds: float = 0.0

    @property
    def verified(self) -> bool:
        return not self.failures and len(self.certificates) == self.total and self.goal_matches

    def trust_base(self) -> list:
        return sorted({(c.ref, c.trust) for c in self.certificates if c.kind == "lemma"})

    def text(self) -> str:
        lines = [f"proof {self.name}: {len(self.certificates)}/{self.total} lines verified"]
        for ref, trust in self.trust_base():
            lines.append(f"  lemma {ref}: {trust}")
        for f in self.failures:
            lines.append(f"  FAILED {f}")
            if f.near_misses:
                alts = "; ".join("by " + " ".join(map(str, o)) for o in f.near_misses)
                lines.append(f"    nearby citations that derive the claim: {alts}")
        if self.goal is not None:
            lines.append(f"  goal {format_equation(self.goal)}: "
                         + ("matches final line" if self.goal_matches else "NOT matched"))
        lines.append("VERIFIED" if self.verified else "NOT VERIFIED")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {"proof": self.name, "total": self.total,
                "verified_lines": len(self.certificates), "verified": self.verified,
                "goal_matches": self.goal_matches,
                "failures": [{"line": f.index, "message": f.message,
                              "near_misses": [list(o) for o in f.near_misses]}
                             for f in self.failures],
                "certificates": [c.to_dict() for c in self.certificates]}


def verify_proof(script, depth: int = DEFAULT_DEPTH, continue_on_error: bool = False,
                 lemmas: Optional[dict] = None, goal: Optional[Equation] = None,
                 near_misses: bool = True) -> ProofReport:
    """Verify lines in order; the verdict also requires the final claim to
    match the goal up to renaming and side swap.

    ``near_misses=False`` skips the search for alternative citations on a
    failing line, which is the slow part of reporting a failure.
    """
    if isinstance(script, list):
        script = ProofScript("proof", goal, script)
    goal = goal if goal is not None else script.goal
    t0 = time.monotonic()
    state = ProofState(lemmas=lemmas if lemmas is not None else default_lemma_store())
    certs, failures = [], []
    for ln in script.lines:
        try:
            cert = verify_step(state, ln, depth, near_miss_window=3 if near_misses else 0)
        except StepError as e:
            failures.append(e)
            if not continue_on_error:
                break
            continue
        certs.append(cert)
        state.proved[ln.index] = ln.claim
    if goal is None:
        goal_ok = True
    elif not script.lines:
        goal_ok = goal.lhs == goal.rhs
    else:
        goal_ok = _alpha_either(goal, script.lines[-1].claim) is not None
    return ProofReport(script.name, len(script.lines), certs, failures, goal_ok, goal,
                       time.monotonic() - t0)
