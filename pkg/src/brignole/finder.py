"""Finite model search for sets of equations (Mace4-style).

The search fills operation tables cell by cell.  Every must-hold equation
is grounded over all variable tuples; each ground instance is compiled into
two small side-evaluators that either return an element or report the open
cell blocking them.  An instance is re-examined only when the cell it is
blocked on gets a value ("watching").  When one side is known and the other
side is blocked only at its top cell, that cell is forced.

Symmetry is reduced with the least number heuristic: elements not mentioned
by any decision so far are interchangeable, so a decision may only touch
the first few of them.
"""
from __future__ import annotations

import itertools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .algebra import FiniteAlgebra, build_algebra, canonical_form, check_identity
from .catalog import NamedEquation, definitions_for
from .terms import Const, Equation, Signature, Term, Var, format_equation, symbols

DEFAULT_NODE_BUDGET = 10 ** 8
DEFAULT_TIME_BUDGET = 300.0
CANONICAL_MAX_N = 8  # isomorphism dedup is skipped above this size


class BudgetExhausted(Exception):
    pass


@dataclass
class SearchProblem:
    signature: Signature
    size: int
    hold: list  # Equations or NamedEquations
    fail: list = field(default_factory=list)
    max_solutions: Optional[int] = None
    node_budget: int = DEFAULT_NODE_BUDGET
    time_budget: float = DEFAULT_TIME_BUDGET
    iso_dedup: bool = True
    symmetry_breaking: bool = True

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("domain size must be >= 1")
        if self.node_budget <= 0 or self.time_budget <= 0:
            raise ValueError("budgets must be positive")
        if self.max_solutions is not None and self.max_solutions <= 0:
            raise ValueError("max_solutions must be positive")


@dataclass
class SearchStats:
    nodes: int = 0
    propagations: int = 0
    solutions_raw: int = 0
    seconds: float = 0.0

    def merge(self, other: "SearchStats"):
        self.nodes += other.nodes
        self.propagations += other.propagations
        self.solutions_raw += other.solutions_raw


@dataclass
class SearchResult:
    models: list
    status: str  # "complete", "limit" (max_solutions reached) or "exhausted"
    stats: SearchStats
    size: int = 0

    @property
    def exhausted(self) -> bool:
        return self.status == "exhausted"


def _equation(e) -> Equation:
    return e.equation if isinstance(e, NamedEquation) else e


def _expand_for(sig: Signature, e: Equation) -> Equation:
    needed = symbols(e.lhs) | symbols(e.rhs)
    if all(sig.has_symbol(s) for s in needed):
        return e
    return definitions_for(sig).expand_equation(e)


# ---------------------------------------------------------------------------
# Code generation for ground-instance side evaluators
#
# A side evaluator returns the element value if every cell it reads is
# assigned.  Otherwise it returns -(e + 1) with e = 2 * cell when the open
# cell is the top cell of the side, and e = 2 * cell + 1 when it is inside.


def _gen_side(t: Term, n: int, base: dict, const_cell: dict, varmap: dict,
              lines: list, cse: dict, top: bool) -> str:
    if isinstance(t, Var):
        return varmap[t.name]
    key = t
    if key in cse and not top:
        return cse[key]
    if isinstance(t, Const):
        cell = str(const_cell[t.name])
    else:
        args = [_gen_side(a, n, base, const_cell, varmap, lines, cse, False) for a in t.args]
        idx = args[0]
        for a in args[1:]:
            idx = f"({idx})*{n}+{a}"
        cell = f"{base[t.op]}+{idx}"
    k = len(lines)
    lines.append(f"c{k} = {cell}")
    lines.append(f"v{k} = val[c{k}]")
    code = f"-2*c{k}-1" if top else f"-2*c{k}-2"
    lines.append(f"if v{k} < 0: return {code}")
    cse[key] = f"v{k}"
    return f"v{k}"


def _compile_side(t: Term, n: int, base: dict, const_cell: dict, vs: list):
    varmap = {v: f"a{i}" for i, v in enumerate(vs)}
    lines: list = []
    res = _gen_side(t, n, base, const_cell, varmap, lines, {}, True)
    params = ", ".join(["val"] + [f"a{i}" for i in range(len(vs))])
    src = f"def side({params}):\n" + "".join(f"    {l}\n" for l in lines) + f"    return {res}\n"
    ns: dict = {}
    exec(src, ns)
    return ns["side"]


# ---------------------------------------------------------------------------
# Search engine


class _Layout:
    """Cell numbering: constants first, then each table row-major."""

    def __init__(self, sig: Signature, n: int):
        self.sig, self.n = sig, n
        self.base: dict = {}
        self.const_cell: dict = {}
        self.cell_op: list = []  # per cell: (op or constant name, index tuple)
        c = 0
        for name in sig.constants:
            self.const_cell[name] = c
            self.cell_op.append((name, ()))
            c += 1
        for op, k in sig.operations:
            self.base[op] = c
            for args in itertools.product(range(n), repeat=k):
                self.cell_op.append((op, args))
            c += n ** k
        self.ncells = c

    def to_algebra(self, values: list, name: str) -> FiniteAlgebra:
        tables = {}
        for op, k in self.sig.operations:
            b = self.base[op]
            tables[op] = values[b:b + self.n ** k]
        consts = {name_: values[c] for name_, c in self.const_cell.items()}
        return build_algebra(name, self.n, self.sig, tables, consts)


class _Engine(_Layout):
    def __init__(self, p: SearchProblem, deadline: float):
        super().__init__(p.signature, p.size)
        self.p = p
        sig = p.signature
        n = self.n
        c = self.ncells
        self.deadline = deadline
        self.val = [-1] * c
        self.watch = [[] for _ in range(c)]
        self.trail: list = []  # assigned cells
        self.wtrail: list = []  # cells whose watch list grew
        self.stats = SearchStats()
        # instances
        self.inst_l: list = []
        self.inst_r: list = []
        self.inst_args: list = []
        self.inst_fail: list = []  # -1 for must-hold, else index of must-fail equation
        self.fail_alive: list = []
        self.fail_witnessed: list = []
        self.ftrail: list = []  # (kind, index, old value)
        self.hold = [_expand_for(sig, _equation(e)) for e in p.hold]
        self.fail = [_expand_for(sig, _equation(e)) for e in p.fail]
        for eqs, kind in ((self.hold, None), (self.fail, True)):
            for j, e in enumerate(eqs):
                vs = e.variables()
                L = _compile_side(e.lhs, n, self.base, self.const_cell, vs)
                R = _compile_side(e.rhs, n, self.base, self.const_cell, vs)
                count = 0
                for tup in itertools.product(range(n), repeat=len(vs)):
                    self.inst_l.append(L)
                    self.inst_r.append(R)
                    self.inst_args.append(tup)
                    self.inst_fail.append(j if kind else -1)
                    count += 1
                if kind:
                    self.fail_alive.append(count)
                    self.fail_witnessed.append(False)
        # element bookkeeping for symmetry breaking
        self.mentioned = 0  # number of elements 0..mx mentioned by decisions
        self.sym = p.symmetry_breaking

    # -- assignment and propagation ---------------------------------------

    def _assign(self, c: int, v: int):
        self.val[c] = v
        self.trail.append(c)

    def _examine(self, i: int, queue: list) -> bool:
        """Re-evaluate instance ``i``; return False on conflict."""
        args = self.inst_args[i]
        val = self.val
        l = self.inst_l[i](val, *args)
        r = self.inst_r[i](val, *args)
        j = self.inst_fail[i]
        if l >= 0 and r >= 0:
            if j < 0:
                return l == r
            return self._fail_settled(j, l != r)
        if j >= 0 and self.fail_witnessed[j]:
            return True
        if l < 0 and r < 0:
            el, er = -l - 1, -r - 1
            if el == er and not (el & 1):
                # both sides are the same open top cell: always equal
                if j < 0:
                    return True
                return self._fail_settled(j, False)
            c = el >> 1
            self.watch[c].append(i)
            self.wtrail.append(c)
            return True
        if j < 0:
            known, blocked = (l, r) if l >= 0 else (r, l)
            e = -blocked - 1
            c = e >> 1
            if not (e & 1):
                self._assign(c, known)
                queue.append(c)
                return True
        else:
            e = -(l if l < 0 else r) - 1
            c = e >> 1
        self.watch[c].append(i)
        self.wtrail.append(c)
        return True

    def _fail_settled(self, j: int, unequal: bool) -> bool:
        if self.fail_witnessed[j]:
            return True
        if unequal:
            self.fail_witnessed[j] = True
            self.ftrail.append((1, j, False))
            return True
        self.ftrail.append((0, j, self.fail_alive[j]))
        self.fail_alive[j] -= 1
        return self.fail_alive[j] > 0

    def _propagate(self, queue: list) -> bool:
        watch = self.watch
        while queue:
            c = queue.pop()
            lst = watch[c]
            self.stats.propagations += 1
            for k in range(len(lst)):
                if not self._examine(lst[k], queue):
                    return False
        return True

    def _initial(self) -> bool:
        queue: list = []
        for i in range(len(self.inst_args)):
            if not self._examine(i, queue):
                return False
        return self._propagate(queue)

    def _mark(self):
        return (len(self.trail), len(self.wtrail), len(self.ftrail), self.mentioned)

    def _undo(self, mark):
        t, w, f, m = mark
        val = self.val
        trail = self.trail
        while len(trail) > t:
            val[trail.pop()] = -1
        wtrail, watch = self.wtrail, self.watch
        while len(wtrail) > w:
            watch[wtrail.pop()].pop()
        ftrail = self.ftrail
        while len(ftrail) > f:
            kind, j, old = ftrail.pop()
            if kind:
                self.fail_witnessed[j] = old
            else:
                self.fail_alive[j] = old
        self.mentioned = m

    # -- branching -------------------------------------------------------

    def _options(self, c: int) -> Optional[list]:
        """Values allowed for open cell ``c``, or None if not eligible now."""
        n = self.n
        if not self.sym:
            return range(n)
        mx = self.mentioned  # elements below mx are no longer interchangeable
        new = sorted({a for a in self.cell_op[c][1] if a >= mx})
        if new and new[-1] != mx + len(new) - 1:
            return None
        return range(min(n, mx + len(new) + 1))

    def _select(self):
        best = None
        best_opts = None
        val = self.val
        watch = self.watch
        best_key = None
        for c in range(self.ncells):
            if val[c] >= 0:
                continue
            opts = self._options(c)
            if opts is None:
                continue
            key = (len(opts), -len(watch[c]))
            if best is None or key < best_key:
                best, best_opts, best_key = c, opts, key
                if len(opts) <= 1:
                    break
        return best, best_opts

    def _decide(self, c: int, v: int) -> bool:
        if self.sym:
            idx = self.cell_op[c][1]
            top = max(idx + (v,))
            if top + 1 > self.mentioned:
                self.mentioned = top + 1
        self._assign(c, v)
        return self._propagate([c])

    def _check_budget(self):
        s = self.stats
        s.nodes += 1
        if s.nodes > self.p.node_budget:
            raise BudgetExhausted("node budget exhausted")
        if (s.nodes & 255) == 0 and time.monotonic() > self.deadline:
            raise BudgetExhausted("time budget exhausted")

    def search(self, emit, prefix: Sequence = ()) -> None:
        """Depth-first search; ``emit(tables)`` returns False to stop."""
        if not self._initial():
            return
        for c, v in prefix:
            if self.val[c] >= 0:
                if self.val[c] != v:
                    return
                continue
            if not self._decide(c, v):
                return
        self._dfs(emit)

    def _dfs(self, emit) -> bool:
        self._check_budget()
        c, opts = self._select()
        if c is None:
            if -1 in self.val:
                raise RuntimeError("no eligible open cell; symmetry bookkeeping is broken")
            self.stats.solutions_raw += 1
            return emit(list(self.val))
        for v in opts:
            mark = self._mark()
            ok = self._decide(c, v)
            if ok and not self._dfs(emit):
                return False
            self._undo(mark)
        return True

    def first_branch(self):
        """The first decision cell after root propagation and its options."""
        if not self._initial():
            return None, [], []
        forced = []
        while True:
            c, opts = self._select()
            if c is None or len(opts) != 1:
                return c, opts, forced
            forced.append((c, opts[0]))
            if not self._decide(c, opts[0]):
                return None, [], forced


def _run(problem: SearchProblem, prefix=(), deadline: Optional[float] = None):
    """Search one subtree.  Returns (list of table vectors, stats, status)."""
    if deadline is None:
        deadline = time.monotonic() + problem.time_budget
    eng = _Engine(problem, deadline)
    found: list = []
    seen: set = set()

    def emit(values):
        if problem.iso_dedup and problem.size <= CANONICAL_MAX_N:
            A = eng.to_algebra(values, "m")
            key = canonical_form(A).key()
            if key in seen:
                return True
            seen.add(key)
        found.append(values)
        return problem.max_solutions is None or len(found) < problem.max_solutions

    status = "complete"
    t0 = time.monotonic()
    try:
        eng.search(emit, prefix)
        if problem.max_solutions is not None and len(found) >= problem.max_solutions:
            status = "limit"
    except BudgetExhausted:
        status = "exhausted"
    eng.stats.seconds = time.monotonic() - t0
    return found, eng.stats, status


def _run_job(args):
    return _run(*args)


def enumerate_models(p: SearchProblem, workers: int = 1, name: str = "model") -> SearchResult:
    """All models of ``p`` (up to isomorphism when ``p.iso_dedup``).

    Every returned algebra is re-checked by brute force against each
    must-hold and must-fail equation before it is returned.
    """
    t0 = time.monotonic()
    deadline = t0 + p.time_budget
    stats = SearchStats()
    if workers <= 1:
        vectors, st, status = _run(p, (), deadline)
        stats.merge(st)
    else:
        probe = _Engine(p, deadline)
        c, opts, forced = probe.first_branch()
        if c is None:
            vectors, st, status = _run(p, (), deadline)
            stats.merge(st)
        else:
            jobs = [(p, tuple(forced) + ((c, v),), deadline) for v in opts]
            vectors, status = [], "complete"
            with ProcessPoolExecutor(max_workers=workers) as ex:
                for vs, st, s in ex.map(_run_job, jobs):
                    vectors.extend(vs)
                    stats.merge(st)
                    if s == "exhausted":
                        status = "exhausted"
                    elif s == "limit" and status == "complete":
                        status = "limit"
    layout = _Layout(p.signature, p.size)
    models = []
    keys = set()
    for vs in vectors:
        A = layout.to_algebra(vs, name)
        if p.iso_dedup and p.size <= CANONICAL_MAX_N:
            A = canonical_form(A)
            k = A.key()
            if k in keys:
                continue
            keys.add(k)
        _verify(A, p)
        models.append(A)
    models.sort(key=lambda A: A.key())
    if p.max_solutions is not None and len(models) > p.max_solutions:
        models = models[:p.max_solutions]
        status = "limit" if status == "complete" else status
    for i, A in enumerate(models):
        object.__setattr__(A, "name", f"{name}_{p.size}_{i}" if len(models) > 1 else f"{name}_{p.size}")
    stats.seconds = time.monotonic() - t0
    return SearchResult(models, status, stats, p.size)


def _verify(A: FiniteAlgebra, p: SearchProblem):
    for e in p.hold:
        if not check_identity(A, _equation(e)).holds:
            raise AssertionError(f"search produced a model violating {format_equation(_equation(e))}")
    for e in p.fail:
        if check_identity(A, _equation(e)).holds:
            raise AssertionError(f"search produced a model satisfying {format_equation(_equation(e))}")


@dataclass
class CounterexampleResult:
    model: Optional[FiniteAlgebra]
    size_reached: int
    status: str  # "found", "none" (exhaustive up to max_n) or "exhausted"
    per_size: list = field(default_factory=list)  # SearchResult per size tried


def find_counterexample(hold: list, fail, max_n: int, signature: Signature,
                        min_n: int = 1, node_budget: int = DEFAULT_NODE_BUDGET,
                        time_budget: float = DEFAULT_TIME_BUDGET,
                        workers: int = 1, name: str = "counterexample") -> CounterexampleResult:
    """Smallest model (size ``min_n..max_n``) of ``hold`` that falsifies ``fail``."""
    fail_eq = _equation(fail)
    if any(_equation(h) == fail_eq for h in hold):
        raise ValueError("the equation to falsify is among the equations to hold")
    per = []
    for n in range(min_n, max_n + 1):
        p = SearchProblem(signature, n, list(hold), [fail], max_solutions=1,
                          node_budget=node_budget, time_budget=time_budget)
        res = enumerate_models(p, workers=workers, name=name)
        per.append(res)
        if res.models:
            return CounterexampleResult(res.models[0], n, "found", per)
        if res.exhausted:
            return CounterexampleResult(None, n, "exhausted", per)
    return CounterexampleResult(None, max_n, "none", per)
