"""Independence report for the bundled separating models.

For each bundled model the exact set of failing Brignole axioms is
computed, not assumed.  For the axioms with no bundled model (B7 in
particular) a bounded counterexample search is run and its outcome is
recorded as found, none up to the bound, or budget exhausted.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import all_witnesses, check_axiom_set
from .bundled import load_fixture
from .catalog import INDEPENDENCE_CLAIMED, INDEPENDENCE_MODELS, brignole_axioms, lookup
from .finder import CounterexampleResult, find_counterexample
from .terms import BRIGNOLE

INDEPENDENCE_FIXTURES = {ax: f"{ax.lower()}_fail.alg" for ax in INDEPENDENCE_MODELS}


@dataclass
class ModelEntry:
    fixture: str
    intended: str
    failing: list
    witness_count: int

    @property
    def separates_exactly(self) -> bool:
        return self.failing == [self.intended]


@dataclass
class SearchEntry:
    axiom: str
    max_size: int
    result: CounterexampleResult

    def describe(self) -> str:
        r = self.result
        if r.status == "found":
            return f"{self.axiom}: separating model of size {r.size_reached} found"
        if r.status == "none":
            return (f"{self.axiom}: no separating model of size <= {self.max_size} "
                    "(exhaustive; inconclusive beyond that)")
        return f"{self.axiom}: search budget exhausted at size {r.size_reached}"


@dataclass
class IndependenceReport:
    models: list
    searches: list = field(default_factory=list)

    def text(self) -> str:
        lines = ["bundled separating models:"]
        for m in self.models:
            tag = "exactly" if m.separates_exactly else "NOT exactly"
            lines.append(f"  {m.fixture}: fails {{{', '.join(m.failing)}}} "
                         f"({tag} {m.intended}; {m.witness_count} falsifying assignments)")
        covered = sorted({f for m in self.models for f in m.failing}, key=_axiom_key)
        claimed = list(INDEPENDENCE_CLAIMED)
        lines.append(f"axioms separated by bundled models: {', '.join(covered)}")
        lines.append(f"axioms listed as independent: {', '.join(claimed)}")
        missing = [a for a in claimed if a not in covered]
        extra = [a for a in covered if a not in claimed]
        if missing or extra:
            lines.append(f"  listed but without a bundled model: {', '.join(missing) or 'none'}")
            lines.append(f"  separated but not listed: {', '.join(extra) or 'none'}")
        for s in self.searches:
            lines.append("bounded search " + s.describe())
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "models": [{"fixture": m.fixture, "intended": m.intended, "failing": m.failing,
                        "separates_exactly": m.separates_exactly,
                        "witness_count": m.witness_count} for m in self.models],
            "searches": [{"axiom": s.axiom, "max_size": s.max_size, "status": s.result.status,
                          "size_reached": s.result.size_reached,
                          "model": s.result.model.name if s.result.model else None}
                         for s in self.searches],
        }


def _axiom_key(a: str) -> int:
    return int(a[1:])


def separating_search(axiom: str, max_size: int, time_budget: float = 300.0,
                      workers: int = 1) -> CounterexampleResult:
    """Smallest model of the other nine axioms falsifying ``axiom``."""
    hold = [a for a in brignole_axioms() if a.id != axiom]
    return find_counterexample(hold, lookup(axiom), max_size, BRIGNOLE,
                               time_budget=time_budget, workers=workers,
                               name=f"{axiom.lower()}_sep")


def independence_report(search_axioms=("B7",), max_size: int = 8,
                        time_budget: float = 300.0, workers: int = 1) -> IndependenceReport:
    axioms = brignole_axioms()
    models = []
    for intended, fname in INDEPENDENCE_FIXTURES.items():
        A = load_fixture(fname)
        rep = check_axiom_set(A, axioms)
        count = sum(len(all_witnesses(A, rep[f].equation)) for f in rep.failing)
        models.append(ModelEntry(fname, intended, rep.failing, count))
    searches = [SearchEntry(a, max_size, separating_search(a, max_size, time_budget, workers))
                for a in search_axioms]
    return IndependenceReport(models, searches)
