"""Shared, session-scoped model enumerations for the slower test modules."""
import pytest

from brignole.catalog import brignole_axioms, nelson_axioms, reduced_brignole_axioms
from brignole.finder import SearchProblem, enumerate_models
from brignole.terms import BRIGNOLE, NELSON


def _models(sig, axioms, max_n):
    out = []
    for n in range(1, max_n + 1):
        res = enumerate_models(SearchProblem(sig, n, axioms))
        assert res.status == "complete"
        out += res.models
    return out


@pytest.fixture(scope="session")
def brignole_models():
    return _models(BRIGNOLE, brignole_axioms(), 4)


@pytest.fixture(scope="session")
def nelson_models():
    return _models(NELSON, nelson_axioms(), 4)


@pytest.fixture(scope="session")
def reduced_models_4():
    return _models(BRIGNOLE, reduced_brignole_axioms(), 4)
