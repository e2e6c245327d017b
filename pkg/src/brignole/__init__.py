"""Workbench for the equational theories of Nelson and Brignole algebras.

Terms and equations live in :mod:`brignole.terms`, finite algebras and
identity checking in :mod:`brignole.algebra`, named identities in
:mod:`brignole.catalog`, the translations between the two signatures in
:mod:`brignole.equivalence`, model search in :mod:`brignole.finder` and
proof checking in :mod:`brignole.proof`.
"""
from .algebra import (FiniteAlgebra, build_algebra, canonical_form, check_axiom_set,
                      check_identity, eval_term, find_isomorphism, load_algebra)
from .catalog import brignole_axioms, lemma_catalog, lookup, nelson_axioms, reduced_brignole_axioms
from .equivalence import brignole_to_nelson, nelson_to_brignole
from .finder import SearchProblem, enumerate_models, find_counterexample
from .proof import parse_proof, verify_proof
from .terms import (BRIGNOLE, NELSON, Equation, format_equation, format_term, parse_equation,
                    parse_term)

__version__ = "0.1.0"

__all__ = [
    "FiniteAlgebra", "build_algebra", "canonical_form", "check_axiom_set", "check_identity",
    "eval_term", "find_isomorphism", "load_algebra",
    "brignole_axioms", "lemma_catalog", "lookup", "nelson_axioms", "reduced_brignole_axioms",
    "brignole_to_nelson", "nelson_to_brignole",
    "SearchProblem", "enumerate_models", "find_counterexample",
    "parse_proof", "verify_proof",
    "BRIGNOLE", "NELSON", "Equation", "format_equation", "format_term", "parse_equation",
    "parse_term",
]
