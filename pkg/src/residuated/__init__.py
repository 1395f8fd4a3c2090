"""Verification and bounded search tools for finite residuated semigroups."""

from residuated.algebra import (
    AxiomReport,
    FiniteOrderedAlgebra,
    StructuralError,
    check_monotonicity,
    check_order,
    check_residuation,
    check_semigroup,
    validate,
)
from residuated.relational import (
    RelationalContext,
    check_implication8,
    close,
    compose,
    eval_term,
    find_reflexive_point,
    lres,
    rres,
    to_abstract,
)
from residuated.terms import Term, parse_term

__all__ = [
    "AxiomReport",
    "FiniteOrderedAlgebra",
    "RelationalContext",
    "StructuralError",
    "Term",
    "check_implication8",
    "check_monotonicity",
    "check_order",
    "check_residuation",
    "check_semigroup",
    "close",
    "compose",
    "eval_term",
    "find_reflexive_point",
    "lres",
    "parse_term",
    "rres",
    "to_abstract",
    "validate",
]
