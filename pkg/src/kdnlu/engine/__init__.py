"""Stratified rule engine: terms, programs, goal-directed solving, proofs."""

from .justify import (
    KIND_BUILTIN,
    KIND_FACT,
    KIND_NAF,
    KIND_RULE,
    Justification,
    describe_goal,
    render_justification,
    validate_justification,
)
from .program import (
    Lit,
    Program,
    Rule,
    check_range_restricted,
    is_builtin,
    parse_program,
    parse_query,
    parse_term,
)
from .solve import (
    Answer,
    Solver,
    builtin_eval,
    check_constraints,
    find_classical_conflicts,
    prove_naf,
    solve,
)
from .stratify import check_stratified
from .terms import (
    Atom,
    Int,
    PList,
    Struct,
    Term,
    Var,
    is_ground,
    render,
    resolve,
    unify,
    variables,
)

__all__ = [
    "Answer", "Atom", "Int", "Justification", "Lit", "PList", "Program",
    "Rule", "Solver", "Struct", "Term", "Var",
    "KIND_BUILTIN", "KIND_FACT", "KIND_NAF", "KIND_RULE", "builtin_eval",
    "check_constraints", "check_range_restricted", "check_stratified",
    "describe_goal", "find_classical_conflicts", "is_builtin", "is_ground",
    "parse_program", "parse_query", "parse_term", "prove_naf", "render",
    "render_justification", "resolve", "solve", "unify",
    "validate_justification", "variables",
]
