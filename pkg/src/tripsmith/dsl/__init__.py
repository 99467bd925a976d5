"""Constraint DSL: parser, static checker and interpreter."""

from .check import (
    BUILTIN_FUNCTIONS,
    Diagnostic,
    check_program,
    check_syntax,
    is_clean,
)
from .interp import (
    ConstraintOutcome,
    EvalStats,
    evaluate,
    evaluate_source,
    extract_constraints,
    run_constraint,
)
from .syntax import Program, parse, pretty

__all__ = [
    "BUILTIN_FUNCTIONS",
    "ConstraintOutcome",
    "Diagnostic",
    "EvalStats",
    "Program",
    "check_program",
    "check_syntax",
    "evaluate",
    "evaluate_source",
    "extract_constraints",
    "is_clean",
    "parse",
    "pretty",
    "run_constraint",
]
