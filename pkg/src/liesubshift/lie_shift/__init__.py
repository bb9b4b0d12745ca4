"""Shift-invariant Lie brackets on vector shifts over Z."""

from .axioms import AxiomReport, verify_axioms
from .counting import CapExceeded, formula_count, listed_k0_count, periodic_zero_pairs
from .ideals import WindowTooSmall, ideal_closure
from .radius import phi, phi_radii, phi_radius
from .rulefile import RuleFileError, format_rule, parse_rule_text
from .rules import (
    BracketRule,
    Conjugated,
    ConstructionA,
    OrbitRule,
    OrbitRules,
    bracket_eval,
    bracket_eval_periodic,
    cellwise_rule,
    conjugate_bracket,
    example_rule,
    required_window,
    zero_bracket,
)
from .search import SearchCapExceeded, search_brackets

__all__ = [
    "AxiomReport", "BracketRule", "CapExceeded", "Conjugated", "ConstructionA", "OrbitRule",
    "OrbitRules", "RuleFileError", "SearchCapExceeded", "WindowTooSmall", "bracket_eval",
    "bracket_eval_periodic", "cellwise_rule", "conjugate_bracket", "example_rule", "format_rule",
    "formula_count", "ideal_closure", "listed_k0_count", "parse_rule_text", "periodic_zero_pairs",
    "phi", "phi_radii", "phi_radius", "required_window", "search_brackets", "verify_axioms",
    "zero_bracket",
]
