"""Composition method for monadic second-order theories of chains and
finite trees."""

from .errors import BudgetExceeded, CoherenceError, DomainError, ParseError
from .formula import parse, to_text
from .structure import FiniteStructure
from .theory import Theory, characteristic_formula, decide, eval_theory, model_check

__all__ = [
    "BudgetExceeded", "CoherenceError", "DomainError", "ParseError",
    "FiniteStructure", "Theory", "characteristic_formula", "decide",
    "eval_theory", "model_check", "parse", "to_text",
]

__version__ = "0.1.0"
