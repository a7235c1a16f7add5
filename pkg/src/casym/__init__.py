"""Cellular-automata symbolic dynamics toolkit.

Local rules and exact configuration dynamics, the flag-wrapping and
synchronizer-joining constructions, column-factor and limit-language
analysis backed by dual enumeration/automaton strategies, a synthesized
firing-squad CA, and decision procedures for its clean-history set.
"""

from .alphabet import Alphabet
from .budgets import Budget, BudgetExceeded
from .configs import (PeriodicConfig, PresentedConfig, apply_periodic,
                      apply_presented)
from .rules import (Rule, block_map, builtin_rule, check_sub_automaton,
                    elementary_rule, has_spreading_state, identity_rule,
                    iterate_block, load_rule, min_rule, parse_rule,
                    product_rule, serialize_rule, shift_rule)

__all__ = [
    "Alphabet", "Budget", "BudgetExceeded", "PeriodicConfig", "PresentedConfig",
    "Rule", "apply_periodic", "apply_presented", "block_map", "builtin_rule",
    "check_sub_automaton", "elementary_rule", "has_spreading_state",
    "identity_rule", "iterate_block", "load_rule", "min_rule", "parse_rule",
    "product_rule", "serialize_rule", "shift_rule",
]

__version__ = "0.1.0"
