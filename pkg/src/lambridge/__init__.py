"""Translate Lambek grammars into context-free grammars and abstract categorial grammars."""
from .core import (Atom, Grammar, GrammarError, Hyp, Lex, Slash, decompose, format_type,
                   load_grammar, order, parse_grammar, parse_type, signed_occurrences)
from .lambda_calc import format_term, nesting_depth, parse_term
from .prover import Budget, BudgetExhausted, Prover, prove_arg, prove_IE
from .axioms import AxiomSet, ProperAxiom, accessible_filter, build_A0, level, q1, q2
from .cfg import Cfg, enumerate_language, parse, recognizes, to_cfg, tree_to_cut_proof
from .acg import cfg_to_acg, apply_lexicon, tree_to_abstract_term, validate_lexicon, yield_string

__version__ = "0.1.0"
