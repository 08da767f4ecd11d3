"""Independent derivability oracle: exhaustive cut-free Gentzen sequent search.

This deliberately shares no search code with :mod:`lambridge.prover`. It uses
the left/right rule presentation with atomic identity axioms only, so every
proof it finds denotes a beta-normal eta-long term. All rule instances and all
context splits are enumerated; the only optimisation is memoising the term
set of a sequent by its type word, which does not change what is found.

Terms are computed as templates over positional placeholders ``_0, _1, ...``
(one per context item) and instantiated with the item heads afterwards.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import product
from typing import Iterable, Optional

from .core import RIGHT, Atom, Grammar, Hyp, Lex, OrientedType, Slash
from .lambda_calc import (Abs, App, Const, Term, Var, alpha_normal, nesting_depth,
                          substitute_many)


def _ph(i: int) -> str:
    return f"_{i}"


def _shift(template: Term, mapping: dict[int, Term]) -> Term:
    return substitute_many(template, {_ph(i): t for i, t in mapping.items()})


@lru_cache(maxsize=None)
def _templates(types: tuple, goal: OrientedType) -> frozenset:
    """All normal proof terms of ``types |- goal`` over placeholders."""
    n = len(types)
    out: set[Term] = set()
    if n == 0:
        return frozenset()
    # identity on atoms
    if n == 1 and isinstance(goal, Atom) and types[0] == goal:
        out.add(Var(_ph(0)))
    # right rules
    if isinstance(goal, Slash):
        x = "x"  # renamed by alpha_normal; placeholders never collide with it
        if goal.connective == RIGHT:
            sub = _templates(types + (goal.argument,), goal.result)
            mapping = {n: Var(x)}
        else:
            sub = _templates((goal.argument,) + types, goal.result)
            mapping = {0: Var(x)}
            mapping.update({i + 1: Var(_ph(i)) for i in range(n)})
        for t in sub:
            out.add(alpha_normal(Abs(x, _shift(t, mapping))))
    # left rules: functor at position i, argument segment [lo, hi)
    for i, f in enumerate(types):
        if not isinstance(f, Slash):
            continue
        if f.connective == RIGHT:
            spans = [(i + 1, hi) for hi in range(i + 2, n + 1)]
        else:
            spans = [(lo, i) for lo in range(0, i)]
        for lo, hi in spans:
            args = _templates(types[lo:hi], f.argument)
            if not args:
                continue
            first, last = min(lo, i), max(hi, i + 1)
            rest = types[:first] + (f.result,) + types[last:]
            mains = _templates(rest, goal)
            if not mains:
                continue
            for v, w in product(args, mains):
                v_inst = _shift(v, {k: Var(_ph(lo + k)) for k in range(hi - lo)})
                mapping = {k: Var(_ph(k)) for k in range(first)}
                mapping[first] = App(Var(_ph(i)), v_inst)
                for k in range(first + 1, len(rest)):
                    mapping[k] = Var(_ph(k + (last - first) - 1))
                out.add(alpha_normal(_shift(w, mapping)))
    return frozenset(out)


def _heads(g: Grammar, context: Iterable) -> list[list[tuple[Term, OrientedType]]]:
    choices = []
    for item in context:
        if isinstance(item, Lex):
            choices.append([(Const(item.name, k), t) for k, t in enumerate(g.types_of(item.name))])
        elif isinstance(item, Hyp):
            choices.append([(Var(item.name), item.type)])
        else:
            raise TypeError(f"not a context item: {item!r}")
    return choices


def oracle_terms(g: Grammar, context: Iterable, goal: OrientedType) -> frozenset:
    """Every beta-normal eta-long term of ``context |- goal``, alpha-normalised.

    ``context`` is a sequence of :class:`Lex` / :class:`Hyp` items, or bare
    lexeme strings.
    """
    items = [Lex(x) if isinstance(x, str) else x for x in context]
    if not items:
        return frozenset()
    found: set[Term] = set()
    for assignment in product(*_heads(g, items)):
        types = tuple(t for _, t in assignment)
        for tpl in _templates(types, goal):
            inst = _shift(tpl, {k: h for k, (h, _) in enumerate(assignment)})
            found.add(alpha_normal(inst))
    return frozenset(found)


def oracle_derivable(g: Grammar, context: Iterable, goal: Optional[OrientedType] = None,
                     max_nesting: Optional[int] = None) -> bool:
    goal = goal if goal is not None else g.start
    terms = oracle_terms(g, context, goal)
    if max_nesting is None:
        return bool(terms)
    return any(nesting_depth(t) <= max_nesting for t in terms)


def min_nesting(g: Grammar, context: Iterable, goal: Optional[OrientedType] = None) -> Optional[int]:
    """Smallest nesting depth over all normal proofs, or None if underivable."""
    goal = goal if goal is not None else g.start
    depths = [nesting_depth(t) for t in oracle_terms(g, context, goal)]
    return min(depths) if depths else None
