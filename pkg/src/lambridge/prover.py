"""Normal-form natural-deduction proof search for the Lambek calculus.

A beta-normal eta-long derivation of ``Gamma |- beta`` peels every
introduction of ``beta``, then picks a head (a context variable or a lexical
entry) whose result atom matches and splits what is left of the context into
contiguous argument segments, outermost argument first. Derivability of every
segment is checked against a memo before any derivation is built, so streams
never enter dead branches.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterator, Optional, Sequence

from .core import LEFT, RIGHT, Grammar, Hyp, Lex, OrientedType, Slash, attach, decompose
from .derivation import ELIM, INTRO, Derivation
from .lambda_calc import Abs, App, Const, Term, Var, alpha_normal, fresh_name
from .sequents import Sequent


class BudgetExhausted(RuntimeError):
    """Search hit its depth or node limit before reaching a verdict."""


@dataclass(frozen=True)
class Budget:
    depth: int = 40
    nodes: int = 200_000


def _item_key(item) -> tuple:
    if isinstance(item, Lex):
        return ("L", item.name)
    return ("H", item.type)


def _segmentations(left: int, right: int, args: Sequence[tuple[str, OrientedType]]):
    """Ways to carve ``left`` items before and ``right`` items after the head.

    ``args`` lists (connective, type) innermost first. Yields, per argument in
    that same order, a pair (side, length); outermost segments are chosen first
    with increasing split positions.
    """
    n_right = sum(1 for c, _ in args if c == RIGHT)
    n_left = len(args) - n_right

    def go(i: int, lft: int, rgt: int, nl: int, nr: int):
        if i < 0:
            if lft == 0 and rgt == 0:
                yield ()
            return
        c, _ = args[i]
        if c == RIGHT:
            # segment is a suffix of the remaining right part; keep nr-1 items for inner ones
            for size in range(rgt - (nr - 1), 0, -1):
                for rest in go(i - 1, lft, rgt - size, nl, nr - 1):
                    yield rest + ((RIGHT, size),)
        else:
            # prefix of the remaining left part; increasing split position = growing size
            for size in range(1, lft - (nl - 1) + 1):
                for rest in go(i - 1, lft - size, rgt, nl - 1, nr):
                    yield rest + ((LEFT, size),)

    if n_right > right or n_left > left:
        return
    yield from go(len(args) - 1, left, right, n_left, n_right)


def _segments(lo: int, head: int, hi: int, shape) -> list[tuple[int, int]]:
    """Turn a segmentation into absolute spans (innermost argument first)."""
    spans: list[Optional[tuple[int, int]]] = [None] * len(shape)
    a, b = lo, hi
    for i in range(len(shape) - 1, -1, -1):
        side, size = shape[i]
        if side == RIGHT:
            spans[i] = (b - size, b)
            b -= size
        else:
            spans[i] = (a, a + size)
            a += size
    return spans  # type: ignore[return-value]


class Prover:
    """S_IE proof search over one grammar, with a derivability memo."""

    def __init__(self, grammar: Grammar, budget: Budget = Budget()):
        self.grammar = grammar
        self.budget = budget
        self._memo: dict[tuple, bool] = {}
        self._arg_cache: dict[tuple, Optional[Term]] = {}
        self._nodes = 0

    # ------------------------------------------------------------------ heads
    def _head_types(self, key: tuple) -> list[tuple[int, OrientedType]]:
        if key[0] == "L":
            return list(enumerate(self.grammar.types_of(key[1])))
        return [(0, key[1])]

    # ----------------------------------------------------------- derivability
    def derivable_keys(self, keys: tuple, goal: OrientedType, depth: int = 0) -> bool:
        memo_key = (keys, goal)
        hit = self._memo.get(memo_key)
        if hit is not None:
            return hit
        if depth > self.budget.depth:
            raise BudgetExhausted(f"depth limit {self.budget.depth} reached")
        self._nodes += 1
        if self._nodes > self.budget.nodes:
            raise BudgetExhausted(f"node limit {self.budget.nodes} reached")
        result = self._search_keys(keys, goal, depth)
        self._memo[memo_key] = result
        return result

    def _search_keys(self, keys: tuple, goal: OrientedType, depth: int) -> bool:
        if not keys:
            return False
        if isinstance(goal, Slash):
            hyp = ("H", goal.argument)
            keys2 = keys + (hyp,) if goal.connective == RIGHT else (hyp,) + keys
            return self.derivable_keys(keys2, goal.result, depth + 1)
        for pos, key in enumerate(keys):
            for _, t in self._head_types(key):
                args, result = decompose(t)
                if result != goal:
                    continue
                for shape in _segmentations(pos, len(keys) - pos - 1, args):
                    spans = _segments(0, pos, len(keys), shape)
                    if all(self.derivable_keys(keys[a:b], args[i][1], depth + 1)
                           for i, (a, b) in enumerate(spans)):
                        return True
        return False

    def derivable(self, context: Sequence, goal: OrientedType) -> bool:
        self._nodes = 0
        return self.derivable_keys(tuple(_item_key(x) for x in context), goal)

    # ------------------------------------------------------------- derivations
    def derivations(self, context: Sequence, goal: OrientedType) -> Iterator[Derivation]:
        """Stream every beta-normal eta-long derivation of ``context |- goal``."""
        context = tuple(context)
        if not context or not self.derivable(context, goal):
            return
        yield from self._derive(context, goal)

    def _derive(self, context: tuple, goal: OrientedType) -> Iterator[Derivation]:
        if isinstance(goal, Slash):
            taken = {h.name for h in context if isinstance(h, Hyp)}
            x = fresh_name("x", taken)
            ctx2 = attach(context, goal.connective, Hyp(x, goal.argument))
            for child in self._derive(ctx2, goal.result):
                term = Abs(x, child.term)
                yield Derivation(INTRO[goal.connective], Sequent(context, term, goal),
                                 (child,), var=x)
            return
        keys = tuple(_item_key(x) for x in context)
        for pos, item in enumerate(context):
            for index, t in self._head_types(keys[pos]):
                args, result = decompose(t)
                if result != goal:
                    continue
                for shape in _segmentations(pos, len(context) - pos - 1, args):
                    spans = _segments(0, pos, len(context), shape)
                    if not all(self.derivable_keys(keys[a:b], args[i][1])
                               for i, (a, b) in enumerate(spans)):
                        continue
                    streams = [list(self._derive(context[a:b], args[i][1]))
                               for i, (a, b) in enumerate(spans)]
                    for choice in product(*streams):
                        yield self._assemble(item, index, t, args, choice)

    def _assemble(self, item, index: int, t: OrientedType, args, premises) -> Derivation:
        if isinstance(item, Lex):
            leaf = Derivation("Lex", Sequent((item,), Const(item.name, index), t))
        else:
            leaf = Derivation("Ax", Sequent((item,), Var(item.name), t))
        node = leaf
        ty = t
        for (c, _), arg in zip(args, premises):
            assert isinstance(ty, Slash) and ty.connective == c
            ctx = node.conclusion.context + arg.conclusion.context if c == RIGHT \
                else arg.conclusion.context + node.conclusion.context
            term = App(node.conclusion.term, arg.conclusion.term)
            node = Derivation(ELIM[c], Sequent(ctx, term, ty.result), (node, arg))
            ty = ty.result
        return node

    def first(self, context: Sequence, goal: OrientedType) -> Optional[Derivation]:
        return next(self.derivations(context, goal), None)

    # ------------------------------------------------------------ single hyp
    def prove_arg(self, alpha: OrientedType, gamma: OrientedType) -> Optional[Term]:
        """Some v with ``x:alpha |- v : gamma`` (free variable named ``x``), or None."""
        key = (alpha, gamma)
        if key not in self._arg_cache:
            d = self.first((Hyp("x", alpha),), gamma)
            self._arg_cache[key] = None if d is None else alpha_normal(d.term)
        return self._arg_cache[key]


def prove_IE(g: Grammar, words: Sequence[str], goal: Optional[OrientedType] = None,
             budget: Budget = Budget()) -> Iterator[Derivation]:
    """Derivations of ``words |- goal`` (goal defaults to the start atom)."""
    prover = Prover(g, budget)
    yield from prover.derivations(tuple(Lex(w) for w in words),
                                  goal if goal is not None else g.start)


def prove_arg(g: Grammar, alpha: OrientedType, gamma: OrientedType,
              budget: Budget = Budget()) -> Optional[Term]:
    return Prover(g, budget).prove_arg(alpha, gamma)
