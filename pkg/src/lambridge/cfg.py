"""Context-free grammar read off an axiom set, with a chart parser and cut-proof replay.

Each axiom ``Gamma |- u : beta`` gives the production ``beta -> Gamma`` where a
typed variable becomes its type (a nonterminal) and a lexeme stays a terminal.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterable, Iterator, Optional, Sequence, Union

from .axioms import ProperAxiom
from .core import Grammar, Lex, OrientedType, format_type, parse_type
from .derivation import Derivation
from .lambda_calc import beta_normalize, substitute
from .sequents import Sequent

Symbol = Union[str, OrientedType]  # str = terminal


def is_terminal(sym: Symbol) -> bool:
    return isinstance(sym, str)


@dataclass(frozen=True)
class Production:
    lhs: OrientedType
    rhs: tuple
    axiom: Optional[ProperAxiom] = None

    @property
    def nonterminals(self) -> list[OrientedType]:
        return [s for s in self.rhs if not is_terminal(s)]

    def __str__(self) -> str:
        parts = [f'"{s}"' if is_terminal(s) else format_type(s) for s in self.rhs]
        return f"{format_type(self.lhs)} -> {' '.join(parts)}"


@dataclass(frozen=True)
class Cfg:
    nonterminals: frozenset
    terminals: frozenset
    productions: tuple
    start: OrientedType

    def by_lhs(self, lhs: OrientedType) -> list[tuple[int, Production]]:
        return self._index().get(lhs, [])

    def _index(self) -> dict:
        cached = self.__dict__.get("_lhs_index")
        if cached is None:
            cached = {}
            for i, p in enumerate(self.productions):
                cached.setdefault(p.lhs, []).append((i, p))
            object.__setattr__(self, "_lhs_index", cached)
        return cached

    def to_bnf(self) -> str:
        lines = [f"start: {format_type(self.start)}"]
        lines += [str(p) for p in self.productions]
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps({
            "start": format_type(self.start),
            "nonterminals": sorted(format_type(t) for t in self.nonterminals),
            "terminals": sorted(self.terminals),
            "productions": [
                {"id": i, "lhs": format_type(p.lhs),
                 "rhs": [{"terminal": s} if is_terminal(s) else {"nonterminal": format_type(s)}
                         for s in p.rhs],
                 "axiom": None if p.axiom is None else str(p.axiom.sequent)}
                for i, p in enumerate(self.productions)],
        }, indent=2, ensure_ascii=False)


def make_cfg(productions: Iterable[Production], start: OrientedType) -> Cfg:
    productions = tuple(productions)
    nts = {start}
    terms = set()
    for p in productions:
        nts.add(p.lhs)
        for s in p.rhs:
            (terms if is_terminal(s) else nts).add(s)
    return Cfg(frozenset(nts), frozenset(terms), productions, start)


def to_cfg(axioms: Iterable[ProperAxiom], g: Grammar) -> Cfg:
    prods = []
    for a in axioms:
        rhs = tuple(item.name if isinstance(item, Lex) else item.type for item in a.context)
        prods.append(Production(a.result, rhs, a))
    return make_cfg(prods, g.start)


_BNF_SYMBOL = re.compile(r'"([^"]*)"|(\S+)')


def parse_bnf(text: str) -> Cfg:
    """Read back :meth:`Cfg.to_bnf` output (``#`` starts a comment)."""
    start = None
    prods = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("start:"):
            start = parse_type(line[len("start:"):].strip())
            continue
        lhs_text, arrow, rhs_text = line.partition("->")
        if not arrow:
            raise ValueError(f"not a production: {raw!r}")
        rhs = []
        for m in _BNF_SYMBOL.finditer(rhs_text):
            rhs.append(m.group(1) if m.group(1) is not None else parse_type(m.group(2)))
        if not rhs:
            raise ValueError(f"empty right-hand side: {raw!r}")
        prods.append(Production(parse_type(lhs_text.strip()), tuple(rhs)))
    if start is None:
        raise ValueError("missing start line")
    return make_cfg(prods, start)


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ParseTree:
    production: int
    children: tuple
    span: tuple

    def size(self) -> int:
        return 1 + sum(c.size() for c in self.children)

    def leaves(self, cfg: Cfg) -> list[str]:
        out: list[str] = []
        kids = iter(self.children)
        for s in cfg.productions[self.production].rhs:
            out.extend([s] if is_terminal(s) else next(kids).leaves(cfg))
        return out

    def format(self, cfg: Cfg) -> str:
        p = cfg.productions[self.production]
        if not self.children:
            return f"({format_type(p.lhs)} {' '.join(map(str, p.rhs))})"
        inner = []
        kids = iter(self.children)
        for s in p.rhs:
            inner.append(s if is_terminal(s) else next(kids).format(cfg))
        return f"({format_type(p.lhs)} {' '.join(inner)})"


class Chart:
    """Recognition chart: ``table[(i, j)]`` holds every nonterminal deriving tokens[i:j]."""

    def __init__(self, cfg: Cfg, tokens: Sequence[str]):
        self.cfg = cfg
        self.tokens = tuple(tokens)
        self.table: dict[tuple[int, int], set] = {}
        n = len(self.tokens)
        for length in range(1, n + 1):
            for i in range(0, n - length + 1):
                j = i + length
                cell: set = set()
                self.table[(i, j)] = cell
                changed = True
                while changed:  # unit productions need a closure on one span
                    changed = False
                    for p in cfg.productions:
                        if p.lhs not in cell and any(True for _ in self.matches(p.rhs, i, j, 1)):
                            cell.add(p.lhs)
                            changed = True

    def has(self, sym: OrientedType, i: int, j: int) -> bool:
        return sym in self.table.get((i, j), ())

    def matches(self, rhs: tuple, i: int, j: int, limit: Optional[int] = None):
        """Yield span lists assigning each nonterminal of ``rhs`` inside tokens[i:j]."""
        count = 0

        def go(k: int, pos: int, acc: tuple):
            nonlocal count
            if limit is not None and count >= limit:
                return
            if k == len(rhs):
                if pos == j:
                    count += 1
                    yield acc
                return
            sym = rhs[k]
            remaining = len(rhs) - k - 1
            if is_terminal(sym):
                if pos < j and self.tokens[pos] == sym:
                    yield from go(k + 1, pos + 1, acc)
                return
            for end in range(pos + 1, j - remaining + 1):
                if self.has(sym, pos, end):
                    yield from go(k + 1, end, acc + ((pos, end),))

        yield from go(0, i, ())


def recognizes(cfg: Cfg, tokens: Sequence[str]) -> bool:
    if not tokens:
        return False
    return Chart(cfg, tokens).has(cfg.start, 0, len(tokens))


def parse(cfg: Cfg, tokens: Sequence[str]) -> Iterator[ParseTree]:
    """All parse trees of ``tokens`` from the start symbol.

    Unit chains on one span never revisit a nonterminal, so the stream is finite
    even with self-loops such as ``np -> np``.
    """
    tokens = tuple(tokens)
    if not tokens:
        raise ValueError("cannot parse an empty token sequence")
    chart = Chart(cfg, tokens)
    n = len(tokens)
    if not chart.has(cfg.start, 0, n):
        return

    @lru_cache(maxsize=None)
    def trees(sym: OrientedType, i: int, j: int, chain: frozenset) -> tuple:
        out = []
        chain2 = chain | {sym}
        for idx, p in cfg.by_lhs(sym):
            for spans in chart.matches(p.rhs, i, j):
                if len(spans) == 1 and spans[0] == (i, j):
                    child = p.nonterminals[0]
                    if child in chain2:
                        continue
                    subs = [trees(child, i, j, chain2)]
                else:
                    subs = [trees(nt, a, b, frozenset())
                            for nt, (a, b) in zip(p.nonterminals, spans)]
                for combo in product(*subs):
                    out.append(ParseTree(idx, tuple(combo), (i, j)))
        return tuple(out)

    yield from trees(cfg.start, 0, n, frozenset())


def count_parses(cfg: Cfg, tokens: Sequence[str]) -> int:
    return sum(1 for _ in parse(cfg, tokens))


# ---------------------------------------------------------------------------
# Cut proofs
# ---------------------------------------------------------------------------


def tree_to_cut_proof(cfg: Cfg, tree: ParseTree) -> Derivation:
    """Replay a parse tree as a cut-only derivation over the originating axioms."""
    p = cfg.productions[tree.production]
    if p.axiom is None:
        raise ValueError("production has no originating axiom")
    leaf_seq = p.axiom.sequent
    node = Derivation("pAxI", leaf_seq)
    for hyp, child in zip(leaf_seq.hyps, tree.children):
        right = tree_to_cut_proof(cfg, child)
        left = node.conclusion
        i = left.context.index(hyp)
        ctx = left.context[:i] + right.conclusion.context + left.context[i + 1:]
        term = beta_normalize(substitute(left.term, hyp.name, right.conclusion.term))
        node = Derivation("Cut", Sequent(ctx, term, left.type), (node, right), var=hyp.name)
    return node


# ---------------------------------------------------------------------------
# Language enumeration and grammar hygiene
# ---------------------------------------------------------------------------


def enumerate_language(cfg: Cfg, max_len: int) -> set[tuple[str, ...]]:
    """Every word of length at most ``max_len`` derivable from the start symbol."""
    if max_len <= 0:
        return set()
    lang: dict = {nt: set() for nt in cfg.nonterminals}
    changed = True
    while changed:
        changed = False
        for p in cfg.productions:
            parts = []
            for s in p.rhs:
                parts.append({(s,)} if is_terminal(s) else lang[s])
            acc = {()}
            for options in parts:
                acc = {a + b for a in acc for b in options if len(a) + len(b) <= max_len}
                if not acc:
                    break
            new = acc - lang[p.lhs]
            if new:
                lang[p.lhs] |= new
                changed = True
    return set(lang[cfg.start])


def reachable_productive(cfg: Cfg) -> tuple[set, set]:
    reachable = {cfg.start}
    changed = True
    while changed:
        changed = False
        for p in cfg.productions:
            if p.lhs in reachable:
                for s in p.nonterminals:
                    if s not in reachable:
                        reachable.add(s)
                        changed = True
    productive: set = set()
    changed = True
    while changed:
        changed = False
        for p in cfg.productions:
            if p.lhs not in productive and all(s in productive for s in p.nonterminals):
                productive.add(p.lhs)
                changed = True
    return reachable, productive
