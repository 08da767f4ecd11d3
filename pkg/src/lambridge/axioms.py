"""Proper axioms: the base set A0, the rewriting operators Q1/Q2 and the leveling loop.

An axiom is a flattened sequent used as a cut leaf. The leveling loop starts
from A0 and, each round, adds every Q1/Q2 variant of the previous round's set:

* Q1 turns a boundary variable ``y:gamma`` into an abstraction over a fresh
  ``x:alpha`` for strictly positive ``alpha`` with ``x:alpha |- v : gamma``.
* Q2 re-routes a boundary variable ``y:alpha`` through a fresh higher-type
  variable ``z:c(delta, alpha)``, abstracting the ``x:delta`` it consumes.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

from .core import (CONNECTIVES, Grammar, Hyp, Lex, OrientedType, format_type, signed_occurrences,
                   slash, split_boundary)
from .lambda_calc import (Abs, App, Var, all_names, format_term, fresh_name, rename_free,
                          substitute, term_to_sexpr)
from .prover import Budget, Prover
from .sequents import Sequent, flatten, normalize_sequent_term, parse_sequent


@dataclass(frozen=True)
class Provenance:
    kind: str                      # E1, E2, Q1, Q2
    parent: Optional[int] = None   # id of the rewritten axiom (Q1/Q2)
    lexeme: Optional[str] = None   # E1
    index: Optional[int] = None    # E1 type index
    alpha: Optional[OrientedType] = None   # E2 type, Q1 alpha, Q2 delta
    gamma: Optional[OrientedType] = None   # Q1 boundary type
    witness: Optional[str] = None          # Q1 term v
    side: Optional[str] = None             # Q1/Q2 boundary connective

    def __str__(self) -> str:
        if self.kind == "E1":
            return f"E1 {self.lexeme}#{self.index}"
        if self.kind == "E2":
            return f"E2 {format_type(self.alpha)}"
        if self.kind == "Q1":
            return (f"Q1 of {self.parent} side {self.side} alpha {format_type(self.alpha)} "
                    f"gamma {format_type(self.gamma)} v {self.witness}")
        return f"Q2 of {self.parent} side {self.side} delta {format_type(self.alpha)}"

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        for name in ("parent", "lexeme", "index", "side", "witness"):
            value = getattr(self, name)
            if value is not None:
                out[name] = value
        for name in ("alpha", "gamma"):
            value = getattr(self, name)
            if value is not None:
                out[name] = format_type(value)
        return out


@dataclass(frozen=True)
class ProperAxiom:
    ident: int
    sequent: Sequent
    provenance: Provenance
    generation: int = 0

    def key(self) -> str:
        return self.sequent.key()

    @property
    def context(self) -> tuple:
        return self.sequent.context

    @property
    def result(self) -> OrientedType:
        return self.sequent.type

    def __str__(self) -> str:
        return f"{self.sequent}   # {self.provenance}"

    def to_json(self) -> dict:
        items = []
        for item in self.context:
            if isinstance(item, Lex):
                items.append({"lexeme": item.name})
            else:
                items.append({"var": item.name, "type": format_type(item.type)})
        return {"id": self.ident, "context": items, "term": format_term(self.sequent.term),
                "term_sexpr": term_to_sexpr(self.sequent.term),
                "type": format_type(self.result), "provenance": self.provenance.to_json(),
                "generation": self.generation}


@dataclass
class AxiomSet:
    """Axioms deduplicated by alpha-equivalence of their sequents, in creation order."""
    generation: int = 0
    _by_key: dict = field(default_factory=dict)

    def add(self, axiom: ProperAxiom) -> bool:
        k = axiom.key()
        if k in self._by_key:
            return False
        self._by_key[k] = axiom
        return True

    def __iter__(self) -> Iterator[ProperAxiom]:
        return iter(list(self._by_key.values()))

    def __len__(self) -> int:
        return len(self._by_key)

    def __contains__(self, item) -> bool:
        if isinstance(item, ProperAxiom):
            item = item.key()
        elif isinstance(item, Sequent):
            item = item.key()
        return item in self._by_key

    def keys(self) -> frozenset:
        return frozenset(self._by_key)

    def sequents(self) -> list[Sequent]:
        return [a.sequent for a in self]

    def issubset(self, other: "AxiomSet") -> bool:
        return self.keys() <= other.keys()

    def copy(self, generation: Optional[int] = None) -> "AxiomSet":
        return AxiomSet(self.generation if generation is None else generation, dict(self._by_key))

    def counts_by_generation(self) -> dict[int, int]:
        counts: dict[int, int] = {}
        for a in self:
            counts[a.generation] = counts.get(a.generation, 0) + 1
        return dict(sorted(counts.items()))

    def to_text(self) -> str:
        return "".join(f"{a}\n" for a in self)

    def to_json(self) -> str:
        return json.dumps({"generation": self.generation,
                           "axioms": [a.to_json() for a in self]}, indent=2, ensure_ascii=False)


class _Ids:
    def __init__(self, start: int = 0):
        self.next = start

    def __call__(self) -> int:
        self.next += 1
        return self.next - 1


def strictly_positive(g: Grammar) -> list[OrientedType]:
    return signed_occurrences(g).sorted_strict_positive()


def flatten_axiom(alpha: OrientedType, head, g: Grammar, ident: int = 0) -> ProperAxiom:
    """Flattened axiom; a variable head must carry a strictly positive type."""
    if isinstance(head, Lex):
        index = g.types_of(head.name).index(alpha)
        return ProperAxiom(ident, flatten(alpha, head, index), Provenance("E1", lexeme=head.name,
                                                                          index=index))
    if alpha not in signed_occurrences(g).strict_positive:
        raise ValueError(f"{format_type(alpha)} is not a strictly positive subtype")
    return ProperAxiom(ident, flatten(alpha, Hyp(head.name, alpha)), Provenance("E2", alpha=alpha))


def build_A0(g: Grammar) -> AxiomSet:
    ids = _Ids()
    out = AxiomSet(0)
    for lexeme, types in g.assignment:
        for k, t in enumerate(types):
            out.add(ProperAxiom(ids(), flatten(t, Lex(lexeme), k),
                                Provenance("E1", lexeme=lexeme, index=k)))
    for t in strictly_positive(g):
        out.add(ProperAxiom(ids(), flatten(t, Hyp("x", t)), Provenance("E2", alpha=t)))
    return out


def _boundaries(seq: Sequent) -> Iterator[tuple[str, tuple, Hyp]]:
    for c in CONNECTIVES:
        split = split_boundary(seq.context, c)
        if split is None:
            continue
        rest, item = split
        if isinstance(item, Hyp):
            yield c, rest, item


def _normalized(g: Grammar, context: tuple, term, ty: OrientedType) -> Sequent:
    draft = Sequent(context, term, ty)
    return Sequent(context, normalize_sequent_term(g, draft, term), ty)


def q1_axiom(g: Grammar, axiom: ProperAxiom, c: str, alpha: OrientedType, v,
             ident: int = 0) -> ProperAxiom:
    """Abstract the ``c``-boundary variable of ``axiom`` through ``x:alpha |- v``."""
    seq = axiom.sequent
    rest, y = split_boundary(seq.context, c)
    avoid = all_names(seq.term) | {h.name for h in seq.hyps}
    x = fresh_name("x", avoid)
    body = substitute(seq.term, y.name, rename_free(v, {"x": x}))
    new = _normalized(g, rest, Abs(x, body), slash(c, alpha, seq.type))
    prov = Provenance("Q1", parent=axiom.ident, alpha=alpha, gamma=y.type,
                      witness=format_term(v), side=c)
    return ProperAxiom(ident, new, prov, axiom.generation + 1)


def q2_axiom(g: Grammar, axiom: ProperAxiom, c: str, delta: OrientedType,
             ident: int = 0) -> ProperAxiom:
    """Replace the ``c``-boundary ``y:alpha`` by ``z:c(delta, alpha)`` applied to a fresh x."""
    seq = axiom.sequent
    rest, y = split_boundary(seq.context, c)
    avoid = all_names(seq.term) | {h.name for h in seq.hyps}
    z = fresh_name("z", avoid)
    x = fresh_name("x", avoid | {z})
    new_hyp = Hyp(z, slash(c, delta, y.type))
    context = rest + (new_hyp,) if c == "/" else (new_hyp,) + rest
    body = substitute(seq.term, y.name, App(Var(z), Var(x)))
    new = _normalized(g, context, Abs(x, body), slash(c, delta, seq.type))
    prov = Provenance("Q2", parent=axiom.ident, alpha=delta, side=c)
    return ProperAxiom(ident, new, prov, axiom.generation + 1)


def q1(base: Iterable[ProperAxiom], g: Grammar, prover: Optional[Prover] = None,
       ids: Optional[_Ids] = None) -> list[ProperAxiom]:
    prover = prover or Prover(g)
    ids = ids or _Ids()
    alphas = strictly_positive(g)
    out = []
    for axiom in base:
        for c, _, y in _boundaries(axiom.sequent):
            for alpha in alphas:
                v = prover.prove_arg(alpha, y.type)
                if v is not None:
                    out.append(q1_axiom(g, axiom, c, alpha, v, ids()))
    return out


def q2(base: Iterable[ProperAxiom], g: Grammar, ids: Optional[_Ids] = None) -> list[ProperAxiom]:
    ids = ids or _Ids()
    deltas = strictly_positive(g)
    out = []
    for axiom in base:
        for c, _, _ in _boundaries(axiom.sequent):
            for delta in deltas:
                out.append(q2_axiom(g, axiom, c, delta, ids()))
    return out


def reachable_types(axioms: Iterable[ProperAxiom], start: OrientedType) -> set:
    axioms = list(axioms)
    reach = {start}
    changed = True
    while changed:
        changed = False
        for a in axioms:
            if a.result in reach:
                for h in a.sequent.hyps:
                    if h.type not in reach:
                        reach.add(h.type)
                        changed = True
    return reach


def accessible_filter(axioms: AxiomSet, g: Grammar) -> AxiomSet:
    """Keep the axioms whose result type is reachable from the start atom."""
    reach = reachable_types(axioms, g.start)
    out = AxiomSet(axioms.generation)
    for a in axioms:
        if a.result in reach:
            out.add(a)
    return out


def level(g: Grammar, n: int, filter: bool = True, budget: Budget = Budget(),
          prover: Optional[Prover] = None) -> AxiomSet:
    """The leveling loop: ``n`` rounds of Q1/Q2 closure starting from A0."""
    if n < 0:
        raise ValueError("iteration count must be non-negative")
    prover = prover or Prover(g, budget)
    current = build_A0(g)
    ids = _Ids(len(current))
    if filter:
        current = accessible_filter(current, g)
    for i in range(1, n + 1):
        previous = list(current)
        nxt = current.copy(generation=i)
        for axiom in q1(previous, g, prover, ids):
            nxt.add(_regenerated(axiom, i))
        for axiom in q2(previous, g, ids):
            nxt.add(_regenerated(axiom, i))
        current = accessible_filter(nxt, g) if filter else nxt
    current.generation = n
    return current


def _regenerated(axiom: ProperAxiom, generation: int) -> ProperAxiom:
    return ProperAxiom(axiom.ident, axiom.sequent, axiom.provenance, generation)


def parse_axiom_line(line: str) -> Sequent:
    """Read back the sequent part of a ``to_text`` line."""
    return parse_sequent(line.split("   # ", 1)[0].strip())
