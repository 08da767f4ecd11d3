"""Sequents ``context |- term : type`` and helpers shared by the rule systems."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .core import (Grammar, Hyp, Lex, OrientedType, concat, decompose, format_type,
                   format_word, parse_type, type_key)
from .lambda_calc import (Const, SimpleType, Term, Var, alpha_normal, apply, beta_normalize, eta_reduce,
                          erase, eta_long, format_term, free_vars, parse_term, rename_free)


@dataclass(frozen=True)
class Sequent:
    context: tuple
    term: Optional[Term]
    type: OrientedType

    def __str__(self) -> str:
        ctx = format_word(self.context)
        if self.term is None:
            return f"{ctx} |- {format_type(self.type)}"
        return f"{ctx} |- {format_term(self.term)} : {format_type(self.type)}"

    @property
    def hyps(self) -> list[Hyp]:
        return [item for item in self.context if isinstance(item, Hyp)]

    def env(self) -> dict[str, SimpleType]:
        return {h.name: erase(h.type) for h in self.hyps}

    def canonical(self) -> "Sequent":
        """Alpha-normal representative: context variables renamed ``v1, v2, ...``."""
        mapping = {}
        items = []
        for item in self.context:
            if isinstance(item, Hyp):
                new = f"v{len(mapping) + 1}"
                mapping[item.name] = new
                items.append(Hyp(new, item.type))
            else:
                items.append(item)
        term = None
        if self.term is not None:
            term = alpha_normal(rename_free(self.term, mapping))
        return Sequent(tuple(items), term, self.type)

    def key(self) -> str:
        """Identity up to alpha-renaming and beta/eta conversion of the term."""
        seq = self
        if self.term is not None:
            seq = Sequent(self.context, eta_reduce(beta_normalize(self.term)), self.type)
        return str(seq.canonical())

    def is_well_scoped(self) -> bool:
        """Free variables of the term are exactly the context variables, each once."""
        names = [h.name for h in self.hyps]
        if len(names) != len(set(names)) or not self.context:
            return False
        return self.term is None or set(free_vars(self.term)) == set(names)


def const_types_for(g: Grammar):
    """Simple types of lexical constants, via erasure of their oriented types."""
    def lookup(c: Const) -> SimpleType:
        return erase(g.lexical_type(c.name, c.index))
    return lookup


def normalize_sequent_term(g: Grammar, seq: Sequent, term: Term) -> Term:
    """Beta-normal eta-long form of ``term`` typed in ``seq``'s context."""
    return eta_long(beta_normalize(term), erase(seq.type), seq.env(), const_types_for(g))


def flatten(alpha: OrientedType, head, lexical_index: int = 0) -> Sequent:
    """The flattened sequent ``pi(alpha)[head] |- head z1 ... zn : rho(alpha)``.

    ``head`` is a :class:`Lex` (then ``lexical_index`` says which of its types
    ``alpha`` is) or a :class:`Hyp` whose type is ``alpha``.
    """
    args, result = decompose(alpha)
    taken = {head.name} if isinstance(head, Hyp) else set()
    word: tuple = (head,)
    zs = []
    i = 1
    for c, a in args:
        while f"z{i}" in taken:
            i += 1
        z = Hyp(f"z{i}", a)
        taken.add(z.name)
        zs.append(Var(z.name))
        word = concat(c, word, (z,))
        i += 1
    if isinstance(head, Lex):
        h = Const(head.name, lexical_index)
    else:
        h = Var(head.name)
    return Sequent(word, apply(h, *zs), result)


def parse_sequent(text: str) -> Sequent:
    """Inverse of ``str(Sequent)`` for terms and contexts in canonical syntax."""
    ctx_text, _, rhs = text.partition("|-")
    items = []
    for part in ctx_text.split(","):
        part = part.strip()
        if not part:
            continue
        if ":" in part:
            name, ty = part.split(":", 1)
            items.append(Hyp(name.strip(), parse_type(ty.strip())))
        else:
            items.append(Lex(part.lower()))
    rhs = rhs.strip()
    if " : " in rhs:
        term_text, ty_text = rhs.rsplit(" : ", 1)
        return Sequent(tuple(items), parse_term(term_text), parse_type(ty_text))
    return Sequent(tuple(items), None, parse_type(rhs))


def sort_types(types) -> list[OrientedType]:
    return sorted(types, key=type_key)
