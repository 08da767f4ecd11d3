"""Derivation trees for the three rule systems and a checker for each.

Rule labels: ``Ax``, ``Lex``, ``I/``, ``I\\``, ``E/``, ``E\\``, ``Cut``,
``pAxE1``, ``pAxE2``, ``pAxI``.

* ``S_IE``: Ax, Lex, introductions and eliminations.
* ``S_IC``: pAxE1, pAxE2, introductions and Cut.
* ``S_C``: pAxI (axioms drawn from a given base) and Cut.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

from .core import LEFT, RIGHT, Grammar, Hyp, Lex, Slash, attach, concat, signed_occurrences
from .lambda_calc import (Abs, App, Const, Term, Var, alpha_eq, alpha_normal, beta_normalize,
                          head_form, substitute)
from .sequents import Sequent, flatten, normalize_sequent_term, parse_sequent

INTRO = {RIGHT: "I/", LEFT: "I\\"}
ELIM = {RIGHT: "E/", LEFT: "E\\"}
ARITY = {"Ax": 0, "Lex": 0, "pAxE1": 0, "pAxE2": 0, "pAxI": 0,
         "I/": 1, "I\\": 1, "E/": 2, "E\\": 2, "Cut": 2}


@dataclass(frozen=True)
class Derivation:
    rule: str
    conclusion: Sequent
    children: tuple = ()
    var: Optional[str] = None      # introduced variable (I) or cut variable (Cut)
    index: Optional[int] = None    # chosen type index (Lex, pAxE1)

    @property
    def term(self) -> Term:
        return self.conclusion.term

    def nodes(self) -> Iterator["Derivation"]:
        yield self
        for c in self.children:
            yield from c.nodes()

    def size(self) -> int:
        return sum(1 for _ in self.nodes())

    def depth(self) -> int:
        return 1 + max((c.depth() for c in self.children), default=0)

    def to_sexpr(self, indent: int = 0) -> str:
        """Golden-file form ``(rule [conclusion] child*)``."""
        label = self.rule
        if self.var is not None:
            label += f" {self.var}"
        if self.index is not None:
            label += f" #{self.index}"
        head = " " * indent + f"({label} [{self.conclusion}]"
        if not self.children:
            return head + ")"
        inner = "\n".join(c.to_sexpr(indent + 2) for c in self.children)
        return head + "\n" + inner + ")"


@dataclass(frozen=True)
class RuleSystem:
    tag: str                         # "S_IE", "S_IC", "S_C"
    grammar: Grammar
    axioms: frozenset = field(default=frozenset())  # canonical sequent keys, S_C only
    level: Optional[int] = None

    @classmethod
    def s_ie(cls, g: Grammar) -> "RuleSystem":
        return cls("S_IE", g)

    @classmethod
    def s_ic(cls, g: Grammar) -> "RuleSystem":
        return cls("S_IC", g)

    @classmethod
    def s_c(cls, g: Grammar, axioms: Iterable, level: Optional[int] = None) -> "RuleSystem":
        keys = frozenset(a.key() if isinstance(a, Sequent) else a.sequent.key() for a in axioms)
        return cls("S_C", g, keys, level)

    @property
    def rules(self) -> frozenset:
        if self.tag == "S_IE":
            return frozenset({"Ax", "Lex", "I/", "I\\", "E/", "E\\"})
        if self.tag == "S_IC":
            return frozenset({"pAxE1", "pAxE2", "I/", "I\\", "Cut"})
        return frozenset({"pAxI", "Cut"})


class InvalidDerivation(ValueError):
    def __init__(self, path: tuple, reason: str, node: Optional[Derivation] = None):
        self.path = path
        self.reason = reason
        self.node = node
        where = "root" if not path else "root." + ".".join(map(str, path))
        super().__init__(f"{where}: {reason}")


def _same_term(g: Grammar, seq: Sequent, expected: Term) -> bool:
    if seq.term is None:
        return False
    if alpha_eq(seq.term, expected):
        return True
    try:
        a = normalize_sequent_term(g, seq, seq.term)
        b = normalize_sequent_term(g, seq, expected)
    except ValueError:
        return alpha_eq(beta_normalize(seq.term), beta_normalize(expected))
    return alpha_eq(a, b)


def check_derivation(system: RuleSystem, d: Derivation) -> None:
    """Raise :class:`InvalidDerivation` at the first illegal node (pre-order)."""
    g = system.grammar
    strict = signed_occurrences(g).strict_positive

    def fail(path, reason, node):
        raise InvalidDerivation(path, reason, node)

    def visit(node: Derivation, path: tuple):
        seq = node.conclusion
        if node.rule not in ARITY:
            fail(path, f"unknown rule {node.rule}", node)
        if node.rule not in system.rules:
            fail(path, f"rule {node.rule} is not part of {system.tag}", node)
        if len(node.children) != ARITY[node.rule]:
            fail(path, f"rule {node.rule} expects {ARITY[node.rule]} premises", node)
        if not seq.context:
            fail(path, "empty context", node)
        if not seq.is_well_scoped():
            fail(path, "term variables do not match the context", node)
        kids = [c.conclusion for c in node.children]
        rule = node.rule

        if rule == "Ax":
            ok = (len(seq.context) == 1 and isinstance(seq.context[0], Hyp)
                  and seq.term == Var(seq.context[0].name) and seq.context[0].type == seq.type)
            if not ok:
                fail(path, "not an instance of x:a |- x : a", node)
        elif rule == "Lex":
            item = seq.context[0] if len(seq.context) == 1 else None
            if not isinstance(item, Lex) or not isinstance(seq.term, Const) \
                    or seq.term.name != item.name:
                fail(path, "not an instance of t |- t : a", node)
            try:
                t = g.lexical_type(item.name, seq.term.index)
            except (KeyError, IndexError):
                fail(path, f"{item.name} has no type #{seq.term.index}", node)
            if t != seq.type:
                fail(path, f"type of {item.name} is not {seq.type}", node)
        elif rule in ("I/", "I\\"):
            c = rule[1]
            if not isinstance(seq.type, Slash) or seq.type.connective != c:
                fail(path, f"conclusion type is not a {c} type", node)
            child = kids[0]
            x = node.var
            if x is None or child.type != seq.type.result:
                fail(path, "premise type does not match the result type", node)
            if child.context != attach(seq.context, c, Hyp(x, seq.type.argument)):
                fail(path, "premise context is not the conclusion context with the "
                           "introduced variable on the boundary", node)
            if not _same_term(g, seq, Abs(x, child.term)):
                fail(path, "conclusion term is not the abstraction of the premise term", node)
        elif rule in ("E/", "E\\"):
            c = rule[1]
            fun, arg = kids
            if not isinstance(fun.type, Slash) or fun.type.connective != c:
                fail(path, f"major premise is not a {c} type", node)
            if fun.type.argument != arg.type or fun.type.result != seq.type:
                fail(path, "premise types do not fit", node)
            if seq.context != concat(c, fun.context, arg.context):
                fail(path, "conclusion context is not f_c of the premise contexts", node)
            if not _same_term(g, seq, App(fun.term, arg.term)):
                fail(path, "conclusion term is not the application of the premise terms", node)
        elif rule == "Cut":
            left, right = kids
            y = node.var
            positions = [i for i, item in enumerate(left.context)
                         if isinstance(item, Hyp) and item.name == y]
            if len(positions) != 1:
                fail(path, f"cut variable {y} is not in the left premise context", node)
            i = positions[0]
            if left.context[i].type != right.type:
                fail(path, "cut formula does not match the right premise", node)
            if left.type != seq.type:
                fail(path, "conclusion type differs from the left premise", node)
            expected_ctx = left.context[:i] + right.context + left.context[i + 1:]
            if seq.context != expected_ctx:
                fail(path, "conclusion context is not the left context with the cut "
                           "variable replaced", node)
            if not _same_term(g, seq, substitute(left.term, y, right.term)):
                fail(path, "conclusion term is not the substituted term", node)
        elif rule == "pAxE1":
            item = next((it for it in seq.context if isinstance(it, Lex)), None)
            if item is None or node.index is None:
                fail(path, "lexical proper axiom without lexeme", node)
            try:
                alpha = g.lexical_type(item.name, node.index)
            except (KeyError, IndexError):
                fail(path, f"{item.name} has no type #{node.index}", node)
            if flatten(alpha, item, node.index).key() != seq.key():
                fail(path, "not the flattened axiom of the lexeme", node)
        elif rule == "pAxE2":
            hyps = seq.hyps
            if seq.term is None:
                fail(path, "missing term", node)
            _, head, _ = head_form(seq.term)
            h = next((x for x in hyps if isinstance(head, Var) and x.name == head.name), None)
            if h is None or h.type not in strict:
                fail(path, "head variable is not strictly positive", node)
            if flatten(h.type, h).key() != seq.key():
                fail(path, "not the flattened axiom of the head variable", node)
        elif rule == "pAxI":
            if seq.key() not in system.axioms:
                fail(path, "sequent is not in the axiom base", node)

        for k, child in enumerate(node.children):
            visit(child, path + (k,))

    visit(d, ())


def is_valid(system: RuleSystem, d: Derivation) -> bool:
    try:
        check_derivation(system, d)
    except InvalidDerivation:
        return False
    return True


def extract_term(d: Derivation, g: Optional[Grammar] = None) -> Term:
    """Rebuild the proof term bottom-up.

    With a grammar the result is brought to beta-normal eta-long form;
    without one, only beta-normalized.
    """
    def build(node: Derivation) -> Term:
        rule = node.rule
        seq = node.conclusion
        if rule in ("Ax", "Lex", "pAxE1", "pAxE2", "pAxI"):
            return seq.term
        if rule in ("I/", "I\\"):
            return Abs(node.var, build(node.children[0]))
        if rule in ("E/", "E\\"):
            return App(build(node.children[0]), build(node.children[1]))
        left, right = node.children
        return beta_normalize(substitute(build(left), node.var, build(right)))

    term = beta_normalize(build(d))
    if g is not None:
        term = normalize_sequent_term(g, d.conclusion, term)
    return alpha_normal(term)


def parse_derivation(text: str) -> Derivation:
    """Read the ``to_sexpr`` form back (the golden-file format)."""
    pos = 0

    def skip():
        nonlocal pos
        while pos < len(text) and text[pos].isspace():
            pos += 1

    def node() -> Derivation:
        nonlocal pos
        skip()
        if text[pos] != "(":
            raise ValueError(f"expected '(' at offset {pos}")
        open_br = text.index("[", pos)
        close_br = text.index("]", open_br)
        label = text[pos + 1:open_br].split()
        seq = parse_sequent(text[open_br + 1:close_br])
        pos = close_br + 1
        children = []
        skip()
        while text[pos] != ")":
            children.append(node())
            skip()
        pos += 1
        rule, var, index = label[0], None, None
        for part in label[1:]:
            if part.startswith("#"):
                index = int(part[1:])
            else:
                var = part
        return Derivation(rule, seq, tuple(children), var, index)

    d = node()
    skip()
    if pos != len(text):
        raise ValueError("trailing text after derivation")
    return d
