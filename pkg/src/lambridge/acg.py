"""Abstract categorial grammars built from the extracted CFG.

Each production ``K -> w`` becomes an abstract constant typed by the
nonterminals of ``w`` (in order) arrowed into ``K``; its lexicon image is a
string-valued function over the same nonterminals. Strings live at type
``sigma = * -> *`` with concatenation as function composition.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence

from .cfg import Cfg, ParseTree, is_terminal, parse
from .core import format_type
from .lambda_calc import (SIGMA, STAR, Abs, App, Arrow, Base, Const, SimpleType, Term, TypingError,
                          Var, arrows, beta_normalize, format_simple_type, format_term, free_vars,
                          fresh_name, parse_term, plus, simple_order, typecheck_simple)


@dataclass(frozen=True)
class Signature:
    base_types: frozenset
    typing: tuple  # (constant, SimpleType) pairs in declaration order

    @property
    def constants(self) -> tuple[str, ...]:
        return tuple(c for c, _ in self.typing)

    def type_of(self, name: str) -> SimpleType:
        for c, t in self.typing:
            if c == name:
                return t
        raise KeyError(name)

    def const_types(self):
        table = dict(self.typing)

        def lookup(c: Const) -> SimpleType:
            if c.name not in table:
                raise TypingError(f"constant {c.name} is not declared")
            return table[c.name]
        return lookup

    def order(self) -> int:
        return max((simple_order(t) for _, t in self.typing), default=0)

    def validate(self) -> None:
        for c, t in self.typing:
            missing = _bases(t) - self.base_types
            if missing:
                raise ValueError(f"constant {c} uses undeclared base types {sorted(missing)}")


def _bases(t: SimpleType) -> set:
    if isinstance(t, Base):
        return {t.name}
    return _bases(t.argument) | _bases(t.result)


@dataclass(frozen=True)
class Lexicon:
    type_map: tuple  # (base name, SimpleType)
    term_map: tuple  # (constant, Term)

    def map_type(self, t: SimpleType) -> SimpleType:
        if isinstance(t, Base):
            table = dict(self.type_map)
            if t.name not in table:
                raise KeyError(f"base type {t.name} has no image")
            return table[t.name]
        return Arrow(self.map_type(t.argument), self.map_type(t.result))

    def image(self, name: str) -> Term:
        for c, u in self.term_map:
            if c == name:
                return u
        raise KeyError(name)


@dataclass(frozen=True)
class Acg:
    abstract: Signature
    object: Signature
    lexicon: Lexicon
    distinguished: SimpleType
    production_constants: tuple = field(default=())  # production index -> constant name

    def to_text(self) -> str:
        lines = ["signature abstract =",
                 f"  {' '.join(sorted(self.abstract.base_types))} : type;"]
        lines += [f"  {c} : {format_simple_type(t)};" for c, t in self.abstract.typing]
        lines += ["end", "", "signature object =", "  * : type;"]
        lines += [f"  {c} : {format_simple_type(t)};" for c, t in self.object.typing]
        lines += ["end", "", "lexicon yield (abstract) : object ="]
        lines += [f"  {b} := {format_simple_type(t)};" for b, t in self.lexicon.type_map]
        lines += [f"  {c} := {format_term(u, upper=False)};" for c, u in self.lexicon.term_map]
        lines += ["end", f"start: {format_simple_type(self.distinguished)}"]
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps({
            "abstract": {"base_types": sorted(self.abstract.base_types),
                         "constants": {c: format_simple_type(t) for c, t in self.abstract.typing}},
            "object": {"base_types": sorted(self.object.base_types),
                       "constants": {c: format_simple_type(t) for c, t in self.object.typing}},
            "lexicon": {"types": {b: format_simple_type(t) for b, t in self.lexicon.type_map},
                        "terms": {c: format_term(u, upper=False)
                                  for c, u in self.lexicon.term_map}},
            "start": format_simple_type(self.distinguished),
        }, indent=2, ensure_ascii=False)


_UNSAFE = {"/": "_r_", "\\": "_l_", "(": "_o_", ")": "_c_"}


def base_name(t) -> str:
    """Identifier-safe rendering of a nonterminal: ``s/np`` becomes ``s_r_np``."""
    text = format_type(t)
    for ch, rep in _UNSAFE.items():
        text = text.replace(ch, rep)
    return text


def constant_name(index: int, lhs) -> str:
    """Stable abstract constant name for a production: ``p{index}_{lhs}``."""
    return f"p{index}_{base_name(lhs)}"


def string_term(tokens: Sequence[str]) -> Term:
    return beta_normalize(plus(*[Const(t) for t in tokens]))


def cfg_to_acg(cfg: Cfg) -> Acg:
    bases = {base_name(nt) for nt in cfg.nonterminals}
    typing = []
    images = []
    names = []
    for idx, p in enumerate(cfg.productions):
        name = constant_name(idx, p.lhs)
        names.append(name)
        nts = [Base(base_name(s)) for s in p.nonterminals]
        typing.append((name, arrows(nts, Base(base_name(p.lhs)))))
        ys = [f"y{k + 1}" for k in range(len(nts))]
        parts: list[Term] = []
        k = 0
        for s in p.rhs:
            if is_terminal(s):
                parts.append(Const(s))
            else:
                parts.append(Var(ys[k]))
                k += 1
        body = beta_normalize(plus(*parts))
        image = body
        for y in reversed(ys):
            image = Abs(y, image)
        images.append((name, image))
    abstract = Signature(frozenset(bases), tuple(typing))
    obj = Signature(frozenset({STAR.name}), tuple((t, SIGMA) for t in sorted(cfg.terminals)))
    lexicon = Lexicon(tuple((b, SIGMA) for b in sorted(bases)), tuple(images))
    return Acg(abstract, obj, lexicon, Base(base_name(cfg.start)), tuple(names))


class LexiconError(ValueError):
    def __init__(self, constant: str, expected: SimpleType, reason: str):
        self.constant = constant
        self.expected = expected
        self.reason = reason
        super().__init__(f"{constant}: image should have type "
                         f"{format_simple_type(expected)}; {reason}")


def validate_lexicon(lex: Lexicon, src: Signature, tgt: Signature) -> None:
    """Check the homomorphism condition for every source constant."""
    tgt_types = tgt.const_types()
    for c, t in src.typing:
        try:
            expected = lex.map_type(t)
        except KeyError as exc:
            raise LexiconError(c, t, str(exc)) from None
        try:
            image = lex.image(c)
        except KeyError:
            raise LexiconError(c, expected, "no image in the lexicon") from None
        if free_vars(image):
            raise LexiconError(c, expected, "image is not closed")
        try:
            found = typecheck_simple({}, image, tgt_types)
        except TypingError as exc:
            raise LexiconError(c, expected, str(exc)) from None
        try:
            typecheck_simple({}, image, tgt_types, expected=expected)
        except TypingError:
            raise LexiconError(c, expected, f"image has type {format_simple_type(found)}") from None


def _replace_constants(u: Term, table: Mapping[str, Term]) -> Term:
    if isinstance(u, Const):
        if u.name not in table:
            raise KeyError(f"constant {u.name} has no image in the lexicon")
        return table[u.name]
    if isinstance(u, Var):
        return u
    if isinstance(u, Abs):
        return Abs(u.var, _replace_constants(u.body, table))
    return App(_replace_constants(u.fun, table), _replace_constants(u.arg, table))


def apply_lexicon(lex: Lexicon, u: Term) -> Term:
    """Homomorphic image of an abstract term, beta-normalised."""
    return beta_normalize(_replace_constants(u, dict(lex.term_map)))


def yield_string(term: Term) -> list[str]:
    """Read a closed term of type sigma back as a token list."""
    end = fresh_name("end", ())
    u = beta_normalize(App(term, Var(end)))
    tokens = []
    while True:
        if u == Var(end):
            return tokens
        if isinstance(u, App) and isinstance(u.fun, Const):
            tokens.append(u.fun.name)
            u = u.arg
            continue
        raise ValueError(f"{format_term(term)} is not a string of type * -> *")


def tree_to_abstract_term(acg: Acg, tree: ParseTree) -> Term:
    head: Term = Const(acg.production_constants[tree.production])
    for child in tree.children:
        head = App(head, tree_to_abstract_term(acg, child))
    return head


def object_membership(acg: Acg, cfg: Cfg, tokens: Sequence[str]) -> Iterator[Term]:
    """Abstract terms whose yield is ``tokens`` (through the CFG parse forest)."""
    for tree in parse(cfg, tokens):
        yield tree_to_abstract_term(acg, tree)


# ---------------------------------------------------------------------------
# Reading the text export back
# ---------------------------------------------------------------------------

_DECL = re.compile(r"^\s*(\S+)\s*(:=|:)\s*(.+?);\s*$")


def parse_simple_type(text: str) -> SimpleType:
    tokens = re.findall(r"->|\(|\)|[^\s()]+?(?=->|\s|\(|\)|$)", text)
    pos = 0

    def atom():
        nonlocal pos
        tok = tokens[pos]
        pos += 1
        if tok == "(":
            t = arrow()
            if tokens[pos] != ")":
                raise ValueError(f"unbalanced type {text!r}")
            pos += 1
            return t
        return Base(tok)

    def arrow():
        nonlocal pos
        left = atom()
        if pos < len(tokens) and tokens[pos] == "->":
            pos += 1
            return Arrow(left, arrow())
        return left

    t = arrow()
    if pos != len(tokens):
        raise ValueError(f"trailing input in type {text!r}")
    return t


def parse_acg(text: str) -> Acg:
    """Inverse of :meth:`Acg.to_text`."""
    section = None
    abstract_bases: set = set()
    abstract, objects, type_map, terms = [], [], [], []
    start = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("signature abstract"):
            section = "abstract"
            continue
        if line.startswith("signature object"):
            section = "object"
            continue
        if line.startswith("lexicon"):
            section = "lexicon"
            continue
        if line == "end":
            section = None
            continue
        if line.startswith("start:"):
            start = parse_simple_type(line[len("start:"):].strip())
            continue
        if section == "abstract" and line.endswith(": type;"):
            abstract_bases |= set(line[: -len(": type;")].split())
            continue
        if section == "object" and line.endswith(": type;"):
            continue
        m = _DECL.match(line)
        if not m:
            raise ValueError(f"cannot read line {raw!r}")
        name, op, body = m.groups()
        if section == "abstract":
            abstract.append((name, parse_simple_type(body)))
        elif section == "object":
            objects.append((name, parse_simple_type(body)))
        elif section == "lexicon":
            if name in abstract_bases:
                type_map.append((name, parse_simple_type(body)))
            else:
                terms.append((name, body))
    consts = {c for c, _ in objects} | {c for c, _ in abstract}
    lexicon = Lexicon(tuple(type_map),
                      tuple((c, parse_term(body, constants=consts)) for c, body in terms))
    names = tuple(c for c, _ in abstract)
    return Acg(Signature(frozenset(abstract_bases), tuple(abstract)),
               Signature(frozenset({"*"}), tuple(objects)), lexicon,
               start if start is not None else Base("s"), names)
