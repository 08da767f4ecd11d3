"""Oriented types, Lambek grammars and the context-word algebra.

A type is either an :class:`Atom` or a :class:`Slash`.  ``Slash('/', a, b)``
is the type ``b/a`` (argument on the right) and ``Slash('\\', a, b)`` is
``a\\b`` (argument on the left).  In both cases ``argument`` is ``a`` and
``result`` is ``b``, so the connective alone says on which side the
argument is consumed.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Union

RIGHT = "/"
LEFT = "\\"
CONNECTIVES = (RIGHT, LEFT)


class GrammarError(ValueError):
    """Raised for malformed type expressions or grammar files."""


# ---------------------------------------------------------------------------
# Types
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class Atom:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, order=True)
class Slash:
    connective: str
    argument: "OrientedType"
    result: "OrientedType"

    def __post_init__(self):
        if self.connective not in CONNECTIVES:
            raise GrammarError(f"unknown connective {self.connective!r}")

    def __str__(self) -> str:
        return format_type(self)


OrientedType = Union[Atom, Slash]


def complement(c: str) -> str:
    return LEFT if c == RIGHT else RIGHT


def slash(c: str, argument: OrientedType, result: OrientedType) -> Slash:
    """The compact constructor ``c(argument, result)``."""
    return Slash(c, argument, result)


def format_type(t: OrientedType) -> str:
    # Every non-atomic immediate subtype is parenthesised, as in the usual
    # notation ``(np\s)/np``.
    if isinstance(t, Atom):
        return t.name

    def wrap(u: OrientedType) -> str:
        return u.name if isinstance(u, Atom) else f"({format_type(u)})"

    if t.connective == RIGHT:
        return f"{wrap(t.result)}/{wrap(t.argument)}"
    return f"{wrap(t.argument)}\\{wrap(t.result)}"


def type_key(t: OrientedType) -> str:
    """Total order used wherever deterministic iteration over types matters."""
    return format_type(t)


_TOKEN = re.compile(r"[^\W\d][\w']*|[()/\\]|\S")


def _tokenize(text: str) -> list[str]:
    tokens = _TOKEN.findall(text)
    for tok in tokens:
        if len(tok) == 1 and tok not in "()/\\" and not (tok.isalpha() or tok == "_"):
            raise GrammarError(f"unexpected character {tok!r} in type {text!r}")
    return tokens


def parse_type(text: str) -> OrientedType:
    """Parse a type expression.

    ``/`` and ``\\`` share one precedence level and do not mix without
    parentheses.  A chain of a single connective associates toward the
    result: ``s/np/np`` is ``(s/np)/np`` and ``np\\np\\s`` is ``np\\(np\\s)``.
    ``np\\s/np`` is rejected as ambiguous.
    """
    tokens = _tokenize(text)
    if not tokens:
        raise GrammarError("empty type expression")
    pos = 0

    def primary() -> OrientedType:
        nonlocal pos
        if pos >= len(tokens):
            raise GrammarError(f"unexpected end of type {text!r}")
        tok = tokens[pos]
        if tok == "(":
            pos += 1
            inner = expr()
            if pos >= len(tokens) or tokens[pos] != ")":
                raise GrammarError(f"missing ')' in type {text!r}")
            pos += 1
            return inner
        if tok in ("/", "\\", ")"):
            raise GrammarError(f"unexpected {tok!r} in type {text!r}")
        pos += 1
        return Atom(tok)

    def expr() -> OrientedType:
        nonlocal pos
        operands = [primary()]
        ops: list[str] = []
        while pos < len(tokens) and tokens[pos] in CONNECTIVES:
            ops.append(tokens[pos])
            pos += 1
            operands.append(primary())
        if not ops:
            return operands[0]
        if len(set(ops)) > 1:
            raise GrammarError(f"mixed '/' and '\\' need parentheses in {text!r}")
        if ops[0] == RIGHT:
            t = operands[0]
            for arg in operands[1:]:
                t = Slash(RIGHT, arg, t)
            return t
        t = operands[-1]
        for arg in reversed(operands[:-1]):
            t = Slash(LEFT, arg, t)
        return t

    result = expr()
    if pos != len(tokens):
        raise GrammarError(f"trailing input in type {text!r}")
    return result


def atoms_of(t: OrientedType) -> set[str]:
    if isinstance(t, Atom):
        return {t.name}
    return atoms_of(t.argument) | atoms_of(t.result)


def order(t: OrientedType) -> int:
    if isinstance(t, Atom):
        return 1
    return max(1 + order(t.argument), order(t.result))


def decompose(t: OrientedType) -> tuple[list[tuple[str, OrientedType]], Atom]:
    """Split ``t = c1(a1, c2(a2, ... cn(an, r)))`` into ``[(c1, a1), ...], r``."""
    args = []
    while isinstance(t, Slash):
        args.append((t.connective, t.argument))
        t = t.result
    return args, t


def recompose(args: Iterable[tuple[str, OrientedType]], result: OrientedType) -> OrientedType:
    t = result
    for c, a in reversed(list(args)):
        t = Slash(c, a, t)
    return t


def subtypes(t: OrientedType) -> Iterator[OrientedType]:
    yield t
    if isinstance(t, Slash):
        yield from subtypes(t.argument)
        yield from subtypes(t.result)


# ---------------------------------------------------------------------------
# Grammars
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Grammar:
    """A Lambek grammar ``(atoms, lexemes, assignment, distinguished)``.

    ``assignment`` maps each lexeme to a tuple of types; the tuple order is the
    file order and doubles as the type index recorded in lexical constants.
    """

    atoms: frozenset
    assignment: tuple  # tuple of (lexeme, tuple of types), file order
    distinguished: str = "s"

    def __post_init__(self):
        if self.distinguished not in self.atoms:
            raise GrammarError(f"start symbol {self.distinguished!r} is not a declared atom")
        lexemes = set()
        for lexeme, types in self.assignment:
            if lexeme in lexemes:
                raise GrammarError(f"duplicate lexeme entry {lexeme!r}")
            lexemes.add(lexeme)
            if not types:
                raise GrammarError(f"lexeme {lexeme!r} has no type")
            for t in types:
                missing = atoms_of(t) - self.atoms
                if missing:
                    raise GrammarError(
                        f"type {format_type(t)} of {lexeme!r} uses undeclared atoms {sorted(missing)}")
        clash = lexemes & self.atoms
        if clash:
            raise GrammarError(f"names used both as atoms and lexemes: {sorted(clash)}")

    @classmethod
    def build(cls, entries: dict[str, Iterable], atoms: Optional[Iterable[str]] = None,
              start: str = "s") -> "Grammar":
        """Convenience constructor: ``entries`` maps lexeme -> types (str or typed)."""
        assignment = []
        for lexeme, types in entries.items():
            if isinstance(types, (str, Atom, Slash)):
                types = [types]
            parsed = tuple(parse_type(t) if isinstance(t, str) else t for t in types)
            assignment.append((lexeme, parsed))
        if atoms is None:
            atoms = set()
            for _, ts in assignment:
                for t in ts:
                    atoms |= atoms_of(t)
            atoms.add(start)
        return cls(frozenset(atoms), tuple(assignment), start)

    @property
    def lexemes(self) -> tuple[str, ...]:
        return tuple(lexeme for lexeme, _ in self.assignment)

    def types_of(self, lexeme: str) -> tuple:
        for name, types in self.assignment:
            if name == lexeme:
                return types
        raise KeyError(lexeme)

    def lexical_type(self, lexeme: str, index: int) -> OrientedType:
        return self.types_of(lexeme)[index]

    def lexical_types(self) -> list[OrientedType]:
        seen: list[OrientedType] = []
        for _, types in self.assignment:
            for t in types:
                if t not in seen:
                    seen.append(t)
        return seen

    @property
    def start(self) -> Atom:
        return Atom(self.distinguished)

    def extend(self, entries: dict[str, Iterable]) -> "Grammar":
        extra = Grammar.build(entries, start=self.distinguished)
        return Grammar(self.atoms | extra.atoms, self.assignment + extra.assignment,
                       self.distinguished)

    def to_text(self) -> str:
        lines = [f"atoms: {' '.join(sorted(self.atoms))}", f"start: {self.distinguished}"]
        for lexeme, types in self.assignment:
            for t in types:
                lines.append(f"{lexeme} : {format_type(t)}")
        return "\n".join(lines) + "\n"


def parse_grammar(text: str) -> Grammar:
    """Read the line-oriented grammar format (``lexeme : type`` lines)."""
    atoms: Optional[set[str]] = None
    start = None
    entries: dict[str, list[OrientedType]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise GrammarError(f"line {lineno}: expected 'name : value'")
        key, value = (part.strip() for part in line.split(":", 1))
        if key == "atoms":
            atoms = set(value.split())
        elif key == "start":
            start = value
        else:
            if not key or not re.fullmatch(r"[^\s:#]+", key):
                raise GrammarError(f"line {lineno}: bad lexeme {key!r}")
            try:
                t = parse_type(value)
            except GrammarError as exc:
                raise GrammarError(f"line {lineno}: {exc}") from None
            entries.setdefault(key, [])
            if t not in entries[key]:
                entries[key].append(t)
    if start is None:
        start = "s"
    if atoms is None:
        atoms = {start}
        for ts in entries.values():
            for t in ts:
                atoms |= atoms_of(t)
    assignment = tuple((lexeme, tuple(ts)) for lexeme, ts in entries.items())
    return Grammar(frozenset(atoms), assignment, start)


def load_grammar(path) -> Grammar:
    with open(path, encoding="utf-8") as fh:
        return parse_grammar(fh.read())


# ---------------------------------------------------------------------------
# Signed subformulas
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SignedOccurrences:
    positive: frozenset
    negative: frozenset
    strict_positive: frozenset

    def sorted_strict_positive(self) -> list[OrientedType]:
        return sorted(self.strict_positive, key=type_key)


def signed_occurrences(g: Grammar) -> SignedOccurrences:
    positive: set = set()
    negative: set = set()
    strict: set = set()

    def visit(t: OrientedType, sign: bool, proper: bool):
        (positive if sign else negative).add(t)
        if sign and proper:
            strict.add(t)
        if isinstance(t, Slash):
            visit(t.result, sign, True)
            visit(t.argument, not sign, True)

    for t in g.lexical_types():
        visit(t, True, False)
    return SignedOccurrences(frozenset(positive), frozenset(negative), frozenset(strict))


# ---------------------------------------------------------------------------
# Context words
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class Lex:
    """An occurrence of a lexeme in a context word."""
    name: str

    def __str__(self) -> str:
        return self.name.upper()


@dataclass(frozen=True, order=True)
class Hyp:
    """A typed variable ``name : type`` in a context word."""
    name: str
    type: OrientedType

    def __str__(self) -> str:
        return f"{self.name}:{format_type(self.type)}"


ContextItem = Union[Lex, Hyp]
ContextWord = tuple  # non-empty tuple of ContextItem


def check_word(word: ContextWord) -> ContextWord:
    if not word:
        raise ValueError("context words are never empty")
    names = [item.name for item in word if isinstance(item, Hyp)]
    if len(names) != len(set(names)):
        raise ValueError(f"variable names repeat in context {format_word(word)}")
    return word


def format_word(word: Iterable[ContextItem]) -> str:
    return ", ".join(str(item) for item in word)


def concat(c: str, left: ContextWord, right: ContextWord) -> ContextWord:
    """``f_c(left, right)``: ``/`` puts ``right`` after ``left``, ``\\`` before."""
    return tuple(left) + tuple(right) if c == RIGHT else tuple(right) + tuple(left)


def attach(word: ContextWord, c: str, item: ContextItem) -> ContextWord:
    return concat(c, word, (item,))


def split_boundary(word: ContextWord, c: str) -> Optional[tuple[ContextWord, ContextItem]]:
    """Inverse of :func:`attach`; ``None`` when the remainder would be empty."""
    if len(word) < 2:
        return None
    if c == RIGHT:
        return tuple(word[:-1]), word[-1]
    return tuple(word[1:]), word[0]


def variables(word: Iterable[ContextItem]) -> list[Hyp]:
    return [item for item in word if isinstance(item, Hyp)]
