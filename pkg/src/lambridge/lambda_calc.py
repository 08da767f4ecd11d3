"""Linear lambda-terms over lexical constants.

Terms are immutable dataclasses.  Comparisons between terms are meant to go
through :func:`alpha_normal` (or :func:`alpha_eq`), which renames bound
variables canonically.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Optional, Union

from .core import Atom, OrientedType


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    """A constant; ``index`` selects which of the lexeme's types is meant."""
    name: str
    index: int = 0


@dataclass(frozen=True)
class Abs:
    var: str
    body: "Term"


@dataclass(frozen=True)
class App:
    fun: "Term"
    arg: "Term"


Term = Union[Var, Const, Abs, App]


def lam(names: Iterable[str], body: Term) -> Term:
    for name in reversed(list(names)):
        body = Abs(name, body)
    return body


def apply(head: Term, *args: Term) -> Term:
    for a in args:
        head = App(head, a)
    return head


# ---------------------------------------------------------------------------
# Simple (non-oriented) types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Base:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Arrow:
    argument: "SimpleType"
    result: "SimpleType"

    def __str__(self) -> str:
        return format_simple_type(self)


SimpleType = Union[Base, Arrow]


def arrows(args: Iterable[SimpleType], result: SimpleType) -> SimpleType:
    for a in reversed(list(args)):
        result = Arrow(a, result)
    return result


def format_simple_type(t: SimpleType) -> str:
    if not isinstance(t, Arrow):
        return str(t)
    left = format_simple_type(t.argument)
    if isinstance(t.argument, Arrow):
        left = f"({left})"
    return f"{left} -> {format_simple_type(t.result)}"


def simple_order(t: SimpleType) -> int:
    if isinstance(t, Base):
        return 1
    return max(1 + simple_order(t.argument), simple_order(t.result))


def erase(t: OrientedType) -> SimpleType:
    """Forget orientation: ``c(a, b)`` becomes ``a -> b``."""
    if isinstance(t, Atom):
        return Base(t.name)
    return Arrow(erase(t.argument), erase(t.result))


# ---------------------------------------------------------------------------
# Variables and substitution
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def free_vars(u: Term) -> frozenset:
    if isinstance(u, Var):
        return frozenset((u.name,))
    if isinstance(u, Const):
        return frozenset()
    if isinstance(u, Abs):
        return free_vars(u.body) - {u.var}
    return free_vars(u.fun) | free_vars(u.arg)


def all_names(u: Term) -> set[str]:
    if isinstance(u, Var):
        return {u.name}
    if isinstance(u, Const):
        return set()
    if isinstance(u, Abs):
        return {u.var} | all_names(u.body)
    return all_names(u.fun) | all_names(u.arg)


def fresh_name(base: str, avoid: Iterable[str]) -> str:
    avoid = set(avoid)
    stem = re.sub(r"\d+$", "", base) or "x"
    if base not in avoid:
        return base
    for i in itertools.count(1):
        candidate = f"{stem}{i}"
        if candidate not in avoid:
            return candidate
    raise AssertionError("unreachable")


def substitute(u: Term, x: str, v: Term) -> Term:
    """Capture-avoiding ``u[x := v]``."""
    return _subst(u, x, v, free_vars(v))


def _subst(u: Term, x: str, v: Term, fv: frozenset) -> Term:
    if isinstance(u, Var):
        return v if u.name == x else u
    if isinstance(u, Const):
        return u
    if isinstance(u, App):
        if x not in free_vars(u):
            return u
        return App(_subst(u.fun, x, v, fv), _subst(u.arg, x, v, fv))
    if u.var == x or x not in free_vars(u.body):
        return u
    if u.var in fv:
        new = fresh_name(u.var, fv | all_names(u.body) | {x})
        body = _subst(u.body, u.var, Var(new), frozenset((new,)))
        return Abs(new, _subst(body, x, v, fv))
    return Abs(u.var, _subst(u.body, x, v, fv))


def substitute_many(u: Term, mapping: Mapping[str, Term]) -> Term:
    """Simultaneous capture-avoiding substitution."""
    mapping = {k: v for k, v in mapping.items() if k in free_vars(u)}
    if not mapping:
        return u
    fv = frozenset().union(*(free_vars(v) for v in mapping.values()))
    if isinstance(u, Var):
        return mapping.get(u.name, u)
    if isinstance(u, App):
        return App(substitute_many(u.fun, mapping), substitute_many(u.arg, mapping))
    if isinstance(u, Abs):
        inner = {k: v for k, v in mapping.items() if k != u.var}
        if u.var in fv:
            new = fresh_name(u.var, fv | all_names(u.body) | set(mapping))
            body = substitute(u.body, u.var, Var(new))
            return Abs(new, substitute_many(body, inner))
        return Abs(u.var, substitute_many(u.body, inner))
    return u


def rename_free(u: Term, mapping: Mapping[str, str]) -> Term:
    return substitute_many(u, {old: Var(new) for old, new in mapping.items()})


# ---------------------------------------------------------------------------
# Alpha-equivalence
# ---------------------------------------------------------------------------


def alpha_normal(u: Term) -> Term:
    """Rename bound variables to ``x1, x2, ...`` in binding order.

    Names already free in ``u`` are skipped, so the result is a canonical
    representative of the alpha-class of ``u``.
    """
    taken = set(free_vars(u))
    counter = itertools.count(1)

    def next_name() -> str:
        while True:
            name = f"x{next(counter)}"
            if name not in taken:
                return name

    def go(t: Term, env: dict) -> Term:
        if isinstance(t, Var):
            return Var(env.get(t.name, t.name))
        if isinstance(t, Const):
            return t
        if isinstance(t, App):
            return App(go(t.fun, env), go(t.arg, env))
        name = next_name()
        return Abs(name, go(t.body, {**env, t.var: name}))

    return go(u, {})


def alpha_eq(u: Term, v: Term) -> bool:
    return alpha_normal(u) == alpha_normal(v)


# ---------------------------------------------------------------------------
# Reduction
# ---------------------------------------------------------------------------


def is_beta_normal(u: Term) -> bool:
    if isinstance(u, (Var, Const)):
        return True
    if isinstance(u, Abs):
        return is_beta_normal(u.body)
    if isinstance(u.fun, Abs):
        return False
    return is_beta_normal(u.fun) and is_beta_normal(u.arg)


def beta_normalize(u: Term) -> Term:
    """Normal-order beta normalization (terminates on typable terms)."""
    if isinstance(u, (Var, Const)):
        return u
    if isinstance(u, Abs):
        return Abs(u.var, beta_normalize(u.body))
    fun = beta_normalize(u.fun)
    if isinstance(fun, Abs):
        return beta_normalize(substitute(fun.body, fun.var, u.arg))
    return App(fun, beta_normalize(u.arg))


def beta_step(u: Term) -> Optional[Term]:
    """One leftmost-outermost beta step, or ``None`` if ``u`` is normal."""
    if isinstance(u, (Var, Const)):
        return None
    if isinstance(u, Abs):
        body = beta_step(u.body)
        return None if body is None else Abs(u.var, body)
    if isinstance(u.fun, Abs):
        return substitute(u.fun.body, u.fun.var, u.arg)
    fun = beta_step(u.fun)
    if fun is not None:
        return App(fun, u.arg)
    arg = beta_step(u.arg)
    return None if arg is None else App(u.fun, arg)


def eta_reduce(u: Term) -> Term:
    if isinstance(u, (Var, Const)):
        return u
    if isinstance(u, App):
        return App(eta_reduce(u.fun), eta_reduce(u.arg))
    body = eta_reduce(u.body)
    if isinstance(body, App) and body.arg == Var(u.var) and u.var not in free_vars(body.fun):
        return body.fun
    return Abs(u.var, body)


ConstTypes = Callable[[Const], SimpleType]


class NormalizationError(ValueError):
    pass


def head_form(u: Term) -> tuple[list[str], Term, list[Term]]:
    binders = []
    while isinstance(u, Abs):
        binders.append(u.var)
        u = u.body
    args = []
    while isinstance(u, App):
        args.append(u.arg)
        u = u.fun
    args.reverse()
    return binders, u, args


def _split_arrows(t: SimpleType) -> tuple[list[SimpleType], SimpleType]:
    args = []
    while isinstance(t, Arrow):
        args.append(t.argument)
        t = t.result
    return args, t


def eta_long(u: Term, ty: SimpleType, env: Mapping[str, SimpleType],
             const_types: ConstTypes) -> Term:
    """Eta-expand a beta-normal ``u`` to its long form at type ``ty``."""
    if isinstance(ty, Arrow):
        if isinstance(u, Abs):
            return Abs(u.var, eta_long(u.body, ty.result, {**env, u.var: ty.argument}, const_types))
        x = fresh_name("x", set(env) | all_names(u))
        return Abs(x, eta_long(App(u, Var(x)), ty.result, {**env, x: ty.argument}, const_types))
    if isinstance(u, Abs):
        raise NormalizationError(f"abstraction {format_term(u)} checked at base type {ty}")
    _, head, args = head_form(u)
    if isinstance(head, Var):
        if head.name not in env:
            raise NormalizationError(f"unbound variable {head.name}")
        head_ty = env[head.name]
    elif isinstance(head, Const):
        head_ty = const_types(head)
    else:
        raise NormalizationError(f"term {format_term(u)} is not beta-normal")
    arg_tys, res = _split_arrows(head_ty)
    if len(args) > len(arg_tys):
        raise NormalizationError(f"{format_term(head)} applied to too many arguments")
    remaining = arrows(arg_tys[len(args):], res)
    if remaining != ty:
        raise NormalizationError(
            f"{format_term(u)} has type {format_simple_type(remaining)}, expected {format_simple_type(ty)}")
    return apply(head, *(eta_long(a, t, env, const_types) for a, t in zip(args, arg_tys)))


def beta_eta_normalize(u: Term, ty: SimpleType, env: Mapping[str, SimpleType],
                       const_types: ConstTypes) -> Term:
    """The beta-normal eta-long representative of ``u`` at type ``ty``."""
    typecheck_simple(env, u, const_types, expected=ty)
    return eta_long(beta_normalize(u), ty, env, const_types)


# ---------------------------------------------------------------------------
# Simple typing with linearity
# ---------------------------------------------------------------------------


class TypingError(ValueError):
    pass


class UnboundVariable(TypingError):
    pass


class TypeClash(TypingError):
    pass


class NonLinear(TypingError):
    pass


@dataclass(frozen=True)
class TypeVar:
    """Unification variable used during inference; prints as ``'a0``."""
    id: int

    def __str__(self) -> str:
        return f"'a{self.id}"


def _resolve(t, subst: dict):
    while isinstance(t, TypeVar) and t in subst:
        t = subst[t]
    if isinstance(t, Arrow):
        return Arrow(_resolve(t.argument, subst), _resolve(t.result, subst))
    return t


def _occurs(v: TypeVar, t, subst) -> bool:
    t = _resolve(t, subst)
    if t == v:
        return True
    if isinstance(t, Arrow):
        return _occurs(v, t.argument, subst) or _occurs(v, t.result, subst)
    return False


def _unify(a, b, subst: dict, where: Term):
    a, b = _resolve(a, subst), _resolve(b, subst)
    if a == b:
        return
    if isinstance(a, TypeVar):
        if _occurs(a, b, subst):
            raise TypeClash(f"cyclic type at {format_term(where)}")
        subst[a] = b
        return
    if isinstance(b, TypeVar):
        _unify(b, a, subst, where)
        return
    if isinstance(a, Arrow) and isinstance(b, Arrow):
        _unify(a.argument, b.argument, subst, where)
        _unify(a.result, b.result, subst, where)
        return
    raise TypeClash(f"type clash at {format_term(where)}: {a} vs {b}")


def _occurrences(u: Term, name: str) -> int:
    if isinstance(u, Var):
        return int(u.name == name)
    if isinstance(u, Const):
        return 0
    if isinstance(u, Abs):
        return 0 if u.var == name else _occurrences(u.body, name)
    return _occurrences(u.fun, name) + _occurrences(u.arg, name)


def check_linear(u: Term) -> None:
    """Every bound variable used once; every free variable at most once."""
    for name in free_vars(u):
        if _occurrences(u, name) > 1:
            raise NonLinear(f"free variable {name} used more than once in {format_term(u)}")

    def go(t: Term):
        if isinstance(t, Abs):
            n = _occurrences(t.body, t.var)
            if n != 1:
                raise NonLinear(f"bound variable {t.var} used {n} times in {format_term(t)}")
            go(t.body)
        elif isinstance(t, App):
            go(t.fun)
            go(t.arg)

    go(u)


def typecheck_simple(env: Mapping[str, SimpleType], u: Term,
                     const_types: Optional[ConstTypes] = None,
                     expected: Optional[SimpleType] = None):
    """Infer the simple type of a linear term.

    Unannotated binders get unification variables; a result may therefore
    contain :class:`TypeVar` leaves (``\\x. x`` gets ``'a0 -> 'a0``).
    """
    check_linear(u)
    counter = itertools.count()
    subst: dict = {}

    def infer(t: Term, local: dict):
        if isinstance(t, Var):
            if t.name in local:
                return local[t.name]
            if t.name in env:
                return env[t.name]
            raise UnboundVariable(f"unbound variable {t.name}")
        if isinstance(t, Const):
            if const_types is None:
                raise UnboundVariable(f"no type known for constant {t.name}")
            try:
                return const_types(t)
            except (KeyError, IndexError):
                raise UnboundVariable(f"no type known for constant {t.name}") from None
        if isinstance(t, Abs):
            a = TypeVar(next(counter))
            b = infer(t.body, {**local, t.var: a})
            return Arrow(a, b)
        f = infer(t.fun, local)
        a = infer(t.arg, local)
        r = TypeVar(next(counter))
        _unify(f, Arrow(a, r), subst, t)
        return r

    ty = infer(u, {})
    if expected is not None:
        _unify(ty, expected, subst, u)
    return _resolve(ty, subst)


# ---------------------------------------------------------------------------
# Nested introductions
# ---------------------------------------------------------------------------


def nesting_depth(u: Term) -> int:
    """Largest number of enclosing binders whose variables are all free in one subterm."""
    if not is_beta_normal(u):
        raise ValueError("nesting_depth expects a beta-normal term")
    best = 0

    def go(t: Term, bound: frozenset):
        nonlocal best
        best = max(best, len(free_vars(t) & bound))
        if isinstance(t, Abs):
            go(t.body, bound | {t.var})
        elif isinstance(t, App):
            go(t.fun, bound)
            go(t.arg, bound)

    go(u, frozenset())
    return best


# ---------------------------------------------------------------------------
# Text syntax
# ---------------------------------------------------------------------------


def format_term(u: Term, upper: bool = True) -> str:
    """Render with ``\\x. body``, left-associative application, constants in capitals."""

    def const(c: Const) -> str:
        name = c.name.upper() if upper else c.name
        return f"{name}#{c.index}" if c.index else name

    def go(t: Term, ctx: int) -> str:
        # ctx 0: top / lambda body, 1: function position, 2: argument position
        if isinstance(t, Var):
            return t.name
        if isinstance(t, Const):
            return const(t)
        if isinstance(t, Abs):
            names = []
            while isinstance(t, Abs):
                names.append(t.var)
                t = t.body
            text = "\\" + " ".join(names) + ". " + go(t, 0)
            return f"({text})" if ctx > 0 else text
        text = f"{go(t.fun, 1)} {go(t.arg, 2)}"
        return f"({text})" if ctx == 2 else text

    return go(u, 0)


_TERM_TOKEN = re.compile(r"\s*(?:(\\|λ)|(\()|(\))|(\.)|([^\W\d][\w'\-]*(?:#\d+)?))")


def parse_term(text: str, constants: Optional[Iterable[str]] = None) -> Term:
    """Parse the syntax produced by :func:`format_term`.

    Without ``constants``, identifiers starting with a capital letter are
    constants (stored lower-cased); otherwise exactly the given names are.
    """
    known = None if constants is None else set(constants)
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TERM_TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            if text[pos:].strip() == "":
                break
            raise ValueError(f"cannot tokenize term at {text[pos:]!r}")
        kind = next(i for i in range(1, 6) if m.group(i) is not None)
        tokens.append((kind, m.group(kind)))
        pos = m.end()
    i = 0

    def atom() -> Optional[Term]:
        nonlocal i
        if i >= len(tokens):
            return None
        kind, tok = tokens[i]
        if kind == 2:
            i += 1
            t = expr()
            if i >= len(tokens) or tokens[i][0] != 3:
                raise ValueError(f"missing ')' in {text!r}")
            i += 1
            return t
        if kind == 5:
            i += 1
            name, _, idx = tok.partition("#")
            index = int(idx) if idx else 0
            if known is None:
                if name[0].isupper():
                    return Const(name.lower(), index)
                return Var(name)
            if name in known:
                return Const(name, index)
            return Var(name)
        return None

    def expr() -> Term:
        nonlocal i
        if i < len(tokens) and tokens[i][0] == 1:
            i += 1
            names = []
            while i < len(tokens) and tokens[i][0] == 5:
                names.append(tokens[i][1])
                i += 1
            if not names or i >= len(tokens) or tokens[i][0] != 4:
                raise ValueError(f"malformed abstraction in {text!r}")
            i += 1
            return lam(names, expr())
        head = atom()
        if head is None:
            raise ValueError(f"expected a term in {text!r}")
        while True:
            if i < len(tokens) and tokens[i][0] == 1:
                head = App(head, expr())
                break
            arg = atom()
            if arg is None:
                break
            head = App(head, arg)
        return head

    result = expr()
    if i != len(tokens):
        raise ValueError(f"trailing input in term {text!r}")
    return result


# ---------------------------------------------------------------------------
# Strings as terms of type * -> *
# ---------------------------------------------------------------------------

STAR = Base("*")
SIGMA = Arrow(STAR, STAR)
EPSILON = Abs("x", Var("x"))
CONCAT = lam(["f", "g", "z"], App(Var("f"), App(Var("g"), Var("z"))))


def plus(*parts: Term) -> Term:
    """Right-nested ``a + (b + ...)`` using the composition encoding."""
    if not parts:
        return EPSILON
    t = parts[-1]
    for p in reversed(parts[:-1]):
        t = apply(CONCAT, p, t)
    return t


def term_to_sexpr(u: Term) -> str:
    """Fully bracketed form used in JSON exports: ``(lam x (app (const voit 0) (var x)))``."""
    if isinstance(u, Var):
        return f"(var {u.name})"
    if isinstance(u, Const):
        return f"(const {u.name} {u.index})"
    if isinstance(u, Abs):
        return f"(lam {u.var} {term_to_sexpr(u.body)})"
    return f"(app {term_to_sexpr(u.fun)} {term_to_sexpr(u.arg)})"
