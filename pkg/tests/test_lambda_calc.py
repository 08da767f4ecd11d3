import pytest
from hypothesis import HealthCheck, assume, given, settings, strategies as st

from lambridge.lambda_calc import (Abs, App, Arrow, Base, Const, NonLinear, TypeClash, Var,
                                   UnboundVariable, alpha_eq, alpha_normal, beta_eta_normalize,
                                   beta_normalize, beta_step, eta_long, eta_reduce, format_term,
                                   free_vars, is_beta_normal, nesting_depth, parse_term, plus,
                                   substitute, term_to_sexpr, typecheck_simple)

o = Base("o")
oo = Arrow(o, o)
CONSTS = {"c": o, "f": oo, "g": Arrow(o, oo)}
TYPES = [o, oo, Arrow(oo, o), Arrow(o, oo)]


def const_types(c):
    return CONSTS[c.name]


def depth(u):
    if isinstance(u, (Var, Const)):
        return 1
    if isinstance(u, Abs):
        return 1 + depth(u.body)
    return 1 + max(depth(u.fun), depth(u.arg))


def split_args(t):
    args = []
    while isinstance(t, Arrow):
        args.append(t.argument)
        t = t.result
    return args


@st.composite
def normal_term(draw, ty, avail, budget, counter):
    """Beta-normal eta-long linear term of type ``ty`` using every variable in ``avail`` once."""
    if isinstance(ty, Arrow):
        counter[0] += 1
        x = f"v{counter[0]}"
        body = draw(normal_term(ty.result, avail + [(x, ty.argument)], budget - 1, counter))
        return Abs(x, body)
    heads = [(Var(n), t) for n, t in avail]
    if not avail:
        heads.append((Const("c"), o))
    if budget > 1:
        heads += [(Const("f"), oo), (Const("g"), CONSTS["g"])]
    elif len(avail) > 1 and all(t == o for _, t in avail):
        heads = [(Const("g"), CONSTS["g"])]
    head, head_ty = draw(st.sampled_from(heads))
    rest = [v for v in avail if not (isinstance(head, Var) and v[0] == head.name)]
    args = split_args(head_ty)
    if not args:
        assume(not rest)
        return head
    if budget > 1:
        owner = [draw(st.integers(0, len(args) - 1)) for _ in rest]
    else:  # out of budget: spread the variables so every branch shrinks
        owner = [min(k, len(args) - 1) for k in range(len(rest))]
    out = head
    for i, a in enumerate(args):
        mine = [v for v, k in zip(rest, owner) if k == i]
        out = App(out, draw(normal_term(a, mine, budget - 1, counter)))
    return out


@st.composite
def typed_normal(draw, free=()):
    ty = draw(st.sampled_from(TYPES))
    u = draw(normal_term(ty, list(free), 4, [0]))
    assume(depth(u) <= 6)
    return u, ty


@st.composite
def expanded(draw, u):
    """Insert identity redexes at random positions, so the result beta-reduces to ``u``."""
    def go(t, k):
        if draw(st.integers(0, 4)) == 0:
            t = App(Abs(f"r{k}", Var(f"r{k}")), t)
            return t
        if isinstance(t, Abs):
            return Abs(t.var, go(t.body, k + 1))
        if isinstance(t, App):
            return App(go(t.fun, k + 1), go(t.arg, k + 1))
        return t
    return go(u, 0)


PROPS = settings(max_examples=1000, deadline=None,
                 suppress_health_check=[HealthCheck.filter_too_much, HealthCheck.too_slow])


@PROPS
@given(typed_normal())
def test_generated_terms_are_well_typed_linear_normal(pair):
    u, ty = pair
    assert typecheck_simple({}, u, const_types, expected=ty) == ty
    assert is_beta_normal(u)
    assert eta_long(u, ty, {}, const_types) == u


@PROPS
@given(st.data())
def test_normal_form_idempotent_and_unique(data):
    u, ty = data.draw(typed_normal())
    messy = data.draw(expanded(eta_reduce(u)))
    nf = beta_eta_normalize(messy, ty, {}, const_types)
    assert alpha_eq(nf, u)
    assert beta_eta_normalize(nf, ty, {}, const_types) == nf
    # every intermediate of a leftmost-outermost reduction has the same normal form
    step = messy
    while step is not None:
        assert alpha_eq(beta_eta_normalize(step, ty, {}, const_types), u)
        step = beta_step(step)


@PROPS
@given(st.data())
def test_substitution_commutes_with_normalization(data):
    hole = data.draw(st.sampled_from(TYPES))
    u, ty = data.draw(typed_normal(free=(("h", hole),)))
    v = data.draw(normal_term(hole, [], 3, [100]))
    u_messy = data.draw(expanded(u))
    v_messy = data.draw(expanded(v))
    lhs = beta_normalize(substitute(u_messy, "h", v_messy))
    rhs = beta_normalize(substitute(beta_normalize(u_messy), "h", beta_normalize(v_messy)))
    assert alpha_eq(lhs, rhs)
    assert free_vars(lhs) == frozenset()


@given(st.data())
@settings(deadline=None, suppress_health_check=[HealthCheck.filter_too_much])
def test_nesting_depth_bounded_by_binders(data):
    u, _ = data.draw(typed_normal())
    binders = 0
    t = u
    stack = [u]
    while stack:
        t = stack.pop()
        if isinstance(t, Abs):
            binders += 1
            stack.append(t.body)
        elif isinstance(t, App):
            stack += [t.fun, t.arg]
    assert 0 <= nesting_depth(u) <= binders


class TestNesting:
    def test_printed_double_nesting_term(self):
        # the two-level witness as printed for the s/(s/(s\s)) family
        u = parse_term("A (\\x. A (\\y. x (y B)))", constants={"A", "B"})
        assert nesting_depth(u) == 2

    def test_typable_double_nesting_term(self):
        u = parse_term("A (\\x. A (\\y. y (x B)))", constants={"A", "B"})
        assert nesting_depth(u) == 2

    def test_single_level(self):
        u = parse_term("A (\\x1. x1 (A (\\x2. x2 B)))", constants={"A", "B"})
        assert nesting_depth(u) == 1

    def test_first_order(self):
        assert nesting_depth(parse_term("D (L C)", constants={"D", "L", "C"})) == 0

    def test_requires_normal_form(self):
        with pytest.raises(ValueError):
            nesting_depth(App(Abs("x", Var("x")), Const("c")))


class TestTyping:
    def test_nonlinear_rejected(self):
        with pytest.raises(NonLinear):
            typecheck_simple({}, Abs("x", App(App(Const("g"), Var("x")), Var("x"))), const_types)

    def test_vacuous_rejected(self):
        with pytest.raises(NonLinear):
            typecheck_simple({}, Abs("x", Const("c")), const_types)

    def test_clash(self):
        with pytest.raises(TypeClash):
            typecheck_simple({}, App(Const("c"), Const("c")), const_types)

    def test_unbound(self):
        with pytest.raises(UnboundVariable):
            typecheck_simple({}, Var("q"))


class TestSyntax:
    def test_round_trip(self):
        for text in ["\\x. VOIT x PIERRE", "DORT (LE (QUE (\\x. VOIT x PIERRE) CHAT))",
                     "\\x1. x1 x", "A#1 (\\x. x B)"]:
            u = parse_term(text)
            assert format_term(parse_term(format_term(u))) == format_term(u)

    def test_capture_avoiding_substitution(self):
        u = Abs("y", App(Var("x"), Var("y")))
        out = substitute(u, "x", Var("y"))
        assert free_vars(out) == {"y"}
        assert alpha_eq(out, Abs("z", App(Var("y"), Var("z"))))

    def test_alpha_normal_names(self):
        assert alpha_normal(Abs("q", Var("q"))) == alpha_normal(Abs("r", Var("r")))

    def test_sexpr(self):
        assert term_to_sexpr(Abs("x", App(Const("f"), Var("x")))) == \
            "(lam x (app (const f 0) (var x)))"

    def test_plus_is_composition(self):
        u = beta_normalize(App(plus(Const("a"), Const("b")), Var("e")))
        assert u == App(Const("a"), App(Const("b"), Var("e")))
