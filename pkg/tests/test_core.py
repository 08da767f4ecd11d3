import itertools

import pytest
from hypothesis import given, strategies as st

from lambridge.core import (LEFT, RIGHT, Atom, Grammar, GrammarError, Hyp, Lex, Slash, attach,
                            decompose, format_type, order, parse_grammar, parse_type, recompose,
                            signed_occurrences, split_boundary)

from conftest import grammar

np_, s, n = Atom("np"), Atom("s"), Atom("n")


def T(text):
    return parse_type(text)


class TestTypes:
    def test_print_orientation(self):
        assert format_type(Slash(RIGHT, np_, s)) == "s/np"
        assert format_type(Slash(LEFT, np_, s)) == "np\\s"

    def test_parse_round_trip(self):
        for text in ["(np\\s)/np", "(n\\n)/(s/np)", "s/(s/(s\\s))", "np"]:
            assert format_type(T(text)) == text

    def test_mixed_connectives_need_parentheses(self):
        with pytest.raises(ValueError):
            T("np\\s/np")

    def test_single_connective_chain_associates_toward_result(self):
        assert T("s/np/np") == T("(s/np)/np")
        assert T("np\\np\\s") == T("np\\(np\\s)")

    @pytest.mark.parametrize("text,expected", [("np", 1), ("(np\\s)/np", 2), ("s/(s/(s\\s))", 4)])
    def test_order(self, text, expected):
        assert order(T(text)) == expected

    def test_decompose_examples(self):
        assert decompose(s) == ([], s)
        assert decompose(T("(np\\s)/np")) == ([(RIGHT, np_), (LEFT, np_)], s)
        assert decompose(T("(n\\n)/(s/np)")) == ([(RIGHT, T("s/np")), (LEFT, n)], n)


def all_types(depth, atoms=("p", "q")):
    if depth == 0:
        return [Atom(a) for a in atoms]
    smaller = all_types(depth - 1, atoms)
    out = list(smaller)
    for a, b in itertools.product(smaller, repeat=2):
        for c in (RIGHT, LEFT):
            t = Slash(c, a, b)
            if t not in out:
                out.append(t)
    return out


def test_decompose_round_trip_exhaustive():
    # every type over two atoms with at most two nested connectives, plus depth-5 spines
    types = all_types(2)
    spine = Atom("p")
    for k in range(5):
        spine = Slash((RIGHT, LEFT)[k % 2], types[k % len(types)], spine)
    types.append(spine)
    for t in types:
        args, result = decompose(t)
        assert isinstance(result, Atom)
        assert recompose(args, result) == t


def test_order_exceeds_argument_order():
    for t in all_types(2):
        if isinstance(t, Slash):
            assert order(t) > order(t.argument)


class TestGrammar:
    def test_text_format(self):
        g = parse_grammar("atoms: s np\nstart: s\n# comment\npierre : np\ndort : np\\s\n")
        assert g.lexemes == ("pierre", "dort")
        assert g.types_of("dort") == (T("np\\s"),)

    def test_multiple_lines_give_multiple_types(self):
        g = parse_grammar("atoms: s np n\nx : np\nx : n\ny : np\\s\n")
        assert g.types_of("x") == (np_, n)

    def test_start_must_be_atom(self):
        with pytest.raises(GrammarError):
            parse_grammar("atoms: np\nstart: s\nx : np\n")

    def test_undeclared_atom_rejected(self):
        with pytest.raises(GrammarError):
            parse_grammar("atoms: s\nx : np\\s\n")

    def test_atom_lexeme_clash_rejected(self):
        with pytest.raises(GrammarError):
            parse_grammar("atoms: s np\nnp : s\n")


class TestSignedOccurrences:
    def test_g0(self):
        occ = signed_occurrences(grammar("g0"))
        assert np_ in occ.strict_positive
        assert occ.strict_positive == {T("np\\s"), s, np_, T("n\\n"), n}

    def test_g1(self):
        occ = signed_occurrences(grammar("g1"))
        assert {Atom("r"), s, T("s/r")} <= occ.strict_positive

    def test_atomic_grammar_has_no_strict_positives(self):
        occ = signed_occurrences(Grammar.build({"t": "p"}, start="p"))
        assert occ.strict_positive == frozenset()

    def test_closure_rules(self):
        for name in ("g0", "g0_ext", "g1", "g2", "g3"):
            g = grammar(name)
            occ = signed_occurrences(g)
            assert set(g.lexical_types()) <= occ.positive
            for t in occ.positive:
                if isinstance(t, Slash):
                    assert t.result in occ.positive and t.argument in occ.negative
            for t in occ.negative:
                if isinstance(t, Slash):
                    assert t.result in occ.negative and t.argument in occ.positive


type_text = st.sampled_from(["np", "n", "s", "np\\s", "n/n", "(np\\s)/np", "s/(s/np)",
                             "(n\\n)/(s/np)", "s/(np\\s)"])


@given(st.lists(st.tuples(st.sampled_from("abcdef"), type_text), min_size=1, max_size=5),
       st.tuples(st.sampled_from("uvw"), type_text))
def test_signed_occurrences_monotone(entries, extra):
    def build(items):
        table = {}
        for lexeme, t in items:
            table.setdefault(lexeme, [])
            if t not in table[lexeme]:
                table[lexeme].append(t)
        return Grammar.build(table, atoms={"s", "np", "n"})

    small = signed_occurrences(build(entries))
    big = signed_occurrences(build(entries + [extra]))
    assert small.positive <= big.positive
    assert small.negative <= big.negative
    assert small.strict_positive <= big.strict_positive


class TestContextWords:
    def test_attach(self):
        z1, z2 = Hyp("z1", np_), Hyp("z2", np_)
        w = attach((Lex("voit"),), RIGHT, z1)
        assert w == (Lex("voit"), z1)
        assert attach(w, LEFT, z2) == (z2, Lex("voit"), z1)

    def test_split_boundary(self):
        z1, z2 = Hyp("z1", np_), Hyp("z2", np_)
        w = (z2, Lex("voit"), z1)
        assert split_boundary(w, RIGHT) == ((z2, Lex("voit")), z1)
        assert split_boundary(w, LEFT) == ((Lex("voit"), z1), z2)
        assert split_boundary((Lex("voit"),), RIGHT) is None

    @given(st.lists(st.sampled_from(["a", "b", "c"]), min_size=1, max_size=5),
           st.sampled_from([RIGHT, LEFT]), st.sampled_from(["d", "e"]))
    def test_split_inverts_attach(self, names, c, extra):
        w = tuple(Lex(x) for x in names)
        assert split_boundary(attach(w, c, Lex(extra)), c) == (w, Lex(extra))

    @given(st.lists(st.sampled_from(["a", "b"]), min_size=1, max_size=4),
           st.sampled_from(["c", "d"]), st.sampled_from(["e", "f"]))
    def test_attach_associative(self, names, a, b):
        w = tuple(Lex(x) for x in names)
        assert attach(attach(w, RIGHT, Lex(a)), RIGHT, Lex(b)) == attach(w + (Lex(a),), RIGHT, Lex(b))
