import itertools
import re

import pytest
from hypothesis import given, settings, strategies as st

from lambridge.axioms import build_A0, level
from lambridge.cfg import (Production, count_parses, enumerate_language, make_cfg, parse,
                           parse_bnf, reachable_productive, recognizes, to_cfg, tree_to_cut_proof)
from lambridge.core import Atom
from lambridge.derivation import RuleSystem, check_derivation, extract_term
from lambridge.lambda_calc import alpha_eq, parse_term

from conftest import golden

s, np_ = Atom("s"), Atom("np")
SENTENCE = "le chat que pierre voit dort".split()


def bnf_from_axiom_text(text: str, start: str) -> set:
    """Productions read straight off the axiom export, without the CFG module."""
    out = set()
    for line in text.splitlines():
        sequent = line.split("   # ", 1)[0]
        context, _, rest = sequent.partition(" |- ")
        result = rest.rsplit(" : ", 1)[1]
        rhs = []
        for item in context.split(", "):
            rhs.append(item.split(":", 1)[1] if ":" in item else f'"{item.lower()}"')
        out.add(f"{result} -> {' '.join(rhs)}")
    return out


class TestConstruction:
    def test_voit_production(self, g0):
        cfg = to_cfg(build_A0(g0), g0)
        assert any(str(p) == 's -> np "voit" np' for p in cfg.productions)

    def test_g1_production(self, g1):
        cfg = to_cfg(build_A0(g1), g1)
        assert 's -> "a" s r' in {str(p) for p in cfg.productions}

    def test_one_production_per_axiom(self, g0):
        axioms = level(g0, 2)
        assert len(to_cfg(axioms, g0).productions) == len(axioms)

    def test_base_all_reachable(self, g0):
        cfg = to_cfg(build_A0(g0), g0)
        reachable, productive = reachable_productive(cfg)
        assert reachable == set(cfg.nonterminals)

    def test_golden_level3(self, g0):
        text = golden("g0_level3.bnf")
        cfg = to_cfg(level(g0, 3), g0)
        assert cfg.to_bnf() == text
        independent = bnf_from_axiom_text(level(g0, 3).to_text(), "s")
        assert set(text.splitlines()[1:]) == independent

    def test_bnf_round_trip(self, g1):
        cfg = to_cfg(level(g1, 2), g1)
        back = parse_bnf(cfg.to_bnf())
        assert back.to_bnf() == cfg.to_bnf()
        assert back.start == cfg.start

    def test_bnf_errors(self):
        with pytest.raises(ValueError):
            parse_bnf("s -> np\n")
        with pytest.raises(ValueError):
            parse_bnf("start: s\ns np\n")


class TestParsing:
    def test_sentence_counts_by_level(self, g0):
        # ambiguity report for the fixture sentence, frozen from the construction
        counts = [count_parses(to_cfg(level(g0, n), g0), SENTENCE) for n in range(4)]
        assert counts == [0, 4, 8, 8]

    def test_short_sentence_replays_to_term(self, g0):
        cfg = to_cfg(build_A0(g0), g0)
        trees = list(parse(cfg, ["le", "chat", "dort"]))
        assert trees
        system = RuleSystem.s_c(g0, build_A0(g0))
        for tree in trees:
            proof = tree_to_cut_proof(cfg, tree)
            check_derivation(system, proof)
            assert alpha_eq(extract_term(proof, g0), parse_term("DORT (LE CHAT)"))

    def test_relative_clause_proofs_check(self, g0):
        axioms = level(g0, 1)
        cfg = to_cfg(axioms, g0)
        system = RuleSystem.s_c(g0, axioms, 1)
        expected = parse_term("DORT (LE (QUE (\\x. VOIT x PIERRE) CHAT))")
        for tree in parse(cfg, SENTENCE):
            proof = tree_to_cut_proof(cfg, tree)
            check_derivation(system, proof)
            assert tree.leaves(cfg) == SENTENCE
            assert alpha_eq(extract_term(proof, g0), expected)

    def test_unit_cycles_terminate(self):
        cfg = make_cfg([Production(np_, (np_,)), Production(s, (np_,)), Production(np_, (s,)),
                        Production(np_, ("x",))], s)
        trees = list(parse(cfg, ["x"]))
        # only s -> np -> x: every longer unit chain revisits np or s
        assert len(trees) == 1
        assert all(t.leaves(cfg) == ["x"] for t in trees)

    def test_empty_input(self, g0):
        cfg = to_cfg(build_A0(g0), g0)
        with pytest.raises(ValueError):
            list(parse(cfg, []))
        assert not recognizes(cfg, [])

    def test_tree_format(self, g0):
        cfg = to_cfg(build_A0(g0), g0)
        tree = next(parse(cfg, ["pierre", "dort"]))
        assert re.sub(r"\s+", " ", tree.format(cfg)).startswith("(s ")


class TestEnumeration:
    def test_g1_level2(self, g1):
        cfg = to_cfg(level(g1, 2), g1)
        lang = enumerate_language(cfg, 5)
        assert ("c",) in lang and ("b", "a", "c") in lang and ("b", "b", "a", "a", "c") in lang

    def test_zero_length(self, g0):
        assert enumerate_language(to_cfg(build_A0(g0), g0), 0) == set()


symbols = st.sampled_from(["a", "b", "S", "T"])


@st.composite
def small_cfg(draw):
    prods = []
    for _ in range(draw(st.integers(1, 6))):
        lhs = draw(st.sampled_from([Atom("S"), Atom("T")]))
        rhs = tuple(Atom(x) if x.isupper() else x
                    for x in draw(st.lists(symbols, min_size=1, max_size=3)))
        prods.append(Production(lhs, rhs))
    return make_cfg(prods, Atom("S"))


@settings(max_examples=200, deadline=None)
@given(small_cfg())
def test_enumeration_matches_chart(cfg):
    lang = enumerate_language(cfg, 4)
    for n in range(1, 5):
        for w in itertools.product("ab", repeat=n):
            member = recognizes(cfg, w)
            assert member == (w in lang)
            trees = list(parse(cfg, w))
            assert bool(trees) == member
            assert all(t.leaves(cfg) == list(w) for t in trees)
            assert len(set(trees)) == len(trees)
