"""Tests for the sequent calculus: checking, search and generated derivations."""

import pytest

from dillbench.algebra import SemiringMode
from dillbench.corpus import NetGenerator, generate_corpus, load_corpus
from dillbench.errors import BudgetExceeded, NotFound, RuleViolation
from dillbench.interpret import interpret_derivation
from dillbench.logic import (
    Ax,
    Codereliction,
    CutRule,
    Dereliction,
    Empty,
    Mix,
    Perm,
    TensRule,
    Weakening,
    check_derivation,
    derivation_to_sexp,
    derivations,
    rule_counts,
    sequentialize,
)
from dillbench.parser import parse_context, parse_net, parse_types
from dillbench.syntax import alpha_equivalent
from dillbench.typecheck import Atom, CoAtom, Excl, Quest, TensType, typecheck_net


class TestChecker:
    def test_axiom(self):
        net, types, context = check_derivation(Ax("x", Atom("a")))
        assert types == (Atom("a"), CoAtom("a"))
        assert alpha_equivalent(net, parse_net("([x, ~x] ;)"))

    def test_cut_of_two_axioms(self):
        d = CutRule(Ax("x", Atom("a")), Perm((1, 0), Ax("y", Atom("a"))))
        _, types, _ = check_derivation(d)
        assert types == (Atom("a"), CoAtom("a"))

    def test_cut_needs_dual_conclusions(self):
        with pytest.raises(RuleViolation):
            check_derivation(CutRule(Ax("x", Atom("a")), Ax("y", Atom("a"))))

    def test_exponential_rules(self):
        d = Codereliction(Perm((1, 0), Dereliction(Ax("x", Atom("a")))))
        _, types, _ = check_derivation(d)
        assert types == (Quest(CoAtom("a")), Excl(Atom("a")))

    def test_weakening_of_the_empty_sequent(self):
        _, types, _ = check_derivation(Weakening(Atom("a"), Empty()))
        assert types == (Quest(Atom("a")),)

    def test_tensor(self):
        d = TensRule(Ax("x", Atom("a")), Ax("y", Atom("b")))
        _, types, _ = check_derivation(d)
        assert types[-1] == TensType(CoAtom("a"), CoAtom("b"))
        assert rule_counts(d) == {"Ax": 2, "TensRule": 1}

    def test_sexp(self):
        text = derivation_to_sexp(Mix(Ax("x", Atom("a")), Empty()))
        assert text.startswith("(")
        assert text.count("(") == text.count(")")


class TestSearch:
    def test_identity(self):
        gamma = parse_types("a, ~a")
        d = sequentialize(parse_net("([x, ~x] ;)"), gamma)
        assert check_derivation(d)[1] == gamma

    def test_bundled_corpus_is_derivable(self):
        for entry in load_corpus():
            net, types, context = entry.parsed()
            d = sequentialize(net, types, context)
            found, proved, _ = check_derivation(d)
            assert proved == types, entry.name
            assert alpha_equivalent(found, typecheck_net(context, net, types).net), entry.name

    def test_switching_cycle_is_not_derivable(self):
        net = parse_net("([] ; <x tens y | ~x par ~y>)")
        with pytest.raises(NotFound):
            sequentialize(net, (), parse_context('{"x": "a", "y": "b"}'))

    def test_budget(self):
        net = parse_net("([~x, ~y, ~u, ~v] ; <c(d(x), d(y)) | cc(cd(u), cd(v))>)")
        with pytest.raises(BudgetExceeded):
            sequentialize(net, parse_types("~a, ~a, a, a"), budget=1)

    def test_derivations_interpret_alike(self):
        entry = next(e for e in load_corpus() if e.name == "contraction-cocontraction")
        net, types, context = entry.parsed()
        found = derivations(net, types, context, limit=4)
        assert found
        for mode in (SemiringMode.BOOL, SemiringMode.RAT):
            values = [interpret_derivation(d, entry.valuation(), 2, mode) for d in found]
            assert all(v == values[0] for v in values)


class TestGenerator:
    def test_generated_nets_are_derivable(self):
        for g in generate_corpus(10, seed=3):
            net, types, _ = check_derivation(g.derivation)
            assert types == g.types
            assert alpha_equivalent(net, g.net)

    def test_generation_is_seeded(self):
        first = [g.net for g in generate_corpus(5, seed=11)]
        second = [g.net for g in generate_corpus(5, seed=11)]
        assert first == second

    def test_chain_rule_knob_builds_coderelictions_under_boxes(self):
        gen = NetGenerator(seed=1, chain_rule=True)
        d = gen.prove(Excl(Atom("a")), 3, prefer="prom")
        _, types, _ = check_derivation(d)
        assert types[-1] == Excl(Atom("a"))

