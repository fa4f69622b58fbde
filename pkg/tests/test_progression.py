from __future__ import annotations

import random

import pytest

from ltlfsyn.canonical import KEY_FF
from ltlfsyn.context import SolverContext
from ltlfsyn.formula import FormulaStore, eval_trace, temporal_closure, to_nnf
from ltlfsyn.parser import parse
from ltlfsyn.progression import eval1, progress, progress_trace

from oracles import all_letters, random_formula, random_trace


@pytest.fixture
def ctx():
    return SolverContext(["a", "b"], store=FormulaStore())


def N(ctx, text):
    return to_nnf(parse(text, ctx.store))


class TestProgress:
    def test_next(self, ctx):
        f = N(ctx, "X (a U b)")
        for letter in all_letters(["a", "b"]):
            assert progress(f, letter) is f.left

    def test_weak_next(self, ctx):
        f = N(ctx, "N a")
        assert progress(f, set()) is ctx.store.lit("a")

    def test_until_discharged(self, ctx):
        assert progress(N(ctx, "a U b"), {"b"}) is ctx.store.tt

    def test_until_pending(self, ctx):
        f = N(ctx, "a U b")
        assert progress(f, {"a"}) is f

    def test_release(self, ctx):
        f = N(ctx, "a R b")
        assert progress(f, {"b"}) is f
        assert progress(f, {"a", "b"}) is ctx.store.tt
        assert progress(f, {"a"}) is ctx.store.ff

    def test_multi_letter(self, ctx):
        f = N(ctx, "X X a")
        assert progress_trace(f, [set(), set()]) is ctx.store.lit("a")


class TestSuccessor:
    def test_next(self, ctx):
        s = ctx.canonicalize(N(ctx, "X a"))
        assert ctx.successor(s, ctx.alphabet.letter({"a"})) == ctx.canonicalize(ctx.store.lit("a"))

    def test_ff_sink(self, ctx):
        for letter in ctx.alphabet.letters():
            assert ctx.successor(KEY_FF, letter) == KEY_FF

    def test_until_fails(self, ctx):
        s = ctx.canonicalize(N(ctx, "a U b"))
        assert ctx.successor(s, 0) == KEY_FF


class TestOneStep:
    def test_until(self, ctx):
        s = ctx.canonicalize(N(ctx, "a U b"))
        assert ctx.accepts(s, ctx.alphabet.letter({"b"}))

    def test_next_never(self, ctx):
        s = ctx.canonicalize(N(ctx, "X a"))
        assert not any(ctx.accepts(s, x) for x in ctx.alphabet.letters())

    def test_weak_next_always(self, ctx):
        s = ctx.canonicalize(N(ctx, "N a"))
        assert all(ctx.accepts(s, x) for x in ctx.alphabet.letters())

    def test_acceptance_function(self, ctx):
        bdd = ctx.letter_bdd
        assert ctx.acceptance_function(ctx.canonicalize(N(ctx, "a U b"))) == bdd.var(ctx.alphabet.index["b"])
        assert ctx.acceptance_function(ctx.canonicalize(N(ctx, "N a"))) == 1
        assert ctx.acceptance_function(ctx.canonicalize(N(ctx, "X a"))) == 0


PROPS = ["a", "b", "c"]


def test_progression_preserves_truth_randomized():
    rng = random.Random(21)
    store = FormulaStore()
    for _ in range(2000):
        f = random_formula(rng, store, PROPS, 4)
        t = random_trace(rng, PROPS, 2, 6)
        assert eval_trace(f, t) == eval_trace(progress(f, t[0]), t[1:])


def test_progression_stays_in_closure():
    rng = random.Random(22)
    store = FormulaStore()
    for _ in range(500):
        f = random_formula(rng, store, PROPS, 4)
        closure = set(temporal_closure(f))
        for letter in all_letters(PROPS):
            assert set(temporal_closure(progress(f, letter))) <= closure


def test_one_step_matches_semantics_exhaustively():
    rng = random.Random(23)
    for _ in range(200):
        ctx = SolverContext(PROPS, store=FormulaStore())
        f = random_formula(rng, ctx.store, PROPS, 4)
        s = ctx.canonicalize(f)
        rep = ctx.representative(s)
        for letter in ctx.alphabet.letters():
            props = ctx.alphabet.props(letter)
            expected = eval_trace(rep, [props])
            assert ctx.accepts(s, letter) == expected
            assert eval1(rep, props) == expected
            # progress-then-check agrees with the direct evaluator
            assert ctx.letter_bdd.evaluate(ctx.acceptance_function(s), letter) == expected
