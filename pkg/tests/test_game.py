from __future__ import annotations

import random
from dataclasses import replace

import pytest

from ltlfsyn.context import SolverContext
from ltlfsyn.formula import FormulaStore
from ltlfsyn.game import GameArena, cpre_env, cpre_system, extract_strategies, solve_backward, solve_fixpoint
from ltlfsyn.instance import make_instance
from ltlfsyn.strategy import verify
from ltlfsyn.tdfa import Tdfa

from oracles import environment_avoids_for, system_wins_within


def handmade(delta, accepting, system_type="moore"):
    """Arena over X={x}, Y={y}; letter bit 0 is x, bit 1 is y."""
    ctx = SolverContext(["x", "y"], store=FormulaStore())
    A = Tdfa(("x", "y"), tuple(range(len(delta))), 0, tuple(map(tuple, delta)), frozenset(accepting), ctx)
    return GameArena(A, ("x",), ("y",), system_type)


def random_arena(rng, n, system_type):
    delta = [[rng.randrange(n) for _ in range(4)] for _ in range(n)]
    acc = {(s, x) for s in range(n) for x in range(4) if rng.random() < 0.15}
    return handmade(delta, acc, system_type)


class TestCpre:
    def test_output_choice_accepts_both_inputs(self):
        A = handmade([[0, 0, 0, 0]], {(0, 2), (0, 3)})
        assert cpre_system(A, set()) == {0}

    def test_one_input_escapes(self):
        A = handmade([[0, 0, 0, 0]], {(0, 3)})
        assert cpre_system(A, set()) == set()

    def test_everything_lands_in_s(self):
        A = handmade([[1, 0, 1, 0], [0, 0, 1, 1]], set())
        assert cpre_system(A, {0, 1}) == {0, 1}

    def test_env_empty_target(self):
        A = handmade([[0, 0, 0, 0]], set())
        assert cpre_env(A, set()) == set()

    def test_env_sink(self):
        A = handmade([[0, 0, 0, 0]], set())
        assert 0 in cpre_env(A, {0})

    @pytest.mark.parametrize("system_type", ["moore", "mealy"])
    def test_duality(self, system_type):
        rng = random.Random(41)
        for _ in range(200):
            n = rng.randint(1, 6)
            A = random_arena(rng, n, system_type)
            S = set(range(n))
            D = {s for s in S if rng.random() < 0.5}
            assert cpre_system(A, S - D) == S - cpre_env(A, D)


def spec(text, system_type="moore"):
    return make_instance(text, ["x"], ["y"], system_type)


class TestFixpoint:
    def test_eventually_output(self):
        res = solve_backward(spec("F y"))
        assert res.realizable
        assert res.winning.swin_level[res.arena.tdfa.init] == 1

    def test_input_only(self):
        res = solve_backward(spec("x"))
        assert not res.realizable
        assert res.arena.tdfa.init in res.winning.ewin

    def test_true(self):
        res = solve_backward(spec("true"))
        assert res.winning.swin == {0}

    @pytest.mark.parametrize("system_type", ["moore", "mealy"])
    def test_invariants_on_random_arenas(self, system_type):
        rng = random.Random(42)
        for _ in range(200):
            A = random_arena(rng, rng.randint(1, 8), system_type)
            W = solve_fixpoint(A)
            assert W.swin.isdisjoint(W.ewin)
            assert W.swin | W.ewin == set(range(A.n_states))


class TestExtraction:
    def test_eventually_output(self):
        res = solve_backward(spec("F y"))
        assert res.strategy.lookup(res.strategy.initial) == 1

    def test_input_only_counter(self):
        res = solve_backward(spec("x"))
        st = res.counter_strategy
        assert [st.lookup(st.initial, y) for y in (0, 1)] == [0, 0]

    def test_true_takes_min_output(self):
        res = solve_backward(spec("true"))
        assert res.strategy.lookup(res.strategy.initial) == 0

    def test_xor_mealy(self):
        res = solve_backward(spec("(x & y) | (!x & !y)", "mealy"))
        assert res.realizable
        st = res.strategy
        assert [st.lookup(st.initial, x) for x in (0, 1)] == [0, 1]

    def test_both_strategies_win_their_regions(self):
        texts = ["G (x -> X y) & F y", "F (x & y)", "(x U y) & G !x", "G (x <-> X y) | F (y & X y)"]
        for text in texts:
            for system_type in ("moore", "mealy"):
                s = spec(text, system_type)
                res = solve_backward(s)
                sys_st, env_st = extract_strategies(res.arena, res.winning)
                keys = res.arena.tdfa.states
                n = res.arena.n_states
                for k in res.winning.swin:
                    moved = replace(sys_st, initial=keys[k])
                    assert verify(s, moved).ok
                    assert system_wins_within(res.arena.tdfa.context, moved, n)
                for k in res.winning.ewin:
                    moved = replace(env_st, initial=keys[k])
                    assert verify(s, moved).ok
                    assert environment_avoids_for(res.arena.tdfa.context, moved, n)
