from __future__ import annotations

import random

import pytest

from ltlfsyn.canonical import KEY_FF, KEY_TT, StateSpace, UnknownKeyError
from ltlfsyn.formula import FormulaStore, eval_trace, to_nnf
from ltlfsyn.parser import parse
from ltlfsyn.progression import progress

from oracles import all_letters, random_formula, random_trace


@pytest.fixture(params=[False, True], ids=["folding", "strict"])
def space(request):
    return StateSpace(FormulaStore(), strict=request.param)


def N(space, text):
    return to_nnf(parse(text, space.store))


class TestCanonicalize:
    def test_idempotence(self, space):
        f = N(space, "a U X b")
        assert space.canonicalize(space.store.or_(f, f)) == space.canonicalize(f)

    def test_expansion_is_not_propositional(self, space):
        # equal on traces, but X(a U b) is its own atom
        assert space.canonicalize(N(space, "a U b")) != space.canonicalize(N(space, "b | (a & X (a U b))"))

    def test_identity_element(self, space):
        f = N(space, "a U b")
        assert space.canonicalize(space.store.and_(space.store.tt, f)) == space.canonicalize(f)

    def test_constants(self, space):
        assert space.canonicalize(space.store.tt) == KEY_TT
        assert space.canonicalize(space.store.ff) == KEY_FF


class TestPropEquiv:
    def test_commutativity(self, space):
        assert space.prop_equiv(N(space, "a & b"), N(space, "b & a"))

    def test_distinct_atoms(self, space):
        assert not space.prop_equiv(N(space, "a U b"), N(space, "b U a"))

    def test_excluded_middle_depends_on_mode(self, space):
        same = space.prop_equiv(N(space, "p | !p"), space.store.tt)
        assert same is (not space.strict)

    def test_distributivity(self, space):
        assert space.prop_equiv(N(space, "X a & (b | G c)"), N(space, "(X a & b) | (G c & X a)"))


class TestRepresentative:
    def test_first_seen(self, space):
        f = N(space, "a U b")
        k = space.canonicalize(f)
        assert space.representative(k) is f
        g = space.store.and_(space.store.tt, space.store.or_(f, f))
        assert space.representative(space.canonicalize(g)) is f

    def test_ff(self, space):
        assert space.representative(KEY_FF) is space.store.ff

    def test_unknown(self, space):
        with pytest.raises(UnknownKeyError):
            space.representative(987654)


PROPS = ["a", "b"]


def _random_pairs(rng, space, n):
    """Pairs that are propositionally equivalent by construction or by chance."""
    store = space.store
    for _ in range(n):
        f = random_formula(rng, store, PROPS, 3)
        g = random_formula(rng, store, PROPS, 3)
        # rewrite f with commutativity/absorption so equivalence is guaranteed
        yield f, store.or_(store.and_(f, store.tt), store.and_(f, g)), g


def test_equivalence_relation(space):
    rng = random.Random(3)
    store = space.store
    fs = [random_formula(rng, store, PROPS, 3) for _ in range(60)]
    keys = [space.canonicalize(f) for f in fs]
    for i, f in enumerate(fs):
        assert space.prop_equiv(f, f)
        for j, g in enumerate(fs):
            assert space.prop_equiv(f, g) == space.prop_equiv(g, f) == (keys[i] == keys[j])


def test_equivalent_formulas_agree_on_traces(space):
    rng = random.Random(5)
    for f, f2, _ in _random_pairs(rng, space, 300):
        assert space.prop_equiv(f, f2)
        for _ in range(5):
            t = random_trace(rng, PROPS, 1, 4)
            assert eval_trace(f, t) == eval_trace(f2, t)


def test_progression_respects_equivalence(space):
    rng = random.Random(8)
    for f, f2, _ in _random_pairs(rng, space, 300):
        for letter in all_letters(PROPS):
            assert space.prop_equiv(progress(f, letter), progress(f2, letter))


def test_deterministic_across_runs():
    texts = ["a U b", "X (a | b) & G c", "b U a", "a | !a"]

    def run():
        space = StateSpace(FormulaStore())
        return [space.canonicalize(to_nnf(parse(t, space.store))) for t in texts]

    assert run() == run()
