from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ltlfsyn.formula import (
    EmptyTraceError,
    FormulaStore,
    Kind,
    eval_trace,
    negate_nnf,
    temporal_closure,
    to_nnf,
    to_string,
)
from ltlfsyn.parser import LTLfSyntaxError, UndeclaredCharacterError, parse

from oracles import all_traces, random_formula, random_trace


@pytest.fixture
def store():
    return FormulaStore()


def P(text, store):
    return parse(text, store)


def N(text, store):
    return to_nnf(parse(text, store))


class TestParse:
    def test_until_of_next(self, store):
        f = P("a U (X b)", store)
        assert f is store.until(store.lit("a"), store.next_(store.lit("b")))

    def test_true(self, store):
        assert P("true", store) is store.tt

    def test_globally_is_release_of_false(self, store):
        assert P("G a", store) is store.release(store.ff, store.lit("a"))

    def test_eventually_is_until_of_true(self, store):
        assert P("F a", store) is store.until(store.tt, store.lit("a"))

    def test_precedence(self, store):
        a, b, c, d = (store.lit(x) for x in "abcd")
        # unary > U/R > & > | > ->
        f = P("X a U b & c | d -> a", store)
        expected = store.implies(store.or_(store.and_(store.until(store.next_(a), b), c), d), a)
        assert f is expected

    def test_until_is_right_associative(self, store):
        a, b, c = (store.lit(x) for x in "abc")
        assert P("a U b U c", store) is store.until(a, store.until(b, c))
        assert P("a R b R c", store) is store.release(a, store.release(b, c))

    def test_conjunction_is_left_associative(self, store):
        a, b, c = (store.lit(x) for x in "abc")
        assert P("a & b & c", store) is store.and_(store.and_(a, b), c)

    def test_negated_identifier_is_literal(self, store):
        f = P("!a", store)
        assert f.kind is Kind.LIT and not f.positive

    def test_weak_next(self, store):
        assert P("N a", store) is store.wnext(store.lit("a"))

    def test_whitespace_insensitive(self, store):
        assert P("a&(b|X c)", store) is P("  a &\n ( b | X   c ) ", store)

    def test_syntax_error_position(self, store):
        with pytest.raises(LTLfSyntaxError) as info:
            P("a &\n  & b", store)
        assert (info.value.line, info.value.column) == (2, 3)

    def test_unknown_character(self, store):
        with pytest.raises(UndeclaredCharacterError) as info:
            P("a $ b", store)
        assert info.value.column == 3

    @pytest.mark.parametrize("text", ["", "a &", "(a", "a b", "U a", "a )"])
    def test_malformed(self, store, text):
        with pytest.raises(LTLfSyntaxError):
            P(text, store)


class TestNNF:
    def test_negated_until(self, store):
        assert N("!(a U b)", store) is store.release(store.lit("a", False), store.lit("b", False))

    def test_negated_next(self, store):
        assert N("!X a", store) is store.wnext(store.lit("a", False))

    def test_implication(self, store):
        assert N("a -> b", store) is store.or_(store.lit("a", False), store.lit("b"))

    def test_iff_expansion(self, store):
        a, b = store.lit("a"), store.lit("b")
        na, nb = store.lit("a", False), store.lit("b", False)
        assert N("a <-> b", store) is store.or_(store.and_(a, b), store.and_(na, nb))

    def test_negate_examples(self, store):
        assert negate_nnf(store.tt) is store.ff
        assert negate_nnf(N("a & X b", store)) is N("!a | N !b", store)
        assert negate_nnf(N("a U b", store)) is N("!a R !b", store)

    def test_negate_rejects_raw(self, store):
        with pytest.raises(ValueError):
            negate_nnf(P("!(a U b)", store))

    def test_nnf_has_no_raw_nodes(self, store):
        f = N("!((a -> X b) <-> !(c U !d))", store)
        assert f.is_nnf

    def test_deep_formula(self, store):
        f = store.lit("a")
        for _ in range(5000):
            f = store.not_(store.next_(f))
        g = to_nnf(f)
        assert g.is_nnf


class TestClosure:
    def test_until(self, store):
        assert temporal_closure(N("a U b", store)) == [N("a U b", store), store.lit("a"), store.lit("b")]

    def test_conjunction(self, store):
        assert temporal_closure(N("a & b", store)) == [store.lit("a"), store.lit("b")]

    def test_next_of_disjunction(self, store):
        f = N("X (a | !b)", store)
        assert temporal_closure(f) == [f, store.lit("a"), store.lit("b", False)]

    def test_shared_subformulas_once(self, store):
        f = N("(a U b) & X (a U b)", store)
        assert len(temporal_closure(f)) == 4


class TestEval:
    def test_until(self, store):
        assert eval_trace(N("a U b", store), [{"a"}, {"b"}])

    def test_weak_next_at_end(self, store):
        assert eval_trace(N("N a", store), [set()])

    def test_strong_next_at_end(self, store):
        assert not eval_trace(N("X a", store), [set()])

    def test_release_at_last_instant(self, store):
        # b must hold everywhere until a, or to the end
        f = N("a R b", store)
        assert eval_trace(f, [{"b"}, {"b"}])
        assert not eval_trace(f, [{"b"}, set()])
        assert eval_trace(f, [{"a", "b"}, set()])

    def test_globally_false_never_vacuous(self, store):
        assert not eval_trace(N("G false", store), [set()])

    def test_empty_trace(self, store):
        with pytest.raises(EmptyTraceError):
            eval_trace(store.tt, [])

    def test_raw_connectives(self, store):
        f = P("!(a -> b) <-> (a & !b)", store)
        for t in all_traces(["a", "b"], 2):
            assert eval_trace(f, t)


PROPS = ["a", "b", "c"]


def test_nnf_preserves_semantics_randomized():
    rng = random.Random(7)
    store = FormulaStore()
    cases = 0
    while cases < 10_000:
        f = random_formula(rng, store, PROPS, 4, raw=True)
        g = to_nnf(f)
        assert g.is_nnf
        for _ in range(5):
            t = random_trace(rng, PROPS, 1, 5)
            assert eval_trace(g, t) == eval_trace(f, t), (f, t)
            cases += 1


def test_until_and_release_expansion():
    rng = random.Random(11)
    store = FormulaStore()
    for _ in range(300):
        f1 = random_formula(rng, store, PROPS, 2)
        f2 = random_formula(rng, store, PROPS, 2)
        u, r = store.until(f1, f2), store.release(f1, f2)
        u_exp = store.or_(f2, store.and_(f1, store.next_(u)))
        r_exp = store.and_(f2, store.or_(f1, store.wnext(r)))
        for _ in range(10):
            t = random_trace(rng, PROPS, 1, 5)
            assert eval_trace(u, t) == eval_trace(u_exp, t)
            assert eval_trace(r, t) == eval_trace(r_exp, t)


@st.composite
def formula_specs(draw, depth=4):
    if depth == 0 or draw(st.integers(0, 4)) == 0:
        return draw(st.sampled_from(["tt", "ff", "a", "b", "!a", "!b"]))
    op = draw(st.sampled_from(["&", "|", "X", "N", "U", "R", "F", "G", "!", "->", "<->"]))
    if op in ("X", "N", "F", "G", "!"):
        return (op, draw(formula_specs(depth=depth - 1)))
    return (op, draw(formula_specs(depth=depth - 1)), draw(formula_specs(depth=depth - 1)))


def build(store, spec):
    if isinstance(spec, str):
        return {"tt": store.tt, "ff": store.ff}.get(spec) or store.lit(spec.lstrip("!"), not spec.startswith("!"))
    op, *args = spec
    xs = [build(store, a) for a in args]
    return {
        "&": store.and_, "|": store.or_, "X": store.next_, "N": store.wnext, "U": store.until,
        "R": store.release, "F": store.eventually, "G": store.always, "!": store.not_,
        "->": store.implies, "<->": store.iff,
    }[op](*xs)


@settings(max_examples=300, deadline=None)
@given(formula_specs())
def test_print_parse_round_trip(spec):
    store = FormulaStore()
    f = build(store, spec)
    printed = to_string(f)
    again = to_string(parse(printed, store))
    assert again == printed
    assert to_string(parse(again, store)) == printed


@settings(max_examples=300, deadline=None)
@given(formula_specs())
def test_negate_is_involution(spec):
    store = FormulaStore()
    f = to_nnf(build(store, spec))
    assert negate_nnf(negate_nnf(f)) is f


@settings(max_examples=200, deadline=None)
@given(formula_specs(), st.lists(st.sets(st.sampled_from(["a", "b"])), min_size=1, max_size=4))
def test_negate_flips_truth(spec, trace):
    store = FormulaStore()
    f = to_nnf(build(store, spec))
    assert eval_trace(negate_nnf(f), trace) != eval_trace(f, trace)
