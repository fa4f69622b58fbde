"""Independent brute-force oracles and random generators shared by the tests."""
from __future__ import annotations

import itertools
import random
from functools import lru_cache

from ltlfsyn.formula import Formula, FormulaStore, eval_trace, temporal_closure


def all_letters(props):
    props = list(props)
    return [frozenset(p for k, p in enumerate(props) if (bits >> k) & 1) for bits in range(1 << len(props))]


def all_traces(props, max_len, min_len=1):
    letters = all_letters(props)
    for n in range(min_len, max_len + 1):
        yield from (list(t) for t in itertools.product(letters, repeat=n))


def brute_min_model_length(f: Formula, props, max_len: int):
    for n in range(1, max_len + 1):
        for t in all_traces(props, n, n):
            if eval_trace(f, t):
                return n
    return None


def brute_counterexample(f: Formula, g: Formula, props, max_len: int):
    for t in all_traces(props, max_len):
        if eval_trace(f, t) and not eval_trace(g, t):
            return t
    return None


# -- random formulas ---------------------------------------------------------

_NNF_KINDS = ("lit", "lit", "and", "or", "X", "N", "U", "R", "F", "G")
_RAW_KINDS = _NNF_KINDS + ("not", "not", "imp", "iff")


def random_formula(rng: random.Random, store: FormulaStore, props, depth: int, raw: bool = False) -> Formula:
    if depth <= 0 or rng.random() < 0.2:
        r = rng.random()
        if r < 0.06:
            return store.tt
        if r < 0.12:
            return store.ff
        return store.lit(rng.choice(props), rng.random() < 0.6)
    kind = rng.choice(_RAW_KINDS if raw else _NNF_KINDS)
    sub = lambda: random_formula(rng, store, props, depth - 1, raw)
    if kind == "lit":
        return store.lit(rng.choice(props), rng.random() < 0.6)
    if kind == "and":
        return store.and_(sub(), sub())
    if kind == "or":
        return store.or_(sub(), sub())
    if kind == "X":
        return store.next_(sub())
    if kind == "N":
        return store.wnext(sub())
    if kind == "U":
        return store.until(sub(), sub())
    if kind == "R":
        return store.release(sub(), sub())
    if kind == "F":
        return store.eventually(sub())
    if kind == "G":
        return store.always(sub())
    if kind == "not":
        return store.not_(sub())
    if kind == "imp":
        return store.implies(sub(), sub())
    return store.iff(sub(), sub())


def random_bounded(rng: random.Random, store: FormulaStore, props, max_tcl: int, depth: int = 4,
                   min_tcl: int = 1) -> Formula:
    """Random NNF formula whose temporal closure has between min_tcl and max_tcl atoms."""
    while True:
        f = random_formula(rng, store, props, depth)
        n = len(temporal_closure(f))
        if min_tcl <= n <= max_tcl:
            return f


def random_trace(rng: random.Random, props, min_len: int, max_len: int):
    n = rng.randint(min_len, max_len)
    return [frozenset(p for p in props if rng.random() < 0.5) for _ in range(n)]


# -- exhaustive game checks ----------------------------------------------------

def system_wins_within(ctx, st, depth: int) -> bool:
    """Every opponent behaviour against ``st`` hits an accepting transition within ``depth`` rounds."""
    n_opp = 1 << len(st.opponent_vars)

    @lru_cache(maxsize=None)
    def wins(s, d):
        if d == 0:
            return False
        for o in range(n_opp):
            letter = st.letter(st.lookup(s, o), o)
            if ctx.accepts(s, letter):
                continue
            if not wins(ctx.successor(s, letter), d - 1):
                return False
        return True

    return wins(st.initial, depth)


def environment_avoids_for(ctx, st, depth: int) -> bool:
    """No system behaviour against the environment strategy ``st`` accepts within ``depth`` rounds."""
    n_opp = 1 << len(st.opponent_vars)

    @lru_cache(maxsize=None)
    def safe(s, d):
        if d == 0:
            return True
        for o in range(n_opp):
            letter = st.letter(st.lookup(s, o), o)
            if ctx.accepts(s, letter):
                return False
            if not safe(ctx.successor(s, letter), d - 1):
                return False
        return True

    return safe(st.initial, depth)
