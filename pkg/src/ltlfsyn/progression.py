"""Single-letter formula progression and one-step acceptance."""
from __future__ import annotations

from typing import AbstractSet, Sequence

from .formula import Formula, Kind


def progress(f: Formula, letter: AbstractSet[str]) -> Formula:
    """Obligation left for the rest of the trace after reading ``letter``."""
    store = f.store
    memo: dict[Formula, Formula] = {}

    def go(g: Formula) -> Formula:
        r = memo.get(g)
        if r is not None:
            return r
        k = g.kind
        if k is Kind.TRUE or k is Kind.FALSE:
            r = g
        elif k is Kind.LIT:
            r = store.tt if (g.name in letter) == g.positive else store.ff
        elif k is Kind.AND:
            r = store.and_(go(g.left), go(g.right))
        elif k is Kind.OR:
            r = store.or_(go(g.left), go(g.right))
        elif k is Kind.NEXT or k is Kind.WNEXT:
            r = g.left
        elif k is Kind.UNTIL:
            r = store.or_(go(g.right), store.and_(go(g.left), g))
        elif k is Kind.RELEASE:
            r = store.and_(go(g.right), store.or_(go(g.left), g))
        else:
            raise ValueError(f"formula is not in negation normal form: {g}")
        memo[g] = r
        return r

    return go(f)


def progress_trace(f: Formula, trace: Sequence[AbstractSet[str]]) -> Formula:
    for letter in trace:
        f = progress(f, letter)
    return f


def eval1(f: Formula, letter: AbstractSet[str]) -> bool:
    """Does the one-letter trace ``[letter]`` satisfy ``f``?"""
    k = f.kind
    if k is Kind.TRUE:
        return True
    if k is Kind.FALSE:
        return False
    if k is Kind.LIT:
        return (f.name in letter) == f.positive
    if k is Kind.AND:
        return eval1(f.left, letter) and eval1(f.right, letter)
    if k is Kind.OR:
        return eval1(f.left, letter) or eval1(f.right, letter)
    if k is Kind.NEXT:
        return False
    if k is Kind.WNEXT:
        return True
    if k is Kind.UNTIL or k is Kind.RELEASE:
        return eval1(f.right, letter)
    raise ValueError(f"formula is not in negation normal form: {f}")


def present_props(f: Formula) -> frozenset[str]:
    """Propositions read by progression and eval1 at the current instant."""
    out: set[str] = set()
    seen: set[Formula] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if g in seen:
            continue
        seen.add(g)
        k = g.kind
        if k is Kind.LIT:
            out.add(g.name)
        elif k in (Kind.AND, Kind.OR, Kind.UNTIL, Kind.RELEASE):
            stack.append(g.left)
            stack.append(g.right)
    return frozenset(out)
