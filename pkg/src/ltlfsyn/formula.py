"""LTLf abstract syntax, interning, normal forms and the trace evaluator."""
from __future__ import annotations

import enum
import itertools
from typing import Iterable, Iterator, Sequence


class Kind(enum.IntEnum):
    TRUE = 0
    FALSE = 1
    LIT = 2
    AND = 3
    OR = 4
    NEXT = 5
    WNEXT = 6
    UNTIL = 7
    RELEASE = 8
    # raw connectives, removed by to_nnf
    NOT = 9
    IMPLIES = 10
    IFF = 11


BINARY = frozenset({Kind.AND, Kind.OR, Kind.UNTIL, Kind.RELEASE, Kind.IMPLIES, Kind.IFF})
UNARY = frozenset({Kind.NEXT, Kind.WNEXT, Kind.NOT})
TEMPORAL = frozenset({Kind.NEXT, Kind.WNEXT, Kind.UNTIL, Kind.RELEASE})
RAW = frozenset({Kind.NOT, Kind.IMPLIES, Kind.IFF})


class EmptyTraceError(ValueError):
    pass


class Formula:
    """Interned formula node. Two nodes of one store are equal iff identical."""

    __slots__ = ("kind", "left", "right", "name", "positive", "uid", "store", "__weakref__")

    def __init__(self, store, uid, kind, left=None, right=None, name=None, positive=True):
        self.store = store
        self.uid = uid
        self.kind = kind
        self.left = left
        self.right = right
        self.name = name
        self.positive = positive

    def __repr__(self) -> str:
        return f"Formula({to_string(self)!r})"

    def __str__(self) -> str:
        return to_string(self)

    def __lt__(self, other: Formula) -> bool:
        return self.uid < other.uid

    @property
    def is_nnf(self) -> bool:
        return all(n.kind not in RAW for n in subformulas(self))


class FormulaStore:
    """Hash-consing table for formulas. Append-only."""

    def __init__(self) -> None:
        self._table: dict[tuple, Formula] = {}
        self._uids = itertools.count()
        self.tt = self._intern(Kind.TRUE)
        self.ff = self._intern(Kind.FALSE)
        self._nnf: dict[tuple[Formula, bool], Formula] = {}

    def __len__(self) -> int:
        return len(self._table)

    def _intern(self, kind, left=None, right=None, name=None, positive=True) -> Formula:
        key = (kind, left, right, name, positive)
        node = self._table.get(key)
        if node is None:
            node = Formula(self, next(self._uids), kind, left, right, name, positive)
            self._table[key] = node
        return node

    def _own(self, *nodes: Formula) -> None:
        for n in nodes:
            if n.store is not self:
                raise ValueError("formula belongs to another store")

    def lit(self, name: str, positive: bool = True) -> Formula:
        if not name:
            raise ValueError("empty proposition name")
        return self._intern(Kind.LIT, name=name, positive=positive)

    def and_(self, a: Formula, b: Formula) -> Formula:
        self._own(a, b)
        if a is self.ff or b is self.ff:
            return self.ff
        if a is self.tt:
            return b
        if b is self.tt or a is b:
            return a
        return self._intern(Kind.AND, a, b)

    def or_(self, a: Formula, b: Formula) -> Formula:
        self._own(a, b)
        if a is self.tt or b is self.tt:
            return self.tt
        if a is self.ff:
            return b
        if b is self.ff or a is b:
            return a
        return self._intern(Kind.OR, a, b)

    def conj(self, items: Iterable[Formula]) -> Formula:
        out = self.tt
        for f in items:
            out = self.and_(out, f)
        return out

    def disj(self, items: Iterable[Formula]) -> Formula:
        out = self.ff
        for f in items:
            out = self.or_(out, f)
        return out

    def next_(self, f: Formula) -> Formula:
        self._own(f)
        return self._intern(Kind.NEXT, f)

    def wnext(self, f: Formula) -> Formula:
        self._own(f)
        return self._intern(Kind.WNEXT, f)

    def until(self, a: Formula, b: Formula) -> Formula:
        self._own(a, b)
        return self._intern(Kind.UNTIL, a, b)

    def release(self, a: Formula, b: Formula) -> Formula:
        self._own(a, b)
        return self._intern(Kind.RELEASE, a, b)

    def eventually(self, f: Formula) -> Formula:
        return self.until(self.tt, f)

    def always(self, f: Formula) -> Formula:
        return self.release(self.ff, f)

    def not_(self, f: Formula) -> Formula:
        self._own(f)
        return self._intern(Kind.NOT, f)

    def implies(self, a: Formula, b: Formula) -> Formula:
        self._own(a, b)
        return self._intern(Kind.IMPLIES, a, b)

    def iff(self, a: Formula, b: Formula) -> Formula:
        self._own(a, b)
        return self._intern(Kind.IFF, a, b)

    def cube(self, names: Sequence[str], true_names) -> Formula:
        """Full conjunction of literals encoding an assignment over ``names``."""
        return self.conj(self.lit(n, n in true_names) for n in names)


_default_store: FormulaStore | None = None


def default_store() -> FormulaStore:
    global _default_store
    if _default_store is None:
        _default_store = FormulaStore()
    return _default_store


def subformulas(f: Formula) -> Iterator[Formula]:
    """Distinct subformulas in pre-order, left to right."""
    seen: set[Formula] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if g in seen:
            continue
        seen.add(g)
        yield g
        if g.right is not None:
            stack.append(g.right)
        if g.left is not None:
            stack.append(g.left)


def propositions(f: Formula) -> list[str]:
    """Proposition names in first-occurrence order."""
    out: dict[str, None] = {}
    for g in subformulas(f):
        if g.kind is Kind.LIT:
            out.setdefault(g.name, None)
    return list(out)


def temporal_closure(f: Formula) -> list[Formula]:
    return [g for g in subformulas(f) if g.kind not in (Kind.AND, Kind.OR, Kind.TRUE, Kind.FALSE)]


def to_nnf(f: Formula, negate: bool = False) -> Formula:
    store = f.store
    memo = store._nnf
    stack = [(f, negate, False)]
    # iterative post-order so deep formulas do not hit the recursion limit
    while stack:
        g, neg, ready = stack.pop()
        if (g, neg) in memo:
            continue
        if not ready:
            stack.append((g, neg, True))
            for child, cneg in _nnf_children(g, neg):
                if (child, cneg) not in memo:
                    stack.append((child, cneg, False))
            continue
        memo[(g, neg)] = _nnf_node(store, g, neg, memo)
    return memo[(f, negate)]


def _nnf_children(g: Formula, neg: bool):
    k = g.kind
    if k in (Kind.AND, Kind.OR, Kind.UNTIL, Kind.RELEASE):
        return [(g.left, neg), (g.right, neg)]
    if k in (Kind.NEXT, Kind.WNEXT):
        return [(g.left, neg)]
    if k is Kind.NOT:
        return [(g.left, not neg)]
    if k is Kind.IMPLIES:
        return [(g.left, not neg), (g.right, neg)]
    if k is Kind.IFF:
        return [(g.left, False), (g.left, True), (g.right, False), (g.right, True)]
    return []


def _nnf_node(store: FormulaStore, g: Formula, neg: bool, memo) -> Formula:
    k = g.kind
    if k is Kind.TRUE:
        return store.ff if neg else store.tt
    if k is Kind.FALSE:
        return store.tt if neg else store.ff
    if k is Kind.LIT:
        return store.lit(g.name, g.positive != neg)
    if k is Kind.NOT:
        return memo[(g.left, not neg)]
    if k is Kind.IFF:
        a, na = memo[(g.left, False)], memo[(g.left, True)]
        b, nb = memo[(g.right, False)], memo[(g.right, True)]
        if neg:
            return store.or_(store.and_(a, nb), store.and_(na, b))
        return store.or_(store.and_(a, b), store.and_(na, nb))
    if k is Kind.IMPLIES:
        # a -> b == !a | b ; negated: a & !b
        la = memo[(g.left, not neg)]
        rb = memo[(g.right, neg)]
        return store.and_(la, rb) if neg else store.or_(la, rb)
    left = memo[(g.left, neg)]
    if k is Kind.NEXT:
        return store.wnext(left) if neg else store.next_(left)
    if k is Kind.WNEXT:
        return store.next_(left) if neg else store.wnext(left)
    right = memo[(g.right, neg)]
    if k is Kind.AND:
        return store.or_(left, right) if neg else store.and_(left, right)
    if k is Kind.OR:
        return store.and_(left, right) if neg else store.or_(left, right)
    if k is Kind.UNTIL:
        return store.release(left, right) if neg else store.until(left, right)
    if k is Kind.RELEASE:
        return store.until(left, right) if neg else store.release(left, right)
    raise AssertionError(k)


def negate_nnf(f: Formula) -> Formula:
    if not f.is_nnf:
        raise ValueError("negate_nnf expects a formula in negation normal form")
    return to_nnf(f, negate=True)


def eval_trace(f: Formula, trace: Sequence[Iterable[str]]) -> bool:
    """Satisfaction of ``f`` on a non-empty finite trace of letters (sets of true names).

    Also accepts raw formulas containing negation, implication and equivalence.
    """
    letters = [frozenset(x) for x in trace]
    n = len(letters)
    if n == 0:
        raise EmptyTraceError("traces must be non-empty")
    memo: dict[tuple[Formula, int], bool] = {}

    def ev(g: Formula, i: int) -> bool:
        key = (g, i)
        r = memo.get(key)
        if r is not None:
            return r
        k = g.kind
        if k is Kind.TRUE:
            r = True
        elif k is Kind.FALSE:
            r = False
        elif k is Kind.LIT:
            r = (g.name in letters[i]) == g.positive
        elif k is Kind.AND:
            r = ev(g.left, i) and ev(g.right, i)
        elif k is Kind.OR:
            r = ev(g.left, i) or ev(g.right, i)
        elif k is Kind.NOT:
            r = not ev(g.left, i)
        elif k is Kind.IMPLIES:
            r = (not ev(g.left, i)) or ev(g.right, i)
        elif k is Kind.IFF:
            r = ev(g.left, i) == ev(g.right, i)
        elif k is Kind.NEXT:
            r = i + 1 < n and ev(g.left, i + 1)
        elif k is Kind.WNEXT:
            r = i + 1 == n or ev(g.left, i + 1)
        elif k is Kind.UNTIL:
            r = False
            for j in range(i, n):
                if ev(g.right, j):
                    r = True
                    break
                if not ev(g.left, j):
                    break
        elif k is Kind.RELEASE:
            r = False
            for j in range(i, n):
                if not ev(g.right, j):
                    break
                if j == n - 1 or ev(g.left, j):
                    r = True
                    break
        else:
            raise AssertionError(k)
        memo[key] = r
        return r

    # evaluate deep suffixes first to keep recursion shallow on long traces
    for i in range(n - 1, 0, -1):
        ev(f, i)
    return ev(f, 0)


# -- printing -------------------------------------------------------------

# binding strength, higher binds tighter
_PREC = {
    Kind.IMPLIES: 1, Kind.IFF: 1,
    Kind.OR: 2,
    Kind.AND: 3,
    Kind.UNTIL: 4, Kind.RELEASE: 4,
}
_OPS = {
    Kind.AND: "&", Kind.OR: "|", Kind.IMPLIES: "->", Kind.IFF: "<->",
    Kind.UNTIL: "U", Kind.RELEASE: "R",
}
_RIGHT_ASSOC = frozenset({Kind.UNTIL, Kind.RELEASE, Kind.IMPLIES, Kind.IFF})
_UNARY_PREC = 5


def _prec(f: Formula) -> int:
    if f.kind in _PREC and not _is_sugar(f):
        return _PREC[f.kind]
    return _UNARY_PREC


def _is_sugar(f: Formula) -> bool:
    return (f.kind is Kind.UNTIL and f.left.kind is Kind.TRUE) or (
        f.kind is Kind.RELEASE and f.left.kind is Kind.FALSE
    )


def to_string(f: Formula) -> str:
    memo: dict[Formula, str] = {}

    def wrap(child: Formula, need: bool) -> str:
        s = render(child)
        return f"({s})" if need else s

    def render(g: Formula) -> str:
        if g in memo:
            return memo[g]
        k = g.kind
        if k is Kind.TRUE:
            s = "true"
        elif k is Kind.FALSE:
            s = "false"
        elif k is Kind.LIT:
            s = g.name if g.positive else "!" + g.name
        elif _is_sugar(g):
            op = "F" if k is Kind.UNTIL else "G"
            s = f"{op} " + wrap(g.right, _prec(g.right) < _UNARY_PREC)
        elif k in (Kind.NEXT, Kind.WNEXT, Kind.NOT):
            op = {Kind.NEXT: "X ", Kind.WNEXT: "N ", Kind.NOT: "!"}[k]
            s = op + wrap(g.left, _prec(g.left) < _UNARY_PREC)
        else:
            p = _PREC[k]
            right_assoc = k in _RIGHT_ASSOC
            lp, rp = _prec(g.left), _prec(g.right)
            lneed = lp < p or (lp == p and right_assoc)
            rneed = rp < p or (rp == p and not right_assoc)
            s = f"{wrap(g.left, lneed)} {_OPS[k]} {wrap(g.right, rneed)}"
        memo[g] = s
        return s

    return render(f)
