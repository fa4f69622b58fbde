"""A small reduced ordered BDD manager.

Nodes are plain ints; 0 and 1 are the terminals. Variable ``v`` sits at level
``v`` so smaller indices are closer to the root.
"""
from __future__ import annotations

FALSE = 0
TRUE = 1
_TERMINAL_LEVEL = 1 << 62


class BDD:
    def __init__(self) -> None:
        self._level = [_TERMINAL_LEVEL, _TERMINAL_LEVEL]
        self._low = [FALSE, TRUE]
        self._high = [FALSE, TRUE]
        self._unique: dict[tuple[int, int, int], int] = {}
        self._and_cache: dict[tuple[int, int], int] = {}
        self._not_cache: dict[int, int] = {}
        self._min_cache: dict[int, int | None] = {}
        self._support_cache: dict[int, frozenset[int]] = {}

    def __len__(self) -> int:
        return len(self._level)

    def var(self, v: int) -> int:
        return self._mk(v, FALSE, TRUE)

    def nvar(self, v: int) -> int:
        return self._mk(v, TRUE, FALSE)

    def level(self, u: int) -> int:
        return self._level[u]

    def low(self, u: int) -> int:
        return self._low[u]

    def high(self, u: int) -> int:
        return self._high[u]

    def _mk(self, v: int, lo: int, hi: int) -> int:
        if lo == hi:
            return lo
        key = (v, lo, hi)
        u = self._unique.get(key)
        if u is None:
            u = len(self._level)
            self._level.append(v)
            self._low.append(lo)
            self._high.append(hi)
            self._unique[key] = u
        return u

    def neg(self, u: int) -> int:
        if u <= TRUE:
            return 1 - u
        r = self._not_cache.get(u)
        if r is None:
            r = self._mk(self._level[u], self.neg(self._low[u]), self.neg(self._high[u]))
            self._not_cache[u] = r
            self._not_cache[r] = u
        return r

    def conj(self, a: int, b: int) -> int:
        if a == FALSE or b == FALSE:
            return FALSE
        if a == TRUE:
            return b
        if b == TRUE or a == b:
            return a
        if a > b:
            a, b = b, a
        key = (a, b)
        r = self._and_cache.get(key)
        if r is not None:
            return r
        la, lb = self._level[a], self._level[b]
        v = min(la, lb)
        a0, a1 = (self._low[a], self._high[a]) if la == v else (a, a)
        b0, b1 = (self._low[b], self._high[b]) if lb == v else (b, b)
        r = self._mk(v, self.conj(a0, b0), self.conj(a1, b1))
        self._and_cache[key] = r
        return r

    def disj(self, a: int, b: int) -> int:
        return self.neg(self.conj(self.neg(a), self.neg(b)))

    def implies(self, a: int, b: int) -> bool:
        """True iff a -> b is valid."""
        return self.conj(a, self.neg(b)) == FALSE

    def restrict(self, u: int, v: int, value: bool) -> int:
        memo: dict[int, int] = {}

        def go(w: int) -> int:
            lv = self._level[w]
            if lv > v:
                return w
            if lv == v:
                return self._high[w] if value else self._low[w]
            r = memo.get(w)
            if r is None:
                r = self._mk(lv, go(self._low[w]), go(self._high[w]))
                memo[w] = r
            return r

        return go(u)

    def evaluate(self, u: int, bits: int) -> bool:
        """Evaluate with variable ``v`` set to bit ``v`` of ``bits``."""
        level, low, high = self._level, self._low, self._high
        while u > TRUE:
            u = high[u] if (bits >> level[u]) & 1 else low[u]
        return u == TRUE

    def min_sat(self, u: int) -> int | None:
        """Numerically smallest satisfying assignment read as a bitvector, or None."""
        if u == FALSE:
            return None
        if u == TRUE:
            return 0
        if u in self._min_cache:
            return self._min_cache[u]
        v = self._level[u]
        lo = self.min_sat(self._low[u])
        hi = self.min_sat(self._high[u])
        if hi is not None:
            hi |= 1 << v
        cands = [x for x in (lo, hi) if x is not None]
        r = min(cands)
        self._min_cache[u] = r
        return r

    def support(self, u: int) -> frozenset[int]:
        if u <= TRUE:
            return frozenset()
        r = self._support_cache.get(u)
        if r is None:
            r = self.support(self._low[u]) | self.support(self._high[u]) | {self._level[u]}
            self._support_cache[u] = r
        return r
