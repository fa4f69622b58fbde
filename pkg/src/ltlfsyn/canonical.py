"""Canonical keys for propositional-equivalence classes of formulas."""
from __future__ import annotations

from .bdd import BDD, FALSE, TRUE
from .formula import Formula, FormulaStore, Kind, temporal_closure

KEY_FF = FALSE
KEY_TT = TRUE

StateKey = int


class UnknownKeyError(KeyError):
    pass


class StateSpace:
    """Maps NNF formulas to BDD nodes over their temporal atoms.

    In the default folding mode ``p`` and ``!p`` share one variable, so
    ``p | !p`` collapses to true. With ``strict=True`` every literal is an
    independent atom.
    """

    def __init__(self, store: FormulaStore, strict: bool = False):
        self.store = store
        self.strict = strict
        self.bdd = BDD()
        self._var_of: dict[object, int] = {}
        self.atoms: list[Formula] = []
        self._node_of: dict[Formula, int] = {}
        self._rep: dict[int, Formula] = {KEY_FF: store.ff, KEY_TT: store.tt}

    def __len__(self) -> int:
        return len(self._rep)

    def _atom_id(self, f: Formula):
        if f.kind is Kind.LIT and not self.strict:
            return ("prop", f.name)
        return f

    def _variable(self, f: Formula) -> int:
        ident = self._atom_id(f)
        v = self._var_of.get(ident)
        if v is None:
            v = len(self.atoms)
            self._var_of[ident] = v
            self.atoms.append(f)
        return v

    def register_atoms(self, f: Formula) -> None:
        """Fix variable order by first occurrence in ``f``."""
        for atom in temporal_closure(f):
            self._variable(atom)

    def function(self, f: Formula) -> int:
        memo = self._node_of
        if f in memo:
            return memo[f]
        k = f.kind
        bdd = self.bdd
        if k is Kind.TRUE:
            r = TRUE
        elif k is Kind.FALSE:
            r = FALSE
        elif k is Kind.AND:
            r = bdd.conj(self.function(f.left), self.function(f.right))
        elif k is Kind.OR:
            r = bdd.disj(self.function(f.left), self.function(f.right))
        elif k is Kind.LIT:
            v = self._variable(f)
            r = bdd.var(v) if (self.strict or f.positive) else bdd.nvar(v)
        elif k in (Kind.NEXT, Kind.WNEXT, Kind.UNTIL, Kind.RELEASE):
            r = bdd.var(self._variable(f))
        else:
            raise ValueError(f"formula is not in negation normal form: {f}")
        memo[f] = r
        return r

    def canonicalize(self, f: Formula) -> StateKey:
        key = self.function(f)
        self._rep.setdefault(key, f)
        return key

    def representative(self, key: StateKey) -> Formula:
        try:
            return self._rep[key]
        except KeyError:
            raise UnknownKeyError(key) from None

    def known(self, key: StateKey) -> bool:
        return key in self._rep

    def prop_equiv(self, f: Formula, g: Formula) -> bool:
        return self.canonicalize(f) == self.canonicalize(g)

    def prop_implies(self, a: StateKey, b: StateKey) -> bool:
        return self.bdd.implies(a, b)
