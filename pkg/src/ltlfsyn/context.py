"""Per-instance solver state: formula store, canonical keys and transition caches."""
from __future__ import annotations

from typing import Sequence

from .alphabet import Alphabet
from .bdd import BDD, FALSE, TRUE
from .canonical import KEY_FF, KEY_TT, StateKey, StateSpace
from .formula import Formula, FormulaStore, Kind, default_store, propositions
from .progression import present_props, progress


class UndeclaredPropositionError(ValueError):
    pass


class SolverContext:
    """Everything the automaton, SAT and game layers share for one alphabet.

    Not thread-safe; use one context per thread.
    """

    def __init__(self, variables: Sequence[str], store: FormulaStore | None = None, strict: bool = False):
        self.store = store or default_store()
        self.alphabet = Alphabet(variables)
        self.states = StateSpace(self.store, strict=strict)
        self.letter_bdd = BDD()
        self._succ: dict[tuple[int, int], int] = {}
        self._acc: dict[int, int] = {}
        self._present: dict[int, int] = {}
        self._sat = None
        self.progressions = 0

    @property
    def strict(self) -> bool:
        return self.states.strict

    @property
    def sat(self):
        if self._sat is None:
            from .sat import SatSolver

            self._sat = SatSolver(self)
        return self._sat

    def check_formula(self, f: Formula) -> None:
        extra = [p for p in propositions(f) if p not in self.alphabet.index]
        if extra:
            raise UndeclaredPropositionError(f"propositions not declared: {', '.join(extra)}")
        if not f.is_nnf:
            raise ValueError("formula must be in negation normal form")

    def canonicalize(self, f: Formula) -> StateKey:
        return self.states.canonicalize(f)

    def representative(self, key: StateKey) -> Formula:
        return self.states.representative(key)

    def present_mask(self, key: StateKey) -> int:
        m = self._present.get(key)
        if m is None:
            m = self.alphabet.mask(present_props(self.representative(key)))
            self._present[key] = m
        return m

    def successor(self, key: StateKey, letter: int) -> StateKey:
        if key == KEY_FF or key == KEY_TT:
            return key
        letter &= self.present_mask(key)
        memo_key = (key, letter)
        t = self._succ.get(memo_key)
        if t is None:
            self.progressions += 1
            f = progress(self.representative(key), self.alphabet.props(letter))
            t = self.states.canonicalize(f)
            self._succ[memo_key] = t
        return t

    def acceptance_function(self, key: StateKey) -> int:
        """BDD over the alphabet (variable i = bit i) of letters accepted in one step."""
        node = self._acc.get(key)
        if node is None:
            node = self._compile_eval1(self.representative(key), {})
            self._acc[key] = node
        return node

    def _compile_eval1(self, f: Formula, memo: dict) -> int:
        r = memo.get(f)
        if r is not None:
            return r
        k = f.kind
        bdd = self.letter_bdd
        if k is Kind.TRUE or k is Kind.WNEXT:
            r = TRUE
        elif k is Kind.FALSE or k is Kind.NEXT:
            r = FALSE
        elif k is Kind.LIT:
            v = self.alphabet.index[f.name]
            r = bdd.var(v) if f.positive else bdd.nvar(v)
        elif k is Kind.AND:
            r = bdd.conj(self._compile_eval1(f.left, memo), self._compile_eval1(f.right, memo))
        elif k is Kind.OR:
            r = bdd.disj(self._compile_eval1(f.left, memo), self._compile_eval1(f.right, memo))
        elif k is Kind.UNTIL or k is Kind.RELEASE:
            r = self._compile_eval1(f.right, memo)
        else:
            raise ValueError(f"formula is not in negation normal form: {f}")
        memo[f] = r
        return r

    def accepts(self, key: StateKey, letter: int) -> bool:
        return self.letter_bdd.evaluate(self.acceptance_function(key), letter)

    def min_accepting_letter(self, key: StateKey) -> int | None:
        return self.letter_bdd.min_sat(self.acceptance_function(key))
