"""LTLf satisfiability, minimum-length models and entailment.

All three reduce to breadth-first reachability over canonical progression
states: a formula is satisfiable iff some reachable state has an accepting
one-step letter.
"""
from __future__ import annotations

from dataclasses import dataclass

from .alphabet import Alphabet, submasks
from .canonical import KEY_FF, KEY_TT, StateKey
from .context import SolverContext
from .formula import Formula, negate_nnf
from .tdfa import DEFAULT_STATE_BUDGET, BudgetExceeded

SAT = "sat"
UNSAT = "unsat"


@dataclass(frozen=True)
class SatResult:
    status: str
    model: tuple[int, ...] | None
    alphabet: Alphabet

    def __bool__(self) -> bool:
        return self.status == SAT

    @property
    def trace(self) -> list[frozenset[str]] | None:
        if self.model is None:
            return None
        return [self.alphabet.props(x) for x in self.model]

    def __str__(self) -> str:
        if self.model is None:
            return "UNSAT"
        return "SAT\n" + self.alphabet.format_trace(self.model)


class SatSolver:
    def __init__(self, context: SolverContext, budget: int = DEFAULT_STATE_BUDGET):
        self.ctx = context
        self.budget = budget
        self.sat_calls = 0
        self.entailment_calls = 0
        self._models: dict[StateKey, tuple[int, ...] | None] = {KEY_FF: None}
        self._unsat: set[StateKey] = {KEY_FF}
        self._entails: dict[tuple[StateKey, StateKey], bool] = {}

    # -- key level -------------------------------------------------------

    def model_of_key(self, key: StateKey) -> tuple[int, ...] | None:
        self.sat_calls += 1
        if key in self._models:
            return self._models[key]
        model = self._search(key)
        self._models[key] = model
        return model

    def key_is_sat(self, key: StateKey) -> bool:
        return self.model_of_key(key) is not None

    def _search(self, root: StateKey) -> tuple[int, ...] | None:
        ctx = self.ctx
        unsat = self._unsat
        if root in unsat:
            return None
        parent: dict[StateKey, tuple[StateKey, int] | None] = {root: None}
        layer = [root]
        while layer:
            for s in layer:
                letter = ctx.min_accepting_letter(s)
                if letter is not None:
                    path = [letter]
                    while parent[s] is not None:
                        s, step = parent[s]
                        path.append(step)
                    return tuple(reversed(path))
            nxt = []
            for s in layer:
                for letter in submasks(ctx.present_mask(s)):
                    t = ctx.successor(s, letter)
                    if t in parent or t in unsat:
                        continue
                    parent[t] = (s, letter)
                    nxt.append(t)
                    if len(parent) > self.budget:
                        raise BudgetExceeded(f"satisfiability search exceeds {self.budget} states")
            layer = nxt
        # exhausted: nothing reachable accepts
        unsat.update(parent)
        return None

    def entails_keys(self, a: StateKey, b: StateKey) -> bool:
        self.entailment_calls += 1
        if a == b or b == KEY_TT or a == KEY_FF:
            return True
        pair = (a, b)
        r = self._entails.get(pair)
        if r is not None:
            return r
        if self.ctx.states.prop_implies(a, b):
            r = True
        else:
            store = self.ctx.store
            query = store.and_(self.ctx.representative(a), negate_nnf(self.ctx.representative(b)))
            r = not self.key_is_sat(self.ctx.canonicalize(query))
        self._entails[pair] = r
        return r

    # -- formula level ---------------------------------------------------

    def min_model(self, f: Formula) -> SatResult:
        self.ctx.check_formula(f)
        model = self.model_of_key(self.ctx.canonicalize(f))
        return SatResult(SAT if model is not None else UNSAT, model, self.ctx.alphabet)

    def is_sat(self, f: Formula) -> bool:
        return self.min_model(f).status == SAT

    def entails(self, f: Formula, g: Formula) -> bool:
        self.ctx.check_formula(f)
        self.ctx.check_formula(g)
        return self.entails_keys(self.ctx.canonicalize(f), self.ctx.canonicalize(g))


def _context_for(f: Formula, variables, context):
    if context is not None:
        return context
    from .formula import propositions

    return SolverContext(variables if variables is not None else propositions(f), store=f.store)


def min_model(f: Formula, variables=None, context: SolverContext | None = None) -> SatResult:
    return _context_for(f, variables, context).sat.min_model(f)


def is_sat(f: Formula, variables=None, context: SolverContext | None = None) -> bool:
    return _context_for(f, variables, context).sat.is_sat(f)


def entails(f: Formula, g: Formula, variables=None, context: SolverContext | None = None) -> bool:
    if context is None and variables is None:
        from .formula import propositions

        variables = list(dict.fromkeys(propositions(f) + propositions(g)))
    return _context_for(f, variables, context).sat.entails(f, g)
