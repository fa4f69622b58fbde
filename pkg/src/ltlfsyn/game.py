"""Explicit reachability games on a TDFA, solved by backward fixed points."""
from __future__ import annotations

from dataclasses import dataclass, field

from .context import SolverContext
from .instance import MEALY, MOORE, SpecInstance
from .strategy import ENVIRONMENT, SYSTEM, Strategy
from .tdfa import DEFAULT_STATE_BUDGET, Tdfa, build_tdfa


class InvariantViolation(AssertionError):
    pass


@dataclass(frozen=True)
class GameArena:
    tdfa: Tdfa
    inputs: tuple[str, ...]
    outputs: tuple[str, ...]
    system_type: str = MOORE

    def __post_init__(self):
        if tuple(self.inputs) + tuple(self.outputs) != self.tdfa.alphabet_vars:
            raise ValueError("arena alphabet must list inputs then outputs")
        if self.system_type not in (MOORE, MEALY):
            raise ValueError(f"unknown system type {self.system_type!r}")

    @classmethod
    def from_spec(cls, spec: SpecInstance, context: SolverContext | None = None,
                  strict: bool = False, budget: int = DEFAULT_STATE_BUDGET) -> GameArena:
        if context is None:
            context = SolverContext(spec.variables, store=spec.formula.store, strict=strict)
        A = build_tdfa(spec.formula, context=context, budget=budget)
        return cls(A, tuple(spec.inputs), tuple(spec.outputs), spec.system_type)

    @property
    def n_states(self) -> int:
        return len(self.tdfa.states)

    @property
    def nx(self) -> int:
        return 1 << len(self.inputs)

    @property
    def ny(self) -> int:
        return 1 << len(self.outputs)

    def letter(self, x: int, y: int) -> int:
        return x | (y << len(self.inputs))

    def good(self, s: int, x: int, y: int, E) -> bool:
        letter = self.letter(x, y)
        return (s, letter) in self.tdfa.accepting or self.tdfa.delta[s][letter] in E

    def bad(self, s: int, x: int, y: int, E) -> bool:
        letter = self.letter(x, y)
        return (s, letter) not in self.tdfa.accepting and self.tdfa.delta[s][letter] in E


def cpre_system(A: GameArena, E) -> set[int]:
    X, Y = range(A.nx), range(A.ny)
    if A.system_type == MOORE:
        return {s for s in range(A.n_states) if any(all(A.good(s, x, y, E) for x in X) for y in Y)}
    return {s for s in range(A.n_states) if all(any(A.good(s, x, y, E) for y in Y) for x in X)}


def cpre_env(A: GameArena, E) -> set[int]:
    X, Y = range(A.nx), range(A.ny)
    if A.system_type == MOORE:
        return {s for s in range(A.n_states) if all(any(A.bad(s, x, y, E) for x in X) for y in Y)}
    return {s for s in range(A.n_states) if any(all(A.bad(s, x, y, E) for y in Y) for x in X)}


@dataclass
class WinningSets:
    swin_level: dict[int, int]
    ewin: frozenset[int]
    iterations: int
    ewin_sizes: list[int] = field(default_factory=list)

    @property
    def swin(self) -> frozenset[int]:
        return frozenset(self.swin_level)

    def system_wins(self, s: int) -> bool:
        return s in self.swin_level


def solve_fixpoint(A: GameArena) -> WinningSets:
    S = frozenset(range(A.n_states))
    swin: frozenset[int] = frozenset()
    ewin = S
    level: dict[int, int] = {}
    sizes = [len(ewin)]
    i = 0
    while True:
        new_swin = swin | cpre_system(A, swin)
        new_ewin = ewin & cpre_env(A, ewin)
        i += 1
        if new_swin & new_ewin:
            raise InvariantViolation(f"iteration {i}: a state is winning for both players")
        if new_swin | new_ewin != S:
            raise InvariantViolation(f"iteration {i}: a state is winning for neither player")
        for s in new_swin - swin:
            level[s] = i
        sizes.append(len(new_ewin))
        s_fixed, e_fixed = new_swin == swin, new_ewin == ewin
        if s_fixed != e_fixed:
            raise InvariantViolation(f"iteration {i}: only one chain reached its fixed point")
        if s_fixed:
            return WinningSets(level, ewin, i - 1, sizes)
        swin, ewin = new_swin, new_ewin


def extract_strategies(A: GameArena, W: WinningSets) -> tuple[Strategy, Strategy]:
    """Positional strategies for both players; each is defined on its winning region."""
    keys = A.tdfa.states
    X, Y = range(A.nx), range(A.ny)
    sys_table: dict[int, object] = {}
    for s, l in W.swin_level.items():
        below = {t for t, lt in W.swin_level.items() if lt < l}
        if A.system_type == MOORE:
            y = next(y for y in Y if all(A.good(s, x, y, below) for x in X))
            sys_table[keys[s]] = y
        else:
            sys_table[keys[s]] = tuple(next(y for y in Y if A.good(s, x, y, below)) for x in X)
    env_table: dict[int, object] = {}
    for s in W.ewin:
        if A.system_type == MOORE:
            env_table[keys[s]] = tuple(next(x for x in X if A.bad(s, x, y, W.ewin)) for y in Y)
        else:
            env_table[keys[s]] = next(x for x in X if all(A.bad(s, x, y, W.ewin) for y in Y))
    common = dict(system_type=A.system_type, inputs=A.inputs, outputs=A.outputs,
                  initial=keys[A.tdfa.init], context=A.tdfa.context)
    return Strategy(SYSTEM, table=sys_table, **common), Strategy(ENVIRONMENT, table=env_table, **common)


@dataclass
class BackwardResult:
    realizable: bool
    arena: GameArena
    winning: WinningSets
    strategy: Strategy | None
    counter_strategy: Strategy | None


def solve_backward(spec: SpecInstance, context: SolverContext | None = None, strict: bool = False,
                   budget: int = DEFAULT_STATE_BUDGET) -> BackwardResult:
    A = GameArena.from_spec(spec, context=context, strict=strict, budget=budget)
    W = solve_fixpoint(A)
    sys_st, env_st = extract_strategies(A, W)
    ok = W.system_wins(A.tdfa.init)
    return BackwardResult(ok, A, W, sys_st if ok else None, None if ok else env_st)
