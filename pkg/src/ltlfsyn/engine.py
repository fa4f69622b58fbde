"""On-the-fly realizability: forward DFS with Tarjan SCCs and local backward passes.

The arena is never built up front. States are canonical progression keys and
are expanded only when the forward search needs them. Each state keeps, per
move of the player who commits first (the *outer* move), the inner moves known
to be good for the system, bad for the system, or pending on an undetermined
successor.

Moore games: outer = outputs (system), inner = inputs (environment).
Mealy games: outer = inputs (environment), inner = outputs (system).
"""
from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass, field

from .canonical import KEY_FF, StateKey
from .context import SolverContext
from .instance import MEALY, SpecInstance
from .strategy import ENVIRONMENT, SYSTEM, Strategy, verify
from .tdfa import DEFAULT_STATE_BUDGET, BudgetExceeded

SYSTEM_WINNING = "System-winning"
ENVIRONMENT_WINNING = "Environment-winning"
UNKNOWN = "Unknown"

REALIZABLE = "Realizable"
UNREALIZABLE = "Unrealizable"


class SearchTimeout(BudgetExceeded):
    pass


class EngineError(AssertionError):
    """An internal consistency check failed."""


@dataclass
class EngineOptions:
    model_guided: bool = True
    entailment: bool = True
    system_type: str | None = None  # overrides the instance when set
    budget: int = DEFAULT_STATE_BUDGET
    strict: bool = False
    timeout: float | None = None  # seconds of wall-clock time
    extract_strategy: bool = True

    @property
    def label(self) -> str:
        return f"m{int(self.model_guided)}e{int(self.entailment)}"


@dataclass
class EngineStats:
    states_expanded: int = 0
    sccs: int = 0
    sat_calls: int = 0
    entailment_calls: int = 0
    time_ms: float = 0.0

    def as_dict(self, status: str) -> dict:
        return {
            "status": status,
            "states_expanded": self.states_expanded,
            "sccs": self.sccs,
            "sat_calls": self.sat_calls,
            "entailment_calls": self.entailment_calls,
            "time_ms": round(self.time_ms, 3),
        }


@dataclass
class Verdict:
    status: str
    strategy: Strategy | None
    counter_strategy: Strategy | None
    stats: EngineStats
    context: SolverContext = field(repr=False)

    @property
    def realizable(self) -> bool:
        return self.status == REALIZABLE


class _StateInfo:
    __slots__ = ("good", "bad", "undet", "cursor", "edge_ptr")

    def __init__(self):
        self.good: dict[int, set[int]] = {}
        self.bad: dict[int, set[int]] = {}
        self.undet: dict[int, set[int]] = {}
        self.cursor: dict[int, int] = {}
        self.edge_ptr = 0


class _NoWitness(Exception):
    pass


class _Frame:
    __slots__ = ("state", "pending")

    def __init__(self, state):
        self.state = state
        self.pending = None


class SearchContext:
    """The engine's bookkeeping sets plus Tarjan and predecessor data."""

    def __init__(self):
        self.swin_state: dict[StateKey, None] = {}  # insertion ordered
        self.ewin_state: dict[StateKey, None] = {}
        self.undetermined_state: set[StateKey] = set()
        self.info: dict[StateKey, _StateInfo] = {}
        self.preds: dict[StateKey, set[tuple[StateKey, int]]] = {}
        self.dfn: dict[StateKey, int] = {}
        self.low: dict[StateKey, int] = {}
        self.tarjan_stack: list[StateKey] = []
        self.on_stack: set[StateKey] = set()


class OnTheFlySynthesizer:
    def __init__(self, spec: SpecInstance, options: EngineOptions | None = None,
                 context: SolverContext | None = None):
        opts = options or EngineOptions()
        self.opts = opts
        self.system_type = opts.system_type or spec.system_type
        self.spec = spec.with_type(self.system_type)
        if context is None:
            context = SolverContext(spec.variables, store=spec.formula.store, strict=opts.strict)
        if context.alphabet.names != spec.variables:
            raise ValueError("context alphabet must list inputs then outputs")
        self.ctx = context
        self.sat = context.sat
        context.check_formula(spec.formula)
        self.nxbits = len(spec.inputs)
        nx, ny = 1 << len(spec.inputs), 1 << len(spec.outputs)
        self.mealy = self.system_type == MEALY
        self.n_outer, self.n_inner = (nx, ny) if self.mealy else (ny, nx)
        self.sc = SearchContext()
        self.model: deque[int] = deque()
        self.witness: dict[StateKey, object] = {}
        self.rank: dict[StateKey, int] = {}
        self._edges: dict[tuple[StateKey, int], tuple[bool, StateKey]] = {}
        self._swin_list: list[StateKey] = []
        self._ewin_list: list[StateKey] = []
        self._swin_scan: dict[StateKey, int] = {}
        self._ewin_scan: dict[StateKey, int] = {}
        self.stats = EngineStats()
        self._entailment_calls = 0
        self._deadline = None
        self._ticks = 0
        self._store = context.store

    # -- letters -----------------------------------------------------------

    def letter(self, o: int, i: int) -> int:
        if self.mealy:
            return o | (i << self.nxbits)
        return i | (o << self.nxbits)

    def split(self, letter: int) -> tuple[int, int]:
        low = letter & ((1 << self.nxbits) - 1)
        high = letter >> self.nxbits
        return (low, high) if self.mealy else (high, low)

    # -- transition facts --------------------------------------------------

    def _edge(self, s: StateKey, letter: int) -> tuple[bool, StateKey]:
        e = self._edges.get((s, letter))
        if e is None:
            e = (self.ctx.accepts(s, letter), self.ctx.successor(s, letter))
            self._edges[(s, letter)] = e
            self.sc.preds.setdefault(e[1], set()).add((s, letter))
        return e

    def _entails(self, a: StateKey, b: StateKey) -> bool:
        self._entailment_calls += 1
        return self.sat.entails_keys(a, b)

    def is_swin(self, t: StateKey) -> bool:
        if t in self.sc.swin_state:
            return True
        if not self.opts.entailment or t == KEY_FF or t in self.sc.ewin_state:
            return False
        # resume where the last scan for t stopped; earlier members already failed
        start = self._swin_scan.get(t, 0)
        lst = self._swin_list
        for j in range(start, len(lst)):
            if self._entails(lst[j], t):
                self._swin_scan[t] = j
                return True
        self._swin_scan[t] = len(lst)
        return False

    def is_ewin(self, t: StateKey) -> bool:
        if t in self.sc.ewin_state:
            return True
        if not self.opts.entailment or t in self.sc.swin_state:
            return False
        start = self._ewin_scan.get(t, 0)
        lst = self._ewin_list
        for j in range(start, len(lst)):
            if self._entails(t, lst[j]):
                self._ewin_scan[t] = j
                return True
        self._ewin_scan[t] = len(lst)
        return False

    def _good(self, s: StateKey, letter: int) -> bool:
        acc, t = self._edge(s, letter)
        return acc or self.is_swin(t)

    def _bad(self, s: StateKey, letter: int) -> bool:
        acc, t = self._edge(s, letter)
        return not acc and (t == s or self.is_ewin(t))

    def _mark_swin(self, s: StateKey, witness) -> None:
        if s in self.sc.ewin_state:
            raise EngineError("state classified winning for both players")
        self.sc.swin_state[s] = None
        self._swin_list.append(s)
        self.sc.undetermined_state.discard(s)
        self.rank[s] = len(self.rank)
        if witness is not None:
            self.witness[s] = witness

    def _mark_ewin(self, s: StateKey) -> None:
        if s in self.sc.swin_state:
            raise EngineError("state classified winning for both players")
        self.sc.ewin_state[s] = None
        self._ewin_list.append(s)
        self.sc.undetermined_state.discard(s)

    # -- status ------------------------------------------------------------

    def check_current_status(self, s: StateKey) -> str:
        if self.current_system_winning(s):
            return SYSTEM_WINNING
        if self.current_environment_winning(s):
            return ENVIRONMENT_WINNING
        return UNKNOWN

    def _info(self, s: StateKey) -> _StateInfo:
        info = self.sc.info.get(s)
        if info is None:
            info = self.sc.info[s] = _StateInfo()
        return info

    def current_system_winning(self, s: StateKey) -> bool:
        sc = self.sc
        if s in sc.swin_state:
            return True
        if s in sc.ewin_state:
            return False
        if self.opts.entailment and self.is_swin(s):
            self._mark_swin(s, None)
            return True
        info = self._info(s)
        if not self.mealy:
            # exists an outer move whose every inner move is good
            for o in range(self.n_outer):
                if info.bad.get(o):
                    continue
                good = info.good.setdefault(o, set())
                i = info.cursor.get(o, 0)
                while i < self.n_inner and (i in good or self._good(s, self.letter(o, i))):
                    good.add(i)
                    i += 1
                info.cursor[o] = i
                if i == self.n_inner:
                    self._mark_swin(s, o)
                    return True
            return False
        # every outer move has some good inner move
        for o in range(self.n_outer):
            good = info.good.setdefault(o, set())
            if good:
                continue
            for i in range(self.n_inner):
                if self._good(s, self.letter(o, i)):
                    good.add(i)
                    break
            else:
                return False
        self._mark_swin(s, tuple(min(info.good[o]) for o in range(self.n_outer)))
        return True

    def current_environment_winning(self, s: StateKey) -> bool:
        sc = self.sc
        if s in sc.ewin_state:
            return True
        if s in sc.swin_state:
            return False
        if self.opts.entailment and self.is_ewin(s):
            self._mark_ewin(s)
            return True
        info = self._info(s)
        if not self.mealy:
            # every outer move has some bad inner move
            for o in range(self.n_outer):
                bad = info.bad.setdefault(o, set())
                if bad:
                    continue
                for i in range(self.n_inner):
                    if self._bad(s, self.letter(o, i)):
                        bad.add(i)
                        break
                else:
                    return False
            self._mark_ewin(s)
            return True
        # exists an outer move whose every inner move is bad
        for o in range(self.n_outer):
            if info.good.get(o):
                continue
            bad = info.bad.setdefault(o, set())
            i = info.cursor.get(o, 0)
            while i < self.n_inner and (i in bad or self._bad(s, self.letter(o, i))):
                bad.add(i)
                i += 1
            info.cursor[o] = i
            if i == self.n_inner:
                self._mark_ewin(s)
                return True
        return False

    # -- edge selection ----------------------------------------------------

    def _outer_resolved(self, info: _StateInfo, o: int) -> bool:
        # Moore: the system's outer move is refuted; Mealy: the environment's is answered
        return bool(info.good.get(o) if self.mealy else info.bad.get(o))

    def _inner_blocked(self, info: _StateInfo, o: int, i: int) -> bool:
        known = info.bad if self.mealy else info.good
        return i in known.get(o, ()) or i in info.undet.get(o, ())

    def get_edge_enumerative(self, s: StateKey) -> int | None:
        info = self._info(s)
        total = self.n_outer * self.n_inner
        p = info.edge_ptr
        while p < total:
            o, i = divmod(p, self.n_inner)
            if self._outer_resolved(info, o):
                p = (o + 1) * self.n_inner
                continue
            if self._inner_blocked(info, o, i):
                p += 1
                continue
            info.edge_ptr = p
            return self.letter(o, i)
        info.edge_ptr = total
        return None

    def _neg_cube(self, names, bits: int):
        st = self._store
        return st.disj(st.lit(n, not (bits >> k) & 1) for k, n in enumerate(names))

    def edge_constraint(self, s: StateKey):
        st = self._store
        info = self._info(s)
        inputs, outputs = self.spec.inputs, self.spec.outputs
        outer_names, inner_names = (inputs, outputs) if self.mealy else (outputs, inputs)
        parts = []
        outers = sorted(set(info.good) | set(info.bad) | set(info.undet))
        for o in outers:
            if self._outer_resolved(info, o):
                parts.append(self._neg_cube(outer_names, o))
                continue
            known = info.bad if self.mealy else info.good
            blocked = sorted(known.get(o, set()) | info.undet.get(o, set()))
            if blocked:
                inner = st.conj(self._neg_cube(inner_names, i) for i in blocked)
                parts.append(st.or_(self._neg_cube(outer_names, o), inner))
        return st.conj(parts)

    def get_edge_model_guided(self, s: StateKey) -> int | None:
        if self.model:
            return self.model.popleft()
        query = self._store.and_(self.ctx.representative(s), self.edge_constraint(s))
        found = self.sat.model_of_key(self.ctx.canonicalize(query))
        if found is None:
            return None
        self.model.extend(found)
        return self.model.popleft()

    def get_edge(self, s: StateKey) -> int | None:
        if self.opts.model_guided:
            return self.get_edge_model_guided(s)
        return self.get_edge_enumerative(s)

    def no_swin_potential(self, s: StateKey) -> bool:
        info = self._info(s)
        if self.mealy:
            return any(not info.good.get(o) and not info.undet.get(o) for o in range(self.n_outer))
        for o in range(self.n_outer):
            if info.bad.get(o):
                continue
            covered = info.good.get(o, set()) | info.undet.get(o, set())
            if len(covered) == self.n_inner:
                return False
        return True

    # -- routing -----------------------------------------------------------

    def _route(self, s: StateKey, letter: int) -> StateKey | None:
        """Classify the transition; return its successor when it is unvisited."""
        acc, t = self._edge(s, letter)
        o, i = self.split(letter)
        info = self._info(s)
        sc = self.sc
        if acc or self.is_swin(t):
            info.good.setdefault(o, set()).add(i)
            return None
        if t == s or self.is_ewin(t):
            info.bad.setdefault(o, set()).add(i)
            return None
        if t in sc.dfn:
            if t not in sc.undetermined_state or t not in sc.on_stack:
                raise EngineError("visited successor is neither determined nor on the stack")
            info.undet.setdefault(o, set()).add(i)
            sc.low[s] = min(sc.low[s], sc.dfn[t])
            self.model.clear()
            return None
        return t

    # -- search ------------------------------------------------------------

    def _tick(self) -> None:
        self._ticks += 1
        if self._deadline is not None and self._ticks % 64 == 1 and time.monotonic() > self._deadline:
            raise SearchTimeout("time limit reached")

    def _visit(self, s: StateKey) -> None:
        sc = self.sc
        if len(sc.dfn) >= self.opts.budget:
            raise BudgetExceeded(f"search exceeds {self.opts.budget} states")
        n = len(sc.dfn)
        sc.dfn[s] = sc.low[s] = n
        sc.tarjan_stack.append(s)
        sc.on_stack.add(s)
        if s not in sc.swin_state and s not in sc.ewin_state:
            sc.undetermined_state.add(s)

    def forward_search(self, root: StateKey) -> None:
        sc = self.sc
        self._visit(root)
        frames = [_Frame(root)]
        while frames:
            self._tick()
            fr = frames[-1]
            s = fr.state
            if fr.pending is not None:
                letter, child = fr.pending
                fr.pending = None
                sc.low[s] = min(sc.low[s], sc.low[child])
                self.model.clear()
                self._route(s, letter)
            descended = False
            while s in sc.undetermined_state:
                if self.check_current_status(s) != UNKNOWN:
                    break
                letter = self.get_edge(s)
                if letter is None:
                    if self.opts.model_guided and self.no_swin_potential(s):
                        self._mark_ewin(s)
                    break
                t = self._route(s, letter)
                if t is not None:
                    fr.pending = (letter, t)
                    self._visit(t)
                    frames.append(_Frame(t))
                    descended = True
                    break
            if descended:
                continue
            if sc.low[s] == sc.dfn[s]:
                scc = []
                while True:
                    t = sc.tarjan_stack.pop()
                    sc.on_stack.discard(t)
                    scc.append(t)
                    if t == s:
                        break
                self.stats.sccs += 1
                self.backward_search(scc)
            frames.pop()

    def backward_search(self, scc: list[StateKey]) -> None:
        sc = self.sc
        members = set(scc)
        order = sorted(scc, key=sc.dfn.__getitem__)
        cur = [s for s in order if s in sc.swin_state]
        while True:
            if self.opts.entailment:
                # relaxed checks can promote states that are not direct predecessors
                cands = [p for p in order if p in sc.undetermined_state]
            else:
                found = set()
                for t in cur:
                    for p, _ in sc.preds.get(t, ()):
                        if p in members and p in sc.undetermined_state:
                            found.add(p)
                cands = sorted(found, key=sc.dfn.__getitem__)
            cur = [p for p in cands if self.current_system_winning(p)]
            if not cur:
                break
        for s in order:
            if s in sc.undetermined_state:
                self._mark_ewin(s)
        if any(s in sc.undetermined_state for s in scc):
            raise EngineError("state left undetermined after its component closed")

    # -- top level ---------------------------------------------------------

    def solve(self) -> Verdict:
        start = time.monotonic()
        if self.opts.timeout is not None:
            self._deadline = start + self.opts.timeout
        sat_before = self.sat.sat_calls
        f = self.spec.formula
        self.ctx.states.register_atoms(f)
        root = self.ctx.canonicalize(f)
        self.forward_search(root)
        if root in self.sc.swin_state:
            status = REALIZABLE
        elif root in self.sc.ewin_state:
            status = UNREALIZABLE
        else:
            raise EngineError("initial state undetermined after search")
        strategy = counter = None
        if self.opts.extract_strategy:
            if status == REALIZABLE:
                strategy = self._system_strategy(root)
                report = verify(self.spec, strategy)
            else:
                counter = self._environment_strategy(root)
                report = verify(self.spec, counter)
            if not report.ok:
                raise EngineError(f"extracted strategy fails verification: {report.message}")
        st = self.stats
        st.states_expanded = len(self.sc.dfn)
        st.sat_calls = self.sat.sat_calls - sat_before
        st.entailment_calls = self._entailment_calls
        st.time_ms = (time.monotonic() - start) * 1000.0
        return Verdict(status, strategy, counter, st, self.ctx)

    def _strategy(self, player: str, root: StateKey, table: dict) -> Strategy:
        return Strategy(player, self.system_type, tuple(self.spec.inputs), tuple(self.spec.outputs),
                        root, table, self.ctx)

    def _system_strategy(self, root: StateKey) -> Strategy:
        try:
            return self._witness_strategy(root)
        except _NoWitness:
            pass
        # a relaxed entailment check justified part of the region; redo without it
        opts = EngineOptions(self.opts.model_guided, False, self.system_type, self.opts.budget,
                             self.opts.strict, None, True)
        again = OnTheFlySynthesizer(self.spec, opts, self.ctx).solve()
        if again.status != REALIZABLE:
            raise EngineError("verdict changed when entailment was disabled")
        return again.strategy

    def _witness_strategy(self, root: StateKey) -> Strategy:
        table: dict[StateKey, object] = {}
        stack = [root]
        while stack:
            s = stack.pop()
            if s in table:
                continue
            w = self.witness.get(s)
            if w is None:
                raise _NoWitness
            table[s] = w
            moves = [self.letter(w, i) for i in range(self.n_inner)] if not self.mealy else \
                [self.letter(o, w[o]) for o in range(self.n_outer)]
            for letter in moves:
                acc, t = self._edge(s, letter)
                if acc:
                    continue
                if self.rank.get(t, len(self.rank)) >= self.rank[s]:
                    raise _NoWitness
                stack.append(t)
        return self._strategy(SYSTEM, root, table)

    def _environment_strategy(self, root: StateKey) -> Strategy:
        winning = set(self.sc.ewin_state)
        table: dict[StateKey, object] = {}
        stack = [root]
        while stack:
            s = stack.pop()
            if s in table:
                continue
            entry = self._env_move(s, winning)
            if entry is None:
                self._absorb_explicit(s, winning)
                entry = self._env_move(s, winning)
                if entry is None:
                    raise EngineError("no environment move from an environment-winning state")
            table[s] = entry
            for letter in self._env_letters(s, entry):
                t = self._edge(s, letter)[1]
                if t != s:
                    stack.append(t)
        return self._strategy(ENVIRONMENT, root, table)

    def _env_letters(self, s, entry) -> list[int]:
        if self.mealy:
            return [self.letter(entry, i) for i in range(self.n_inner)]
        return [self.letter(o, entry[o]) for o in range(self.n_outer)]

    def _env_target(self, s: StateKey, letter: int, winning: set) -> bool:
        acc, t = self._edge(s, letter)
        if acc:
            return False
        if t == s or t in winning:
            return True
        if not self.sat.key_is_sat(t):
            winning.add(t)
            return True
        return False

    def _env_move(self, s: StateKey, winning: set):
        if self.mealy:
            for o in range(self.n_outer):
                if all(self._env_target(s, self.letter(o, i), winning) for i in range(self.n_inner)):
                    return o
            return None
        row = []
        for o in range(self.n_outer):
            for i in range(self.n_inner):
                if self._env_target(s, self.letter(o, i), winning):
                    row.append(i)
                    break
            else:
                return None
        return tuple(row)

    def _absorb_explicit(self, s: StateKey, winning: set) -> None:
        from .game import GameArena, solve_fixpoint
        from .tdfa import build_tdfa

        A = build_tdfa(self.ctx.representative(s), context=self.ctx, budget=self.opts.budget)
        arena = GameArena(A, tuple(self.spec.inputs), tuple(self.spec.outputs), self.system_type)
        W = solve_fixpoint(arena)
        if A.init not in W.ewin:
            raise EngineError("state classified environment-winning is system-winning")
        winning.update(A.states[k] for k in W.ewin)


def synthesize(spec: SpecInstance, options: EngineOptions | None = None,
               context: SolverContext | None = None) -> Verdict:
    return OnTheFlySynthesizer(spec, options, context).solve()
