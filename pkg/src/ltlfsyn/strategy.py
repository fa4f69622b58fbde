"""Positional strategies: lookup, verification, simulation and a text format.

A strategy belongs to one player. It is *reactive* when that player moves
second in each round and therefore sees the opponent's move: the system
under Mealy semantics, the environment under Moore semantics.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .alphabet import Alphabet
from .canonical import StateKey
from .context import SolverContext

SYSTEM = "system"
ENVIRONMENT = "environment"


class UndefinedStateError(KeyError):
    pass


class StrategyFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Strategy:
    player: str
    system_type: str
    inputs: tuple[str, ...]
    outputs: tuple[str, ...]
    initial: StateKey
    table: Mapping[StateKey, object]
    context: SolverContext = field(compare=False, repr=False)

    @property
    def reactive(self) -> bool:
        return (self.player == SYSTEM) == (self.system_type == "mealy")

    @property
    def domain(self) -> frozenset[StateKey]:
        return frozenset(self.table)

    @property
    def own_vars(self) -> tuple[str, ...]:
        return self.outputs if self.player == SYSTEM else self.inputs

    @property
    def opponent_vars(self) -> tuple[str, ...]:
        return self.inputs if self.player == SYSTEM else self.outputs

    def lookup(self, state: StateKey, observed: int | None = None) -> int:
        """Own move at ``state``; reactive strategies also need the opponent's move."""
        try:
            entry = self.table[state]
        except KeyError:
            raise UndefinedStateError(state) from None
        if self.reactive:
            if observed is None:
                raise ValueError("reactive strategy needs the opponent's move")
            return entry[observed]
        return entry

    def letter(self, own: int, opponent: int) -> int:
        nx = len(self.inputs)
        if self.player == SYSTEM:
            return opponent | (own << nx)
        return own | (opponent << nx)

    def moves(self, state: StateKey) -> list[tuple[int, int]]:
        """(opponent move, letter) for every opponent move at ``state``."""
        n_opp = 1 << len(self.opponent_vars)
        return [(o, self.letter(self.lookup(state, o), o)) for o in range(n_opp)]


MooreStrategy = Strategy


@dataclass
class VerifyReport:
    ok: bool
    kind: str = ""
    states: list[StateKey] = field(default_factory=list)
    letters: list[int] = field(default_factory=list)
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _check_vars(spec, st: Strategy) -> None:
    if tuple(spec.inputs) != tuple(st.inputs) or tuple(spec.outputs) != tuple(st.outputs):
        raise StrategyFormatError("strategy and specification use different variables")
    if st.context.alphabet.names != tuple(st.inputs) + tuple(st.outputs):
        raise StrategyFormatError("strategy context alphabet does not match its variables")


def verify(spec, st: Strategy) -> VerifyReport:
    """Check that ``st`` wins for its player from the initial state.

    System strategies pass iff the strategy-restricted graph without accepting
    transitions is acyclic and defined everywhere it reaches. Environment
    strategies pass iff no reachable transition accepts.
    """
    _check_vars(spec, st)
    ctx = st.context
    if st.player == ENVIRONMENT:
        return _verify_environment(ctx, st)
    return _verify_system(ctx, st)


def _describe(ctx: SolverContext, kind: str, states, letters) -> str:
    path = " ; ".join(ctx.alphabet.cube(x) for x in letters) or "(empty)"
    head = str(ctx.representative(states[-1])) if states else "?"
    return f"{kind} witness at [{head}] via {path}"


def _verify_system(ctx: SolverContext, st: Strategy) -> VerifyReport:
    WHITE, GREY, BLACK = 0, 1, 2
    colour: dict[StateKey, int] = {}
    # explicit DFS keeping the current path for witnesses
    path_states: list[StateKey] = []
    path_letters: list[int] = []
    stack: list[tuple[StateKey, Iterable]] = []

    def enter(s: StateKey):
        if s not in st.table:
            return VerifyReport(False, "undefined", path_states + [s], list(path_letters),
                                _describe(ctx, "undefined-state", path_states + [s], path_letters))
        colour[s] = GREY
        path_states.append(s)
        stack.append((s, iter(st.moves(s))))
        return None

    bad = enter(st.initial)
    if bad is not None:
        return bad
    while stack:
        s, it = stack[-1]
        for _, letter in it:
            if ctx.accepts(s, letter):
                continue
            t = ctx.successor(s, letter)
            c = colour.get(t, WHITE)
            if c == BLACK:
                continue
            path_letters.append(letter)
            if c == GREY:
                i = path_states.index(t)
                states = path_states + [t]
                return VerifyReport(False, "lasso", states, list(path_letters),
                                    _describe(ctx, f"lasso (cycle back to step {i})", states, path_letters))
            bad = enter(t)
            if bad is not None:
                return bad
            break
        else:
            stack.pop()
            colour[s] = BLACK
            path_states.pop()
            if path_letters:
                path_letters.pop()
    return VerifyReport(True)


def _verify_environment(ctx: SolverContext, st: Strategy) -> VerifyReport:
    parent: dict[StateKey, tuple[StateKey, int] | None] = {st.initial: None}
    queue = [st.initial]

    def trail(s, last=None):
        states, letters = [s], []
        while parent[s] is not None:
            s, x = parent[s]
            states.append(s)
            letters.append(x)
        states.reverse()
        letters.reverse()
        if last is not None:
            letters.append(last)
        return states, letters

    while queue:
        s = queue.pop()
        if s not in st.table:
            states, letters = trail(s)
            return VerifyReport(False, "undefined", states, letters,
                                _describe(ctx, "undefined-state", states, letters))
        for _, letter in st.moves(s):
            if ctx.accepts(s, letter):
                states, letters = trail(s, letter)
                return VerifyReport(False, "accepting", states, letters,
                                    _describe(ctx, "accepting-play", states, letters))
            t = ctx.successor(s, letter)
            if t not in parent:
                parent[t] = (s, letter)
                queue.append(t)
    return VerifyReport(True)


@dataclass
class Simulation:
    letters: list[int]
    stop: int | None  # round of the first accepting transition, None while ongoing
    alphabet: Alphabet

    @property
    def trace(self) -> list[frozenset[str]]:
        return [self.alphabet.props(x) for x in self.letters]

    @property
    def ongoing(self) -> bool:
        return self.stop is None


def simulate(spec, st: Strategy, moves: Sequence) -> Simulation:
    """Replay opponent ``moves`` (ints or name sets) against ``st`` until acceptance."""
    _check_vars(spec, st)
    ctx = st.context
    opp = Alphabet(st.opponent_vars)
    s = st.initial
    letters = []
    for k, m in enumerate(moves):
        o = m if isinstance(m, int) else opp.letter(m)
        letter = st.letter(st.lookup(s, o), o)
        letters.append(letter)
        if ctx.accepts(s, letter):
            return Simulation(letters, k, ctx.alphabet)
        s = ctx.successor(s, letter)
    return Simulation(letters, None, ctx.alphabet)


# -- text format -------------------------------------------------------------

def _ids(st: Strategy) -> dict[StateKey, int]:
    """Number states in breadth-first order from the initial state."""
    ids = {st.initial: 0}
    queue = [st.initial]
    ctx = st.context
    for s in queue:
        if s not in st.table:
            continue
        for _, letter in st.moves(s):
            if ctx.accepts(s, letter):
                continue
            t = ctx.successor(s, letter)
            if t not in ids:
                ids[t] = len(ids)
                queue.append(t)
    return ids


def dumps(st: Strategy) -> str:
    """Serialize the part of ``st`` reachable from its initial state."""
    ctx = st.context
    own, opp = Alphabet(st.own_vars), Alphabet(st.opponent_vars)
    ids = _ids(st)
    lines = [
        f"strategy {st.player} {st.system_type}",
        f"inputs: {' '.join(st.inputs)}",
        f"outputs: {' '.join(st.outputs)}",
        "initial: 0",
    ]
    for s, i in ids.items():
        lines.append(f"state {i}: {ctx.representative(s)}")
    for s, i in ids.items():
        if s not in st.table:
            continue
        if st.reactive:
            out = " , ".join(f"{opp.cube(o)} => {own.cube(st.lookup(s, o))}" for o in range(1 << len(opp)))
        else:
            out = own.cube(st.lookup(s))
        succ = []
        for o, letter in st.moves(s):
            target = "acc" if ctx.accepts(s, letter) else str(ids[ctx.successor(s, letter)])
            succ.append(f"{opp.cube(o)} -> {target}")
        lines.append(f"{i} : {out} ; {' , '.join(succ)}")
    return "\n".join(lines) + "\n"


def loads(text: str, spec, context: SolverContext | None = None) -> Strategy:
    """Parse a strategy written by :func:`dumps` against ``spec``.

    Successor tables are recomputed and must match the file.
    """
    from .formula import to_nnf
    from .parser import LTLfSyntaxError, parse

    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")]
    if len(lines) < 4:
        raise StrategyFormatError("strategy file is truncated")
    head = lines[0].split()
    if len(head) != 3 or head[0] != "strategy" or head[1] not in (SYSTEM, ENVIRONMENT):
        raise StrategyFormatError("first line must be 'strategy <system|environment> <moore|mealy>'")
    player, system_type = head[1], head[2]
    if system_type != spec.system_type:
        raise StrategyFormatError(f"strategy is for {system_type} games, spec is {spec.system_type}")

    def names(line: str, tag: str) -> tuple[str, ...]:
        key, sep, rest = line.partition(":")
        if not sep or key.strip() != tag:
            raise StrategyFormatError(f"expected '{tag}:' line")
        return tuple(rest.split())

    inputs, outputs = names(lines[1], "inputs"), names(lines[2], "outputs")
    if inputs != tuple(spec.inputs) or outputs != tuple(spec.outputs):
        raise StrategyFormatError("strategy and specification use different variables")
    initial_id = int(names(lines[3], "initial")[0])
    if context is None:
        context = SolverContext(spec.variables, store=spec.formula.store, strict=False)
    ctx = context
    keys: dict[int, StateKey] = {}
    rows = []
    for line in lines[4:]:
        if line.startswith("state "):
            ident, sep, body = line[len("state "):].partition(":")
            if not sep:
                raise StrategyFormatError(f"bad state line {line!r}")
            try:
                f = to_nnf(parse(body, ctx.store))
                ctx.check_formula(f)
            except (LTLfSyntaxError, ValueError) as exc:
                raise StrategyFormatError(f"bad state formula in {line!r}: {exc}") from None
            keys[int(ident)] = ctx.canonicalize(f)
        else:
            rows.append(line)
    if initial_id not in keys:
        raise StrategyFormatError("initial state is not declared")

    skeleton = Strategy(player, system_type, inputs, outputs, keys[initial_id], {}, ctx)
    own, opp = Alphabet(skeleton.own_vars), Alphabet(skeleton.opponent_vars)
    table: dict[StateKey, object] = {}
    expected: dict[StateKey, dict[int, str]] = {}
    for line in rows:
        left, sep, rest = line.partition(":")
        out, sep2, succ = rest.partition(";")
        if not sep or not sep2:
            raise StrategyFormatError(f"bad row {line!r}")
        try:
            s = keys[int(left)]
            if skeleton.reactive:
                entry = [None] * (1 << len(opp))
                for item in out.split(","):
                    o_text, arrow, m_text = item.partition("=>")
                    if not arrow:
                        raise StrategyFormatError(f"bad reactive output {item!r}")
                    entry[opp.parse_cube(o_text)] = own.parse_cube(m_text)
                if None in entry:
                    raise StrategyFormatError(f"incomplete reactive row {line!r}")
                table[s] = tuple(entry)
            else:
                table[s] = own.parse_cube(out)
            exp = {}
            for item in succ.split(","):
                o_text, arrow, target = item.partition("->")
                if not arrow:
                    raise StrategyFormatError(f"bad successor entry {item!r}")
                exp[opp.parse_cube(o_text)] = target.strip()
            expected[s] = exp
        except (KeyError, ValueError) as exc:
            if isinstance(exc, StrategyFormatError):
                raise
            raise StrategyFormatError(f"bad row {line!r}: {exc}") from None
    st = Strategy(player, system_type, inputs, outputs, keys[initial_id], table, ctx)
    inverse = {v: k for k, v in keys.items()}
    for s, exp in expected.items():
        for o, letter in st.moves(s):
            target = "acc" if ctx.accepts(s, letter) else str(inverse.get(ctx.successor(s, letter), "?"))
            if exp.get(o) != target:
                raise StrategyFormatError(f"successor table disagrees at state {inverse[s]}")
    return st


def to_dot(st: Strategy) -> str:
    ctx = st.context
    ids = _ids(st)
    lines = ["digraph strategy {", "  rankdir=LR;", '  acc [shape=doublecircle, label="accept"];']
    for s, i in ids.items():
        label = str(ctx.representative(s)).replace('"', '\\"')
        lines.append(f'  q{i} [label="{label}"];')
    for s, i in ids.items():
        if s not in st.table:
            continue
        for o, letter in st.moves(s):
            target = "acc" if ctx.accepts(s, letter) else f"q{ids[ctx.successor(s, letter)]}"
            lines.append(f'  q{i} -> {target} [label="{ctx.alphabet.cube(letter)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
