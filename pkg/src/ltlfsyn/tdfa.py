"""Explicit transition-based DFA built by exhaustive progression."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .context import SolverContext
from .formula import Formula, propositions

DEFAULT_STATE_BUDGET = 10**6


class BudgetExceeded(RuntimeError):
    """Raised when a search would exceed its configured state budget or deadline."""


@dataclass(frozen=True)
class Tdfa:
    alphabet_vars: tuple[str, ...]
    states: tuple[int, ...]
    init: int
    delta: tuple[tuple[int, ...], ...]
    accepting: frozenset[tuple[int, int]]
    context: SolverContext = field(compare=False, repr=False)

    @property
    def n_letters(self) -> int:
        return 1 << len(self.alphabet_vars)

    def index_of(self, key: int) -> int:
        return self.states.index(key)

    def is_accepting(self, s: int, letter: int) -> bool:
        return (s, letter) in self.accepting

    def label(self, s: int) -> str:
        return str(self.context.representative(self.states[s]))


def build_tdfa(
    f: Formula,
    variables: Sequence[str] | None = None,
    context: SolverContext | None = None,
    budget: int = DEFAULT_STATE_BUDGET,
    strict: bool = False,
) -> Tdfa:
    if context is None:
        if variables is None:
            variables = propositions(f)
        context = SolverContext(variables, store=f.store, strict=strict)
    elif variables is not None and tuple(variables) != context.alphabet.names:
        raise ValueError("variables disagree with the context alphabet")
    ctx = context
    ctx.check_formula(f)
    ctx.states.register_atoms(f)
    root = ctx.canonicalize(f)
    index = {root: 0}
    keys = [root]
    delta: list[tuple[int, ...]] = []
    accepting = set()
    letters = ctx.alphabet.letters()
    queue = deque([root])
    while queue:
        key = queue.popleft()
        s = index[key]
        row = []
        for letter in letters:
            t = ctx.successor(key, letter)
            if t not in index:
                if len(keys) >= budget:
                    raise BudgetExceeded(f"automaton exceeds {budget} states")
                index[t] = len(keys)
                keys.append(t)
                queue.append(t)
            row.append(index[t])
            if ctx.accepts(key, letter):
                accepting.add((s, letter))
        delta.append(tuple(row))
    A = Tdfa(ctx.alphabet.names, tuple(keys), 0, tuple(delta), frozenset(accepting), ctx)
    _check_structure(A)
    return A


def _check_structure(A: Tdfa) -> None:
    n = len(A.states)
    assert len(A.delta) == n
    for row in A.delta:
        assert len(row) == A.n_letters
        assert all(0 <= t < n for t in row)


def accepts(A: Tdfa, trace: Iterable) -> bool:
    """Run ``trace`` (letters as ints or sets of names) and test the last transition."""
    alphabet = A.context.alphabet
    s = A.init
    last = None
    for x in trace:
        letter = x if isinstance(x, int) else alphabet.letter(x)
        last = (s, letter)
        s = A.delta[s][letter]
    return last is not None and last in A.accepting


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(A: Tdfa) -> str:
    alphabet = A.context.alphabet
    lines = ["digraph tdfa {", "  rankdir=LR;", '  node [shape=ellipse];', '  init [shape=point];']
    for s in range(len(A.states)):
        lines.append(f"  s{s} [label={_quote(A.label(s))}];")
    lines.append(f"  init -> s{A.init};")
    for s, row in enumerate(A.delta):
        # sort by target so edges sharing a target sit together
        for letter in sorted(range(A.n_letters), key=lambda x: (row[x], x)):
            style = ', style=bold, color="darkgreen"' if (s, letter) in A.accepting else ""
            lines.append(f"  s{s} -> s{row[letter]} [label={_quote(alphabet.cube(letter))}{style}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
