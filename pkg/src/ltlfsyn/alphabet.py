"""Letters as bitvectors over an ordered proposition list."""
from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Iterator, Sequence


class LetterSyntaxError(ValueError):
    pass


class Alphabet:
    """Bit ``i`` of a letter is the value of ``names[i]``."""

    def __init__(self, names: Sequence[str]):
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate proposition in {self.names}")
        self.index = {n: i for i, n in enumerate(self.names)}
        self.props = lru_cache(maxsize=None)(self._props)

    def __len__(self) -> int:
        return len(self.names)

    def __repr__(self) -> str:
        return f"Alphabet({list(self.names)})"

    @property
    def n_letters(self) -> int:
        return 1 << len(self.names)

    def letters(self) -> range:
        return range(self.n_letters)

    def letter(self, true_props: Iterable[str]) -> int:
        bits = 0
        for p in true_props:
            try:
                bits |= 1 << self.index[p]
            except KeyError:
                raise LetterSyntaxError(f"unknown proposition {p!r}") from None
        return bits

    def _props(self, letter: int) -> frozenset[str]:
        return frozenset(n for i, n in enumerate(self.names) if (letter >> i) & 1)

    def mask(self, names: Iterable[str]) -> int:
        return self.letter(n for n in names if n in self.index)

    def cube(self, letter: int) -> str:
        if not self.names:
            return "true"
        return " & ".join(n if (letter >> i) & 1 else "!" + n for i, n in enumerate(self.names))

    def parse_cube(self, text: str) -> int:
        """Parse ``a & !b``; unmentioned propositions are false."""
        text = text.strip()
        if text in ("", "true"):
            return 0
        bits = 0
        seen = set()
        for part in text.split("&"):
            part = part.strip()
            positive = not part.startswith("!")
            name = part.lstrip("!").strip()
            if name not in self.index:
                raise LetterSyntaxError(f"unknown proposition {name!r} in {text!r}")
            if name in seen:
                raise LetterSyntaxError(f"proposition {name!r} assigned twice in {text!r}")
            seen.add(name)
            if positive:
                bits |= 1 << self.index[name]
        return bits

    def format_trace(self, letters: Sequence[int]) -> str:
        return " ; ".join(self.cube(x) for x in letters)

    def parse_trace(self, text: str) -> list[int]:
        return [self.parse_cube(part) for part in text.split(";")]


def submasks(mask: int) -> Iterator[int]:
    """All submasks of ``mask`` in ascending numeric order."""
    bits = [1 << i for i in range(mask.bit_length()) if (mask >> i) & 1]
    for k in range(1 << len(bits)):
        sub = 0
        for j, b in enumerate(bits):
            if (k >> j) & 1:
                sub |= b
        yield sub
