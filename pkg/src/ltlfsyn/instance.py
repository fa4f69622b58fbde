"""Synthesis problem instances and the partition file format."""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .formula import Formula, FormulaStore, propositions, to_nnf
from .parser import parse

MOORE = "moore"
MEALY = "mealy"
SYSTEM_TYPES = (MOORE, MEALY)


class InstanceError(ValueError):
    pass


@dataclass(frozen=True)
class Partition:
    inputs: tuple[str, ...]
    outputs: tuple[str, ...]

    def __post_init__(self):
        overlap = set(self.inputs) & set(self.outputs)
        if overlap:
            raise InstanceError(f"propositions both input and output: {sorted(overlap)}")
        for group in (self.inputs, self.outputs):
            if len(set(group)) != len(group):
                raise InstanceError(f"duplicate proposition in {list(group)}")

    @property
    def variables(self) -> tuple[str, ...]:
        return self.inputs + self.outputs


def parse_partition(text: str) -> Partition:
    fields: dict[str, list[str]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        head, sep, rest = line.partition(":")
        head = head.strip()
        if not sep or head not in (".inputs", ".outputs"):
            raise InstanceError(f"line {lineno}: expected '.inputs:' or '.outputs:'")
        if head in fields:
            raise InstanceError(f"line {lineno}: duplicate {head} line")
        fields[head] = rest.split()
    if set(fields) != {".inputs", ".outputs"}:
        raise InstanceError("partition needs both an .inputs and an .outputs line")
    part = Partition(tuple(fields[".inputs"]), tuple(fields[".outputs"]))
    if not part.variables:
        raise InstanceError("partition declares no propositions")
    return part


def format_partition(part: Partition) -> str:
    return f".inputs: {' '.join(part.inputs)}\n.outputs: {' '.join(part.outputs)}\n"


@dataclass(frozen=True)
class SpecInstance:
    formula: Formula
    inputs: tuple[str, ...]
    outputs: tuple[str, ...]
    system_type: str = MOORE

    def __post_init__(self):
        if self.system_type not in SYSTEM_TYPES:
            raise InstanceError(f"unknown system type {self.system_type!r}")
        if not self.formula.is_nnf:
            object.__setattr__(self, "formula", to_nnf(self.formula))
        Partition(tuple(self.inputs), tuple(self.outputs))
        declared = set(self.inputs) | set(self.outputs)
        missing = [p for p in propositions(self.formula) if p not in declared]
        if missing:
            raise InstanceError(f"propositions missing from the partition: {', '.join(missing)}")

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(self.inputs) + tuple(self.outputs)

    @property
    def partition(self) -> Partition:
        return Partition(tuple(self.inputs), tuple(self.outputs))

    def with_type(self, system_type: str) -> SpecInstance:
        return SpecInstance(self.formula, self.inputs, self.outputs, system_type)


def make_instance(text: str, inputs, outputs, system_type: str = MOORE, store: FormulaStore | None = None) -> SpecInstance:
    store = store or FormulaStore()
    return SpecInstance(to_nnf(parse(text, store)), tuple(inputs), tuple(outputs), system_type)


def load_instance(formula_path, part_path, system_type: str = MOORE, store: FormulaStore | None = None) -> SpecInstance:
    text = Path(formula_path).read_text()
    part = parse_partition(Path(part_path).read_text())
    return make_instance(text, part.inputs, part.outputs, system_type, store)
