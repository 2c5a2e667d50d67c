"""Surface syntax trees produced by the parser, before name resolution.

Spans are carried for diagnostics but excluded from equality so that a
pretty-printed and re-parsed tree compares equal to the original.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .diagnostics import Span


@dataclass
class NameRef:
    """Identifier operand; `component` is set for qualified `Comp.var` form."""

    name: str
    component: Optional[str] = None
    span: Span | None = field(default=None, compare=False)

    def __str__(self) -> str:
        return self.name if self.component is None else f"{self.component}.{self.name}"


@dataclass
class IntLit:
    value: int
    span: Span | None = field(default=None, compare=False)

    def __str__(self) -> str:
        return str(self.value)


Operand = Union[NameRef, IntLit]


@dataclass
class PredicateNode:
    lhs: Operand
    op: str  # "=", "!=", "<", "<=", ">", ">="
    rhs: Operand
    span: Span | None = field(default=None, compare=False)

    def __str__(self) -> str:
        return f"{self.lhs} {self.op} {self.rhs}"


@dataclass
class StateTestNode:
    machine: NameRef
    state: str
    span: Span | None = field(default=None, compare=False)

    def __str__(self) -> str:
        return f"in({self.machine}, {self.state})"


RowPredicate = Union[PredicateNode, StateTestNode]


@dataclass
class RowNode:
    predicate: RowPredicate
    cells: list[str]  # each "T" | "F" | "."
    span: Span | None = field(default=None, compare=False)


@dataclass
class TableNode:
    rows: list[RowNode]
    span: Span | None = field(default=None, compare=False)


@dataclass
class ElseNode:
    span: Span | None = field(default=None, compare=False)


ConditionNode = Union[TableNode, ElseNode]


@dataclass
class CaseNode:
    condition: ConditionNode
    value: Operand
    trace: list[str]
    span: Span | None = field(default=None, compare=False)


@dataclass
class AssignNode:
    target: NameRef
    cases: list[CaseNode]
    span: Span | None = field(default=None, compare=False)


@dataclass
class VarDeclNode:
    direction: str  # "input" | "output" | "internal"
    name: str
    type_name: str
    init: Optional[Operand]
    span: Span | None = field(default=None, compare=False)


@dataclass
class TransitionNode:
    target: str
    condition: ConditionNode
    trace: list[str]
    span: Span | None = field(default=None, compare=False)


@dataclass
class StateNode:
    name: str
    transitions: list[TransitionNode]
    span: Span | None = field(default=None, compare=False)


@dataclass
class StateMachineNode:
    name: str
    initial: str
    states: list[StateNode]
    span: Span | None = field(default=None, compare=False)


@dataclass
class TypeDeclNode:
    name: str
    literals: Optional[list[str]]  # enum form
    bounds: Optional[tuple[int, int]]  # int range form
    span: Span | None = field(default=None, compare=False)


@dataclass
class InvariantNode:
    name: str
    table: TableNode
    trace: list[str]
    span: Span | None = field(default=None, compare=False)


@dataclass
class ComponentNode:
    name: str
    variables: list[VarDeclNode]
    assigns: list[AssignNode]
    machines: list[StateMachineNode]
    span: Span | None = field(default=None, compare=False)


@dataclass
class SpecNode:
    name: str
    types: list[TypeDeclNode]
    components: list[ComponentNode]
    invariants: list[InvariantNode]
    span: Span | None = field(default=None, compare=False)


# ---------------------------------------------------------------------------
# Pretty-printing.  format_spec(parse_spec(text)) re-parses to an equal tree.


def _fmt_trace(tags: list[str]) -> str:
    return f" trace {', '.join(tags)}" if tags else ""


def _fmt_table(table: TableNode, indent: str) -> str:
    lines = [f"{indent}table {{"]
    for row in table.rows:
        cells = " ".join(row.cells)
        lines.append(f"{indent}  {row.predicate} : {cells}")
    lines.append(f"{indent}}}")
    return "\n".join(lines)


def _fmt_condition(cond: ConditionNode, indent: str) -> str:
    if isinstance(cond, ElseNode):
        return "else"
    return _fmt_table(cond, indent).lstrip()


def format_spec(spec: SpecNode) -> str:
    out: list[str] = [f"specification {spec.name}", ""]
    for t in spec.types:
        if t.literals is not None:
            out.append(f"type {t.name} = {{ {', '.join(t.literals)} }}")
        else:
            lo, hi = t.bounds  # type: ignore[misc]
            out.append(f"type {t.name} = int [{lo} .. {hi}]")
    if spec.types:
        out.append("")
    for comp in spec.components:
        out.append(f"component {comp.name} {{")
        for v in comp.variables:
            init = f" init {v.init}" if v.init is not None else ""
            out.append(f"  {v.direction} {v.name} : {v.type_name}{init}")
        for a in comp.assigns:
            out.append(f"  assign {a.target} {{")
            for case in a.cases:
                cond = _fmt_condition(case.condition, "    ")
                out.append(f"    when {cond} then {case.value}{_fmt_trace(case.trace)}")
            out.append("  }")
        for m in comp.machines:
            out.append(f"  statemachine {m.name} {{")
            out.append(f"    initial {m.initial} ;")
            for st in m.states:
                out.append(f"    state {st.name} {{")
                for tr in st.transitions:
                    cond = _fmt_condition(tr.condition, "      ")
                    out.append(f"      goto {tr.target} when {cond}{_fmt_trace(tr.trace)}")
                out.append("    }")
            out.append("  }")
        out.append("}")
        out.append("")
    for inv in spec.invariants:
        out.append(f"invariant {inv.name} : {_fmt_table(inv.table, '').lstrip()}{_fmt_trace(inv.trace)}")
    return "\n".join(out).rstrip() + "\n"
