"""Problem-diagram model with well-formedness checks, the requirements
registry, and the traceability graph linking requirements, problem-diagram
elements, specification elements and generated Event-B elements.

The graph has exactly three kinds of edges: declared trace tags (including a
problem-diagram requirement block whose id names a registered requirement),
byte-equal phenomenon/variable name matches, and generation provenance.  The
entailment between world, machine and requirement is recorded as prose only
and never evaluated.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from .diagnostics import Diagnostic, Span, SpecError, error, warning
from .eventb import GenResult
from .model import Specification


@dataclass
class Requirement:
    id: str
    prose: str
    phase: Optional[str]
    declared_in: str
    span: Span | None = field(default=None, compare=False)


@dataclass
class PfDomain:
    name: str
    kind: str  # "given" | "designed" | "biddable" | "lexical"
    span: Span | None = field(default=None, compare=False)


@dataclass
class Interface:
    end_a: str
    end_b: str
    phenomena: list[str]
    span: Span | None = field(default=None, compare=False)


@dataclass
class PfRequirement:
    id: str
    prose: str
    constrains: Optional[tuple[str, list[str]]]  # (domain, phenomena)
    refs: list[tuple[str, list[str]]]
    trace: list[str]
    span: Span | None = field(default=None, compare=False)


@dataclass
class ProblemDiagram:
    name: str
    machines: list[tuple[str, Span | None]]  # every `machine` clause as parsed
    domains: list[PfDomain]
    interfaces: list[Interface]
    requirements: list[PfRequirement]
    span: Span | None = field(default=None, compare=False)

    @property
    def machine(self) -> str | None:
        return self.machines[0][0] if self.machines else None

    def phenomena_of(self, domain: str) -> set[str]:
        out: set[str] = set()
        for itf in self.interfaces:
            if domain in (itf.end_a, itf.end_b):
                out.update(itf.phenomena)
        return out

    @property
    def all_phenomena(self) -> list[str]:
        seen: list[str] = []
        for itf in self.interfaces:
            for p in itf.phenomena:
                if p not in seen:
                    seen.append(p)
        return seen


# ---------------------------------------------------------------------------
# Well-formedness


def check_pf(diagram: ProblemDiagram) -> list[Diagnostic]:
    """Structural checks: one machine, known domains, phenomena on the named
    domain's interfaces, and no requirement touching the machine."""
    diags: list[Diagnostic] = []
    if not diagram.machines:
        diags.append(
            error("MissingMachine", f"problem '{diagram.name}' declares no machine", diagram.span)
        )
    elif len(diagram.machines) > 1:
        extra = diagram.machines[1]
        diags.append(
            error(
                "MultipleMachines",
                f"problem '{diagram.name}' declares more than one machine",
                extra[1],
            )
        )
    known = {d.name for d in diagram.domains} | {name for name, _ in diagram.machines}
    for itf in diagram.interfaces:
        for end in (itf.end_a, itf.end_b):
            if end not in known:
                diags.append(
                    error("UnknownDomain", f"interface endpoint '{end}' is not declared", itf.span)
                )
    machine = diagram.machine
    if not diagram.requirements:
        diags.append(
            warning(
                "NoRequirement",
                f"sub-problem '{diagram.name}' declares no requirement",
                diagram.span,
            )
        )
    for req in diagram.requirements:
        clauses = ([("constrains", *diagram_constrains(req))] if req.constrains else []) + [
            ("refs", domain, phenomena) for domain, phenomena in req.refs
        ]
        for clause, domain, phenomena in clauses:
            if machine is not None and domain == machine:
                diags.append(
                    error(
                        "MachineInRequirement",
                        f"requirement {req.id} {clause} the machine '{machine}'; "
                        "requirements may only touch problem-world domains",
                        req.span,
                    )
                )
                continue
            if domain not in known:
                diags.append(
                    error(
                        "UnknownDomain",
                        f"requirement {req.id} names unknown domain '{domain}'",
                        req.span,
                    )
                )
                continue
            on_interfaces = diagram.phenomena_of(domain)
            for p in phenomena:
                if p not in on_interfaces:
                    diags.append(
                        error(
                            "UnknownPhenomenon",
                            f"requirement {req.id}: phenomenon '{p}' is not on any "
                            f"interface of domain '{domain}'",
                            req.span,
                        )
                    )
    return diags


def diagram_constrains(req: PfRequirement) -> tuple[str, list[str]]:
    assert req.constrains is not None
    return req.constrains


# ---------------------------------------------------------------------------
# Trace graph

EDGE_DECLARED = "declared"
EDGE_NAME_MATCH = "name-match"
EDGE_PROVENANCE = "provenance"

# Node kinds, also used to bucket the report columns.
REQ = "req"
PF_BLOCK = "pf-block"
PHENOMENON = "phenomenon"
RSML_CASE = "case"
RSML_TRANSITION = "transition"
RSML_INVARIANT = "rsml-invariant"
RSML_VARIABLE = "variable"
EB_EVENT = "event"
EB_INVARIANT = "eb-invariant"

_RSML_KINDS = (RSML_CASE, RSML_TRANSITION, RSML_INVARIANT, RSML_VARIABLE)
_EB_KINDS = (EB_EVENT, EB_INVARIANT)


@dataclass(frozen=True)
class TraceNode:
    kind: str
    ident: str  # unique within kind
    display: str


@dataclass(frozen=True)
class TraceEdge:
    kind: str
    source: tuple[str, str]  # (node kind, ident)
    target: tuple[str, str]


@dataclass
class TraceGraph:
    nodes: dict[tuple[str, str], TraceNode]
    edges: list[TraceEdge]

    def neighbours(self, key: tuple[str, str]) -> list[tuple[str, str]]:
        out = []
        for e in self.edges:
            if e.source == key:
                out.append(e.target)
            elif e.target == key:
                out.append(e.source)
        return out

    def reachable(self, key: tuple[str, str]) -> list[TraceNode]:
        """Nodes connected to `key`.  Requirement nodes are reached but never
        traversed, so one requirement's row does not absorb elements that are
        only traced to a different requirement sharing an element."""
        seen = {key}
        queue = deque([key])
        found: list[TraceNode] = []
        while queue:
            cur = queue.popleft()
            if cur != key and cur[0] == REQ:
                continue
            for nxt in self.neighbours(cur):
                if nxt not in seen:
                    seen.add(nxt)
                    found.append(self.nodes[nxt])
                    queue.append(nxt)
        return found


def link(
    requirements: list[Requirement],
    diagrams: list[ProblemDiagram],
    spec: Specification | None,
    generated: GenResult | None,
) -> TraceGraph:
    """Build the traceability graph.  Raises on trace tags (or requirement
    block ids) that name no registered requirement."""
    nodes: dict[tuple[str, str], TraceNode] = {}
    edges: list[TraceEdge] = []
    unknown: list[Diagnostic] = []
    req_ids = {r.id for r in requirements}

    def add_node(kind: str, ident: str, display: str) -> tuple[str, str]:
        key = (kind, ident)
        if key not in nodes:
            nodes[key] = TraceNode(kind, ident, display)
        return key

    def declared(source: tuple[str, str], tag: str, where: Span | None) -> None:
        if tag not in req_ids:
            unknown.append(
                error("UnknownRequirementId", f"trace tag {tag} names no requirement", where)
            )
            return
        edges.append(TraceEdge(EDGE_DECLARED, source, (REQ, tag)))

    for r in requirements:
        add_node(REQ, r.id, r.id)

    for diagram in diagrams:
        for req in diagram.requirements:
            key = add_node(PF_BLOCK, f"{diagram.name}.{req.id}", f"{diagram.name}.{req.id}")
            if req.id in req_ids:
                edges.append(TraceEdge(EDGE_DECLARED, key, (REQ, req.id)))
            else:
                unknown.append(
                    error(
                        "UnknownRequirementId",
                        f"requirement block {req.id} names no registered requirement",
                        req.span,
                    )
                )
            for tag in req.trace:
                declared(key, tag, req.span)
        for phenomenon in diagram.all_phenomena:
            add_node(PHENOMENON, f"{diagram.name}/{phenomenon}", phenomenon)

    if spec is not None:
        for comp in spec.components:
            for v in comp.variables:
                add_node(RSML_VARIABLE, v.qualified, spec.display_name(v.qualified))
            for a in comp.assigns:
                for idx, case in enumerate(a.cases):
                    ident = f"case:{a.target.qualified}#{idx}"
                    key = add_node(
                        RSML_CASE, ident, f"case {spec.display_name(a.target.qualified)}#{idx}"
                    )
                    for tag in case.trace:
                        declared(key, tag, case.span)
            for m in comp.machines:
                for idx, t in enumerate(m.transitions):
                    ident = f"transition:{m.qualified}#{idx}"
                    key = add_node(
                        RSML_TRANSITION,
                        ident,
                        f"transition {spec.display_name(m.qualified)} "
                        f"{t.source}->{t.target}",
                    )
                    for tag in t.trace:
                        declared(key, tag, t.span)
        for inv in spec.invariants:
            key = add_node(RSML_INVARIANT, f"invariant:{inv.name}", f"invariant {inv.name}")
            for tag in inv.trace:
                declared(key, tag, inv.span)

        # Name-match edges: phenomenon name == bare variable name, byte-equal.
        bare_vars = {}
        for v in spec.variables:
            bare_vars.setdefault(v.name, []).append(v.qualified)
        for diagram in diagrams:
            for phenomenon in diagram.all_phenomena:
                for qualified in bare_vars.get(phenomenon, []):
                    edges.append(
                        TraceEdge(
                            EDGE_NAME_MATCH,
                            (PHENOMENON, f"{diagram.name}/{phenomenon}"),
                            (RSML_VARIABLE, qualified),
                        )
                    )

    if generated is not None:
        for event in generated.machine.events:
            add_node(EB_EVENT, event.name, f"event {event.name}")
        for inv in generated.machine.invariants:
            add_node(EB_INVARIANT, inv.label, f"machine invariant {inv.label}")
        kind_of_source = {
            "case": RSML_CASE,
            "transition": RSML_TRANSITION,
            "variable": RSML_VARIABLE,
            "invariant": RSML_INVARIANT,
        }
        kind_of_target = {"event": EB_EVENT, "invariant": EB_INVARIANT}
        for p in generated.provenance:
            # Variable nodes are keyed by qualified name without the prefix.
            source_ident = (
                p.source_id.split(":", 1)[1] if p.source_kind == "variable" else p.source_id
            )
            source = (kind_of_source[p.source_kind], source_ident)
            target = (kind_of_target[p.target_kind], p.target_id)
            if source in nodes and target in nodes:
                edges.append(TraceEdge(EDGE_PROVENANCE, source, target))

    if unknown:
        raise SpecError(unknown)
    return TraceGraph(nodes, edges)


# ---------------------------------------------------------------------------
# Matrix report


@dataclass
class TraceRow:
    requirement: str
    pf_blocks: list[str]
    rsml: list[str]
    eventb: list[str]


@dataclass
class TraceReport:
    rows: list[TraceRow]
    warnings: list[Diagnostic]
    edges: list[TraceEdge]


def trace_report(graph: TraceGraph, require_trace: bool = False) -> TraceReport:
    """Per-requirement reachability rows (requirement id order), orphan
    warnings, and untraced-element warnings when require_trace is set."""
    rows: list[TraceRow] = []
    warnings: list[Diagnostic] = []
    req_keys = sorted(
        (key for key in graph.nodes if key[0] == REQ), key=lambda key: key[1]
    )
    for key in req_keys:
        reachable = graph.reachable(key)
        row = TraceRow(
            requirement=key[1],
            pf_blocks=[n.display for n in reachable if n.kind == PF_BLOCK],
            rsml=[n.display for n in reachable if n.kind in _RSML_KINDS],
            eventb=[n.display for n in reachable if n.kind in _EB_KINDS],
        )
        rows.append(row)
        if not row.rsml:
            warnings.append(
                warning(
                    "OrphanRequirement",
                    f"requirement {key[1]} reaches no specification element",
                )
            )
    if require_trace:
        for key, node in graph.nodes.items():
            if node.kind not in (RSML_CASE, RSML_TRANSITION):
                continue
            if not any(n.kind == REQ for n in graph.reachable(key)):
                warnings.append(
                    warning("UntracedElement", f"{node.display} reaches no requirement")
                )
    return TraceReport(rows, warnings, list(graph.edges))
