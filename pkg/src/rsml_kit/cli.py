"""Command-line front end: check, simulate, explore, gen, trace.

Exit codes: 0 clean, 1 findings or errors, 2 usage problems, 3 resource
limits.  Reports go to stdout, diagnostics to stderr; output is
deterministic for identical inputs and flags.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .analysis import DEFAULT_CAP, AnalysisReport, analyze, summary_line
from .diagnostics import Diagnostic, SpecError, color_enabled, error
from .eventb import GenResult, gen_chain, gen_flat, render
from .model import Specification, resolve
from .parser import parse_pf, parse_requirements, parse_spec
from .pftrace import (
    ProblemDiagram,
    Requirement,
    TraceReport,
    check_pf,
    link,
    trace_report,
)
from .simulator import (
    ExplorationReport,
    SystemState,
    Trace,
    explore,
    parse_script,
    run_script,
)

EXIT_OK = 0
EXIT_FINDINGS = 1
EXIT_USAGE = 2
EXIT_LIMIT = 3


def _print_diagnostics(diags: list[Diagnostic]) -> None:
    use_color = color_enabled(sys.stderr)
    for d in diags:
        print(d.render(color=use_color), file=sys.stderr)


def _read(path: str) -> str | None:
    p = Path(path)
    if not p.is_file():
        return None
    return p.read_text(encoding="utf-8")


class _Loader:
    """Parses project files by extension and accumulates diagnostics."""

    def __init__(self) -> None:
        self.specs: list[Specification] = []
        self.diagrams: list[ProblemDiagram] = []
        self.requirements: list[Requirement] = []
        self.diagnostics: list[Diagnostic] = []
        self.usage_error: str | None = None

    def load(self, paths: list[str]) -> None:
        for path in paths:
            text = _read(path)
            if text is None:
                self.usage_error = f"no such file: {path}"
                return
            try:
                if path.endswith(".rsml"):
                    self.specs.append(resolve(parse_spec(text, path), path))
                elif path.endswith(".pf"):
                    self.diagrams.extend(parse_pf(text, path))
                elif path.endswith(".req"):
                    self.requirements.extend(parse_requirements(text, path))
                else:
                    self.usage_error = f"unrecognized file extension: {path}"
                    return
            except SpecError as exc:
                self.diagnostics.extend(exc.diagnostics)


def _load_spec(path: str) -> tuple[Specification | None, list[Diagnostic], str | None]:
    text = _read(path)
    if text is None:
        return None, [], f"no such file: {path}"
    if not path.endswith(".rsml"):
        return None, [], f"expected a .rsml file: {path}"
    try:
        return resolve(parse_spec(text, path), path), [], None
    except SpecError as exc:
        return None, exc.diagnostics, None


def _gate_on_analysis(spec: Specification, cap: int, force: bool) -> list[Diagnostic]:
    """Static checks that guard simulate/gen; --force downgrades them."""
    report = analyze(spec, cap)
    errors = [d for d in report.diagnostics if d.severity == "error"]
    if errors and not force:
        return errors
    return []


# ---------------------------------------------------------------------------
# check


def _requirement_tag_diags(
    requirements: list[Requirement],
    diagrams: list[ProblemDiagram],
    specs: list[Specification],
) -> list[Diagnostic]:
    ids = {r.id for r in requirements}
    diags: list[Diagnostic] = []

    def check_tag(tag: str, where, what: str) -> None:
        if tag not in ids:
            diags.append(
                error("UnknownRequirementId", f"{what}: trace tag {tag} names no requirement", where)
            )

    for diagram in diagrams:
        for req in diagram.requirements:
            if req.id not in ids:
                diags.append(
                    error(
                        "UnknownRequirementId",
                        f"requirement block {req.id} names no registered requirement",
                        req.span,
                    )
                )
            for tag in req.trace:
                check_tag(tag, req.span, f"requirement block {req.id}")
    for spec in specs:
        for comp in spec.components:
            for a in comp.assigns:
                for case in a.cases:
                    for tag in case.trace:
                        check_tag(tag, case.span, f"case of {a.target.qualified}")
            for m in comp.machines:
                for t in m.transitions:
                    for tag in t.trace:
                        check_tag(tag, t.span, f"transition of {m.qualified}")
        for inv in spec.invariants:
            for tag in inv.trace:
                check_tag(tag, inv.span, f"invariant {inv.name}")
    return diags


def cmd_check(args: argparse.Namespace) -> int:
    loader = _Loader()
    loader.load(args.paths)
    if loader.usage_error:
        print(loader.usage_error, file=sys.stderr)
        return EXIT_USAGE
    diags = list(loader.diagnostics)
    reports: list[tuple[Specification, AnalysisReport]] = []
    for diagram in loader.diagrams:
        diags.extend(check_pf(diagram))
    if loader.requirements or any(d.requirements for d in loader.diagrams):
        diags.extend(
            _requirement_tag_diags(loader.requirements, loader.diagrams, loader.specs)
        )
    for spec in loader.specs:
        report = analyze(spec, args.cap)
        reports.append((spec, report))
        diags.extend(report.diagnostics)

    has_error = any(d.severity == "error" for d in diags)
    has_warning = any(d.severity == "warning" for d in diags)

    if args.format == "json":
        payload = {
            "diagnostics": [d.to_json() for d in diags],
            "summaries": [
                {
                    "specification": spec.name,
                    "guard_sets": [
                        {
                            "owner": r.guard_set.owner,
                            "domain_size": r.domain_size,
                            "complete": r.completeness.complete if r.completeness else None,
                            "consistent": r.consistency.consistent if r.consistency else None,
                        }
                        for r in report.results
                    ],
                    "summary": summary_line(report),
                }
                for spec, report in reports
            ],
        }
        print(json.dumps(payload, indent=2))
    else:
        _print_diagnostics(diags)
        for spec, report in reports:
            for r in report.results:
                verdicts = []
                if r.error is not None:
                    verdicts.append("skipped (domain too large)")
                else:
                    verdicts.append("complete" if r.completeness.complete else "incomplete")
                    verdicts.append("consistent" if r.consistency.consistent else "conflicting")
                print(
                    f"guard set {r.guard_set.owner}: domain {r.domain_size}, "
                    + ", ".join(verdicts)
                )
            print(summary_line(report))

    if has_error or (args.warnings_as_errors and has_warning):
        return EXIT_FINDINGS
    return EXIT_OK


# ---------------------------------------------------------------------------
# simulate


def _display_values(spec: Specification, state: SystemState) -> dict[str, str]:
    return {spec.display_name(name): str(value) for name, value in state.values}


def _display_states(spec: Specification, state: SystemState) -> dict[str, str]:
    return {spec.display_name(name): value for name, value in state.states}


def _trace_json(spec: Specification, trace: Trace) -> dict:
    return {
        "specification": spec.name,
        "initial": {
            "step": 0,
            "values": _display_values(spec, trace.initial),
            "machines": _display_states(spec, trace.initial),
        },
        "steps": [
            {
                "step": state.step,
                "inputs": {spec.display_name(k): str(v) for k, v in inputs.items()},
                "values": _display_values(spec, state),
                "machines": _display_states(spec, state),
            }
            for inputs, state in trace.steps
        ],
        "violation": (
            {"invariant": trace.violation[0], "step": trace.violation[1]}
            if trace.violation
            else None
        ),
    }


def _trace_text(spec: Specification, trace: Trace) -> str:
    rows = [("step", "inputs", "changes", "machines")]
    prev = None
    for state in trace.states:
        if prev is None:
            inputs_text = "-"
            changes = ", ".join(f"{k}={v}" for k, v in _display_values(spec, state).items())
            changes = changes or "-"
        else:
            step_inputs = dict(trace.steps[state.step - 1][0])
            inputs_text = (
                ", ".join(
                    f"{spec.display_name(k)}={v}" for k, v in step_inputs.items()
                )
                or "-"
            )
            prev_values = dict(prev.values)
            changed = [
                f"{spec.display_name(k)}={v}"
                for k, v in state.values
                if prev_values[k] != v
            ]
            changes = ", ".join(changed) or "-"
        machines = (
            ", ".join(f"{k}={v}" for k, v in _display_states(spec, state).items()) or "-"
        )
        rows.append((str(state.step), inputs_text, changes, machines))
        prev = state
    widths = [max(len(row[col]) for row in rows) for col in range(4)]
    lines = [
        "  ".join(cell.ljust(widths[col]) for col, cell in enumerate(row)).rstrip()
        for row in rows
    ]
    if trace.violation:
        lines.append(f"invariant '{trace.violation[0]}' violated at step {trace.violation[1]}")
    return "\n".join(lines)


def cmd_simulate(args: argparse.Namespace) -> int:
    spec, diags, usage = _load_spec(args.spec)
    if usage:
        print(usage, file=sys.stderr)
        return EXIT_USAGE
    if spec is None:
        _print_diagnostics(diags)
        return EXIT_FINDINGS
    script_text = _read(args.script)
    if script_text is None:
        print(f"no such file: {args.script}", file=sys.stderr)
        return EXIT_USAGE
    gate = _gate_on_analysis(spec, args.cap, args.force)
    if gate:
        _print_diagnostics(gate)
        print("static checks failed; rerun with --force to simulate anyway", file=sys.stderr)
        return EXIT_FINDINGS
    try:
        script = parse_script(script_text, spec, args.script)
        trace = run_script(spec, script, keep_going=args.keep_going)
    except SpecError as exc:
        _print_diagnostics(exc.diagnostics)
        return EXIT_FINDINGS
    if args.format == "json":
        print(json.dumps(_trace_json(spec, trace), indent=2))
    else:
        print(_trace_text(spec, trace))
    return EXIT_FINDINGS if trace.violation else EXIT_OK


# ---------------------------------------------------------------------------
# explore


def _exploration_json(spec: Specification, report: ExplorationReport) -> dict:
    return {
        "specification": spec.name,
        "reachable": report.reachable,
        "depth": report.depth,
        "limit": report.limit,
        "violations": [
            {"invariant": name, "counterexample": _trace_json(spec, trace)}
            for name, trace in report.violations
        ],
    }


def cmd_explore(args: argparse.Namespace) -> int:
    spec, diags, usage = _load_spec(args.spec)
    if usage:
        print(usage, file=sys.stderr)
        return EXIT_USAGE
    if spec is None:
        _print_diagnostics(diags)
        return EXIT_FINDINGS
    try:
        report = explore(spec, max_states=args.max_states, max_depth=args.max_depth)
    except SpecError as exc:
        _print_diagnostics(exc.diagnostics)
        return EXIT_FINDINGS
    if args.format == "json":
        print(json.dumps(_exploration_json(spec, report), indent=2))
    else:
        print(f"reachable states: {report.reachable}")
        print(f"frontier depth: {report.depth}")
        if report.limit:
            print(f"limit exceeded: {report.limit}")
        if not report.violations:
            print("no invariant violations")
        for name, trace in report.violations:
            print(f"invariant '{name}' violated at depth {trace.violation[1]}")
            print("shortest counterexample:")
            print(_trace_text(spec, trace))
    if report.limit:
        return EXIT_LIMIT
    if report.violations:
        return EXIT_FINDINGS
    return EXIT_OK


# ---------------------------------------------------------------------------
# gen


def cmd_gen(args: argparse.Namespace) -> int:
    spec, diags, usage = _load_spec(args.spec)
    if usage:
        print(usage, file=sys.stderr)
        return EXIT_USAGE
    if spec is None:
        _print_diagnostics(diags)
        return EXIT_FINDINGS
    gate = _gate_on_analysis(spec, args.cap, args.force)
    if gate:
        _print_diagnostics(gate)
        print("static checks failed; rerun with --force to generate anyway", file=sys.stderr)
        return EXIT_FINDINGS
    try:
        if args.mode == "chain":
            result = gen_chain(spec, closed=args.closed)
        else:
            result = gen_flat(spec, closed=args.closed)
    except SpecError as exc:
        _print_diagnostics(exc.diagnostics)
        return EXIT_FINDINGS
    outdir = Path(args.out)
    written: list[Path] = []
    try:
        outdir.mkdir(parents=True, exist_ok=True)
        ctx_path = outdir / f"{spec.name}_ctx.ebc"
        ctx_path.write_text(render(result.context, ascii_mode=args.ascii), encoding="utf-8")
        written.append(ctx_path)
        if args.mode == "chain":
            for machine in result.machines:
                path = outdir / f"{machine.name}.ebm"
                path.write_text(render(machine, ascii_mode=args.ascii), encoding="utf-8")
                written.append(path)
        else:
            path = outdir / f"{spec.name}_mch.ebm"
            path.write_text(render(result.machine, ascii_mode=args.ascii), encoding="utf-8")
            written.append(path)
    except OSError as exc:
        print(f"cannot write output: {exc}", file=sys.stderr)
        return EXIT_FINDINGS
    for path in written:
        print(path.as_posix())
    return EXIT_OK


# ---------------------------------------------------------------------------
# trace


def _trace_report_text(report: TraceReport) -> str:
    lines: list[str] = []
    header = ("requirement", "pf-blocks", "rsml", "eventb")
    rows = [header] + [
        (row.requirement, str(len(row.pf_blocks)), str(len(row.rsml)), str(len(row.eventb)))
        for row in report.rows
    ]
    widths = [max(len(r[col]) for r in rows) for col in range(4)]
    for r in rows:
        lines.append("  ".join(cell.ljust(widths[col]) for col, cell in enumerate(r)).rstrip())
    for row in report.rows:
        lines.append(f"{row.requirement}:")
        lines.append(f"  pf: {'; '.join(row.pf_blocks) or '-'}")
        lines.append(f"  rsml: {'; '.join(row.rsml) or '-'}")
        lines.append(f"  eventb: {'; '.join(row.eventb) or '-'}")
    counts: dict[str, int] = {}
    for edge in report.edges:
        counts[edge.kind] = counts.get(edge.kind, 0) + 1
    summary = ", ".join(f"{counts.get(k, 0)} {k}" for k in ("declared", "name-match", "provenance"))
    lines.append(f"edges: {summary}")
    lines.append(_TRACE_FOOTER)
    return "\n".join(lines)


_TRACE_FOOTER = (
    "note: sub-problem recombination/prioritization is not analysed; "
    "rows cover linkage only"
)


def _trace_report_json(report: TraceReport) -> dict:
    return {
        "note": _TRACE_FOOTER,
        "rows": [
            {
                "requirement": row.requirement,
                "pf_blocks": row.pf_blocks,
                "rsml": row.rsml,
                "eventb": row.eventb,
            }
            for row in report.rows
        ],
        "edges": [
            {
                "kind": e.kind,
                "source": {"kind": e.source[0], "id": e.source[1]},
                "target": {"kind": e.target[0], "id": e.target[1]},
            }
            for e in report.edges
        ],
        "warnings": [w.to_json() for w in report.warnings],
    }


def cmd_trace(args: argparse.Namespace) -> int:
    loader = _Loader()
    loader.load([args.spec, args.pf, args.req])
    if loader.usage_error:
        print(loader.usage_error, file=sys.stderr)
        return EXIT_USAGE
    if loader.diagnostics:
        _print_diagnostics(loader.diagnostics)
        return EXIT_FINDINGS
    diags: list[Diagnostic] = []
    for diagram in loader.diagrams:
        diags.extend(check_pf(diagram))
    spec = loader.specs[0] if loader.specs else None
    generated: GenResult | None = None
    if spec is not None:
        try:
            generated = gen_flat(spec)
        except SpecError as exc:
            diags.extend(exc.diagnostics)
    try:
        graph = link(loader.requirements, loader.diagrams, spec, generated)
    except SpecError as exc:
        _print_diagnostics(diags + exc.diagnostics)
        return EXIT_FINDINGS
    report = trace_report(graph, require_trace=args.require_trace)
    diags.extend(report.warnings)
    if args.format == "json":
        payload = _trace_report_json(report)
        payload["diagnostics"] = [d.to_json() for d in diags]
        print(json.dumps(payload, indent=2))
    else:
        _print_diagnostics(diags)
        print(_trace_report_text(report))
    if any(d.severity == "error" for d in diags):
        return EXIT_FINDINGS
    if args.require_trace and any(d.code == "UntracedElement" for d in report.warnings):
        return EXIT_FINDINGS
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point


def _positive_int(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rsmlkit",
        description="Check, simulate, explore, translate and trace RSML-style "
        "tabular specifications.",
    )
    parser.add_argument("--version", action="version", version=f"rsmlkit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="parse, resolve and statically analyse")
    p_check.add_argument("paths", nargs="+", help=".rsml/.pf/.req files")
    p_check.add_argument("--cap", type=_positive_int, default=DEFAULT_CAP, help="enumeration cap")
    p_check.add_argument("--warnings-as-errors", action="store_true")
    p_check.add_argument("--format", choices=["text", "json"], default="text")
    p_check.set_defaults(func=cmd_check)

    p_sim = sub.add_parser("simulate", help="run an input script")
    p_sim.add_argument("spec", help=".rsml file")
    p_sim.add_argument("script", help="script file: name=value pairs per step")
    p_sim.add_argument("--cap", type=_positive_int, default=DEFAULT_CAP)
    p_sim.add_argument("--format", choices=["text", "json"], default="text")
    p_sim.add_argument("--keep-going", action="store_true", help="continue past violations")
    p_sim.add_argument("--force", action="store_true", help="skip the static-check gate")
    p_sim.set_defaults(func=cmd_simulate)

    p_exp = sub.add_parser("explore", help="exhaustive bounded state-space search")
    p_exp.add_argument("spec", help=".rsml file")
    p_exp.add_argument("--max-states", type=_positive_int, default=100_000)
    p_exp.add_argument("--max-depth", type=_positive_int, default=1_000)
    p_exp.add_argument("--format", choices=["text", "json"], default="text")
    p_exp.set_defaults(func=cmd_explore)

    p_gen = sub.add_parser("gen", help="generate textual Event-B")
    p_gen.add_argument("spec", help=".rsml file")
    p_gen.add_argument("-o", "--out", required=True, help="output directory")
    p_gen.add_argument("--mode", choices=["flat", "chain"], default="flat")
    p_gen.add_argument("--ascii", action="store_true", help="ASCII operator spellings")
    p_gen.add_argument("--closed", action="store_true", help="omit environment events")
    p_gen.add_argument("--cap", type=_positive_int, default=DEFAULT_CAP)
    p_gen.add_argument("--force", action="store_true", help="skip the static-check gate")
    p_gen.set_defaults(func=cmd_gen)

    p_trace = sub.add_parser("trace", help="traceability matrix")
    p_trace.add_argument("spec", help=".rsml file")
    p_trace.add_argument("pf", help=".pf file")
    p_trace.add_argument("req", help=".req file")
    p_trace.add_argument("--require-trace", action="store_true")
    p_trace.add_argument("--format", choices=["text", "json"], default="text")
    p_trace.set_defaults(func=cmd_trace)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
