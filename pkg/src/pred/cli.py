"""The ``pred`` command line: a JSON-over-pipes reduction workbench.

``create`` emits an instance document, ``reduce`` carries it along a
reduction path inside an envelope document, and ``solve`` solves the
envelope's target and maps the witness back to the source. ``path``,
``show``, ``list``, and ``evaluate`` are inspection commands. All machine
output goes to stdout as JSON (one document per stream); diagnostics and the
optional ``--pretty`` rendering go to stdout as plain lines only where
documented, and errors go to stderr.

Exit codes: 0 ok, 2 bad input, 3 no reduction path, 4 budget exhausted,
5 infeasible program.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Mapping

from .canonical import build_examples, get_example
from .errors import (
    BudgetExceededError,
    DocumentError,
    InfeasibleError,
    NoPathError,
    PredError,
)
from .graph import (
    ReductionEnvelope,
    ReductionGraph,
    default_graph,
    extract_along,
    reduce_along,
)
from .model import (
    DEFAULT_CONFIG_BUDGET,
    DecisionProblem,
    Problem,
    ValueKind,
    evaluate,
)
from .problems import (
    CnfData,
    Clique,
    DominatingSet,
    GraphColoring,
    GraphData,
    IndependentSet,
    MaxCut,
    Satisfiability,
    ThreeSatisfiability,
    VertexCover,
    instance_from_document,
    instance_to_document,
)
from .solvers import DEFAULT_NODE_BUDGET, solve, solver_label
from .symbolic import render, render_overhead

TRACE_VERSION = 1


# --- plumbing ---------------------------------------------------------------

def _read_text(source: str) -> str:
    if source == "-":
        return sys.stdin.read()
    try:
        return Path(source).read_text(encoding="utf-8")
    except OSError as exc:
        raise DocumentError(f"cannot read {source}: {exc}") from exc


def _load_document(source: str) -> dict:
    text = _read_text(source)
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON input: {exc}") from exc
    if not isinstance(document, dict):
        raise DocumentError("top-level JSON document must be an object")
    return document


def _emit(document: Mapping) -> None:
    print(json.dumps(document, sort_keys=True))


def envelope_to_document(envelope: ReductionEnvelope) -> dict:
    return {
        "kind": "envelope",
        "trace_version": TRACE_VERSION,
        "source": instance_to_document(envelope.source_instance),
        "path": list(envelope.path.rule_names()),
        "target": instance_to_document(envelope.target_instance),
        "trace": [outcome.extraction for outcome in envelope.stack],
    }


def envelope_from_document(document: Mapping, graph: ReductionGraph) -> ReductionEnvelope:
    """Rebuild an envelope by replaying its path; reject stale or doctored traces."""
    expected = {"kind", "trace_version", "source", "path", "target", "trace"}
    if set(document) != expected:
        raise DocumentError(
            f"envelope must have exactly the fields {sorted(expected)}"
        )
    if document["trace_version"] != TRACE_VERSION:
        raise DocumentError(
            f"unsupported trace version {document['trace_version']!r} "
            f"(this build reads version {TRACE_VERSION})"
        )
    if len(document["trace"]) != len(document["path"]):
        raise DocumentError("trace length does not match path length")
    source = instance_from_document(document["source"], graph.registry)
    steps = []
    for name in document["path"]:
        rule = graph.rule_named(name)
        if rule is None:
            raise DocumentError(f"unknown reduction rule {name!r}")
        steps.append(rule)
    path = graph.make_path(source.variant_key(), tuple(steps))
    envelope = reduce_along(path, source)
    for index, (stored, outcome) in enumerate(zip(document["trace"], envelope.stack)):
        if stored != outcome.extraction:
            raise DocumentError(f"trace step {index} does not match the replayed reduction")
    if instance_to_document(envelope.target_instance) != document["target"]:
        raise DocumentError("envelope target does not match the replayed reduction")
    return envelope


# --- create ------------------------------------------------------------------

def _parse_edges(text: str) -> list[tuple[int, int]]:
    edges = []
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        left, sep, right = token.partition("-")
        if not sep:
            raise DocumentError(f"malformed edge {token!r}; expected u-v")
        try:
            edges.append((int(left), int(right)))
        except ValueError as exc:
            raise DocumentError(f"malformed edge {token!r}; expected u-v") from exc
    return edges


def _parse_ints(text: str, what: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError as exc:
        raise DocumentError(f"malformed {what} {text!r}; expected comma-separated integers") from exc


def _parse_clauses(text: str) -> tuple[tuple[int, ...], ...]:
    clauses = []
    for part in text.split(";"):
        part = part.strip()
        if part:
            clauses.append(_parse_ints(part, "clause"))
    if not clauses:
        raise DocumentError("no clauses given")
    return tuple(clauses)


def _graph_from_flags(args) -> GraphData:
    if args.graph is None and args.vertices is None:
        raise DocumentError("need --graph (and/or --vertices) to build a graph instance")
    edges = _parse_edges(args.graph) if args.graph else []
    if args.vertices is not None:
        num_vertices = args.vertices
    elif edges:
        num_vertices = max(max(u, v) for u, v in edges) + 1
    else:
        raise DocumentError("empty edge list; pass --vertices for an edgeless graph")
    weights = _parse_ints(args.weights, "weight list") if args.weights else None
    return GraphData(num_vertices, tuple(edges), weights)


def _cnf_from_flags(args) -> CnfData:
    if args.clauses is None:
        raise DocumentError("need --clauses, e.g. --clauses '1,2,3;-1,2'")
    clauses = _parse_clauses(args.clauses)
    widest = max(abs(lit) for clause in clauses for lit in clause)
    num_variables = args.variables if args.variables is not None else widest
    return CnfData(num_variables, clauses)


def _require_bound(args) -> int:
    if args.bound is None:
        raise DocumentError("decision problems need --bound")
    return args.bound


def _instance_from_flags(name: str, args) -> Problem:
    if name == "MaximumIndependentSet":
        return IndependentSet(_graph_from_flags(args))
    if name == "MinimumVertexCover":
        return VertexCover(_graph_from_flags(args))
    if name == "MaximumClique":
        return Clique(_graph_from_flags(args))
    if name == "MinimumDominatingSet":
        return DominatingSet(_graph_from_flags(args))
    if name == "MaxCut":
        return MaxCut(_graph_from_flags(args))
    if name == "GraphColoring":
        if args.colors is None:
            raise DocumentError("GraphColoring needs --colors")
        return GraphColoring(_graph_from_flags(args), args.colors)
    if name == "DecisionMaximumIndependentSet":
        bound = _require_bound(args)
        return DecisionProblem(IndependentSet(_graph_from_flags(args)), bound)
    if name == "DecisionMinimumVertexCover":
        bound = _require_bound(args)
        return DecisionProblem(VertexCover(_graph_from_flags(args)), bound)
    if name == "Satisfiability":
        return Satisfiability(_cnf_from_flags(args))
    if name == "ThreeSatisfiability":
        return ThreeSatisfiability(_cnf_from_flags(args))
    raise DocumentError(f"{name} instances need --example or --file (no data flags)")


def cmd_create(args) -> None:
    graph = default_graph()
    registry = graph.registry
    descriptor = registry.lookup(args.problem)
    if args.example:
        example = get_example(args.problem, registry, build_examples(registry))
        instance = example.instance
    elif args.file:
        instance = instance_from_document(_load_document(args.file), registry)
        if instance.type_name != descriptor.name:
            raise DocumentError(
                f"--file holds a {instance.type_name}, but {descriptor.name} was requested"
            )
    else:
        instance = _instance_from_flags(descriptor.name, args)
    _emit(instance_to_document(instance))


# --- reduce ------------------------------------------------------------------

def _print_route(path) -> None:
    print(f"route: {len(path.steps)} step(s)", file=sys.stderr)
    for rule in path.steps:
        print(f"  {rule.name}  {render_overhead(rule.overhead)}", file=sys.stderr)
    print(f"composite: {render_overhead(path.composite_overhead)}", file=sys.stderr)
    print(f"estimated cost: {render(path.estimated_cost)}", file=sys.stderr)


def cmd_reduce(args) -> None:
    graph = default_graph()
    registry = graph.registry
    document = _load_document(args.input)
    if document.get("kind") == "envelope":
        prior = envelope_from_document(document, graph)
        source = prior.source_instance
        current = prior.target_instance
        prefix_steps = prior.path.steps
        prefix_stack = prior.stack
    else:
        source = instance_from_document(document, registry)
        current = source
        prefix_steps = ()
        prefix_stack = ()
    target = registry.lookup(args.to)
    segment = graph.find_path(current.variant_key(), target.key)
    if segment is None:
        raise NoPathError(
            f"no witness-capable reduction path from "
            f"{registry.display_name(current.variant_key())} to "
            f"{registry.display_name(target.key)}"
        )
    reduced = reduce_along(segment, current)
    full_path = graph.make_path(source.variant_key(), prefix_steps + segment.steps)
    envelope = ReductionEnvelope(
        source, full_path, reduced.target_instance, prefix_stack + reduced.stack
    )
    if args.show_path:
        _print_route(segment)
    _emit(envelope_to_document(envelope))


# --- solve -------------------------------------------------------------------

def _solution_document(problem_name: str, solver: str, value, witness) -> dict:
    return {
        "problem": problem_name,
        "solver": solver,
        "solution": list(witness) if witness is not None else None,
        "evaluation": value.render(),
        "value": {"kind": value.kind.value, "payload": value.payload},
    }


def _print_solution(document: Mapping, pretty: bool) -> None:
    if not pretty:
        _emit(document)
        return
    print(f'Problem: "{document["problem"]}"')
    print(f"Solver: {document['solver']}")
    print(f"Solution: {json.dumps(document['solution'])}")
    print(f'Evaluation: "{document["evaluation"]}"')


def _reject_infeasible(value) -> None:
    if value.kind is ValueKind.EXTREMUM and not value.feasible:
        raise InfeasibleError("the integer program has an empty feasible region")


def cmd_solve(args) -> None:
    graph = default_graph()
    registry = graph.registry
    document = _load_document(args.input)
    budgets = {"max_configs": args.max_configs, "max_nodes": args.max_nodes}
    if document.get("kind") == "envelope":
        envelope = envelope_from_document(document, graph)
        source = envelope.source_instance
        result = solve(envelope.target_instance, **budgets)
        _reject_infeasible(result.value)
        if result.witness is None:
            # only satisfiability-style targets solve without a witness
            value = result.value
            witness = None
        else:
            config = extract_along(envelope, result.witness)
            value = evaluate(source, config)
            witness = None if value.kind is ValueKind.OR and not value.payload else config
        solver = solver_label(result, prefix_steps=envelope.path.steps)
        problem_name = registry.display_name(source.variant_key())
    else:
        instance = instance_from_document(document, registry)
        result = solve(instance, **budgets)
        _reject_infeasible(result.value)
        value = result.value
        witness = result.witness
        solver = solver_label(result)
        problem_name = registry.display_name(instance.variant_key())
    _print_solution(_solution_document(problem_name, solver, value, witness), args.pretty)


# --- inspection --------------------------------------------------------------

def cmd_path(args) -> None:
    graph = default_graph()
    registry = graph.registry
    source = registry.lookup(args.source)
    target = registry.lookup(args.target)
    path = graph.find_path(source.key, target.key, require_witness=False)
    if path is None:
        raise NoPathError(
            f"no reduction path from {registry.display_name(source.key)} "
            f"to {registry.display_name(target.key)}"
        )
    if path.steps:
        for rule in path.steps:
            print(f"{rule.name}  {render_overhead(rule.overhead)}")
    else:
        print("identity (source equals target; no reduction applied)")
    print(f"composite: {render_overhead(path.composite_overhead)}")
    print(f"estimated cost: {render(path.estimated_cost)}")


def cmd_show(args) -> None:
    graph = default_graph()
    registry = graph.registry
    descriptor = registry.lookup(args.problem)
    key = descriptor.key
    print(registry.display_name(key))
    if descriptor.variant_tags:
        tags = ", ".join(f"{k}={v}" for k, v in descriptor.variant_tags)
        print(f"  variant: {tags}")
    print(f"  kind: {descriptor.kind.value}")
    print(f"  size measures: {', '.join(descriptor.size_measure_names)}")
    print(f"  complexity: {render(descriptor.complexity)}")
    print(f"  solver tier: {descriptor.solve_capability.value}")
    incoming = graph.incoming(key)
    outgoing = graph.outgoing(key)
    print(f"  incoming rules: {', '.join(r.name for r in incoming) if incoming else '(none)'}")
    print(f"  outgoing rules: {', '.join(r.name for r in outgoing) if outgoing else '(none)'}")
    try:
        example = get_example(args.problem, registry, build_examples(registry))
    except PredError:
        print("  example: (none)")
    else:
        print(
            f"  example: {example.id} "
            f"(known value {example.known_value.render()}) - {example.narrative}"
        )


def cmd_list(args) -> None:
    graph = default_graph()
    registry = graph.registry
    for descriptor in registry.variants():
        name = registry.display_name(descriptor.key)
        print(f"{name:<40} {descriptor.kind.value:<10} {render(descriptor.complexity)}")
    if args.stats:
        print(json.dumps(graph.topology_report(), sort_keys=True))


def cmd_evaluate(args) -> None:
    graph = default_graph()
    instance = instance_from_document(_load_document(args.input), graph.registry)
    config = _parse_ints(args.config, "configuration")
    value = evaluate(instance, config)
    print(f"{value.render()} {'feasible' if value.feasible else 'infeasible'}")


# --- entry point ---------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pred",
        description="Reduction workbench: create, reduce, and solve hard-problem instances.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_create = sub.add_parser("create", help="emit an instance document as JSON")
    p_create.add_argument("problem", help="problem name or alias (MIS, VC, 3SAT, ILP, ...)")
    p_create.add_argument("--graph", help="edge list like 0-1,1-2,2-3")
    p_create.add_argument("--vertices", type=int, help="vertex count (default: max index + 1)")
    p_create.add_argument("--weights", help="comma-separated positive vertex weights")
    p_create.add_argument("--clauses", help="clause list like '1,2,3;-1,2'")
    p_create.add_argument("--variables", type=int, help="variable count (default: widest literal)")
    p_create.add_argument("--colors", type=int, help="color count for GraphColoring")
    p_create.add_argument("--bound", type=int, help="threshold for decision problems")
    p_create.add_argument("--example", action="store_true", help="emit the canonical example")
    p_create.add_argument("--file", help="read an instance document from a JSON file")
    p_create.set_defaults(handler=cmd_create)

    p_reduce = sub.add_parser("reduce", help="reduce an instance or envelope to a target type")
    p_reduce.add_argument("input", help="instance/envelope document path, or - for stdin")
    p_reduce.add_argument("--to", required=True, help="target problem name or alias")
    p_reduce.add_argument(
        "--path", dest="show_path", action="store_true",
        help="print the chosen route and overheads to stderr",
    )
    p_reduce.set_defaults(handler=cmd_reduce)

    p_solve = sub.add_parser("solve", help="solve an instance or envelope")
    p_solve.add_argument("input", help="instance/envelope document path, or - for stdin")
    p_solve.add_argument("--pretty", action="store_true", help="print display lines, not JSON")
    p_solve.add_argument(
        "--max-configs", type=int, default=DEFAULT_CONFIG_BUDGET,
        help="brute-force configuration budget",
    )
    p_solve.add_argument(
        "--max-nodes", type=int, default=DEFAULT_NODE_BUDGET,
        help="branch-and-bound node budget",
    )
    p_solve.set_defaults(handler=cmd_solve)

    p_path = sub.add_parser("path", help="print the cheapest reduction route between two types")
    p_path.add_argument("source")
    p_path.add_argument("target")
    p_path.set_defaults(handler=cmd_path)

    p_show = sub.add_parser("show", help="describe one problem type")
    p_show.add_argument("problem")
    p_show.set_defaults(handler=cmd_show)

    p_list = sub.add_parser("list", help="list all registered problem variants")
    p_list.add_argument("--stats", action="store_true", help="append the topology report JSON")
    p_list.set_defaults(handler=cmd_list)

    p_eval = sub.add_parser("evaluate", help="score a configuration against an instance")
    p_eval.add_argument("input", help="instance document path, or - for stdin")
    p_eval.add_argument("--config", required=True, help="comma-separated configuration values")
    p_eval.set_defaults(handler=cmd_evaluate)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        args.handler(args)
    except BudgetExceededError as exc:
        print(f"pred: {exc}", file=sys.stderr)
        return 4
    except InfeasibleError as exc:
        print(f"pred: {exc}", file=sys.stderr)
        return 5
    except NoPathError as exc:
        print(f"pred: {exc}", file=sys.stderr)
        return 3
    except (PredError, ValueError) as exc:
        print(f"pred: {exc}", file=sys.stderr)
        return 2
    return 0
