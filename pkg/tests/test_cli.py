"""End-to-end CLI behaviour through real subprocesses.

Everything here shells out to ``python -m pred`` so argument parsing, stream
handling, JSON wire formats, and exit codes are all exercised exactly as a
user would hit them.
"""

from __future__ import annotations

import json
import subprocess
import sys

import pytest

from pred import build_examples, default_graph, evaluate, instance_from_document

GRAPH = default_graph()
REGISTRY = GRAPH.registry
EXAMPLES = build_examples(REGISTRY)

LISTING_GRAPH = "0-1,1-2,2-3"


def run_cli(*args: str, stdin: str | None = None):
    return subprocess.run(
        [sys.executable, "-m", "pred", *args],
        input=stdin,
        capture_output=True,
        text=True,
    )


def pipeline(*stages: list[str], stdin: str | None = None):
    """Chain stages stdin->stdout like a shell pipeline; return the last result."""
    current = stdin
    result = None
    for stage in stages:
        result = run_cli(*stage, stdin=current)
        assert result.returncode == 0, result.stderr
        current = result.stdout
    return result


def test_create_emits_single_line_sorted_json():
    result = run_cli("create", "MIS", "--graph", LISTING_GRAPH)
    assert result.returncode == 0
    assert result.stdout.count("\n") == 1
    document = json.loads(result.stdout)
    assert document == {
        "problem": "MaximumIndependentSet",
        "variant": {"graph": "simple", "weight": "unit"},
        "data": {"num_vertices": 4, "edges": [[0, 1], [1, 2], [2, 3]]},
    }
    assert result.stdout.strip() == json.dumps(document, sort_keys=True)


def test_full_pipeline_pretty_output():
    result = pipeline(
        ["create", "MIS", "--graph", LISTING_GRAPH],
        ["reduce", "-", "--to", "ILP"],
        ["solve", "-", "--pretty"],
    )
    assert result.stdout == (
        'Problem: "MaximumIndependentSet"\n'
        "Solver: ilp (via ILP)\n"
        "Solution: [0, 1, 0, 1]\n"
        'Evaluation: "Max(2)"\n'
    )


def test_solve_json_document_shape():
    result = pipeline(
        ["create", "MIS", "--graph", LISTING_GRAPH],
        ["reduce", "-", "--to", "ILP"],
        ["solve", "-"],
    )
    document = json.loads(result.stdout)
    assert document == {
        "problem": "MaximumIndependentSet",
        "solver": "ilp (via ILP)",
        "solution": [0, 1, 0, 1],
        "evaluation": "Max(2)",
        "value": {"kind": "Max", "payload": 2},
    }


def test_envelope_document_shape():
    result = pipeline(
        ["create", "MIS", "--graph", LISTING_GRAPH],
        ["reduce", "-", "--to", "ILP"],
    )
    envelope = json.loads(result.stdout)
    assert envelope["kind"] == "envelope"
    assert envelope["trace_version"] == 1
    assert envelope["path"] == ["MaximumIndependentSet->IntegerLinearProgram"]
    assert envelope["source"]["problem"] == "MaximumIndependentSet"
    assert envelope["target"]["problem"] == "IntegerLinearProgram"
    assert len(envelope["trace"]) == 1


def test_reduce_envelope_extends_the_path():
    result = pipeline(
        ["create", "MaxCut", "--graph", "0-1,1-2,0-2"],
        ["reduce", "-", "--to", "QUBO"],
        ["reduce", "-", "--to", "ILP"],
    )
    envelope = json.loads(result.stdout)
    assert envelope["path"] == [
        "MaxCut->QUBO",
        "QUBO->IntegerLinearProgram",
    ]
    assert envelope["source"]["problem"] == "MaxCut"
    solved = run_cli("solve", "-", "--pretty", stdin=result.stdout)
    assert solved.returncode == 0
    lines = solved.stdout.splitlines()
    assert lines[0] == 'Problem: "MaxCut"'
    assert lines[1] == "Solver: ilp (via QUBO -> ILP)"
    assert lines[3] == 'Evaluation: "Max(2)"'


def test_reduce_path_flag_reports_route_on_stderr():
    created = run_cli("create", "3SAT", "--clauses", "1,2,3;-1,2,-3")
    result = run_cli("reduce", "-", "--to", "ILP", "--path", stdin=created.stdout)
    assert result.returncode == 0
    assert result.stderr.splitlines() == [
        "route: 2 step(s)",
        "  ThreeSatisfiability->MaximumIndependentSet  {V: L, E: L^2}",
        "  MaximumIndependentSet->IntegerLinearProgram  {n: V, c: E}",
        "composite: {n: L, c: L^2}",
        "estimated cost: 2^L",
    ]
    json.loads(result.stdout)


def test_solve_instance_directly():
    created = run_cli("create", "ILP", "--example")
    result = run_cli("solve", "-", stdin=created.stdout)
    document = json.loads(result.stdout)
    assert document["solver"] == "ilp"
    assert document["evaluation"] == "Extremum(2)"


def test_exit_2_on_invalid_graph():
    result = run_cli("create", "MIS", "--graph", "0-0")
    assert result.returncode == 2
    assert result.stderr.startswith("pred: ")
    assert "self-loop" in result.stderr


def test_exit_2_on_unknown_problem():
    result = run_cli("create", "Sudoku", "--graph", "0-1")
    assert result.returncode == 2


def test_exit_2_on_bad_json():
    result = run_cli("solve", "-", stdin="this is not json\n")
    assert result.returncode == 2


def test_exit_2_on_missing_required_data():
    # QUBO has no flag syntax; it needs --example or --file
    result = run_cli("create", "QUBO")
    assert result.returncode == 2


def test_exit_3_when_no_reduction_path():
    created = run_cli("create", "ILP", "--example")
    result = run_cli("reduce", "-", "--to", "MIS", stdin=created.stdout)
    assert result.returncode == 3
    assert "IntegerLinearProgram" in result.stderr
    assert "MaximumIndependentSet" in result.stderr


def test_exit_3_when_only_aggregate_path_exists():
    created = run_cli("create", "MIS", "--graph", LISTING_GRAPH)
    result = run_cli("reduce", "-", "--to", "QUBO", stdin=created.stdout)
    assert result.returncode == 3


def test_exit_4_on_node_budget():
    created = run_cli("create", "Clique", "--graph", "0-1,1-2,0-2,2-3")
    reduced = run_cli("reduce", "-", "--to", "ILP", stdin=created.stdout)
    result = run_cli("solve", "-", "--max-nodes", "2", stdin=reduced.stdout)
    assert result.returncode == 4
    assert "branch-and-bound exceeded 2 nodes" in result.stderr


def test_exit_5_on_infeasible_program(tmp_path):
    document = {
        "problem": "IntegerLinearProgram",
        "variant": {},
        "data": {
            "num_vars": 1,
            "bounds": [[0, 1]],
            "constraints": [{"coeffs": [1], "rel": ">=", "rhs": 2}],
            "objective": [1],
            "sense": "max",
        },
    }
    path = tmp_path / "infeasible.json"
    path.write_text(json.dumps(document))
    result = run_cli("solve", str(path))
    assert result.returncode == 5
    assert "empty feasible region" in result.stderr


def test_envelope_tamper_detected():
    envelope_json = pipeline(
        ["create", "MIS", "--graph", LISTING_GRAPH],
        ["reduce", "-", "--to", "ILP"],
    ).stdout
    envelope = json.loads(envelope_json)

    bumped = dict(envelope, trace_version=2)
    assert run_cli("solve", "-", stdin=json.dumps(bumped)).returncode == 2

    # corrupt the stored target instance
    broken_target = json.loads(json.dumps(envelope))
    broken_target["target"]["data"]["objective"][0] = 99
    assert run_cli("solve", "-", stdin=json.dumps(broken_target)).returncode == 2

    # corrupt the per-step extraction trace
    broken_trace = json.loads(json.dumps(envelope))
    broken_trace["trace"][0] = {"tampered": True}
    assert run_cli("solve", "-", stdin=json.dumps(broken_trace)).returncode == 2

    # drop a required field
    missing = {k: v for k, v in envelope.items() if k != "trace"}
    assert run_cli("solve", "-", stdin=json.dumps(missing)).returncode == 2


def test_evaluate_golden_lines():
    created = run_cli("create", "MIS", "--graph", LISTING_GRAPH).stdout
    good = run_cli("evaluate", "-", "--config", "0,1,0,1", stdin=created)
    assert good.stdout == "Max(2) feasible\n"
    clash = run_cli("evaluate", "-", "--config", "1,1,0,0", stdin=created)
    assert clash.stdout == "Max(2) infeasible\n"
    empty = run_cli("evaluate", "-", "--config", "0,0,0,0", stdin=created)
    assert empty.stdout == "Max(0) feasible\n"


def test_evaluate_rejects_wrong_length():
    created = run_cli("create", "MIS", "--graph", LISTING_GRAPH).stdout
    result = run_cli("evaluate", "-", "--config", "0,1", stdin=created)
    assert result.returncode == 2


def test_path_command_golden():
    result = run_cli("path", "3SAT", "ILP")
    assert result.returncode == 0
    assert result.stdout.splitlines() == [
        "ThreeSatisfiability->MaximumIndependentSet  {V: L, E: L^2}",
        "MaximumIndependentSet->IntegerLinearProgram  {n: V, c: E}",
        "composite: {n: L, c: L^2}",
        "estimated cost: 2^L",
    ]


def test_path_command_identity():
    result = run_cli("path", "MIS", "MIS")
    assert result.stdout.splitlines() == [
        "identity (source equals target; no reduction applied)",
        "composite: {V: V, E: E}",
        "estimated cost: 1.1996^V",
    ]


def test_path_command_exit_3():
    result = run_cli("path", "ILP", "SAT")
    assert result.returncode == 3


def test_show_command():
    result = run_cli("show", "MIS")
    lines = result.stdout.splitlines()
    assert lines[0] == "MaximumIndependentSet"
    assert "  kind: Max" in lines
    assert "  size measures: V, E" in lines
    assert "  complexity: 1.1996^V" in lines
    assert "  solver tier: via_ilp" in lines
    assert any(line.startswith("  example: mis-path4") for line in lines)


def test_show_weighted_variant_tags():
    result = run_cli("show", "MaximumIndependentSet[weight=integer]")
    lines = result.stdout.splitlines()
    assert lines[0] == "MaximumIndependentSet[weight=integer]"
    assert any("variant:" in line and "weight=integer" in line for line in lines)


def test_list_command():
    result = run_cli("list")
    lines = result.stdout.splitlines()
    assert len(lines) == 15
    assert any(line.startswith("MaximumIndependentSet ") for line in lines)
    assert any(line.startswith("QUBO ") for line in lines)


def test_list_stats_appends_topology_report():
    result = run_cli("list", "--stats")
    lines = result.stdout.splitlines()
    assert len(lines) == 16
    report = json.loads(lines[-1])
    assert len(report["reachable_to_ilp"]) == 13
    assert len(report["reachable_from_3sat"]) == 7
    assert report["isolated"] == ["DecisionMinimumVertexCover"]


def test_create_example_for_every_canonical_entry():
    for example in EXAMPLES.values():
        name = REGISTRY.display_name(example.instance.variant_key())
        result = run_cli("create", name, "--example")
        assert result.returncode == 0, (name, result.stderr)
        document = json.loads(result.stdout)
        instance = instance_from_document(document, REGISTRY)
        assert instance == example.instance


def test_create_from_file_round_trip(tmp_path):
    created = run_cli("create", "VC", "--graph", LISTING_GRAPH).stdout
    path = tmp_path / "vc.json"
    path.write_text(created)
    result = run_cli("create", "VC", "--file", str(path))
    assert result.returncode == 0
    assert result.stdout == created


def test_create_from_file_type_mismatch(tmp_path):
    created = run_cli("create", "VC", "--graph", LISTING_GRAPH).stdout
    path = tmp_path / "vc.json"
    path.write_text(created)
    result = run_cli("create", "MIS", "--file", str(path))
    assert result.returncode == 2


def test_missing_input_file_is_exit_2():
    result = run_cli("solve", "/nonexistent/input.json")
    assert result.returncode == 2


def _witness_targets(source_key):
    targets = []
    for descriptor in REGISTRY.variants():
        if descriptor.key == source_key:
            continue
        path = GRAPH.find_path(source_key, descriptor.key, require_witness=True)
        if path is not None and path.steps:
            targets.append(descriptor.key)
    return targets


def test_pipe_composability_across_examples():
    """create --example | reduce --to T | solve must reproduce the known value
    for every canonical example and every witness-reachable target."""
    checked = 0
    for example in sorted(EXAMPLES.values(), key=lambda e: e.id):
        source_key = example.instance.variant_key()
        source_name = REGISTRY.display_name(source_key)
        for target_key in _witness_targets(source_key):
            target_name = REGISTRY.display_name(target_key)
            result = pipeline(
                ["create", source_name, "--example"],
                ["reduce", "-", "--to", target_name],
                ["solve", "-"],
            )
            document = json.loads(result.stdout)
            assert document["problem"] == source_name, (example.id, target_name)
            witness = document["solution"]
            value = evaluate(example.instance, tuple(witness))
            assert value.feasible, (example.id, target_name)
            assert value.payload == example.known_value.payload, (
                example.id,
                target_name,
            )
            checked += 1
    assert checked > 30


def test_byte_identical_reruns():
    for args, stdin in [
        (["create", "MIS", "--graph", LISTING_GRAPH], None),
        (["list", "--stats"], None),
        (["path", "SAT", "ILP"], None),
    ]:
        first = run_cli(*args, stdin=stdin)
        second = run_cli(*args, stdin=stdin)
        assert first.stdout == second.stdout
        assert first.stderr == second.stderr

    chain = [
        ["create", "Clique", "--graph", "0-1,1-2,0-2,2-3"],
        ["reduce", "-", "--to", "ILP"],
        ["solve", "-"],
    ]
    assert pipeline(*chain).stdout == pipeline(*chain).stdout
