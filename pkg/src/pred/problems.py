"""Concrete problem types and the shipped catalogue.

Instance data lives in small frozen dataclasses with eager validation;
each problem class implements the uniform interface from ``model``. The
catalogue registers every shipped variant with its size measures and the
best known (or naive enumeration) complexity bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .errors import DocumentError, InvalidInstanceError
from .model import (
    AggregatedValue,
    DecisionProblem,
    Problem,
    ProblemTypeDescriptor,
    Registry,
    SENSE_MAXIMIZE,
    SENSE_MINIMIZE,
    SolveCapability,
    ValueKind,
)
from .symbolic import parse_expr

Edge = tuple[int, int]


# --- instance data ----------------------------------------------------------

@dataclass(frozen=True)
class GraphData:
    """Simple undirected graph; optional positive integer vertex weights."""

    num_vertices: int
    edges: tuple[Edge, ...]
    vertex_weights: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        if self.num_vertices < 0:
            raise InvalidInstanceError("negative vertex count")
        seen: set[Edge] = set()
        normalized = []
        for u, v in self.edges:
            if not (0 <= u < self.num_vertices and 0 <= v < self.num_vertices):
                raise InvalidInstanceError(f"edge ({u},{v}) has an endpoint out of range")
            if u == v:
                raise InvalidInstanceError(f"self-loop at vertex {u}")
            e = (min(u, v), max(u, v))
            if e in seen:
                raise InvalidInstanceError(f"duplicate edge ({u},{v})")
            seen.add(e)
            normalized.append(e)
        object.__setattr__(self, "edges", tuple(normalized))
        if self.vertex_weights is not None:
            if len(self.vertex_weights) != self.num_vertices:
                raise InvalidInstanceError("weight list length != vertex count")
            if any(w < 1 for w in self.vertex_weights):
                raise InvalidInstanceError("vertex weights must be positive integers")
            object.__setattr__(self, "vertex_weights", tuple(self.vertex_weights))

    def weight(self, v: int) -> int:
        return 1 if self.vertex_weights is None else self.vertex_weights[v]

    def closed_neighborhoods(self) -> list[set[int]]:
        hoods = [{v} for v in range(self.num_vertices)]
        for u, v in self.edges:
            hoods[u].add(v)
            hoods[v].add(u)
        return hoods


@dataclass(frozen=True)
class CnfData:
    """CNF over 1-indexed variables; literals are signed, clauses non-empty."""

    num_variables: int
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.num_variables < 0:
            raise InvalidInstanceError("negative variable count")
        clauses = tuple(tuple(c) for c in self.clauses)
        for clause in clauses:
            if not clause:
                raise InvalidInstanceError("empty clause")
            for lit in clause:
                if lit == 0 or abs(lit) > self.num_variables:
                    raise InvalidInstanceError(f"literal {lit} out of range")
        object.__setattr__(self, "clauses", clauses)

    @property
    def literal_count(self) -> int:
        return sum(len(c) for c in self.clauses)

    def satisfied(self, assignment: tuple[int, ...]) -> bool:
        return all(
            any((lit > 0) == bool(assignment[abs(lit) - 1]) for lit in clause)
            for clause in self.clauses
        )


@dataclass(frozen=True)
class IlpData:
    """Integer linear program with finite box bounds on every variable."""

    num_vars: int
    var_bounds: tuple[tuple[int, int], ...]
    constraints: tuple[tuple[tuple[int, ...], str, int], ...]
    objective: tuple[int, ...]
    sense: str  # "max" | "min"

    def __post_init__(self) -> None:
        if self.num_vars < 0:
            raise InvalidInstanceError("negative variable count")
        if len(self.var_bounds) != self.num_vars or len(self.objective) != self.num_vars:
            raise InvalidInstanceError("bounds/objective length != variable count")
        for lo, hi in self.var_bounds:
            if lo > hi:
                raise InvalidInstanceError(f"empty variable domain [{lo},{hi}]")
        constraints = []
        for coeffs, rel, rhs in self.constraints:
            if len(coeffs) != self.num_vars:
                raise InvalidInstanceError("constraint coefficient length != variable count")
            if rel not in ("<=", ">=", "="):
                raise InvalidInstanceError(f"bad relation {rel!r}")
            constraints.append((tuple(coeffs), rel, rhs))
        object.__setattr__(self, "constraints", tuple(constraints))
        object.__setattr__(self, "var_bounds", tuple((lo, hi) for lo, hi in self.var_bounds))
        object.__setattr__(self, "objective", tuple(self.objective))
        if self.sense not in ("max", "min"):
            raise InvalidInstanceError(f"bad sense {self.sense!r}")

    def holds(self, x: tuple[int, ...]) -> bool:
        for coeffs, rel, rhs in self.constraints:
            lhs = sum(a * xi for a, xi in zip(coeffs, x))
            if rel == "<=" and lhs > rhs:
                return False
            if rel == ">=" and lhs < rhs:
                return False
            if rel == "=" and lhs != rhs:
                return False
        return True


@dataclass(frozen=True)
class QuboData:
    """Symmetric integer matrix; objective is x^T Q x over binary x, maximized."""

    n: int
    q: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.n < 0:
            raise InvalidInstanceError("negative size")
        q = tuple(tuple(row) for row in self.q)
        if len(q) != self.n or any(len(row) != self.n for row in q):
            raise InvalidInstanceError("Q is not n x n")
        for i in range(self.n):
            for j in range(i + 1, self.n):
                if q[i][j] != q[j][i]:
                    raise InvalidInstanceError(f"Q not symmetric at ({i},{j})")
        object.__setattr__(self, "q", q)

    def value(self, x: tuple[int, ...]) -> int:
        total = 0
        for i in range(self.n):
            if not x[i]:
                continue
            row = self.q[i]
            for j in range(self.n):
                if x[j]:
                    total += row[j]
        return total


@dataclass(frozen=True)
class IsingData:
    """Pair couplings (symmetric, zero diagonal) and local fields over spins."""

    n: int
    j: tuple[tuple[int, ...], ...]
    h: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 0:
            raise InvalidInstanceError("negative size")
        j = tuple(tuple(row) for row in self.j)
        if len(j) != self.n or any(len(row) != self.n for row in j):
            raise InvalidInstanceError("J is not n x n")
        for i in range(self.n):
            if j[i][i] != 0:
                raise InvalidInstanceError("J must have zero diagonal")
            for k in range(i + 1, self.n):
                if j[i][k] != j[k][i]:
                    raise InvalidInstanceError(f"J not symmetric at ({i},{k})")
        if len(self.h) != self.n:
            raise InvalidInstanceError("h length != n")
        object.__setattr__(self, "j", j)
        object.__setattr__(self, "h", tuple(self.h))

    def negated_energy(self, spins: tuple[int, ...]) -> int:
        energy = 0
        for i in range(self.n):
            for k in range(i + 1, self.n):
                energy += self.j[i][k] * spins[i] * spins[k]
            energy += self.h[i] * spins[i]
        return -energy


@dataclass(frozen=True)
class SetCoverData:
    """Family of subsets of range(num_elements) whose union covers everything."""

    num_elements: int
    sets: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.num_elements < 0:
            raise InvalidInstanceError("negative element count")
        sets = tuple(tuple(s) for s in self.sets)
        covered: set[int] = set()
        for s in sets:
            for e in s:
                if not 0 <= e < self.num_elements:
                    raise InvalidInstanceError(f"element {e} out of range")
            covered.update(s)
        if len(covered) < self.num_elements:
            raise InvalidInstanceError("union of sets does not cover all elements")
        object.__setattr__(self, "sets", sets)


# --- problem classes ----------------------------------------------------------

def _binary_dims(n: int) -> tuple[int, ...]:
    return (2,) * n


@dataclass(frozen=True)
class IndependentSet(Problem):
    graph: GraphData
    kind = ValueKind.MAX
    type_name = "MaximumIndependentSet"

    @property
    def variant_tags(self) -> dict[str, str]:
        weight = "unit" if self.graph.vertex_weights is None else "integer"
        return {"graph": "simple", "weight": weight}

    def config_dims(self) -> tuple[int, ...]:
        return _binary_dims(self.graph.num_vertices)

    def size_measures(self) -> dict[str, int]:
        return {"V": self.graph.num_vertices, "E": len(self.graph.edges)}

    def _evaluate(self, config) -> AggregatedValue:
        feasible = all(not (config[u] and config[v]) for u, v in self.graph.edges)
        payload = sum(self.graph.weight(v) for v in range(self.graph.num_vertices) if config[v])
        return AggregatedValue(ValueKind.MAX, payload, feasible)

    def to_data(self) -> dict:
        return _graph_to_data(self.graph)


@dataclass(frozen=True)
class VertexCover(Problem):
    graph: GraphData
    kind = ValueKind.MIN
    type_name = "MinimumVertexCover"

    @property
    def variant_tags(self) -> dict[str, str]:
        return {"graph": "simple"}

    def config_dims(self) -> tuple[int, ...]:
        return _binary_dims(self.graph.num_vertices)

    def size_measures(self) -> dict[str, int]:
        return {"V": self.graph.num_vertices, "E": len(self.graph.edges)}

    def _evaluate(self, config) -> AggregatedValue:
        feasible = all(config[u] or config[v] for u, v in self.graph.edges)
        return AggregatedValue(ValueKind.MIN, sum(config), feasible)

    def to_data(self) -> dict:
        return _graph_to_data(self.graph)


@dataclass(frozen=True)
class Clique(Problem):
    graph: GraphData
    kind = ValueKind.MAX
    type_name = "MaximumClique"

    @property
    def variant_tags(self) -> dict[str, str]:
        return {"graph": "simple"}

    def config_dims(self) -> tuple[int, ...]:
        return _binary_dims(self.graph.num_vertices)

    def size_measures(self) -> dict[str, int]:
        return {"V": self.graph.num_vertices, "E": len(self.graph.edges)}

    def _evaluate(self, config) -> AggregatedValue:
        chosen = [v for v in range(self.graph.num_vertices) if config[v]]
        edge_set = set(self.graph.edges)
        feasible = all(
            (chosen[i], chosen[k]) in edge_set
            for i in range(len(chosen))
            for k in range(i + 1, len(chosen))
        )
        return AggregatedValue(ValueKind.MAX, len(chosen), feasible)

    def to_data(self) -> dict:
        return _graph_to_data(self.graph)


@dataclass(frozen=True)
class DominatingSet(Problem):
    graph: GraphData
    kind = ValueKind.MIN
    type_name = "MinimumDominatingSet"

    @property
    def variant_tags(self) -> dict[str, str]:
        return {"graph": "simple"}

    def config_dims(self) -> tuple[int, ...]:
        return _binary_dims(self.graph.num_vertices)

    def size_measures(self) -> dict[str, int]:
        return {"V": self.graph.num_vertices, "E": len(self.graph.edges)}

    def _evaluate(self, config) -> AggregatedValue:
        hoods = self.graph.closed_neighborhoods()
        feasible = all(any(config[u] for u in hoods[v]) for v in range(self.graph.num_vertices))
        return AggregatedValue(ValueKind.MIN, sum(config), feasible)

    def to_data(self) -> dict:
        return _graph_to_data(self.graph)


@dataclass(frozen=True)
class SetCover(Problem):
    data: SetCoverData
    kind = ValueKind.MIN
    type_name = "MinimumSetCover"

    def config_dims(self) -> tuple[int, ...]:
        return _binary_dims(len(self.data.sets))

    def size_measures(self) -> dict[str, int]:
        return {"S": len(self.data.sets), "U": self.data.num_elements}

    def _evaluate(self, config) -> AggregatedValue:
        covered: set[int] = set()
        for i, chosen in enumerate(config):
            if chosen:
                covered.update(self.data.sets[i])
        feasible = len(covered) == self.data.num_elements
        return AggregatedValue(ValueKind.MIN, sum(config), feasible)

    def to_data(self) -> dict:
        return {"num_elements": self.data.num_elements, "sets": [list(s) for s in self.data.sets]}


@dataclass(frozen=True)
class MaxCut(Problem):
    graph: GraphData
    kind = ValueKind.MAX
    type_name = "MaxCut"

    @property
    def variant_tags(self) -> dict[str, str]:
        return {"graph": "simple"}

    def config_dims(self) -> tuple[int, ...]:
        return _binary_dims(self.graph.num_vertices)

    def size_measures(self) -> dict[str, int]:
        return {"V": self.graph.num_vertices, "E": len(self.graph.edges)}

    def _evaluate(self, config) -> AggregatedValue:
        # every 2-partition is admissible
        cut = sum(1 for u, v in self.graph.edges if config[u] != config[v])
        return AggregatedValue(ValueKind.MAX, cut, True)

    def to_data(self) -> dict:
        return _graph_to_data(self.graph)


@dataclass(frozen=True)
class Qubo(Problem):
    data: QuboData
    kind = ValueKind.MAX
    type_name = "QUBO"

    def config_dims(self) -> tuple[int, ...]:
        return _binary_dims(self.data.n)

    def size_measures(self) -> dict[str, int]:
        return {"n": self.data.n}

    def _evaluate(self, config) -> AggregatedValue:
        return AggregatedValue(ValueKind.MAX, self.data.value(config), True)

    def to_data(self) -> dict:
        return {"n": self.data.n, "q": [list(row) for row in self.data.q]}


@dataclass(frozen=True)
class SpinGlass(Problem):
    data: IsingData
    kind = ValueKind.MAX
    type_name = "SpinGlass"

    def config_dims(self) -> tuple[int, ...]:
        return _binary_dims(self.data.n)

    def size_measures(self) -> dict[str, int]:
        return {"n": self.data.n}

    def _evaluate(self, config) -> AggregatedValue:
        spins = tuple(2 * c - 1 for c in config)
        return AggregatedValue(ValueKind.MAX, self.data.negated_energy(spins), True)

    def to_data(self) -> dict:
        return {
            "n": self.data.n,
            "j": [list(row) for row in self.data.j],
            "h": list(self.data.h),
        }


@dataclass(frozen=True)
class GraphColoring(Problem):
    graph: GraphData
    colors: int
    kind = ValueKind.OR
    type_name = "GraphColoring"

    def __post_init__(self) -> None:
        if self.colors < 1:
            raise InvalidInstanceError("need at least one color")

    @property
    def variant_tags(self) -> dict[str, str]:
        return {"graph": "simple"}

    def config_dims(self) -> tuple[int, ...]:
        return (self.colors,) * self.graph.num_vertices

    def size_measures(self) -> dict[str, int]:
        return {"V": self.graph.num_vertices, "E": len(self.graph.edges), "k": self.colors}

    def _evaluate(self, config) -> AggregatedValue:
        proper = all(config[u] != config[v] for u, v in self.graph.edges)
        return AggregatedValue(ValueKind.OR, proper)

    def to_data(self) -> dict:
        data = _graph_to_data(self.graph)
        data["colors"] = self.colors
        return data


@dataclass(frozen=True)
class Satisfiability(Problem):
    cnf: CnfData
    kind = ValueKind.OR
    type_name = "Satisfiability"

    def config_dims(self) -> tuple[int, ...]:
        return _binary_dims(self.cnf.num_variables)

    def size_measures(self) -> dict[str, int]:
        return {
            "n": self.cnf.num_variables,
            "m": len(self.cnf.clauses),
            "L": self.cnf.literal_count,
        }

    def _evaluate(self, config) -> AggregatedValue:
        return AggregatedValue(ValueKind.OR, self.cnf.satisfied(config))

    def to_data(self) -> dict:
        return {
            "num_variables": self.cnf.num_variables,
            "clauses": [list(c) for c in self.cnf.clauses],
        }


@dataclass(frozen=True)
class ThreeSatisfiability(Satisfiability):
    type_name = "ThreeSatisfiability"

    def __post_init__(self) -> None:
        for clause in self.cnf.clauses:
            if len(clause) > 3:
                raise InvalidInstanceError(f"clause of length {len(clause)} in a 3-SAT instance")


@dataclass(frozen=True)
class Ilp(Problem):
    data: IlpData
    kind = ValueKind.EXTREMUM
    type_name = "IntegerLinearProgram"

    @property
    def sense(self) -> str:
        return SENSE_MAXIMIZE if self.data.sense == "max" else SENSE_MINIMIZE

    def config_dims(self) -> tuple[int, ...]:
        return tuple(hi - lo + 1 for lo, hi in self.data.var_bounds)

    def size_measures(self) -> dict[str, int]:
        return {"n": self.data.num_vars, "c": len(self.data.constraints)}

    def point(self, config) -> tuple[int, ...]:
        return tuple(lo + c for (lo, _), c in zip(self.data.var_bounds, config))

    def _evaluate(self, config) -> AggregatedValue:
        x = self.point(config)
        payload = sum(c * xi for c, xi in zip(self.data.objective, x))
        return AggregatedValue(ValueKind.EXTREMUM, payload, self.data.holds(x), self.sense)

    def to_data(self) -> dict:
        return {
            "num_vars": self.data.num_vars,
            "bounds": [list(b) for b in self.data.var_bounds],
            "constraints": [
                {"coeffs": list(coeffs), "rel": rel, "rhs": rhs}
                for coeffs, rel, rhs in self.data.constraints
            ],
            "objective": list(self.data.objective),
            "sense": self.data.sense,
        }


# --- catalogue ----------------------------------------------------------------

MIS_BRANCHING = "1.1996"  # best known MIS branching-factor bound


def _descriptor(
    name: str,
    tags: Mapping[str, str],
    measures: tuple[str, ...],
    complexity: str,
    kind: ValueKind,
    capability: SolveCapability = SolveCapability.VIA_ILP,
    alias: str | None = None,
) -> ProblemTypeDescriptor:
    return ProblemTypeDescriptor(
        name=name,
        variant_tags=tuple(sorted(tags.items())),
        size_measure_names=measures,
        complexity=parse_expr(complexity),
        solve_capability=capability,
        kind=kind,
        alias=alias,
    )


SIMPLE = {"graph": "simple"}


def register_catalogue(registry: Registry | None = None) -> Registry:
    """Register every shipped problem variant; idempotent per fresh registry."""
    registry = registry or Registry()
    mis_complexity = f"{MIS_BRANCHING}^V"
    entries = [
        _descriptor("Satisfiability", {}, ("n", "m", "L"), "2^n", ValueKind.OR, alias="SAT"),
        _descriptor(
            "ThreeSatisfiability", {}, ("n", "m", "L"), "2^n", ValueKind.OR, alias="3SAT"
        ),
        _descriptor(
            "MaximumIndependentSet",
            {**SIMPLE, "weight": "unit"},
            ("V", "E"),
            mis_complexity,
            ValueKind.MAX,
            alias="MIS",
        ),
        _descriptor(
            "MaximumIndependentSet",
            {**SIMPLE, "weight": "integer"},
            ("V", "E"),
            mis_complexity,
            ValueKind.MAX,
        ),
        _descriptor(
            "MinimumVertexCover", SIMPLE, ("V", "E"), mis_complexity, ValueKind.MIN, alias="VC"
        ),
        _descriptor("MaximumClique", SIMPLE, ("V", "E"), "2^V", ValueKind.MAX, alias="Clique"),
        _descriptor(
            "MinimumDominatingSet",
            SIMPLE,
            ("V", "E"),
            "2^V",
            ValueKind.MIN,
            alias="DominatingSet",
        ),
        _descriptor(
            "MinimumSetCover", {}, ("S", "U"), "2^S", ValueKind.MIN, alias="SetCover"
        ),
        _descriptor("MaxCut", SIMPLE, ("V", "E"), "2^V", ValueKind.MAX),
        _descriptor("QUBO", {}, ("n",), "2^n", ValueKind.MAX),
        _descriptor("SpinGlass", {}, ("n",), "2^n", ValueKind.MAX, alias="Ising"),
        _descriptor("GraphColoring", SIMPLE, ("V", "E", "k"), "k^V", ValueKind.OR, alias="GC"),
        _descriptor(
            "IntegerLinearProgram",
            {},
            ("n", "c"),
            "2^n",
            ValueKind.EXTREMUM,
            capability=SolveCapability.DEDICATED,
            alias="ILP",
        ),
        _descriptor(
            "DecisionMaximumIndependentSet",
            {**SIMPLE, "weight": "unit"},
            ("V", "E"),
            mis_complexity,
            ValueKind.OR,
            alias="DecisionMIS",
        ),
        _descriptor(
            "DecisionMinimumVertexCover",
            SIMPLE,
            ("V", "E"),
            mis_complexity,
            ValueKind.OR,
            capability=SolveCapability.BRUTE_FORCE_ONLY,
            alias="DecisionVC",
        ),
    ]
    for descriptor in entries:
        registry.register(descriptor)
    registry.freeze()
    return registry


# --- wire format ----------------------------------------------------------------

def _graph_to_data(graph: GraphData) -> dict:
    data: dict = {
        "num_vertices": graph.num_vertices,
        "edges": [list(e) for e in graph.edges],
    }
    if graph.vertex_weights is not None:
        data["weights"] = list(graph.vertex_weights)
    return data


def _require_fields(data: Mapping, required: set[str], optional: set[str] = frozenset()) -> None:
    if not isinstance(data, Mapping):
        raise DocumentError("instance data must be an object")
    keys = set(data)
    missing = required - keys
    unknown = keys - required - optional
    if missing:
        raise DocumentError(f"missing data field(s): {sorted(missing)}")
    if unknown:
        raise DocumentError(f"unknown data field(s): {sorted(unknown)}")


def _int_list(values, what: str) -> tuple[int, ...]:
    if not isinstance(values, (list, tuple)):
        raise DocumentError(f"{what} must be a list")
    out = []
    for v in values:
        if not isinstance(v, int) or isinstance(v, bool):
            raise DocumentError(f"{what} must contain integers")
        out.append(v)
    return tuple(out)


def _graph_from_data(data: Mapping, extra: set[str] = frozenset()) -> GraphData:
    _require_fields(data, {"num_vertices", "edges"}, {"weights"} | extra)
    if not isinstance(data["num_vertices"], int):
        raise DocumentError("num_vertices must be an integer")
    edges = []
    for e in data["edges"]:
        pair = _int_list(e, "edge")
        if len(pair) != 2:
            raise DocumentError(f"edge {e!r} must have two endpoints")
        edges.append((pair[0], pair[1]))
    weights = _int_list(data["weights"], "weights") if "weights" in data else None
    return GraphData(data["num_vertices"], tuple(edges), weights)


def _cnf_from_data(data: Mapping) -> CnfData:
    _require_fields(data, {"num_variables", "clauses"})
    if not isinstance(data["num_variables"], int):
        raise DocumentError("num_variables must be an integer")
    clauses = tuple(_int_list(c, "clause") for c in data["clauses"])
    return CnfData(data["num_variables"], clauses)


def _build_mis(data: Mapping) -> IndependentSet:
    return IndependentSet(_graph_from_data(data))


def _build_vc(data: Mapping) -> VertexCover:
    graph = _graph_from_data(data)
    if graph.vertex_weights is not None:
        raise DocumentError("MinimumVertexCover takes no weights")
    return VertexCover(graph)


def _build_unweighted(cls):
    def build(data: Mapping) -> Problem:
        graph = _graph_from_data(data)
        if graph.vertex_weights is not None:
            raise DocumentError(f"{cls.type_name} takes no weights")
        return cls(graph)

    return build


def _build_coloring(data: Mapping) -> GraphColoring:
    _require_fields(data, {"num_vertices", "edges", "colors"})
    graph = _graph_from_data({k: v for k, v in data.items() if k != "colors"})
    if not isinstance(data["colors"], int):
        raise DocumentError("colors must be an integer")
    return GraphColoring(graph, data["colors"])


def _build_sat(data: Mapping) -> Satisfiability:
    return Satisfiability(_cnf_from_data(data))


def _build_3sat(data: Mapping) -> ThreeSatisfiability:
    return ThreeSatisfiability(_cnf_from_data(data))


def _build_qubo(data: Mapping) -> Qubo:
    _require_fields(data, {"n", "q"})
    rows = tuple(_int_list(row, "Q row") for row in data["q"])
    return Qubo(QuboData(data["n"], rows))


def _build_ising(data: Mapping) -> SpinGlass:
    _require_fields(data, {"n", "j", "h"})
    rows = tuple(_int_list(row, "J row") for row in data["j"])
    return SpinGlass(IsingData(data["n"], rows, _int_list(data["h"], "h")))


def _build_set_cover(data: Mapping) -> SetCover:
    _require_fields(data, {"num_elements", "sets"})
    sets = tuple(_int_list(s, "set") for s in data["sets"])
    return SetCover(SetCoverData(data["num_elements"], sets))


def _build_ilp(data: Mapping) -> Ilp:
    _require_fields(data, {"num_vars", "bounds", "constraints", "objective", "sense"})
    bounds = []
    for b in data["bounds"]:
        pair = _int_list(b, "bound")
        if len(pair) != 2:
            raise DocumentError(f"bound {b!r} must be a [lo, hi] pair")
        bounds.append((pair[0], pair[1]))
    constraints = []
    for c in data["constraints"]:
        _require_fields(c, {"coeffs", "rel", "rhs"})
        if not isinstance(c["rhs"], int):
            raise DocumentError("constraint rhs must be an integer")
        constraints.append((_int_list(c["coeffs"], "coeffs"), c["rel"], c["rhs"]))
    return Ilp(
        IlpData(
            num_vars=data["num_vars"],
            var_bounds=tuple(bounds),
            constraints=tuple(constraints),
            objective=_int_list(data["objective"], "objective"),
            sense=data["sense"],
        )
    )


def _build_decision_mis(data: Mapping) -> DecisionProblem:
    _require_fields(data, {"num_vertices", "edges", "bound"}, {"weights"})
    if not isinstance(data["bound"], int):
        raise DocumentError("bound must be an integer")
    inner = _build_mis({k: v for k, v in data.items() if k != "bound"})
    return DecisionProblem(inner, data["bound"])


def _build_decision_vc(data: Mapping) -> DecisionProblem:
    _require_fields(data, {"num_vertices", "edges", "bound"})
    if not isinstance(data["bound"], int):
        raise DocumentError("bound must be an integer")
    inner = _build_vc({k: v for k, v in data.items() if k != "bound"})
    return DecisionProblem(inner, data["bound"])


_BUILDERS = {
    "Satisfiability": _build_sat,
    "ThreeSatisfiability": _build_3sat,
    "MaximumIndependentSet": _build_mis,
    "MinimumVertexCover": _build_vc,
    "MaximumClique": _build_unweighted(Clique),
    "MinimumDominatingSet": _build_unweighted(DominatingSet),
    "MinimumSetCover": _build_set_cover,
    "MaxCut": _build_unweighted(MaxCut),
    "QUBO": _build_qubo,
    "SpinGlass": _build_ising,
    "GraphColoring": _build_coloring,
    "IntegerLinearProgram": _build_ilp,
    "DecisionMaximumIndependentSet": _build_decision_mis,
    "DecisionMinimumVertexCover": _build_decision_vc,
}


def instance_to_document(instance: Problem) -> dict:
    return {
        "problem": instance.type_name,
        "variant": dict(instance.variant_tags),
        "data": instance.to_data(),
    }


def instance_from_document(document: Mapping, registry: Registry) -> Problem:
    _require_fields(document, {"problem", "data"}, {"variant"})
    name = document["problem"]
    if not isinstance(name, str):
        raise DocumentError("problem name must be a string")
    descriptor = registry.lookup(name)  # resolves aliases, errors on unknowns
    builder = _BUILDERS.get(descriptor.name)
    if builder is None:
        raise DocumentError(f"no builder for problem {descriptor.name!r}")
    instance = builder(document["data"])
    variant = document.get("variant")
    if variant is not None and dict(variant) != instance.variant_tags:
        raise DocumentError(
            f"variant tags {dict(variant)} do not match instance data "
            f"(expected {instance.variant_tags})"
        )
    registry.lookup_key(instance.variant_key())  # must be a registered variant
    return instance
