"""Solver dispatch and the exact branch-and-bound ILP backend.

Dispatch order: a dedicated solver when the type has one (only ILP in the
shipped catalogue), otherwise the cheapest witness-capable reduction path to
ILP, otherwise brute-force enumeration. The ILP backend is an exact DFS
branch-and-bound: worklist bound-tightening propagation per constraint, an
interval-arithmetic optimistic objective bound for incumbent pruning, and
deterministic branching on the lowest-index unfixed variable in ascending
value order. Incumbents are replaced only on strict improvement, so the
reported witness is the search's first optimal leaf.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BudgetExceededError
from .graph import ReductionPath, default_graph, extract_along, reduce_along
from .model import (
    AggregatedValue,
    Configuration,
    DEFAULT_CONFIG_BUDGET,
    Problem,
    SENSE_MAXIMIZE,
    SENSE_MINIMIZE,
    SolveCapability,
    ValueKind,
    evaluate,
    fold_space,
)
from .problems import Ilp, IlpData

DEFAULT_NODE_BUDGET = 10_000_000


@dataclass(frozen=True)
class SolveResult:
    value: AggregatedValue
    witness: Configuration | None
    solver_name: str
    route: ReductionPath | None = None


def solver_label(result: SolveResult, prefix_steps: tuple = ()) -> str:
    """Human-readable solver string, e.g. ``ilp (via MIS -> ILP)``."""
    steps = tuple(prefix_steps)
    if result.route is not None:
        steps += result.route.steps
    if not steps:
        return result.solver_name
    registry = default_graph().registry
    hops = " -> ".join(registry.short_name(step.target.key) for step in steps)
    return f"{result.solver_name} (via {hops})"


def _normalized_rows(data: IlpData) -> list[tuple[tuple[int, ...], int]]:
    rows: list[tuple[tuple[int, ...], int]] = []
    for coeffs, rel, rhs in data.constraints:
        if rel in ("<=", "="):
            rows.append((coeffs, rhs))
        if rel in (">=", "="):
            rows.append((tuple(-a for a in coeffs), -rhs))
    return rows


class _Search:
    def __init__(self, data: IlpData, max_nodes: int) -> None:
        self.data = data
        self.rows = _normalized_rows(data)
        self.max_nodes = max_nodes
        self.nodes = 0
        self.best_value: int | None = None
        self.best_point: tuple[int, ...] | None = None
        self.maximize = data.sense == "max"
        # constraint indices touching each variable, for worklist propagation
        self.touching: list[list[int]] = [[] for _ in range(data.num_vars)]
        for index, (coeffs, _) in enumerate(self.rows):
            for j, a in enumerate(coeffs):
                if a:
                    self.touching[j].append(index)

    def _propagate(self, lo: list[int], hi: list[int], queue: list[int]) -> bool:
        pending = list(dict.fromkeys(queue))
        enqueued = set(pending)
        while pending:
            row_index = pending.pop(0)
            enqueued.discard(row_index)
            coeffs, rhs = self.rows[row_index]
            floor_lhs = 0
            for j, a in enumerate(coeffs):
                if a > 0:
                    floor_lhs += a * lo[j]
                elif a < 0:
                    floor_lhs += a * hi[j]
            if floor_lhs > rhs:
                return False
            for j, a in enumerate(coeffs):
                if a == 0:
                    continue
                if a > 0:
                    residual = rhs - (floor_lhs - a * lo[j])
                    new_hi = residual // a
                    if new_hi < hi[j]:
                        hi[j] = new_hi
                        if new_hi < lo[j]:
                            return False
                        for other in self.touching[j]:
                            if other not in enqueued:
                                pending.append(other)
                                enqueued.add(other)
                else:
                    residual = rhs - (floor_lhs - a * hi[j])
                    new_lo = -(residual // (-a))
                    if new_lo > lo[j]:
                        lo[j] = new_lo
                        if new_lo > hi[j]:
                            return False
                        for other in self.touching[j]:
                            if other not in enqueued:
                                pending.append(other)
                                enqueued.add(other)
        return True

    def _optimistic(self, lo: list[int], hi: list[int]) -> int:
        total = 0
        for c, l, h in zip(self.data.objective, lo, hi):
            if self.maximize:
                total += c * (h if c > 0 else l)
            else:
                total += c * (l if c > 0 else h)
        return total

    def _improves(self, candidate: int) -> bool:
        if self.best_value is None:
            return True
        return candidate > self.best_value if self.maximize else candidate < self.best_value

    def _prunable(self, bound: int) -> bool:
        if self.best_value is None:
            return False
        return bound <= self.best_value if self.maximize else bound >= self.best_value

    def run(self) -> None:
        lo = [l for l, _ in self.data.var_bounds]
        hi = [h for _, h in self.data.var_bounds]
        self._charge_node()
        if not self._propagate(lo, hi, list(range(len(self.rows)))):
            return
        self._descend(lo, hi)

    def _charge_node(self) -> None:
        self.nodes += 1
        if self.nodes > self.max_nodes:
            raise BudgetExceededError(
                f"branch-and-bound exceeded {self.max_nodes} nodes", limit=self.max_nodes
            )

    def _descend(self, lo: list[int], hi: list[int]) -> None:
        if self._prunable(self._optimistic(lo, hi)):
            return
        branch = next((j for j in range(self.data.num_vars) if lo[j] < hi[j]), None)
        if branch is None:
            # propagation already proved every row feasible at this point
            value = sum(c * x for c, x in zip(self.data.objective, lo))
            if self._improves(value):
                self.best_value = value
                self.best_point = tuple(lo)
            return
        for value in range(lo[branch], hi[branch] + 1):
            self._charge_node()
            child_lo = list(lo)
            child_hi = list(hi)
            child_lo[branch] = value
            child_hi[branch] = value
            if self._propagate(child_lo, child_hi, list(self.touching[branch])):
                self._descend(child_lo, child_hi)


def solve_ilp(data: IlpData, max_nodes: int = DEFAULT_NODE_BUDGET) -> SolveResult:
    """Exact optimum of a bounded integer linear program."""
    sense = SENSE_MAXIMIZE if data.sense == "max" else SENSE_MINIMIZE
    search = _Search(data, max_nodes)
    search.run()
    if search.best_point is None:
        return SolveResult(
            AggregatedValue(ValueKind.EXTREMUM, None, False, sense), None, "ilp"
        )
    witness = tuple(x - l for x, (l, _) in zip(search.best_point, data.var_bounds))
    return SolveResult(
        AggregatedValue(ValueKind.EXTREMUM, search.best_value, True, sense),
        witness,
        "ilp",
    )


def solve_brute(instance: Problem, max_configs: int = DEFAULT_CONFIG_BUDGET) -> SolveResult:
    result = fold_space(instance, max_configs)
    return SolveResult(result.value, result.witness, "brute-force")


def _strip_false_witness(value: AggregatedValue, witness: Configuration | None):
    if value.kind is ValueKind.OR and not value.payload:
        return None
    return witness


def solve(
    instance: Problem,
    max_configs: int = DEFAULT_CONFIG_BUDGET,
    max_nodes: int = DEFAULT_NODE_BUDGET,
) -> SolveResult:
    """Dispatch in priority order: dedicated, ILP route, brute force."""
    graph = default_graph()
    descriptor = graph.registry.lookup_key(instance.variant_key())
    if descriptor.solve_capability is SolveCapability.DEDICATED:
        if isinstance(instance, Ilp):
            return solve_ilp(instance.data, max_nodes)
        raise NotImplementedError(f"no dedicated solver wired for {descriptor.name}")
    if descriptor.solve_capability is SolveCapability.VIA_ILP:
        ilp_key = graph.registry.lookup("IntegerLinearProgram").key
        path = graph.find_path(instance.variant_key(), ilp_key, require_witness=True)
        if path is not None and path.steps:
            envelope = reduce_along(path, instance)
            ilp_result = solve_ilp(envelope.target_instance.data, max_nodes)
            if ilp_result.witness is not None:
                config = extract_along(envelope, ilp_result.witness)
                value = evaluate(instance, config)
                return SolveResult(
                    value, _strip_false_witness(value, config), "ilp", route=path
                )
            # a reduced ILP should never be infeasible; fall through defensively
    brute = solve_brute(instance, max_configs)
    return SolveResult(
        brute.value, _strip_false_witness(brute.value, brute.witness), "brute-force"
    )
