"""do-operator interventions via graph mutilation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from riskbn.errors import InvalidState, QueryError, TargetInEvidence
from riskbn.inference import InferenceMode, query
from riskbn.network import BayesianNetwork, Cpt, NodeSpec, build_network


def mutilate(net: BayesianNetwork, intervention: Mapping[str, int]) -> BayesianNetwork:
    """Cut incoming edges of every intervened node and pin it to its forced state."""
    if not intervention:
        raise QueryError("an intervention must set at least one node")
    for node_id, state in intervention.items():
        net.node(node_id)
        if state not in (0, 1):
            raise InvalidState(f"{node_id}: state must be 0 or 1, got {state!r}")
    specs = []
    for spec in net.nodes:
        if spec.id in intervention:
            forced = float(intervention[spec.id])
            spec = NodeSpec(spec.id, Cpt((), ((1.0 - forced, forced),)), spec.metadata)
        specs.append(spec)
    return build_network(specs)


def causal_effect(
    net: BayesianNetwork,
    target: str,
    intervention: Mapping[str, int],
    mode: InferenceMode | str = InferenceMode.VARIABLE_ELIMINATION,
) -> float:
    """P(target = 1 | do(intervention))."""
    net.node(target)
    if target in intervention:
        raise TargetInEvidence(f"cannot intervene on the target {target!r}", node=target)
    return query(mutilate(net, intervention), target, mode=mode).p_true


@dataclass(frozen=True)
class InterventionRow:
    node: str
    posterior_p_true: float
    do_result: float
    baseline_delta: float
    paper_delta: float


@dataclass(frozen=True)
class InterventionReport:
    target: str
    baseline: float
    rows: tuple[InterventionRow, ...]
    engine: str = InferenceMode.VARIABLE_ELIMINATION.value

    def row(self, node: str) -> InterventionRow:
        for r in self.rows:
            if r.node == node:
                return r
        raise KeyError(node)


def intervention_sweep(
    net: BayesianNetwork,
    target: str,
    state: int = 1,
    mode: InferenceMode | str = InferenceMode.VARIABLE_ELIMINATION,
) -> InterventionReport:
    """do(X=state) for every node X other than the target.

    ``paper_delta`` is the do-result minus X's own marginal; ``baseline_delta``
    is the do-result minus the target's marginal.
    """
    mode = InferenceMode(mode)
    baseline = query(net, target, mode=mode).p_true
    rows = []
    for node_id in net.ids:
        if node_id == target:
            continue
        posterior = query(net, node_id, mode=mode).p_true
        do_result = causal_effect(net, target, {node_id: state}, mode=mode)
        rows.append(
            InterventionRow(
                node=node_id,
                posterior_p_true=posterior,
                do_result=do_result,
                baseline_delta=do_result - baseline,
                paper_delta=do_result - posterior,
            )
        )
    rows.sort(key=lambda r: (-r.baseline_delta, r.node))
    return InterventionReport(target, baseline, tuple(rows), mode.value)
