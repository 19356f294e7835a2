"""Marginal and conditional queries.

Three engines are available:

* ``ENUMERATION`` sums the full joint over every completion of the evidence.
  Exponential, used as the reference oracle.
* ``VARIABLE_ELIMINATION`` is the exact engine used everywhere else.
* ``FORWARD_PROPAGATION`` walks the graph in topological order and treats the
  parents of each node as independent.  It is exact on polytrees and an
  approximation when two parents share an ancestor.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from riskbn.errors import (
    EvidenceNotSupported,
    TargetInEvidence,
    ZeroProbabilityEvidence,
)
from riskbn.network import BayesianNetwork, check_assignment, row_states

ENUMERATION_LIMIT = 26


@dataclass(frozen=True)
class Distribution:
    p_false: float
    p_true: float

    @classmethod
    def bernoulli(cls, p_true: float) -> "Distribution":
        return cls(1.0 - p_true, p_true)

    def __getitem__(self, state: int) -> float:
        return (self.p_false, self.p_true)[state]


class InferenceMode(str, enum.Enum):
    ENUMERATION = "enum"
    VARIABLE_ELIMINATION = "ve"
    FORWARD_PROPAGATION = "forward"

    @property
    def is_exact(self) -> bool:
        return self is not InferenceMode.FORWARD_PROPAGATION


def _prepare(net: BayesianNetwork, target: str, evidence: Mapping[str, int] | None):
    evidence = dict(evidence or {})
    net.node(target)
    check_assignment(net, evidence)
    if target in evidence:
        raise TargetInEvidence(f"target {target!r} is also in the evidence", node=target)
    return evidence


def _normalize(unnorm_false: float, unnorm_true: float, evidence) -> Distribution:
    z = unnorm_false + unnorm_true
    if not z > 0.0:
        raise ZeroProbabilityEvidence(
            f"evidence {dict(evidence)} has probability zero", evidence=dict(evidence)
        )
    return Distribution(unnorm_false / z, unnorm_true / z)


# -- enumeration -------------------------------------------------------------


def query_enumeration(
    net: BayesianNetwork, target: str, evidence: Mapping[str, int] | None = None
) -> Distribution:
    """P(target | evidence) by summing the full joint over all completions."""
    evidence = _prepare(net, target, evidence)
    free = [n for n in net.ids if n not in evidence]
    if len(free) > ENUMERATION_LIMIT:
        raise ValueError(f"enumeration over {len(free)} free variables is too large")
    col = {n: i for i, n in enumerate(net.ids)}
    count = 1 << len(free)
    # one row per full assignment consistent with the evidence
    states = np.empty((count, len(net.ids)), dtype=np.int64)
    codes = np.arange(count, dtype=np.int64)
    for j, n in enumerate(free):
        states[:, col[n]] = (codes >> (len(free) - 1 - j)) & 1
    for n, s in evidence.items():
        states[:, col[n]] = s

    weight = np.ones(count)
    for spec in net.nodes:
        table = np.asarray(spec.cpt.rows, dtype=float)
        row = np.zeros(count, dtype=np.int64)
        for p in spec.cpt.parent_ids:
            row = (row << 1) | states[:, col[p]]
        weight *= table[row, states[:, col[spec.id]]]

    t = states[:, col[target]]
    return _normalize(
        float(weight[t == 0].sum()), float(weight[t == 1].sum()), evidence
    )


# -- variable elimination ----------------------------------------------------


class _Factor:
    __slots__ = ("vars", "table")

    def __init__(self, variables: tuple[str, ...], table: np.ndarray):
        self.vars = variables
        self.table = table

    def reduce(self, evidence: Mapping[str, int]) -> "_Factor":
        if not any(v in evidence for v in self.vars):
            return self
        index = tuple(evidence[v] if v in evidence else slice(None) for v in self.vars)
        return _Factor(tuple(v for v in self.vars if v not in evidence), self.table[index])

    def expand(self, variables: tuple[str, ...]) -> np.ndarray:
        """Table broadcast against the axis layout ``variables``."""
        order = sorted(range(len(self.vars)), key=lambda i: variables.index(self.vars[i]))
        table = np.transpose(self.table, order)
        shape = [2 if v in self.vars else 1 for v in variables]
        return table.reshape(shape)


def _product(factors: list[_Factor]) -> _Factor:
    variables: list[str] = []
    for f in factors:
        for v in f.vars:
            if v not in variables:
                variables.append(v)
    scope = tuple(variables)
    table = np.ones((2,) * len(scope))
    for f in factors:
        table = table * f.expand(scope)
    return _Factor(scope, table)


def _sum_out(factor: _Factor, var: str) -> _Factor:
    axis = factor.vars.index(var)
    return _Factor(factor.vars[:axis] + factor.vars[axis + 1 :], factor.table.sum(axis=axis))


def node_factor(net: BayesianNetwork, node_id: str) -> _Factor:
    cpt = net.cpt(node_id)
    table = np.asarray(cpt.rows, dtype=float).reshape((2,) * (cpt.n_parents + 1))
    return _Factor(cpt.parent_ids + (node_id,), table)


def elimination_order(net: BayesianNetwork, eliminate: set[str]) -> list[str]:
    """Greedy min-degree order over the moral graph, ties broken by node id."""
    adj: dict[str, set[str]] = {n: set() for n in net.ids}
    for spec in net.nodes:
        family = list(spec.cpt.parent_ids) + [spec.id]
        for a in family:
            for b in family:
                if a != b:
                    adj[a].add(b)
    order = []
    pending = set(eliminate)
    while pending:
        v = min(pending, key=lambda n: (len(adj[n]), n))
        neighbours = adj.pop(v)
        for a in neighbours:
            adj[a].discard(v)
            adj[a].update(neighbours - {a})
        pending.remove(v)
        order.append(v)
    return order


def query_ve(
    net: BayesianNetwork, target: str, evidence: Mapping[str, int] | None = None
) -> Distribution:
    """P(target | evidence) by exact variable elimination."""
    evidence = _prepare(net, target, evidence)
    factors = [node_factor(net, n).reduce(evidence) for n in net.ids]
    hidden = set(net.ids) - set(evidence) - {target}
    for var in elimination_order(net, hidden):
        touching = [f for f in factors if var in f.vars]
        if not touching:
            continue
        factors = [f for f in factors if var not in f.vars]
        factors.append(_sum_out(_product(touching), var))
    result = _product(factors)
    # scalar factors (fully reduced CPTs) fold into the normalizer
    table = result.expand((target,)).reshape(2)
    return _normalize(float(table[0]), float(table[1]), evidence)


# -- forward propagation -----------------------------------------------------


def forward_propagate(
    net: BayesianNetwork, evidence: Mapping[str, int] | None = None
) -> dict[str, Distribution]:
    """Topological propagation of marginals assuming independent parents."""
    if evidence:
        raise EvidenceNotSupported("forward propagation does not condition on evidence")
    p_true: dict[str, float] = {}
    for node_id in net.topological_order:
        cpt = net.cpt(node_id)
        parent_p = [p_true[p] for p in cpt.parent_ids]
        total = 0.0
        for i, (_, row_true) in enumerate(cpt.rows):
            w = math.prod(
                q if s else 1.0 - q
                for q, s in zip(parent_p, row_states(i, cpt.n_parents))
            )
            total += w * row_true
        p_true[node_id] = total
    return {n: Distribution.bernoulli(p_true[n]) for n in net.ids}


# -- dispatch ----------------------------------------------------------------

_EXACT = {
    InferenceMode.ENUMERATION: query_enumeration,
    InferenceMode.VARIABLE_ELIMINATION: query_ve,
}


def query(
    net: BayesianNetwork,
    target: str,
    evidence: Mapping[str, int] | None = None,
    mode: InferenceMode | str = InferenceMode.VARIABLE_ELIMINATION,
) -> Distribution:
    mode = InferenceMode(mode)
    if mode is InferenceMode.FORWARD_PROPAGATION:
        _prepare(net, target, evidence)
        return forward_propagate(net, evidence)[target]
    return _EXACT[mode](net, target, evidence)


def marginals_all(
    net: BayesianNetwork, mode: InferenceMode | str = InferenceMode.VARIABLE_ELIMINATION
) -> dict[str, Distribution]:
    """Unconditioned marginal of every node, keyed in declaration order."""
    mode = InferenceMode(mode)
    if mode is InferenceMode.FORWARD_PROPAGATION:
        return forward_propagate(net)
    return {n: _EXACT[mode](net, n) for n in net.ids}


def p_true(net: BayesianNetwork, target: str, mode=InferenceMode.VARIABLE_ELIMINATION) -> float:
    return query(net, target, mode=mode).p_true
