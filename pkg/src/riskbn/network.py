"""Discrete Bayesian networks over binary variables.

CPT rows are stored in canonical row-major order: the first declared parent
varies slowest, so for parents ``(P1, P2)`` the rows are ``(0,0), (0,1),
(1,0), (1,1)``.  Each row is a ``(p_false, p_true)`` pair.
"""

from __future__ import annotations

import heapq
import math
import re
from dataclasses import dataclass, field
from decimal import Decimal
from typing import Iterable, Mapping, Sequence

from riskbn.errors import (
    ArityMismatch,
    BadCptShape,
    CycleDetected,
    DuplicateNodeId,
    EmptyNetwork,
    IncompleteAssignment,
    InvalidNodeId,
    InvalidState,
    UnknownNode,
    UnknownParent,
    UnnormalizedRow,
)

NODE_ID_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")
ROW_TOLERANCE = 1e-9

Row = tuple[float, float]


def complement(p: float) -> float:
    """``1 - p`` computed on the shortest decimal repr, so ``complement(0.9) == 0.1``."""
    return float(Decimal(1) - Decimal(repr(float(p))))


def cpt_row_index(parent_states: Sequence[int], n_parents: int | None = None) -> int:
    """Row index for a parent-state combination (first parent slowest-varying)."""
    if n_parents is not None and len(parent_states) != n_parents:
        raise ArityMismatch(
            f"expected {n_parents} parent states, got {len(parent_states)}",
            expected=n_parents,
            actual=len(parent_states),
        )
    index = 0
    for state in parent_states:
        if state not in (0, 1):
            raise InvalidState(f"state must be 0 or 1, got {state!r}")
        index = (index << 1) | int(state)
    return index


def row_states(index: int, n_parents: int) -> tuple[int, ...]:
    """Inverse of :func:`cpt_row_index`."""
    return tuple((index >> (n_parents - 1 - j)) & 1 for j in range(n_parents))


@dataclass(frozen=True)
class Cpt:
    parent_ids: tuple[str, ...]
    rows: tuple[Row, ...]

    def __post_init__(self):
        object.__setattr__(self, "parent_ids", tuple(self.parent_ids))
        object.__setattr__(
            self, "rows", tuple((float(r[0]), float(r[1])) for r in self.rows)
        )

    @classmethod
    def prior(cls, p_true: float) -> "Cpt":
        return cls((), ((complement(p_true), float(p_true)),))

    @classmethod
    def from_p_true(cls, parent_ids: Sequence[str], p_true: Sequence[float]) -> "Cpt":
        return cls(tuple(parent_ids), tuple((complement(p), float(p)) for p in p_true))

    @property
    def n_parents(self) -> int:
        return len(self.parent_ids)

    @property
    def p_true(self) -> tuple[float, ...]:
        return tuple(r[1] for r in self.rows)

    def row(self, parent_states: Sequence[int]) -> Row:
        return self.rows[cpt_row_index(parent_states, self.n_parents)]

    def prob(self, state: int, parent_states: Sequence[int]) -> float:
        return self.row(parent_states)[state]

    def with_row(self, index: int, p_true: float) -> "Cpt":
        rows = list(self.rows)
        rows[index] = (complement(p_true), float(p_true))
        return Cpt(self.parent_ids, tuple(rows))


@dataclass(frozen=True)
class NodeSpec:
    id: str
    cpt: Cpt
    metadata: Mapping[str, str] = field(default_factory=dict)

    @property
    def parents(self) -> tuple[str, ...]:
        return self.cpt.parent_ids

    @property
    def is_root(self) -> bool:
        return not self.cpt.parent_ids


class BayesianNetwork:
    """Validated, immutable DAG of binary nodes.

    Construct through :func:`build_network`.  Equality compares node specs by
    id and ignores declaration order.
    """

    __slots__ = ("_nodes", "_index", "_children", "_topo")

    def __init__(self, nodes: tuple[NodeSpec, ...], children, topo: tuple[str, ...]):
        object.__setattr__(self, "_nodes", nodes)
        object.__setattr__(self, "_index", {n.id: n for n in nodes})
        object.__setattr__(self, "_children", children)
        object.__setattr__(self, "_topo", topo)

    def __setattr__(self, name, value):
        raise AttributeError("BayesianNetwork is immutable")

    def __eq__(self, other):
        if not isinstance(other, BayesianNetwork):
            return NotImplemented
        return self._index == other._index

    def __hash__(self):
        return hash(frozenset(self._index))

    def __repr__(self):
        return f"BayesianNetwork({len(self._nodes)} nodes)"

    def __len__(self):
        return len(self._nodes)

    def __contains__(self, node_id: object) -> bool:
        return node_id in self._index

    def __getitem__(self, node_id: str) -> NodeSpec:
        return self.node(node_id)

    @property
    def nodes(self) -> tuple[NodeSpec, ...]:
        return self._nodes

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(n.id for n in self._nodes)

    @property
    def topological_order(self) -> tuple[str, ...]:
        return self._topo

    def node(self, node_id: str) -> NodeSpec:
        try:
            return self._index[node_id]
        except KeyError:
            raise UnknownNode(f"unknown node {node_id!r}", node=node_id) from None

    def cpt(self, node_id: str) -> Cpt:
        return self.node(node_id).cpt

    def parents(self, node_id: str) -> tuple[str, ...]:
        return self.node(node_id).cpt.parent_ids

    def children(self, node_id: str) -> tuple[str, ...]:
        self.node(node_id)
        return self._children[node_id]

    def roots(self) -> tuple[str, ...]:
        return tuple(n.id for n in self._nodes if n.is_root)

    def intermediates(self) -> tuple[str, ...]:
        return tuple(n.id for n in self._nodes if not n.is_root)

    def edges(self) -> list[tuple[str, str]]:
        return [(p, n.id) for n in self._nodes for p in n.cpt.parent_ids]

    def replace(self, node_id: str, cpt: Cpt) -> "BayesianNetwork":
        """New network with ``node_id``'s CPT swapped; the result is revalidated."""
        self.node(node_id)
        specs = [
            NodeSpec(n.id, cpt, n.metadata) if n.id == node_id else n
            for n in self._nodes
        ]
        return build_network(specs)


def _check_cpt(spec: NodeSpec) -> None:
    expected = 2 ** spec.cpt.n_parents
    if len(spec.cpt.rows) != expected:
        raise BadCptShape(
            f"node {spec.id!r}: expected {expected} CPT rows, got {len(spec.cpt.rows)}",
            node=spec.id,
            expected=expected,
            actual=len(spec.cpt.rows),
        )
    if len(set(spec.cpt.parent_ids)) != spec.cpt.n_parents:
        raise BadCptShape(f"node {spec.id!r}: repeated parent", node=spec.id)
    for i, (pf, pt) in enumerate(spec.cpt.rows):
        if not (
            math.isfinite(pf)
            and math.isfinite(pt)
            and pf >= 0.0
            and pt >= 0.0
            and abs(pf + pt - 1.0) <= ROW_TOLERANCE
        ):
            raise UnnormalizedRow(
                f"node {spec.id!r}: CPT row {i} = ({pf!r}, {pt!r}) is not a distribution",
                node=spec.id,
                row=i,
            )


def _find_cycle(remaining: set[str], parents: Mapping[str, Sequence[str]]) -> list[str]:
    # walk parent links inside the unsorted remainder until a node repeats
    start = min(remaining)
    path, seen = [start], {start: 0}
    node = start
    while True:
        node = min(p for p in parents[node] if p in remaining)
        if node in seen:
            return path[seen[node]:] + [node]
        seen[node] = len(path)
        path.append(node)


def build_network(specs: Iterable[NodeSpec]) -> BayesianNetwork:
    """Validate node specs and return an immutable network."""
    specs = tuple(specs)
    if not specs:
        raise EmptyNetwork("a network needs at least one node")
    seen: set[str] = set()
    for spec in specs:
        if not isinstance(spec.id, str) or not NODE_ID_RE.match(spec.id):
            raise InvalidNodeId(f"invalid node id {spec.id!r}", node=spec.id)
        if spec.id in seen:
            raise DuplicateNodeId(f"duplicate node id {spec.id!r}", node=spec.id)
        seen.add(spec.id)
    for spec in specs:
        for p in spec.cpt.parent_ids:
            if p not in seen:
                raise UnknownParent(
                    f"node {spec.id!r} references unknown parent {p!r}",
                    node=spec.id,
                    parent=p,
                )
        _check_cpt(spec)

    parents = {s.id: s.cpt.parent_ids for s in specs}
    children: dict[str, list[str]] = {s.id: [] for s in specs}
    for s in specs:
        for p in s.cpt.parent_ids:
            children[p].append(s.id)

    # Kahn's algorithm; ties resolved by declaration order for stable output
    position = {s.id: i for i, s in enumerate(specs)}
    indegree = {s.id: len(s.cpt.parent_ids) for s in specs}
    ready = [(position[n], n) for n, d in indegree.items() if d == 0]
    heapq.heapify(ready)
    topo: list[str] = []
    while ready:
        _, n = heapq.heappop(ready)
        topo.append(n)
        for c in children[n]:
            indegree[c] -= 1
            if indegree[c] == 0:
                heapq.heappush(ready, (position[c], c))
    if len(topo) != len(specs):
        cycle = _find_cycle(set(parents) - set(topo), parents)
        raise CycleDetected(
            f"cycle detected: {' <- '.join(cycle)}", node=cycle[0], cycle=cycle
        )

    frozen_children = {k: tuple(v) for k, v in children.items()}
    return BayesianNetwork(specs, frozen_children, tuple(topo))


def check_assignment(net: BayesianNetwork, assignment: Mapping[str, int]) -> None:
    for node_id, state in assignment.items():
        if node_id not in net:
            raise UnknownNode(f"unknown node {node_id!r}", node=node_id)
        if state not in (0, 1):
            raise InvalidState(f"{node_id}: state must be 0 or 1, got {state!r}")


def joint_probability(net: BayesianNetwork, assignment: Mapping[str, int]) -> float:
    """Product of P(x_i | pa(x_i)) for a full assignment."""
    check_assignment(net, assignment)
    missing = [n for n in net.ids if n not in assignment]
    if missing:
        raise IncompleteAssignment(
            f"assignment is missing {', '.join(missing)}", missing=missing
        )
    p = 1.0
    for spec in net.nodes:
        states = [assignment[q] for q in spec.cpt.parent_ids]
        p *= spec.cpt.prob(assignment[spec.id], states)
    return p
