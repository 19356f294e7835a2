"""One-at-a-time local sensitivity of a target probability.

Root priors are raised by ``delta`` (capped at ``prior_cap``); every CPT row of
an intermediate node is raised by ``delta`` (clamped to ``cpt_bounds``) one
row at a time, and the node's score is the mean change over its rows.  Each
perturbation starts from the untouched network.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from riskbn.errors import BadRowIndex, NotARoot, NotIntermediate
from riskbn.inference import InferenceMode, query
from riskbn.network import BayesianNetwork, Cpt


@dataclass(frozen=True)
class SensitivityConfig:
    target: str
    delta: float = 0.1
    prior_cap: float = 0.99
    cpt_bounds: tuple[float, float] = (0.01, 0.99)
    mode: InferenceMode = InferenceMode.VARIABLE_ELIMINATION

    def __post_init__(self):
        if not 0.0 < self.delta < 1.0:
            raise ValueError(f"delta must lie in (0, 1), got {self.delta}")
        if not 0.0 < self.prior_cap < 1.0:
            raise ValueError(f"prior_cap must lie in (0, 1), got {self.prior_cap}")
        lo, hi = self.cpt_bounds
        if not 0.0 < lo <= hi < 1.0:
            raise ValueError(f"cpt_bounds must satisfy 0 < lo <= hi < 1, got {self.cpt_bounds}")
        object.__setattr__(self, "mode", InferenceMode(self.mode))


class NodeRole(str, enum.Enum):
    ROOT_PRIOR = "root"
    INTERMEDIATE_CPT = "intermediate"


@dataclass(frozen=True)
class SensitivityScore:
    node: str
    kind: NodeRole
    score: float
    row_deltas: tuple[float, ...] = ()


@dataclass(frozen=True)
class SensitivityReport:
    target: str
    baseline: float
    scores: tuple[SensitivityScore, ...]
    delta: float
    engine: str

    @property
    def chart_data(self) -> list[tuple[str, float, str]]:
        return [(s.node, s.score, s.kind.value) for s in self.scores]

    def score(self, node: str) -> SensitivityScore:
        for s in self.scores:
            if s.node == node:
                return s
        raise KeyError(node)

    def ranked(self, kind: NodeRole) -> list[str]:
        return [s.node for s in self.scores if s.kind is kind]


def perturb_prior(net: BayesianNetwork, root: str, cfg: SensitivityConfig) -> BayesianNetwork:
    cpt = net.cpt(root)
    if cpt.parent_ids:
        raise NotARoot(f"{root!r} has parents; perturb its CPT rows instead", node=root)
    p = min(cpt.rows[0][1] + cfg.delta, cfg.prior_cap)
    return net.replace(root, Cpt.prior(p))


def perturb_cpt_row(
    net: BayesianNetwork, node: str, row: int, cfg: SensitivityConfig
) -> BayesianNetwork:
    cpt = net.cpt(node)
    if not cpt.parent_ids:
        raise NotIntermediate(f"{node!r} is a root; perturb its prior instead", node=node)
    if not 0 <= row < len(cpt.rows):
        raise BadRowIndex(
            f"{node!r} has {len(cpt.rows)} CPT rows, got index {row}", node=node, row=row
        )
    lo, hi = cfg.cpt_bounds
    p = min(max(cpt.rows[row][1] + cfg.delta, lo), hi)
    return net.replace(node, cpt.with_row(row, p))


def sensitivity_sweep(net: BayesianNetwork, cfg: SensitivityConfig) -> SensitivityReport:
    def target_p(n: BayesianNetwork) -> float:
        return query(n, cfg.target, mode=cfg.mode).p_true

    baseline = target_p(net)
    scores = []
    for spec in net.nodes:
        if spec.is_root:
            diff = target_p(perturb_prior(net, spec.id, cfg)) - baseline
            scores.append(SensitivityScore(spec.id, NodeRole.ROOT_PRIOR, diff))
        else:
            deltas = tuple(
                target_p(perturb_cpt_row(net, spec.id, i, cfg)) - baseline
                for i in range(len(spec.cpt.rows))
            )
            scores.append(
                SensitivityScore(
                    spec.id, NodeRole.INTERMEDIATE_CPT, sum(deltas) / len(deltas), deltas
                )
            )
    scores.sort(key=lambda s: (-s.score, s.node))
    return SensitivityReport(cfg.target, baseline, tuple(scores), cfg.delta, cfg.mode.value)
