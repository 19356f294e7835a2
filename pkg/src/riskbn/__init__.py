"""Bayesian-network threat modelling: attack trees, exact inference, do-interventions
and local sensitivity analysis."""

from riskbn.causal import InterventionReport, InterventionRow, causal_effect, intervention_sweep, mutilate
from riskbn.inference import (
    Distribution,
    InferenceMode,
    forward_propagate,
    marginals_all,
    query,
    query_enumeration,
    query_ve,
)
from riskbn.network import BayesianNetwork, Cpt, NodeSpec, build_network, cpt_row_index, joint_probability
from riskbn.sensitivity import SensitivityConfig, SensitivityReport, sensitivity_sweep
from riskbn.threat_model import (
    AttackTree,
    DreadScore,
    ThreatId,
    dread_likelihood,
    parse_attack_tree,
    parse_threat_id,
    transform_to_bn,
)

__version__ = "0.1.0"
