import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from riskbn.causal import causal_effect, intervention_sweep, mutilate
from riskbn.errors import TargetInEvidence, UnknownNode
from riskbn.fixtures import (
    CAN_CONTROL,
    D_5,
    I_33,
    INITIAL_RECON,
    PUBLISHED_INTERVENTIONS,
    S_1,
    SYSTEM_COMPROMISE,
    T_2,
    T_26,
    T_34,
)
from riskbn.inference import query_enumeration, query_ve
from riskbn.network import Cpt, NodeSpec, build_network
from strategies import networks


def test_mutilate_root(ivi):
    cut = mutilate(ivi, {T_26: 1})
    assert cut.parents(T_26) == ()
    assert cut.cpt(T_26).rows == ((0.0, 1.0),)
    assert cut.edges() == ivi.edges()


def test_mutilate_can_control(ivi):
    cut = mutilate(ivi, {CAN_CONTROL: 1})
    assert cut.parents(CAN_CONTROL) == ()
    assert cut.cpt(CAN_CONTROL) == Cpt((), ((0.0, 1.0),))
    assert len(cut) == len(ivi)
    assert len(cut.edges()) == len(ivi.edges()) - 3
    # everything else untouched
    for node in ivi.ids:
        if node != CAN_CONTROL:
            assert cut.node(node) == ivi.node(node)
    # original left alone
    assert ivi.parents(CAN_CONTROL) == (I_33, S_1, T_34)


def test_mutilate_multi_node(ivi):
    cut = mutilate(ivi, {CAN_CONTROL: 0, D_5: 1})
    assert cut.cpt(CAN_CONTROL).rows == ((1.0, 0.0),)
    assert cut.cpt(D_5).rows == ((0.0, 1.0),)


def test_mutilate_unknown(ivi):
    with pytest.raises(UnknownNode):
        mutilate(ivi, {"Nope": 1})


def test_causal_effect_target_excluded(ivi):
    with pytest.raises(TargetInEvidence):
        causal_effect(ivi, SYSTEM_COMPROMISE, {SYSTEM_COMPROMISE: 1})


@pytest.mark.parametrize(
    "node, expected", [(CAN_CONTROL, 0.9711), (T_2, 0.9505), (T_26, 0.9400)]
)
def test_causal_effect_published_anchors(ivi, node, expected):
    assert causal_effect(ivi, SYSTEM_COMPROMISE, {node: 1}) == pytest.approx(expected, abs=0.02)


def test_causal_effect_enumeration_cross_check(ivi):
    for node in (CAN_CONTROL, INITIAL_RECON, T_2):
        cut = mutilate(ivi, {node: 1})
        assert causal_effect(ivi, SYSTEM_COMPROMISE, {node: 1}) == pytest.approx(
            query_enumeration(cut, SYSTEM_COMPROMISE).p_true, abs=1e-9
        )


def test_intervention_differs_from_observation_on_intermediate(ivi):
    # observing CAN_Control also raises belief in T_2, which feeds Disrupt;
    # intervening does not
    observed = query_ve(ivi, SYSTEM_COMPROMISE, {CAN_CONTROL: 1}).p_true
    forced = causal_effect(ivi, SYSTEM_COMPROMISE, {CAN_CONTROL: 1})
    assert observed > forced + 1e-4


def test_root_do_zero_equals_conditioning(ivi):
    assert causal_effect(ivi, SYSTEM_COMPROMISE, {T_26: 0}) == pytest.approx(
        query_ve(ivi, SYSTEM_COMPROMISE, {T_26: 0}).p_true, abs=1e-12
    )


@settings(max_examples=60, deadline=None)
@given(networks(min_nodes=2), st.data())
def test_roots_intervention_equals_observation(net, data):
    roots = net.roots()
    root = data.draw(st.sampled_from(roots))
    target = data.draw(st.sampled_from([n for n in net.ids if n != root]))
    state = data.draw(st.integers(0, 1))
    assert abs(
        causal_effect(net, target, {root: state}) - query_ve(net, target, {root: state}).p_true
    ) <= 1e-9


@settings(max_examples=60, deadline=None)
@given(networks(), st.data())
def test_mutilated_networks_revalidate(net, data):
    chosen = data.draw(st.lists(st.sampled_from(net.ids), min_size=1, unique=True))
    cut = mutilate(net, {n: data.draw(st.integers(0, 1)) for n in chosen})
    for n in chosen:
        assert cut.parents(n) == ()


def test_sweep_shape(ivi):
    report = intervention_sweep(ivi, SYSTEM_COMPROMISE)
    assert len(report.rows) == 17
    assert {r.node for r in report.rows} == set(PUBLISHED_INTERVENTIONS)
    deltas = [r.baseline_delta for r in report.rows]
    assert deltas == sorted(deltas, reverse=True)
    assert report.baseline == pytest.approx(0.9348, abs=0.01)


def test_sweep_can_control_paper_delta(ivi):
    row = intervention_sweep(ivi, SYSTEM_COMPROMISE).row(CAN_CONTROL)
    assert row.paper_delta == pytest.approx(row.do_result - 0.6443, abs=5e-5)
    assert row.paper_delta == pytest.approx(0.3268, abs=0.02)


def test_sweep_all_rows_raise_risk(ivi):
    report = intervention_sweep(ivi, SYSTEM_COMPROMISE)
    for r in report.rows:
        assert r.do_result >= report.baseline
        assert 0.0 <= r.posterior_p_true <= 1.0


def test_sweep_independent_node():
    net = build_network(
        [
            NodeSpec("A", Cpt.prior(0.3)),
            NodeSpec("B", Cpt.from_p_true(["A"], [0.1, 0.8])),
            NodeSpec("X", Cpt.prior(0.6)),
        ]
    )
    report = intervention_sweep(net, "B")
    row = report.row("X")
    assert row.do_result == pytest.approx(report.baseline, abs=1e-12)
    assert row.baseline_delta == pytest.approx(0.0, abs=1e-12)
