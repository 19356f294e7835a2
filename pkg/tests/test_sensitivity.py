import pytest

from riskbn.errors import BadRowIndex, NotARoot, NotIntermediate
from riskbn.fixtures import (
    D_5,
    DISRUPT,
    I_17,
    I_33,
    INITIAL_RECON,
    ROOTS,
    S_1,
    SYSTEM_COMPROMISE,
    T_2,
    T_26,
    T_34,
)
from riskbn.inference import query_ve
from riskbn.network import Cpt, NodeSpec, build_network
from riskbn.sensitivity import (
    NodeRole,
    SensitivityConfig,
    perturb_cpt_row,
    perturb_prior,
    sensitivity_sweep,
)

CFG = SensitivityConfig(SYSTEM_COMPROMISE)


@pytest.fixture(scope="module")
def report(ivi):
    return sensitivity_sweep(ivi, CFG)


def _differences(a, b):
    out = []
    for node in a.ids:
        for i, (ra, rb) in enumerate(zip(a.cpt(node).rows, b.cpt(node).rows)):
            if ra != rb:
                out.append((node, i, rb[1] - ra[1]))
    return out


def test_perturb_prior_arithmetic():
    net = build_network([NodeSpec("A", Cpt.prior(0.67))])
    assert perturb_prior(net, "A", CFG).cpt("A").rows[0] == pytest.approx((0.23, 0.77))


def test_perturb_prior_cap():
    net = build_network([NodeSpec("A", Cpt.prior(0.95))])
    assert perturb_prior(net, "A", CFG).cpt("A").rows[0] == pytest.approx((0.01, 0.99))


def test_perturb_prior_not_root(ivi):
    with pytest.raises(NotARoot):
        perturb_prior(ivi, S_1, CFG)


def test_perturb_row_clamped_and_plain():
    net = build_network(
        [NodeSpec("A", Cpt.prior(0.5)), NodeSpec("B", Cpt.from_p_true(["A"], [0.2, 0.9]))]
    )
    assert perturb_cpt_row(net, "B", 1, CFG).cpt("B").rows[1] == pytest.approx((0.01, 0.99))
    assert perturb_cpt_row(net, "B", 0, CFG).cpt("B").rows[0] == pytest.approx((0.7, 0.3))


def test_perturb_initial_recon_row(ivi):
    out = perturb_cpt_row(ivi, INITIAL_RECON, 0, CFG)
    assert out.cpt(INITIAL_RECON).rows[0] == pytest.approx((0.8, 0.2))
    assert out.cpt(INITIAL_RECON).rows[1:] == ivi.cpt(INITIAL_RECON).rows[1:]


def test_perturb_row_errors(ivi):
    with pytest.raises(BadRowIndex):
        perturb_cpt_row(ivi, INITIAL_RECON, 4, CFG)
    with pytest.raises(NotIntermediate):
        perturb_cpt_row(ivi, T_26, 0, CFG)


@pytest.mark.parametrize("bad", [dict(delta=0.0), dict(delta=1.0), dict(prior_cap=1.0), dict(cpt_bounds=(0.0, 0.99))])
def test_config_validation(bad):
    with pytest.raises(ValueError):
        SensitivityConfig(SYSTEM_COMPROMISE, **bad)


def test_single_change_per_perturbation(ivi):
    for root in ROOTS:
        diff = _differences(ivi, perturb_prior(ivi, root, CFG))
        assert len(diff) == 1 and 0 < diff[0][2] <= CFG.delta + 1e-12
    for node in ivi.intermediates():
        for i in range(len(ivi.cpt(node).rows)):
            diff = _differences(ivi, perturb_cpt_row(ivi, node, i, CFG))
            assert len(diff) <= 1
            if diff:
                assert diff[0][:2] == (node, i) and diff[0][2] <= CFG.delta + 1e-12


def test_root_score_is_exact_recompute(ivi, report):
    expected = query_ve(perturb_prior(ivi, T_2, CFG), SYSTEM_COMPROMISE).p_true - query_ve(
        ivi, SYSTEM_COMPROMISE
    ).p_true
    assert report.score(T_2).score == pytest.approx(expected, abs=1e-15)


def test_intermediate_score_is_row_mean(report):
    s = report.score(INITIAL_RECON)
    assert len(s.row_deltas) == 4
    assert s.score == pytest.approx(sum(s.row_deltas) / 4, abs=1e-15)


def test_report_shape(ivi, report):
    assert len(report.scores) == len(ivi)
    values = [s.score for s in report.scores]
    assert values == sorted(values, reverse=True)
    for s in report.scores:
        expected = NodeRole.ROOT_PRIOR if ivi.node(s.node).is_root else NodeRole.INTERMEDIATE_CPT
        assert s.kind is expected
    assert [c[0] for c in report.chart_data] == [s.node for s in report.scores]
    assert report.score(SYSTEM_COMPROMISE).kind is NodeRole.INTERMEDIATE_CPT


def test_top_roots(report):
    assert set(report.ranked(NodeRole.ROOT_PRIOR)[:3]) == {T_2, I_33, T_34}


def test_weak_intermediates(report):
    ranked = report.ranked(NodeRole.INTERMEDIATE_CPT)
    for weak in (S_1, D_5):
        for strong in (INITIAL_RECON, DISRUPT):
            assert ranked.index(weak) > ranked.index(strong)


def test_scores_non_negative(report):
    assert all(s.score >= 0 for s in report.scores)
    assert all(d >= 0 for s in report.scores for d in s.row_deltas)


def test_order_independent(ivi, report):
    shuffled = build_network(list(reversed(ivi.nodes)))
    again = sensitivity_sweep(shuffled, CFG)
    for s in report.scores:
        assert again.score(s.node).score == pytest.approx(s.score, abs=1e-12)


def test_sweep_leaves_network_untouched(ivi):
    before = {n: ivi.cpt(n) for n in ivi.ids}
    sensitivity_sweep(ivi, CFG)
    assert {n: ivi.cpt(n) for n in ivi.ids} == before


def test_local_linearity(ivi):
    # every root stays below the cap at +0.1, so the half-delta score is half
    full = sensitivity_sweep(ivi, CFG)
    half = sensitivity_sweep(ivi, SensitivityConfig(SYSTEM_COMPROMISE, delta=0.05))
    for root in ROOTS:
        ratio = half.score(root).score / full.score(root).score
        assert 0.3 <= ratio <= 0.7
    # unclamped CPT rows: I_17 rows are 0.08, 0.70, 0.25 (row 3 = 0.90 clamps)
    for i in range(3):
        ratio = half.score(I_17).row_deltas[i] / full.score(I_17).row_deltas[i]
        assert 0.3 <= ratio <= 0.7


def test_forward_mode_available(ivi):
    fwd = sensitivity_sweep(ivi, SensitivityConfig(SYSTEM_COMPROMISE, mode="forward"))
    assert fwd.engine == "forward"
    assert fwd.baseline == pytest.approx(0.9359, abs=5e-4)
