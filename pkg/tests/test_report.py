import csv
import io
import json

import pytest

from riskbn.causal import intervention_sweep
from riskbn.errors import UnsupportedFormat
from riskbn.fixtures import SYSTEM_COMPROMISE
from riskbn.inference import Distribution
from riskbn.report import (
    ReportBundle,
    chart_data,
    divergence_notes,
    fmt,
    fmt_signed,
    marginals_table,
    render_distribution,
    render_dot,
    render_interventions,
    render_marginals,
    render_report,
    render_sensitivity,
)
from riskbn.sensitivity import SensitivityConfig, sensitivity_sweep


@pytest.fixture(scope="module")
def sweep(ivi):
    return intervention_sweep(ivi, SYSTEM_COMPROMISE)


@pytest.fixture(scope="module")
def sens(ivi):
    return sensitivity_sweep(ivi, SensitivityConfig(SYSTEM_COMPROMISE))


def test_four_decimals():
    assert fmt(0.93475406) == "0.9348"
    assert fmt(-0.00001) == "0.0000"
    assert fmt_signed(0.32681) == "+0.3268"
    assert fmt_signed(-0.00001) == "+0.0000"


def test_distribution_line():
    text = render_distribution(Distribution(0.0652, 0.9348))
    assert text == "p_false=0.0652\tp_true=0.9348\n"
    assert text.count("\n") == 1


def test_intervention_markdown(sweep):
    text = render_interventions(sweep, "md")
    table = [l for l in text.splitlines() if l.startswith("| ")]
    assert table[0] == "| node | posterior | do-result | baseline Δ | paper Δ |"
    assert len(table) - 1 == 17
    assert "| CAN_Control | 0.6443 | 0.9711 | +0.0363 | +0.3268 |" in table


def test_intervention_csv_parses(sweep):
    rows = list(csv.reader(io.StringIO(render_interventions(sweep, "csv"))))
    assert rows[0] == ["node", "posterior", "do-result", "baseline Δ", "paper Δ"]
    assert len(rows) == 18


def test_chart_data_sorted_with_roles(sens):
    data = json.loads(render_sensitivity(sens, "json"))
    assert data == chart_data(sens)
    assert [d["value"] for d in data] == sorted((d["value"] for d in data), reverse=True)
    assert {d["role"] for d in data} == {"root", "intermediate"}
    assert set(data[0]) == {"label", "value", "role"}


def test_divergence_note_only_for_system_compromise(ivi):
    notes = divergence_notes(ivi)
    assert len(notes) == 1
    assert notes[0].startswith(f"{SYSTEM_COMPROMISE}: forward propagation 0.9359 vs exact 0.9348")


def test_marginals_markdown_has_note(ivi):
    text = render_marginals(marginals_table(ivi, "forward"))
    assert "| CAN_Control | intermediate | 0.3557 | 0.6443 |" in text
    assert "note: Safety_Critical_System_Compromise" in text


def test_unsupported_format(sweep):
    with pytest.raises(UnsupportedFormat):
        render_interventions(sweep, "xml")


def test_dot_lists_every_edge(ivi):
    text = render_dot(ivi)
    assert text.startswith('digraph "riskbn" {')
    assert text.count(" -> ") == len(ivi.edges())


def test_bundle_rendering_is_deterministic(ivi, sweep, sens):
    bundle = ReportBundle(marginals_table(ivi), sweep, sens, ("fixture",))
    for format in ("md", "csv", "json"):
        assert render_report(bundle, format) == render_report(bundle, format)
    obj = json.loads(render_report(bundle, "json"))
    assert set(obj) == {"marginals", "interventions", "sensitivity", "notes"}
    assert "\r" not in render_report(bundle, "md")
