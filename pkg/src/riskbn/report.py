"""Deterministic text rendering of query results.

Every probability is printed with four decimals and a '.' separator, rows
end in LF, and JSON keys keep a fixed order, so output for a given model is
byte-identical across runs.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

from riskbn.causal import InterventionReport
from riskbn.errors import UnsupportedFormat
from riskbn.inference import Distribution, InferenceMode, marginals_all
from riskbn.network import BayesianNetwork
from riskbn.sensitivity import SensitivityReport

FORMATS = ("md", "csv", "json")
DIVERGENCE_THRESHOLD = 1e-6


def fmt(p: float) -> str:
    return f"{round(p, 4) + 0.0:.4f}"


def fmt_signed(p: float) -> str:
    return f"{round(p, 4) + 0.0:+.4f}"


def _num(p: float) -> float:
    return round(p, 4) + 0.0


def _markdown(header: list[str], rows: list[list[str]]) -> str:
    lines = ["| " + " | ".join(header) + " |", "|" + "|".join("---" for _ in header) + "|"]
    lines += ["| " + " | ".join(r) + " |" for r in rows]
    return "\n".join(lines) + "\n"


def _csv(header: list[str], rows: list[list[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _check(format: str) -> None:
    if format not in FORMATS:
        raise UnsupportedFormat(
            f"unsupported format {format!r}; choose from {', '.join(FORMATS)}"
        )


def role(net: BayesianNetwork, node_id: str) -> str:
    return "root" if net.node(node_id).is_root else "intermediate"


# -- distributions and marginals ---------------------------------------------


def render_distribution(dist: Distribution) -> str:
    return f"p_false={fmt(dist.p_false)}\tp_true={fmt(dist.p_true)}\n"


def divergence_notes(net: BayesianNetwork) -> list[str]:
    """Nodes where forward propagation departs from exact inference."""
    forward = marginals_all(net, InferenceMode.FORWARD_PROPAGATION)
    exact = marginals_all(net, InferenceMode.VARIABLE_ELIMINATION)
    notes = []
    for node_id in net.ids:
        f, e = forward[node_id].p_true, exact[node_id].p_true
        if abs(f - e) > DIVERGENCE_THRESHOLD:
            notes.append(
                f"{node_id}: forward propagation {fmt(f)} vs exact {fmt(e)} "
                f"(parents share an ancestor, so the independence assumption is approximate)"
            )
    return notes


@dataclass(frozen=True)
class MarginalsTable:
    mode: str
    rows: tuple[tuple[str, str, float], ...]
    notes: tuple[str, ...] = ()


def marginals_table(net: BayesianNetwork, mode: InferenceMode | str = "ve") -> MarginalsTable:
    mode = InferenceMode(mode)
    dists = marginals_all(net, mode)
    rows = tuple((n, role(net, n), dists[n].p_true) for n in net.topological_order)
    return MarginalsTable(mode.value, rows, tuple(divergence_notes(net)))


def render_marginals(table: MarginalsTable, format: str = "md") -> str:
    _check(format)
    if format == "json":
        return _json(
            {
                "mode": table.mode,
                "marginals": [
                    {"node": n, "role": r, "p_false": _num(1.0 - p), "p_true": _num(p)}
                    for n, r, p in table.rows
                ],
                "notes": list(table.notes),
            }
        )
    header = ["node", "role", "P(False)", "P(True)"]
    rows = [[n, r, fmt(1.0 - p), fmt(p)] for n, r, p in table.rows]
    if format == "csv":
        return _csv(header, rows)
    out = f"Marginals ({table.mode})\n\n" + _markdown(header, rows)
    if table.notes:
        out += "\n" + "".join(f"note: {n}\n" for n in table.notes)
    return out


# -- interventions -----------------------------------------------------------

_IV_HEADER = ["node", "posterior", "do-result", "baseline Δ", "paper Δ"]


def render_interventions(report: InterventionReport, format: str = "md") -> str:
    _check(format)
    if format == "json":
        return _json(
            {
                "target": report.target,
                "baseline": _num(report.baseline),
                "engine": report.engine,
                "rows": [
                    {
                        "node": r.node,
                        "posterior": _num(r.posterior_p_true),
                        "do_result": _num(r.do_result),
                        "baseline_delta": _num(r.baseline_delta),
                        "paper_delta": _num(r.paper_delta),
                    }
                    for r in report.rows
                ],
            }
        )
    rows = [
        [r.node, fmt(r.posterior_p_true), fmt(r.do_result), fmt_signed(r.baseline_delta),
         fmt_signed(r.paper_delta)]
        for r in report.rows
    ]
    if format == "csv":
        return _csv(_IV_HEADER, rows)
    return (
        f"Interventions do(X=1) on target {report.target}\n"
        f"baseline P({report.target}=1) = {fmt(report.baseline)}\n\n"
        + _markdown(_IV_HEADER, rows)
        + f"\nengine: {report.engine}; baseline Δ = do-result - baseline, "
        "paper Δ = do-result - posterior of the intervened node\n"
    )


# -- sensitivity -------------------------------------------------------------


def chart_data(report: SensitivityReport) -> list[dict]:
    return [{"label": n, "value": _num(v), "role": r} for n, v, r in report.chart_data]


def render_sensitivity(report: SensitivityReport, format: str = "md") -> str:
    _check(format)
    if format == "json":
        return _json(chart_data(report))
    if format == "csv":
        return _csv(
            ["label", "value", "role"],
            [[n, fmt(v), r] for n, v, r in report.chart_data],
        )
    rows = [
        [str(i), s.node, s.kind.value, fmt_signed(s.score)]
        for i, s in enumerate(report.scores, 1)
    ]
    return (
        f"Sensitivity of P({report.target}=1), delta = {report.delta:g}\n"
        f"baseline = {fmt(report.baseline)}\n\n"
        + _markdown(["rank", "node", "role", "score"], rows)
        + f"\nengine: {report.engine}\n"
    )


# -- graph -------------------------------------------------------------------


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def render_dot(net: BayesianNetwork, name: str = "riskbn") -> str:
    lines = [f"digraph {_dot_quote(name)} {{", "  rankdir=BT;"]
    for n in net.nodes:
        shape = "ellipse" if n.is_root else "box"
        lines.append(f"  {_dot_quote(n.id)} [label={_dot_quote(n.id)}, shape={shape}];")
    for a, b in net.edges():
        lines.append(f"  {_dot_quote(a)} -> {_dot_quote(b)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- bundle ------------------------------------------------------------------


@dataclass(frozen=True)
class ReportBundle:
    marginals: MarginalsTable | None = None
    interventions: InterventionReport | None = None
    sensitivity: SensitivityReport | None = None
    notes: tuple[str, ...] = field(default=())


def render_report(bundle: ReportBundle, format: str = "md") -> str:
    """Render every section present in ``bundle``.

    ``md`` and ``csv`` concatenate the sections; ``json`` emits one object.
    """
    _check(format)
    if format == "json":
        obj: dict = {}
        if bundle.marginals:
            obj["marginals"] = json.loads(render_marginals(bundle.marginals, "json"))
        if bundle.interventions:
            obj["interventions"] = json.loads(render_interventions(bundle.interventions, "json"))
        if bundle.sensitivity:
            obj["sensitivity"] = chart_data(bundle.sensitivity)
        obj["notes"] = list(bundle.notes)
        return _json(obj)
    parts = []
    if bundle.marginals:
        parts.append(render_marginals(bundle.marginals, format))
    if bundle.interventions:
        parts.append(render_interventions(bundle.interventions, format))
    if bundle.sensitivity:
        parts.append(render_sensitivity(bundle.sensitivity, format))
    if bundle.notes and format == "md":
        parts.append("".join(f"note: {n}\n" for n in bundle.notes))
    return "\n".join(parts)
