"""JSON model documents.

Layout::

    {
      "name": "ivi",
      "nodes": [
        {"id": "A", "parents": [], "cpt_rows": [["0.33", "0.67"]], "metadata": {}},
        ...
      ]
    }

Probabilities are written as shortest round-trip decimal strings, so
``load(save(net)) == net`` bit for bit.  Plain JSON numbers are accepted on
load.
"""

from __future__ import annotations

import json
import os
from typing import Any, Mapping

from riskbn.errors import DocumentParseError, ModelIOError, NetworkError
from riskbn.network import BayesianNetwork, Cpt, NodeSpec, build_network


def _prob_text(p: float) -> str:
    return repr(float(p))


def network_to_document(net: BayesianNetwork, name: str = "model") -> dict[str, Any]:
    return {
        "name": name,
        "nodes": [
            {
                "id": n.id,
                "parents": list(n.cpt.parent_ids),
                "cpt_rows": [[_prob_text(pf), _prob_text(pt)] for pf, pt in n.cpt.rows],
                "metadata": dict(n.metadata),
            }
            for n in net.nodes
        ],
    }


def _parse_prob(value: Any, where: str) -> float:
    if isinstance(value, bool):
        raise DocumentParseError(f"{where}: expected a probability, got {value!r}")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        try:
            return float(value)
        except ValueError:
            pass
    raise DocumentParseError(f"{where}: expected a probability, got {value!r}")


def document_to_network(doc: Mapping[str, Any]) -> BayesianNetwork:
    if not isinstance(doc, Mapping):
        raise DocumentParseError("model document must be a JSON object")
    nodes = doc.get("nodes")
    if not isinstance(nodes, list):
        raise DocumentParseError("model document needs a 'nodes' list")
    specs = []
    for i, raw in enumerate(nodes):
        where = f"nodes[{i}]"
        if not isinstance(raw, Mapping):
            raise DocumentParseError(f"{where}: expected an object")
        node_id = raw.get("id")
        if not isinstance(node_id, str):
            raise DocumentParseError(f"{where}.id: expected a string")
        where = f"nodes[{i}] ({node_id})"
        parents = raw.get("parents", [])
        if not isinstance(parents, list) or not all(isinstance(p, str) for p in parents):
            raise DocumentParseError(f"{where}.parents: expected a list of ids")
        rows_raw = raw.get("cpt_rows")
        if not isinstance(rows_raw, list):
            raise DocumentParseError(f"{where}.cpt_rows: expected a list")
        rows = []
        for j, row in enumerate(rows_raw):
            if not isinstance(row, list) or len(row) != 2:
                raise DocumentParseError(f"{where}.cpt_rows[{j}]: expected [p_false, p_true]")
            rows.append(
                (
                    _parse_prob(row[0], f"{where}.cpt_rows[{j}][0]"),
                    _parse_prob(row[1], f"{where}.cpt_rows[{j}][1]"),
                )
            )
        metadata = raw.get("metadata", {})
        if not isinstance(metadata, Mapping) or not all(
            isinstance(k, str) and isinstance(v, str) for k, v in metadata.items()
        ):
            raise DocumentParseError(f"{where}.metadata: expected string key/value pairs")
        specs.append(NodeSpec(node_id, Cpt(tuple(parents), tuple(rows)), dict(metadata)))
    return build_network(specs)


def dumps_model(net: BayesianNetwork, name: str = "model") -> str:
    return json.dumps(network_to_document(net, name), indent=2) + "\n"


def loads_model(text: str, source: str = "<string>") -> BayesianNetwork:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentParseError(
            f"{source}: line {e.lineno}, column {e.colno}: {e.msg}",
            line=e.lineno,
            column=e.colno,
        ) from e
    try:
        return document_to_network(doc)
    except (DocumentParseError, NetworkError) as e:
        raise e.with_prefix(source) from e


def load_model(path: str | os.PathLike) -> BayesianNetwork:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise ModelIOError(f"cannot read {path}: {e.strerror or e}", path=str(path)) from e
    return loads_model(text, str(path))


def save_model(net: BayesianNetwork, path: str | os.PathLike, name: str | None = None) -> None:
    if name is None:
        name = os.path.basename(os.fspath(path)).split(".")[0] or "model"
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(dumps_model(net, name))
    except OSError as e:
        raise ModelIOError(f"cannot write {path}: {e.strerror or e}", path=str(path)) from e


def parse_assignment(text: str) -> dict[str, int]:
    """``"A=1,B=0"`` -> ``{"A": 1, "B": 0}``."""
    out: dict[str, int] = {}
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        key, sep, value = item.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key or value not in ("0", "1"):
            raise ValueError(f"bad assignment {item!r}; expected ID=0 or ID=1")
        if key in out:
            raise ValueError(f"{key!r} assigned twice")
        out[key] = int(value)
    return out
