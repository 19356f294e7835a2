"""Hypothesis strategies for random binary networks."""

from hypothesis import strategies as st

from riskbn.network import Cpt, NodeSpec, build_network

probs = st.floats(min_value=0.02, max_value=0.98, allow_nan=False)


@st.composite
def networks(draw, min_nodes=1, max_nodes=12, max_parents=3):
    n = draw(st.integers(min_nodes, max_nodes))
    ids = [f"N{i}" for i in range(n)]
    specs = []
    for i, node in enumerate(ids):
        k = draw(st.integers(0, min(i, max_parents)))
        parents = draw(st.permutations(ids[:i]))[:k]
        rows = [draw(probs) for _ in range(2**k)]
        specs.append(NodeSpec(node, Cpt.from_p_true(parents, rows)))
    # shuffle declaration order so nothing relies on it being topological
    return build_network(draw(st.permutations(specs)))


@st.composite
def polytrees(draw, min_nodes=2, max_nodes=12):
    n = draw(st.integers(min_nodes, max_nodes))
    ids = [f"P{i}" for i in range(n)]
    parents = {node: [] for node in ids}
    for i in range(1, n):
        j = draw(st.integers(0, i - 1))
        if draw(st.booleans()):
            parents[ids[i]].append(ids[j])
        else:
            parents[ids[j]].append(ids[i])
    specs = [
        NodeSpec(node, Cpt.from_p_true(parents[node], [draw(probs) for _ in range(2 ** len(parents[node]))]))
        for node in ids
    ]
    return build_network(specs)


@st.composite
def network_with_evidence(draw, max_evidence=3):
    net = draw(networks())
    target = draw(st.sampled_from(net.ids))
    others = [n for n in net.ids if n != target]
    k = draw(st.integers(0, min(max_evidence, len(others))))
    chosen = draw(st.permutations(others))[:k]
    evidence = {node: draw(st.integers(0, 1)) for node in chosen}
    return net, target, evidence
