import json

import pytest
from hypothesis import given, settings

from models.errors import SchemaError
from models.summary import (
    HIDDEN_EVENT,
    Pattern,
    Summary,
    SummaryEdge,
    SummaryKind,
    SummaryMeta,
    SummaryNode,
    deserialize,
    find_hidden_root,
    node_count,
    serialize,
    validate,
)
from mining.coreflow import mine_coreflow
from mining.sententree import mine_sententree
from mining.synopsis import mine_synopsis
from tests.strategies import datasets

META = SummaryMeta("coreflow", 0.5, "fixture", ("A", "B", "C"))


def small_tree() -> Summary:
    return Summary(
        kind=SummaryKind.TREE,
        nodes=(
            SummaryNode(0, HIDDEN_EVENT, 3, 0.0, hidden=True),
            SummaryNode(1, 0, 3, 0.0),
            SummaryNode(2, 1, 2, 1.0),
        ),
        edges=(SummaryEdge(0, 1, 3), SummaryEdge(1, 2, 2)),
        meta=META,
    )


def test_empty_summary_is_valid():
    for kind in SummaryKind:
        assert validate(Summary(kind=kind)) == (True, [])


def test_dag_cycle_is_reported():
    s = Summary(
        kind=SummaryKind.DAG,
        nodes=(SummaryNode(0, 0, 2, 0.0), SummaryNode(1, 1, 2, 1.0)),
        edges=(SummaryEdge(0, 1, 2), SummaryEdge(1, 0, 2)),
    )
    ok, violations = validate(s)
    assert not ok
    assert any(v.startswith("cycle") for v in violations)


def test_tree_rules():
    assert validate(small_tree())[0]

    two_parents = Summary(
        kind=SummaryKind.TREE,
        nodes=small_tree().nodes + (SummaryNode(3, 2, 1, 1.0),),
        edges=small_tree().edges + (SummaryEdge(0, 3, 1), SummaryEdge(2, 3, 1)),
    )
    ok, violations = validate(two_parents)
    assert not ok and any("parents" in v for v in violations)

    overfull = Summary(
        kind=SummaryKind.TREE,
        nodes=(
            SummaryNode(0, HIDDEN_EVENT, 3, 0.0, hidden=True),
            SummaryNode(1, 0, 2, 0.0),
            SummaryNode(2, 1, 2, 0.0),
        ),
        edges=(SummaryEdge(0, 1, 2), SummaryEdge(0, 2, 2)),
    )
    ok, violations = validate(overfull)
    assert not ok and any("exceed" in v for v in violations)


def test_edge_rules():
    s = Summary(
        kind=SummaryKind.DAG,
        nodes=(SummaryNode(0, 0, 2, 0.0), SummaryNode(1, 1, 1, 1.0)),
        edges=(SummaryEdge(0, 1, 2), SummaryEdge(1, 1, 1), SummaryEdge(0, 7, 1)),
    )
    ok, violations = validate(s)
    assert not ok
    assert any("unknown node" in v for v in violations)


def test_node_rules():
    s = Summary(kind=SummaryKind.DAG, nodes=(SummaryNode(0, 0, 0, -1.0),))
    ok, violations = validate(s)
    assert not ok
    assert len(violations) == 2


def test_linear_set_rules():
    nodes = (SummaryNode(0, 0, 2, 0.0), SummaryNode(1, 1, 2, 1.0), SummaryNode(2, 0, 1, 0.0))
    good = Summary(
        kind=SummaryKind.LINEAR_SET,
        nodes=nodes,
        edges=(SummaryEdge(0, 1, 2),),
        patterns=(Pattern((0, 1), 2), Pattern((2,), 1)),
    )
    assert validate(good)[0]

    cross = Summary(
        kind=SummaryKind.LINEAR_SET,
        nodes=nodes,
        edges=(SummaryEdge(1, 2, 1),),
        patterns=(Pattern((0, 1), 2), Pattern((2,), 1)),
    )
    assert not validate(cross)[0]

    orphan = Summary(kind=SummaryKind.LINEAR_SET, nodes=nodes, patterns=(Pattern((0, 1), 2),))
    assert not validate(orphan)[0]


def test_round_trip_and_determinism():
    s = small_tree()
    data = serialize(s)

    assert deserialize(data) == s
    assert serialize(deserialize(data)) == data
    assert serialize(s) == data


def test_canonical_order():
    s = Summary(
        kind=SummaryKind.DAG,
        nodes=(SummaryNode(1, 1, 1, 1.0), SummaryNode(0, 0, 1, 0.0)),
        edges=(SummaryEdge(0, 1, 1),),
    )
    raw = json.loads(serialize(s))
    assert [n["id"] for n in raw["nodes"]] == [0, 1]
    assert list(raw) == sorted(raw)


def test_hand_written_fixture():
    text = json.dumps({
        "kind": "Tree",
        "meta": {"technique": "coreflow", "granularity": 0.5, "dataset": "hand", "labels": ["A", "B"]},
        "nodes": [
            {"id": 0, "event": -1, "support": 4, "avgIndex": 0, "hidden": True},
            {"id": 1, "event": 0, "support": 4, "avgIndex": 0.25},
            {"id": 2, "event": 1, "support": 2, "avgIndex": 1.5},
        ],
        "edges": [{"source": 0, "target": 1, "support": 4}, {"source": 1, "target": 2, "support": 2}],
    })
    s = deserialize(text.encode("utf-8"))

    assert len(s.nodes) == 3 and len(s.edges) == 2
    assert node_count(s) == 2
    assert find_hidden_root(s).node_id == 0
    assert s.label(1) == "B"
    assert s.patterns == ()


@pytest.mark.parametrize(
    "payload",
    [
        b"not json",
        b'{"kind": "Tree"}',
        b'{"kind": "Ring", "meta": {"technique": "x", "granularity": 1, "dataset": "d"}, "nodes": [], "edges": []}',
        b'{"kind": "DAG", "meta": {"technique": "x", "granularity": 1, "dataset": "d"}, "nodes": [{"id": 0}], "edges": []}',
        b'{"kind": "DAG", "meta": {"technique": "x", "granularity": 1, "dataset": "d"}, "nodes": {}, "edges": []}',
        b'{"kind": "LinearSet", "meta": {"technique": "x", "granularity": 1, "dataset": "d"}, "nodes": [], "edges": [], "patterns": null}',
        b'{"kind": "LinearSet", "meta": {"technique": "x", "granularity": 1, "dataset": "d"}, "nodes": [], "edges": [], "patterns": [{"nodes": 3, "clusterSize": 1}]}',
    ],
)
def test_schema_errors(payload):
    with pytest.raises(SchemaError):
        deserialize(payload)


@settings(max_examples=200, deadline=None)
@given(datasets(max_sequences=6, max_events=4, max_len=5))
def test_every_miner_output_is_valid(d):
    for s in (
        mine_coreflow(d, 0.3),
        mine_sententree(d, 0.3, node_cap=None),
        mine_synopsis(d, 0.5),
    ):
        ok, violations = validate(s)
        assert ok, violations
        assert all(n.support <= len(d) for n in s.nodes)
        assert deserialize(serialize(s)) == s
