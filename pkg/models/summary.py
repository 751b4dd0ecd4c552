import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import networkx as nx

from models.errors import SchemaError
from pipeline.schema_checker import check_records, require_keys, require_list

# Event id of hidden structural nodes (virtual root / start node).
HIDDEN_EVENT = -1


class SummaryKind(str, Enum):
    LINEAR_SET = "LinearSet"
    TREE = "Tree"
    DAG = "DAG"


@dataclass(frozen=True)
class SummaryNode:
    node_id: int
    event: int
    support: int
    avg_index: float
    hidden: bool = False


@dataclass(frozen=True)
class SummaryEdge:
    source: int
    target: int
    support: int


@dataclass(frozen=True)
class Pattern:
    nodes: Tuple[int, ...]
    cluster_size: int


@dataclass(frozen=True)
class SummaryMeta:
    technique: str
    granularity: float
    dataset: str
    labels: Tuple[str, ...] = ()


@dataclass(frozen=True)
class Summary:
    """
    Technique-agnostic mining result.

    Tree: forest under one hidden virtual root. DAG: acyclic graph (with a
    hidden start node above pattern heads). LinearSet: one pattern per
    cluster, edges chain consecutive pattern members.

    Nodes are kept sorted by id and edges by (source, target) so equal
    summaries compare and serialize identically.
    """
    kind: SummaryKind
    nodes: Tuple[SummaryNode, ...] = ()
    edges: Tuple[SummaryEdge, ...] = ()
    patterns: Tuple[Pattern, ...] = ()
    meta: SummaryMeta = field(default_factory=lambda: SummaryMeta("", 0.0, ""))

    def __post_init__(self):
        object.__setattr__(self, "kind", SummaryKind(self.kind))
        object.__setattr__(self, "nodes", tuple(sorted(self.nodes, key=lambda n: n.node_id)))
        object.__setattr__(self, "edges", tuple(sorted(self.edges, key=lambda e: (e.source, e.target))))
        object.__setattr__(self, "patterns", tuple(self.patterns))

    def node_map(self) -> Dict[int, SummaryNode]:
        return {n.node_id: n for n in self.nodes}

    def visible_nodes(self) -> List[SummaryNode]:
        return [n for n in self.nodes if not n.hidden]

    def label(self, event: int) -> str:
        if event == HIDDEN_EVENT:
            return ""
        if 0 <= event < len(self.meta.labels):
            return self.meta.labels[event]
        return str(event)

    def children(self) -> Dict[int, List[int]]:
        out: Dict[int, List[int]] = {n.node_id: [] for n in self.nodes}
        for e in self.edges:
            out.setdefault(e.source, []).append(e.target)
        return out

    def edge_map(self) -> Dict[Tuple[int, int], SummaryEdge]:
        return {(e.source, e.target): e for e in self.edges}


def to_digraph(s: Summary) -> nx.DiGraph:
    g = nx.DiGraph()
    for n in s.nodes:
        g.add_node(n.node_id)
    for e in s.edges:
        g.add_edge(e.source, e.target, support=e.support)
    return g


# -------------------------------------------------
# VALIDATION
# -------------------------------------------------


def validate(s: Summary) -> Tuple[bool, List[str]]:
    """
    Check every structural rule of a summary.

    Returns (ok, violations); violations are data, never raised.
    """
    violations: List[str] = []
    nodes = s.node_map()

    if len(nodes) != len(s.nodes):
        violations.append("duplicate node id")

    for n in s.nodes:
        if not n.hidden and n.support < 1:
            violations.append(f"node {n.node_id}: support {n.support} < 1")
        if n.avg_index < 0:
            violations.append(f"node {n.node_id}: negative avgIndex")

    edge_ok = True
    for e in s.edges:
        if e.source not in nodes or e.target not in nodes:
            violations.append(f"edge {e.source}->{e.target}: unknown node")
            edge_ok = False
            continue
        if e.source == e.target:
            violations.append(f"edge {e.source}->{e.target}: self loop")
        if s.kind in (SummaryKind.TREE, SummaryKind.DAG):
            bound = min(nodes[e.source].support, nodes[e.target].support)
            if e.support > bound:
                violations.append(
                    f"edge {e.source}->{e.target}: support {e.support} exceeds endpoint support {bound}"
                )

    if not edge_ok:
        return False, violations

    if s.kind == SummaryKind.TREE:
        violations.extend(_validate_tree(s, nodes))
    elif s.kind == SummaryKind.DAG:
        violations.extend(_validate_dag(s))
    else:
        violations.extend(_validate_linear_set(s, nodes))

    return not violations, violations


def _validate_tree(s: Summary, nodes: Dict[int, SummaryNode]) -> List[str]:
    out = []
    if not s.nodes:
        return out

    parents: Dict[int, List[int]] = {nid: [] for nid in nodes}
    for e in s.edges:
        parents[e.target].append(e.source)

    roots = [nid for nid, ps in parents.items() if not ps]
    if len(roots) != 1:
        out.append(f"tree must have exactly one root, found {len(roots)}")
    elif not nodes[roots[0]].hidden:
        out.append(f"tree root {roots[0]} must be the hidden virtual root")

    for nid, ps in parents.items():
        if len(ps) > 1:
            out.append(f"node {nid}: {len(ps)} parents in a tree")

    if not nx.is_directed_acyclic_graph(to_digraph(s)):
        out.append("cycle")
        return out

    edges = s.edge_map()
    for nid, kids in s.children().items():
        total = sum(edges[(nid, k)].support for k in kids)
        if kids and total > nodes[nid].support:
            out.append(f"node {nid}: children supports {total} exceed node support {nodes[nid].support}")
    return out


def _validate_dag(s: Summary) -> List[str]:
    g = to_digraph(s)
    try:
        cycle = nx.find_cycle(g)
    except nx.NetworkXNoCycle:
        return []
    path = "->".join(str(u) for u, _ in cycle)
    return [f"cycle {path}->{cycle[0][0]}"]


def _validate_linear_set(s: Summary, nodes: Dict[int, SummaryNode]) -> List[str]:
    out = []
    owner: Dict[int, int] = {}
    allowed = set()
    for k, p in enumerate(s.patterns):
        if p.cluster_size < 1:
            out.append(f"pattern {k}: cluster size {p.cluster_size} < 1")
        for nid in p.nodes:
            if nid not in nodes:
                out.append(f"pattern {k}: unknown node {nid}")
            elif nid in owner:
                out.append(f"node {nid} appears in patterns {owner[nid]} and {k}")
            else:
                owner[nid] = k
        allowed.update(zip(p.nodes, p.nodes[1:]))

    for nid in nodes:
        if nid not in owner:
            out.append(f"node {nid} belongs to no pattern")

    for e in s.edges:
        if (e.source, e.target) not in allowed:
            out.append(f"edge {e.source}->{e.target} does not chain consecutive pattern members")
    return out


# -------------------------------------------------
# JSON
# -------------------------------------------------


def summary_to_dict(s: Summary) -> Dict[str, Any]:
    return {
        "kind": s.kind.value,
        "meta": {
            "technique": s.meta.technique,
            "granularity": s.meta.granularity,
            "dataset": s.meta.dataset,
            "labels": list(s.meta.labels),
        },
        "nodes": [
            {
                "id": n.node_id,
                "event": n.event,
                "support": n.support,
                "avgIndex": n.avg_index,
                "hidden": n.hidden,
            }
            for n in s.nodes
        ],
        "edges": [{"source": e.source, "target": e.target, "support": e.support} for e in s.edges],
        "patterns": [{"nodes": list(p.nodes), "clusterSize": p.cluster_size} for p in s.patterns],
    }


def summary_from_dict(raw: Dict[str, Any]) -> Summary:
    require_keys(raw, ("kind", "meta", "nodes", "edges"), "summary")
    try:
        kind = SummaryKind(raw["kind"])
    except ValueError:
        raise SchemaError(f"summary.kind '{raw['kind']}' is not one of LinearSet, Tree, DAG.")

    meta_raw = raw["meta"]
    require_keys(meta_raw, ("technique", "granularity", "dataset"), "summary.meta")

    nodes_raw = require_list(raw, "nodes", "summary")
    edges_raw = require_list(raw, "edges", "summary")
    patterns_raw = require_list(raw, "patterns", "summary") if "patterns" in raw else []
    check_records(nodes_raw, ("id", "event", "support", "avgIndex"), "summary.nodes")
    check_records(edges_raw, ("source", "target", "support"), "summary.edges")
    check_records(patterns_raw, ("nodes", "clusterSize"), "summary.patterns")

    try:
        return Summary(
            kind=kind,
            meta=SummaryMeta(
                technique=str(meta_raw["technique"]),
                granularity=float(meta_raw["granularity"]),
                dataset=str(meta_raw["dataset"]),
                labels=tuple(str(lbl) for lbl in meta_raw.get("labels", [])),
            ),
            nodes=tuple(
                SummaryNode(
                    node_id=int(n["id"]),
                    event=int(n["event"]),
                    support=int(n["support"]),
                    avg_index=float(n["avgIndex"]),
                    hidden=bool(n.get("hidden", False)),
                )
                for n in nodes_raw
            ),
            edges=tuple(SummaryEdge(int(e["source"]), int(e["target"]), int(e["support"])) for e in edges_raw),
            patterns=tuple(
                Pattern(tuple(int(x) for x in p["nodes"]), int(p["clusterSize"])) for p in patterns_raw
            ),
        )
    except (TypeError, ValueError) as e:
        raise SchemaError(f"summary field has the wrong type: {e}")


def serialize(s: Summary) -> bytes:
    """Canonical JSON: sorted keys, nodes by id, edges by (source, target)."""
    text = json.dumps(summary_to_dict(s), sort_keys=True, indent=2, ensure_ascii=False)
    return (text + "\n").encode("utf-8")


def deserialize(data: bytes) -> Summary:
    try:
        raw = json.loads(data.decode("utf-8") if isinstance(data, bytes) else data)
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise SchemaError(f"summary is not valid JSON: {e}")
    return summary_from_dict(raw)


def node_count(s: Summary) -> int:
    return len(s.visible_nodes())


def find_hidden_root(s: Summary) -> Optional[SummaryNode]:
    for n in s.nodes:
        if n.hidden:
            return n
    return None
