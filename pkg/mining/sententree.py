import heapq
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence as Seq, Set, Tuple, Union

from config import DEFAULT_NODE_CAP
from models.dataset import Dataset
from models.summary import HIDDEN_EVENT, Summary, SummaryEdge, SummaryKind, SummaryNode
from mining.common import (
    MinSupport,
    OccurrenceIndex,
    greedy_match,
    index_dataset,
    make_meta,
    require_sequences,
)

TECHNIQUE = "sententree"


@dataclass
class GrowthPattern:
    events: Tuple[int, ...]
    support_set: FrozenSet[int]
    # sequences of support_set not yet covered by any extension of this pattern
    remaining: Set[int] = field(default_factory=set)
    order: int = 0
    # DAG node id per event of `events`
    nodes: Tuple[int, ...] = ()

    @property
    def support(self) -> int:
        return len(self.support_set)


@dataclass(frozen=True)
class Extension:
    events: Tuple[int, ...]
    support_set: FrozenSet[int]
    mean_index: float
    event: int
    gap: int

    def key(self):
        return (-len(self.support_set), round(self.mean_index, 9), self.event, self.gap)


def subsequence_support(data: Union[Dataset, Iterable[Seq[int]]], pattern: Seq[int]) -> int:
    """Number of sequences containing `pattern` as a (gapped) subsequence."""
    if not pattern:
        raise ValueError("pattern must be non-empty.")
    sequences = data.event_lists() if isinstance(data, Dataset) else data
    return sum(1 for events in sequences if greedy_match(events, pattern) is not None)


def _reverse_limits(events: Seq[int], pattern: Seq[int]) -> List[int]:
    """
    limits[g] = rightmost position at which pattern[g:] can start so that
    the rest still matches; len(events) for the empty suffix.
    """
    k = len(pattern)
    limits = [len(events)] * (k + 1)
    pos = len(events) - 1
    for g in range(k - 1, -1, -1):
        while events[pos] != pattern[g]:
            pos -= 1
        limits[g] = pos
        pos -= 1
    return limits


def best_extension(pattern: GrowthPattern, index: List[OccurrenceIndex], alphabet_size: int) -> Optional[Extension]:
    """
    Score every single-event insertion (any gap, any event) over the
    pattern's support set. Candidates must cover at least one remaining
    sequence. Ties: higher support, lower mean position of the inserted
    event, lower event id, earlier gap.
    """
    k = len(pattern.events)
    # (gap, event) -> [sequence ids, position sum]
    hits: Dict[Tuple[int, int], list] = {}

    for sid in pattern.support_set:
        occ = index[sid]
        events = occ.events
        prefix_end = [0] * (k + 1)
        matched = occ.match(pattern.events)
        for g in range(1, k + 1):
            prefix_end[g] = matched[g - 1] + 1
        limits = _reverse_limits(events, pattern.events)

        for g in range(k + 1):
            start, limit = prefix_end[g], limits[g]
            if start >= len(events):
                continue
            row = occ.nxt[start]
            for e in range(alphabet_size):
                q = row[e]
                if q < limit:
                    slot = hits.get((g, e))
                    if slot is None:
                        slot = hits[(g, e)] = [[], 0]
                    slot[0].append(sid)
                    slot[1] += q

    best = None
    for (g, e), (sids, pos_sum) in hits.items():
        if pattern.remaining.isdisjoint(sids):
            continue
        ext = Extension(
            events=pattern.events[:g] + (e,) + pattern.events[g:],
            support_set=frozenset(sids),
            mean_index=pos_sum / len(sids),
            event=e,
            gap=g,
        )
        if best is None or ext.key() < best.key():
            best = ext
    return best


class _PatternGraph:
    """
    Pattern nodes merged into one DAG. An extension keeps the nodes of the
    pattern it grew from and adds one node for the inserted event, so the
    carried-over events of sibling patterns share nodes.
    """

    def __init__(self, num_sequences: int):
        self.events: List[int] = [HIDDEN_EVENT]
        self.sets: List[FrozenSet[int]] = [frozenset(range(num_sequences))]
        self.positions: List[float] = [0.0]
        self.edges: Dict[Tuple[int, int], Set[int]] = {}

    @property
    def visible(self) -> int:
        return len(self.events) - 1

    def add_node(self, event: int, support_set: FrozenSet[int], mean_index: float) -> int:
        self.events.append(event)
        self.sets.append(support_set)
        self.positions.append(mean_index)
        return len(self.events) - 1

    def add_path(self, nodes: Tuple[int, ...], support_set: FrozenSet[int]) -> None:
        # start node -> first event -> ... -> last event
        for u, v in zip((0,) + nodes, nodes):
            self.edges.setdefault((u, v), set()).update(support_set)


def grow_patterns(d: Dataset, threshold: int, node_cap: Optional[int] = DEFAULT_NODE_CAP) -> Tuple[List[GrowthPattern], _PatternGraph]:
    index = index_dataset(d)
    size = len(d.alphabet)
    all_ids = frozenset(range(len(d)))

    root = GrowthPattern(events=(), support_set=all_ids, remaining=set(all_ids), order=0)
    created = [root]
    graph = _PatternGraph(len(d))
    heap = [(-root.support, root.order)]

    while heap:
        # every accepted extension adds exactly one visible node
        if node_cap and graph.visible >= node_cap:
            break

        _, order = heapq.heappop(heap)
        pattern = created[order]
        ext = best_extension(pattern, index, size)
        if ext is None or len(ext.support_set) < threshold:
            continue

        node = graph.add_node(ext.event, ext.support_set, ext.mean_index)
        child = GrowthPattern(
            events=ext.events,
            support_set=ext.support_set,
            remaining=set(ext.support_set),
            order=len(created),
            nodes=pattern.nodes[: ext.gap] + (node,) + pattern.nodes[ext.gap :],
        )
        created.append(child)
        graph.add_path(child.nodes, child.support_set)
        heapq.heappush(heap, (-child.support, child.order))

        pattern.remaining.difference_update(ext.support_set)
        if pattern.remaining:
            heapq.heappush(heap, (-pattern.support, pattern.order))

    return created[1:], graph


def mine_sententree(d: Dataset, ms: Union[MinSupport, float], node_cap: Optional[int] = DEFAULT_NODE_CAP) -> Summary:
    """
    SentenTree-style pattern growth merged into a DAG.

    The leaf with the highest support is extended by its best single-event
    insertion; the extension takes the matching sequences and the parent
    keeps growing over the sequences no extension covers yet. Growth stops
    when no extension reaches the threshold, or at `node_cap` visible nodes.

    Node support is the support of the pattern that introduced the node,
    edge support the union of the patterns in which the two nodes are adjacent.
    """
    require_sequences(d)
    if not isinstance(ms, MinSupport):
        ms = MinSupport(ms)
    threshold = ms.threshold(len(d))

    _, graph = grow_patterns(d, threshold, node_cap)

    nodes = [SummaryNode(0, HIDDEN_EVENT, len(d), 0.0, hidden=True)]
    for node in range(1, len(graph.events)):
        nodes.append(SummaryNode(node, graph.events[node], len(graph.sets[node]), graph.positions[node]))
    edges = [SummaryEdge(u, v, len(members)) for (u, v), members in sorted(graph.edges.items())]

    return Summary(
        kind=SummaryKind.DAG,
        nodes=tuple(nodes),
        edges=tuple(edges),
        meta=make_meta(TECHNIQUE, ms.fraction, d),
    )
