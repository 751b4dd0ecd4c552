from dataclasses import dataclass
from typing import Dict, List, Sequence as Seq, Tuple, Union

from models.dataset import Dataset, first_index
from models.summary import HIDDEN_EVENT, Summary, SummaryEdge, SummaryKind, SummaryNode
from mining.common import MinSupport, make_meta, rank_key, require_sequences

TECHNIQUE = "coreflow"

# (sequence index, offset of the first untrimmed position)
Branch = List[Tuple[int, int]]


@dataclass(frozen=True)
class RankedEvent:
    event: int
    count: int
    mean_index: float


class _TreeBuilder:
    def __init__(self):
        self.nodes: List[SummaryNode] = []
        self.edges: List[SummaryEdge] = []

    def add(self, event: int, support: int, avg_index: float, parent: int = None, hidden: bool = False) -> int:
        node_id = len(self.nodes)
        self.nodes.append(SummaryNode(node_id, event, support, avg_index, hidden))
        if parent is not None:
            self.edges.append(SummaryEdge(parent, node_id, support))
        return node_id


def rank_events(sequences: Seq[Seq[int]], working: Branch) -> List[RankedEvent]:
    """
    Rank events of a working set: number of (trimmed) sequences containing
    the event, then mean position of its first occurrence within the
    trimmed sequence, then event id.
    """
    counts: Dict[int, int] = {}
    index_sums: Dict[int, int] = {}
    for i, offset in working:
        seen = set()
        events = sequences[i]
        for pos in range(offset, len(events)):
            e = events[pos]
            if e in seen:
                continue
            seen.add(e)
            counts[e] = counts.get(e, 0) + 1
            index_sums[e] = index_sums.get(e, 0) + (pos - offset)

    ranked = [RankedEvent(e, c, index_sums[e] / c) for e, c in counts.items()]
    ranked.sort(key=lambda r: rank_key(r.count, r.mean_index, r.event))
    return ranked


def _grow(sequences, working: Branch, parent: int, threshold: int, builder: _TreeBuilder) -> None:
    # Siblings are produced iteratively, children recursively.
    while working:
        ranked = rank_events(sequences, working)
        if not ranked or ranked[0].count < threshold:
            return

        top = ranked[0].event
        containing: Branch = []
        rest: Branch = []
        positions = []
        for i, offset in working:
            p = first_index(sequences[i], top, offset)
            if p >= 0:
                containing.append((i, p + 1))  # trim through the matched event
                positions.append(p)
            else:
                rest.append((i, offset))

        node = builder.add(top, len(containing), sum(positions) / len(positions), parent)
        _grow(sequences, containing, node, threshold, builder)
        working = rest


def mine_coreflow(d: Dataset, ms: Union[MinSupport, float]) -> Summary:
    """
    CoreFlow rank-divide-trim mining.

    Starting with every sequence under a hidden virtual root:
    - rank events of the working set,
    - add the top event as a child node,
    - divide into containing / not-containing groups,
    - trim the containing group through the first occurrence,
    - recurse on the trimmed group, continue with the rest under the same parent.

    A branch stops when no event reaches the global absolute threshold.
    """
    require_sequences(d)
    if not isinstance(ms, MinSupport):
        ms = MinSupport(ms)
    threshold = ms.threshold(len(d))

    sequences = d.event_lists()
    builder = _TreeBuilder()
    root = builder.add(HIDDEN_EVENT, len(d), 0.0, hidden=True)
    _grow(sequences, [(i, 0) for i in range(len(sequences))], root, threshold, builder)

    return Summary(
        kind=SummaryKind.TREE,
        nodes=tuple(builder.nodes),
        edges=tuple(builder.edges),
        meta=make_meta(TECHNIQUE, ms.fraction, d),
    )
