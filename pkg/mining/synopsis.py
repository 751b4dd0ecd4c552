import heapq
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Sequence as Seq, Tuple, Union

import numpy as np

from models.dataset import Dataset
from models.errors import StructureError
from models.summary import Pattern, Summary, SummaryEdge, SummaryKind, SummaryNode
from mining.common import make_meta, require_sequences

TECHNIQUE = "synopsis"

# merges must lower the objective by more than this
GAIN_EPSILON = 1e-9


# -------------------------------------------------
# LCS / EDIT COST
# -------------------------------------------------


def lcs_length(a: Seq[int], b: Seq[int]) -> int:
    """Bit-parallel LCS length (one big-int pass over `b`)."""
    if not a or not b:
        return 0
    masks: Dict[int, int] = {}
    for i, x in enumerate(a):
        masks[x] = masks.get(x, 0) | (1 << i)
    full = (1 << len(a)) - 1
    v = full
    for y in b:
        m = masks.get(y)
        if m is None:
            continue
        u = v & m
        v = ((v + u) | (v - u)) & full
    return len(a) - bin(v).count("1")


@lru_cache(maxsize=1 << 18)
def _edit_cost(pattern: Tuple[int, ...], seq: Tuple[int, ...]) -> int:
    return len(pattern) + len(seq) - 2 * lcs_length(pattern, seq)


def edit_cost(pattern: Seq[int], seq: Seq[int]) -> int:
    """Insert/delete edits turning `pattern` into `seq`."""
    return _edit_cost(tuple(pattern), tuple(seq))


def _suffix_table(a: Seq[int], b: Seq[int]) -> List[List[int]]:
    # table[i][j] = LCS length of a[i:] and b[j:]
    m, n = len(a), len(b)
    table = [[0] * (n + 1) for _ in range(m + 1)]
    for i in range(m - 1, -1, -1):
        row, below = table[i], table[i + 1]
        for j in range(n - 1, -1, -1):
            if a[i] == b[j]:
                row[j] = below[j + 1] + 1
            else:
                row[j] = max(below[j], row[j + 1])
    return table


def align(a: Seq[int], b: Seq[int]) -> List[Tuple[int, int]]:
    """
    Matched index pairs (i, j) of one LCS of `a` and `b`. Walking forward
    over a suffix table takes the leftmost match whenever it keeps the
    alignment optimal, so results are deterministic.
    """
    table = _suffix_table(a, b)
    pairs = []
    i = j = 0
    while i < len(a) and j < len(b):
        if a[i] == b[j] and table[i][j] == table[i + 1][j + 1] + 1:
            pairs.append((i, j))
            i += 1
            j += 1
        elif table[i + 1][j] >= table[i][j + 1]:
            i += 1
        else:
            j += 1
    return pairs


@lru_cache(maxsize=1 << 16)
def _lcs(a: Tuple[int, ...], b: Tuple[int, ...]) -> Tuple[int, ...]:
    return tuple(a[i] for i, _ in align(a, b))


def lcs(a: Seq[int], b: Seq[int]) -> Tuple[int, ...]:
    """Longest common subsequence with the leftmost-alignment tie-break."""
    return _lcs(tuple(a), tuple(b))


# -------------------------------------------------
# TYPES
# -------------------------------------------------


@dataclass(frozen=True)
class SynopsisParams:
    """
    lam: granularity in (0, 1]; higher keeps more patterns.
    pattern_weight: cost of one pattern event, (1 - lam) * mean sequence length.
    """
    lam: float
    pattern_weight: float

    def __post_init__(self):
        if not 0.0 < self.lam <= 1.0:
            raise ValueError(f"lambda must be in (0, 1], got {self.lam}.")
        if self.pattern_weight < 0:
            raise ValueError(f"pattern weight must be >= 0, got {self.pattern_weight}.")

    @classmethod
    def for_dataset(cls, d: Dataset, lam: float) -> "SynopsisParams":
        require_sequences(d)
        mean_len = float(np.mean([len(s) for s in d.sequences]))
        return cls(lam=lam, pattern_weight=(1.0 - lam) * mean_len)


@dataclass(frozen=True)
class Cluster:
    members: Tuple[int, ...]  # sequence indices, ascending
    pattern: Tuple[int, ...]
    edit_cost: int

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class DescriptionLength:
    pattern_cost: float
    edit_cost: int

    @property
    def total(self) -> float:
        return self.pattern_cost + self.edit_cost


def objective(clusters: List[Cluster], p: SynopsisParams, d: Dataset) -> DescriptionLength:
    """
    Recompute the description length of a clustering of `d` from scratch.

    Raises StructureError when the clusters do not partition the dataset.
    """
    seen = set()
    for c in clusters:
        if not c.members:
            raise StructureError("cluster with no members.")
        for m in c.members:
            if m in seen or not 0 <= m < len(d):
                raise StructureError(f"sequence {m} is duplicated or unknown in the clustering.")
            seen.add(m)
    if len(seen) != len(d):
        raise StructureError(f"clusters cover {len(seen)} of {len(d)} sequences.")

    sequences = d.event_lists()
    pattern_len = sum(len(c.pattern) for c in clusters)
    edits = sum(edit_cost(c.pattern, sequences[m]) for c in clusters for m in c.members)
    return DescriptionLength(pattern_cost=p.pattern_weight * pattern_len, edit_cost=edits)


# -------------------------------------------------
# GREEDY MERGING
# -------------------------------------------------


class _Group:
    """A live cluster: distinct member sequences with multiplicities."""

    def __init__(self, gid: int, members: List[int], counts: Counter, pattern: Tuple[int, ...], weight: float):
        self.gid = gid
        self.members = members
        self.counts = counts
        self.pattern = pattern
        self._memo: Dict[Tuple[int, ...], int] = {}
        self.edits = self.edits_to(pattern)
        self.cost = weight * len(pattern) + self.edits

    @property
    def first(self) -> int:
        return self.members[0]

    def edits_to(self, pattern: Tuple[int, ...]) -> int:
        cached = self._memo.get(pattern)
        if cached is None:
            cached = sum(mult * _edit_cost(pattern, seq) for seq, mult in self.counts.items())
            self._memo[pattern] = cached
        return cached


def _candidate(a: _Group, b: _Group, weight: float):
    if b.first < a.first:
        a, b = b, a
    pattern = _lcs(a.pattern, b.pattern)
    merged = weight * len(pattern) + a.edits_to(pattern) + b.edits_to(pattern)
    gain = a.cost + b.cost - merged
    return (-round(gain, 9), len(a.members) + len(b.members), a.first, b.first, a.gid, b.gid, pattern)


def synopsis_clusters(d: Dataset, p: Union[SynopsisParams, float]) -> Tuple[List[Cluster], List[float]]:
    """
    Greedy MDL merging.

    Starts from one cluster per sequence (pattern = the sequence) and keeps
    applying the merge with the largest objective decrease. The merged
    pattern is the LCS of the two patterns. Ties: smaller combined cluster,
    then lowest member ids.

    Returns (clusters, trace) where trace[0] is the initial objective and
    trace[k] the objective after the k-th merge.
    """
    require_sequences(d)
    if not isinstance(p, SynopsisParams):
        p = SynopsisParams.for_dataset(d, p)
    weight = p.pattern_weight

    sequences = [tuple(s.events) for s in d.sequences]
    alive: Dict[int, _Group] = {}
    for i, seq in enumerate(sequences):
        alive[i] = _Group(i, [i], Counter({seq: 1}), seq, weight)
    next_gid = len(sequences)

    heap = []
    groups = list(alive.values())
    for x in range(len(groups)):
        for y in range(x + 1, len(groups)):
            entry = _candidate(groups[x], groups[y], weight)
            if -entry[0] > GAIN_EPSILON:
                heap.append(entry)
    heapq.heapify(heap)

    total = sum(g.cost for g in groups)
    trace = [total]

    while heap:
        neg_gain, _, _, _, ga, gb, pattern = heapq.heappop(heap)
        if ga not in alive or gb not in alive:
            continue

        a, b = alive.pop(ga), alive.pop(gb)
        merged = _Group(
            next_gid,
            sorted(a.members + b.members),
            a.counts + b.counts,
            pattern,
            weight,
        )
        next_gid += 1

        total = total - (a.cost + b.cost - merged.cost)
        trace.append(total)

        for other in alive.values():
            entry = _candidate(merged, other, weight)
            if -entry[0] > GAIN_EPSILON:
                heapq.heappush(heap, entry)
        alive[merged.gid] = merged

    clusters = [Cluster(tuple(g.members), g.pattern, g.edits) for g in alive.values()]
    clusters.sort(key=lambda c: (-c.size, c.members[0]))
    return clusters, trace


def _node_positions(pattern: Tuple[int, ...], members: Seq[Tuple[int, ...]]) -> List[Optional[float]]:
    sums = [0] * len(pattern)
    hits = [0] * len(pattern)
    for seq in members:
        for i, j in align(pattern, seq):
            sums[i] += j
            hits[i] += 1
    return [sums[k] / hits[k] if hits[k] else None for k in range(len(pattern))]


def mine_synopsis(d: Dataset, p: Union[SynopsisParams, float]) -> Summary:
    """
    Sequence Synopsis as a LinearSet summary: one pattern per cluster,
    largest clusters first. Node support is the cluster size; avgIndex is
    the mean member position aligned to the node (the pattern position when
    no member aligns to it).
    """
    require_sequences(d)
    if not isinstance(p, SynopsisParams):
        p = SynopsisParams.for_dataset(d, p)

    clusters, _ = synopsis_clusters(d, p)
    sequences = d.event_lists()

    nodes, edges, patterns = [], [], []
    for c in clusters:
        positions = _node_positions(c.pattern, [sequences[m] for m in c.members])
        ids = []
        for k, event in enumerate(c.pattern):
            node_id = len(nodes)
            avg = positions[k] if positions[k] is not None else float(k)
            nodes.append(SummaryNode(node_id, event, c.size, avg))
            ids.append(node_id)
        edges.extend(SummaryEdge(u, v, c.size) for u, v in zip(ids, ids[1:]))
        patterns.append(Pattern(tuple(ids), c.size))

    return Summary(
        kind=SummaryKind.LINEAR_SET,
        nodes=tuple(nodes),
        edges=tuple(edges),
        patterns=tuple(patterns),
        meta=make_meta(TECHNIQUE, p.lam, d),
    )
