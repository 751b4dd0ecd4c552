import math
from dataclasses import dataclass
from typing import List, Optional, Sequence as Seq, Tuple

from models.dataset import Dataset
from models.errors import EmptyDatasetError
from models.summary import SummaryMeta


@dataclass(frozen=True)
class MinSupport:
    """
    Minimum support as a fraction of ALL sequences in the dataset.
    The absolute threshold is fixed once per mining run and reused
    unchanged inside every branch.
    """
    fraction: float

    def __post_init__(self):
        if not 0.0 < self.fraction <= 1.0:
            raise ValueError(f"min support must be in (0, 1], got {self.fraction}.")

    def threshold(self, num_sequences: int) -> int:
        # round() first so 0.3 * 10 does not become ceil(3.0000000000000004) = 4
        return max(1, math.ceil(round(self.fraction * num_sequences, 9)))


def require_sequences(d: Dataset) -> None:
    if len(d) == 0:
        raise EmptyDatasetError(f"Dataset '{d.name}' has no sequences to mine.")


def make_meta(technique: str, granularity: float, d: Dataset) -> SummaryMeta:
    return SummaryMeta(
        technique=technique,
        granularity=float(granularity),
        dataset=d.name,
        labels=tuple(d.labels),
    )


class OccurrenceIndex:
    """
    Next-occurrence table for one sequence: nxt[i][e] is the smallest
    position >= i holding event e, or len(sequence).
    Makes greedy subsequence matching O(len(pattern)).
    """

    __slots__ = ("events", "nxt")

    def __init__(self, events: Seq[int], alphabet_size: int):
        self.events = tuple(events)
        n = len(self.events)
        row = [n] * alphabet_size
        table = [None] * (n + 1)
        table[n] = tuple(row)
        for i in range(n - 1, -1, -1):
            row[self.events[i]] = i
            table[i] = tuple(row)
        self.nxt = table

    def __len__(self) -> int:
        return len(self.events)

    def match(self, pattern: Seq[int], start: int = 0) -> Optional[List[int]]:
        """Greedy left-to-right positions of pattern, or None when absent."""
        n = len(self.events)
        pos = start
        out = []
        for e in pattern:
            if pos >= n:
                return None
            i = self.nxt[pos][e]
            if i >= n:
                return None
            out.append(i)
            pos = i + 1
        return out

    def find(self, e: int, start: int = 0) -> int:
        if start >= len(self.events):
            return -1
        i = self.nxt[start][e]
        return -1 if i >= len(self.events) else i


def index_dataset(d: Dataset) -> List[OccurrenceIndex]:
    size = len(d.alphabet)
    return [OccurrenceIndex(s.events, size) for s in d.sequences]


def greedy_match(events: Seq[int], pattern: Seq[int]) -> Optional[List[int]]:
    """Greedy left-to-right subsequence match without a prebuilt index."""
    out = []
    pos = 0
    for e in pattern:
        while pos < len(events) and events[pos] != e:
            pos += 1
        if pos >= len(events):
            return None
        out.append(pos)
        pos += 1
    return out


def rank_key(count: int, mean_index: float, event: int) -> Tuple[int, float, int]:
    """Sort key: higher count, then lower average index, then lower event id."""
    return (-count, round(mean_index, 9), event)
