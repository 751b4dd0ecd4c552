from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence as Seq, Tuple

import numpy as np

from models.errors import DatasetError, EmptyDatasetError


@dataclass(frozen=True)
class EventType:
    id: int
    label: str


@dataclass(frozen=True)
class Sequence:
    id: str
    events: Tuple[int, ...]

    def __len__(self) -> int:
        return len(self.events)


@dataclass(frozen=True)
class DatasetStats:
    num_sequences: int
    total_events: int
    unique_events: int
    min_len: int
    max_len: int
    median_len: float

    def summary(self) -> dict:
        return {
            "sequences": self.num_sequences,
            "total_events": self.total_events,
            "unique_events": self.unique_events,
            "min_len": self.min_len,
            "max_len": self.max_len,
            "median_len": self.median_len,
        }


@dataclass(frozen=True)
class Dataset:
    """
    Ordered event sequences over a finite alphabet.

    Event ids are dense (0..|alphabet|-1) and index into `alphabet`.
    Instances are immutable once built; use `Dataset.from_labels` to build
    one from raw label lists (alphabet in first-appearance order).
    """
    name: str
    alphabet: Tuple[EventType, ...]
    sequences: Tuple[Sequence, ...]
    _by_label: Dict[str, int] = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        for i, ev in enumerate(self.alphabet):
            if ev.id != i:
                raise DatasetError(f"Event ids must be contiguous; got {ev.id} at index {i}.")

        by_label = {ev.label: ev.id for ev in self.alphabet}
        if len(by_label) != len(self.alphabet):
            raise DatasetError("Event labels must be unique within a dataset.")
        object.__setattr__(self, "_by_label", by_label)

        seen = set()
        size = len(self.alphabet)
        for seq in self.sequences:
            if seq.id in seen:
                raise DatasetError(f"Duplicate sequence id '{seq.id}'.")
            seen.add(seq.id)
            if not seq.events:
                raise DatasetError(f"Sequence '{seq.id}' is empty.")
            for e in seq.events:
                if not 0 <= e < size:
                    raise DatasetError(f"Sequence '{seq.id}' uses unknown event id {e}.")

    @classmethod
    def from_labels(cls, name: str, rows: Iterable[Tuple[str, Seq[str]]]) -> "Dataset":
        """
        Build a dataset from (sequence_id, [event labels]) pairs.
        Labels become event types in order of first appearance.
        """
        ids: Dict[str, int] = {}
        sequences: List[Sequence] = []
        for seq_id, labels in rows:
            events = []
            for label in labels:
                if label not in ids:
                    ids[label] = len(ids)
                events.append(ids[label])
            sequences.append(Sequence(str(seq_id), tuple(events)))

        alphabet = tuple(EventType(i, label) for label, i in ids.items())
        return cls(name=name, alphabet=alphabet, sequences=tuple(sequences))

    def __len__(self) -> int:
        return len(self.sequences)

    @property
    def labels(self) -> List[str]:
        return [ev.label for ev in self.alphabet]

    def label(self, event_id: int) -> str:
        return self.alphabet[event_id].label

    def event_id(self, label: str) -> Optional[int]:
        return self._by_label.get(label)

    def event_lists(self) -> List[Tuple[int, ...]]:
        return [s.events for s in self.sequences]

    def to_rows(self) -> List[Tuple[str, List[str]]]:
        return [(s.id, [self.label(e) for e in s.events]) for s in self.sequences]


def stats(d: Dataset) -> DatasetStats:
    """
    Table-style statistics for a dataset.
    Median uses the midpoint convention for even counts (e.g. 4.5).
    """
    if len(d) == 0:
        raise EmptyDatasetError(f"Dataset '{d.name}' has no sequences.")

    lengths = np.array([len(s) for s in d.sequences])
    used = {e for s in d.sequences for e in s.events}

    return DatasetStats(
        num_sequences=len(d),
        total_events=int(lengths.sum()),
        unique_events=len(used),
        min_len=int(lengths.min()),
        max_len=int(lengths.max()),
        median_len=float(np.median(lengths)),
    )


def first_index(events: Seq[int], e: int, start: int = 0) -> int:
    """Position of the first occurrence of e at or after start, or -1."""
    for i in range(start, len(events)):
        if events[i] == e:
            return i
    return -1


def avg_index(d: Dataset, e: int) -> Optional[float]:
    """
    Mean 0-based position of the FIRST occurrence of event `e` over the
    sequences that contain it. None when no sequence contains it.
    """
    positions = []
    for s in d.sequences:
        i = first_index(s.events, e)
        if i >= 0:
            positions.append(i)

    if not positions:
        return None

    return float(np.mean(positions))
