from dataclasses import dataclass
from typing import Dict, List, Tuple

import numpy as np

from config import DEFAULT_SEED
from models.dataset import Dataset, EventType, Sequence

# Dirichlet concentration for start / transition rows; small values give
# peaked rows, so frequent sub-paths emerge
CHAIN_ALPHA = 0.4


@dataclass(frozen=True)
class Profile:
    """Shape of a dataset: every field is reproduced exactly by `generate`."""
    name: str
    labels: Tuple[str, ...]
    num_sequences: int
    min_len: int
    max_len: int
    median_len: float
    total_events: int


PROFILES: Dict[str, Profile] = {
    p.name: p
    for p in (
        Profile(
            "trauma",
            ("arrival", "airway", "breathing", "pulse", "gcs", "secondary_survey",
             "xray", "ct_scan", "fast_exam", "transfer", "discharge"),
            215, 5, 11, 9.0, 1991,
        ),
        Profile(
            "emergency",
            ("Arrival", "Emergency", "ICU", "Floor", "Discharge-Alive", "Die"),
            100, 3, 16, 4.5, 451,
        ),
        Profile(
            "basketball",
            ("inbound", "pass", "dribble", "screen", "cut", "drive", "post_up",
             "two_pointer", "three_pointer", "rebound", "turnover", "foul", "free_throw"),
            69, 4, 13, 6.0, 465,
        ),
        Profile(
            "vast",
            ("entrance", "general_gate", "ranger_stop", "camping", "gate", "ranger_base"),
            1000, 2, 49, 8.0, 9443,
        ),
        # published median (11) cannot coexist with 177 events over 45
        # sequences; 4 is used instead
        Profile(
            "workflow",
            ("open", "triage", "assign", "reproduce", "patch", "review", "revise",
             "test", "commit", "merge", "reopen", "duplicate", "wontfix", "verify",
             "release", "close"),
            45, 2, 21, 4.0, 177,
        ),
        Profile(
            "career",
            ("bachelor", "master", "phd", "postdoc", "intern", "engineer",
             "senior_engineer", "manager", "director", "professor"),
            40, 11, 32, 17.0, 767,
        ),
    )
}


def _median_values(median: float) -> Tuple[int, int]:
    low, high = int(np.floor(median)), int(np.ceil(median))
    if median * 2 != low + high:
        raise ValueError(f"median {median} must be an integer or a half-integer.")
    return low, high


def sequence_lengths(p: Profile, rng: np.random.Generator) -> List[int]:
    """
    Lengths with exactly the profile's min, max, median and total, in
    random order. Raises ValueError when the shape is infeasible.
    """
    n = p.num_sequences
    if n < 1:
        raise ValueError("a profile needs at least one sequence.")
    if not 1 <= p.min_len <= p.max_len:
        raise ValueError(f"need 1 <= min_len <= max_len, got {p.min_len}..{p.max_len}.")

    if n % 2:
        lo_mid = hi_mid = n // 2
        a = b = int(p.median_len)
        if a != p.median_len:
            raise ValueError(f"odd sequence count needs an integer median, got {p.median_len}.")
    else:
        lo_mid, hi_mid = n // 2 - 1, n // 2
        a, b = _median_values(p.median_len)
    if not p.min_len <= a <= b <= p.max_len:
        raise ValueError(f"median {p.median_len} outside {p.min_len}..{p.max_len}.")

    fixed = {lo_mid: a, hi_mid: b}
    for idx, value in ((0, p.min_len), (n - 1, p.max_len)):
        if idx in fixed and fixed[idx] != value:
            raise ValueError(f"profile '{p.name}': min/max/median contradict each other.")
        fixed[idx] = value

    lengths = [0] * n
    capacity = [0] * n
    for i in range(n):
        if i in fixed:
            lengths[i] = fixed[i]
        elif i < lo_mid:
            lengths[i], capacity[i] = p.min_len, a - p.min_len
        else:
            lengths[i], capacity[i] = b, p.max_len - b

    remaining = p.total_events - sum(lengths)
    if remaining < 0 or remaining > sum(capacity):
        lo, hi = sum(lengths), sum(lengths) + sum(capacity)
        raise ValueError(
            f"profile '{p.name}': {p.total_events} events not reachable; "
            f"this shape allows {lo}..{hi}."
        )

    open_slots = [i for i in range(n) if capacity[i] > 0]
    while remaining > 0:
        k = int(rng.integers(len(open_slots)))
        i = open_slots[k]
        lengths[i] += 1
        capacity[i] -= 1
        remaining -= 1
        if capacity[i] == 0:
            open_slots[k] = open_slots[-1]
            open_slots.pop()

    return [int(x) for x in rng.permutation(lengths)]


def generate(p: Profile, seed: int = DEFAULT_SEED) -> Dataset:
    """
    Seeded random dataset matching `p` exactly. Events follow a random
    Markov chain; one reserved position per event type guarantees every
    label occurs.
    """
    rng = np.random.default_rng(seed)
    lengths = sequence_lengths(p, rng)
    k = len(p.labels)
    if k > p.total_events:
        raise ValueError(f"profile '{p.name}': {k} event types need at least {k} events.")

    start = rng.dirichlet([CHAIN_ALPHA] * k)
    transitions = rng.dirichlet([CHAIN_ALPHA] * k, size=k)

    flat: List[int] = []
    for length in lengths:
        e = int(rng.choice(k, p=start))
        flat.append(e)
        for _ in range(length - 1):
            e = int(rng.choice(k, p=transitions[e]))
            flat.append(e)

    reserved = rng.choice(p.total_events, size=k, replace=False)
    for event, pos in enumerate(sorted(int(x) for x in reserved)):
        flat[pos] = event

    sequences = []
    offset = 0
    for i, length in enumerate(lengths):
        sequences.append(Sequence(f"{p.name}-{i:04d}", tuple(flat[offset:offset + length])))
        offset += length

    alphabet = tuple(EventType(i, label) for i, label in enumerate(p.labels))
    return Dataset(name=p.name, alphabet=alphabet, sequences=tuple(sequences))


def generate_suite(seed: int = DEFAULT_SEED) -> List[Dataset]:
    return [generate(p, seed) for p in PROFILES.values()]
