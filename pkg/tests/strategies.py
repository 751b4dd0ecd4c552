from hypothesis import strategies as st

from models.dataset import Dataset, EventType, Sequence

LETTERS = "ABCDEFGH"


def make_dataset(rows, name="fixture") -> Dataset:
    """rows: iterable of label strings/lists, one per sequence."""
    return Dataset.from_labels(name, [(f"s{i}", list(r)) for i, r in enumerate(rows)])


@st.composite
def datasets(draw, max_sequences=5, max_events=4, max_len=4, min_sequences=1):
    k = draw(st.integers(1, max_events))
    n = draw(st.integers(min_sequences, max_sequences))
    seqs = draw(
        st.lists(
            st.lists(st.integers(0, k - 1), min_size=1, max_size=max_len),
            min_size=n,
            max_size=n,
        )
    )
    # keep only event ids that occur, renumbered densely
    used = sorted({e for s in seqs for e in s})
    remap = {e: i for i, e in enumerate(used)}
    alphabet = tuple(EventType(i, LETTERS[e]) for e, i in remap.items())
    sequences = tuple(Sequence(f"s{i}", tuple(remap[e] for e in s)) for i, s in enumerate(seqs))
    return Dataset(name="random", alphabet=alphabet, sequences=sequences)


event_lists = st.lists(st.integers(0, 4), max_size=8)
