import pytest
from hypothesis import given, settings

from config import MIN_SUPPORT_LEVELS
from models.dataset import Dataset
from models.errors import EmptyDatasetError
from models.summary import SummaryKind, validate
from mining.common import MinSupport
from mining.coreflow import mine_coreflow
from tests.strategies import datasets, make_dataset


def reference_tree(sequences, threshold):
    """Plain recursive rank-divide-trim on copied tails."""

    def grow(group):
        out = []
        remaining = list(group)
        while remaining:
            firsts = {}
            for seq, start in remaining:
                tail = list(seq[start:])
                for e in set(tail):
                    firsts.setdefault(e, []).append(tail.index(e))
            if not firsts:
                break
            top = min(firsts, key=lambda e: (-len(firsts[e]), sum(firsts[e]) / len(firsts[e]), e))
            if len(firsts[top]) < threshold:
                break

            inside, outside, positions = [], [], []
            for seq, start in remaining:
                tail = list(seq[start:])
                if top in tail:
                    pos = start + tail.index(top)
                    positions.append(pos)
                    inside.append((seq, pos + 1))
                else:
                    outside.append((seq, start))
            avg = round(sum(positions) / len(positions), 9)
            out.append((top, len(inside), avg, grow(inside)))
            remaining = outside
        return out

    return grow([(s, 0) for s in sequences])


def as_nested(summary):
    nodes = summary.node_map()
    children = summary.children()

    def walk(nid):
        return [
            (nodes[c].event, nodes[c].support, round(nodes[c].avg_index, 9), walk(c))
            for c in children[nid]
        ]

    root = next(n for n in summary.nodes if n.hidden)
    return walk(root.node_id)


def paths(summary):
    """{event path from the root: support}"""
    nodes = summary.node_map()
    children = summary.children()
    out = {}
    root = next(n for n in summary.nodes if n.hidden)
    stack = [(root.node_id, ())]
    while stack:
        nid, path = stack.pop()
        for c in children[nid]:
            p = path + (nodes[c].event,)
            out[p] = nodes[c].support
            stack.append((c, p))
    return out


def test_worked_example(worked):
    s = mine_coreflow(worked, MinSupport(0.5))

    assert s.kind == SummaryKind.TREE
    assert as_nested(s) == [(0, 3, 0.0, [(1, 2, 1.0, [])])]
    root = s.nodes[0]
    assert root.hidden and root.support == 3
    assert s.meta.technique == "coreflow" and s.meta.granularity == 0.5
    assert s.meta.labels == ("A", "B", "C", "D")


def test_single_sequence_chain():
    s = mine_coreflow(make_dataset(["AB"]), 1.0)
    assert as_nested(s) == [(0, 1, 0.0, [(1, 1, 1.0, [])])]


def test_repeated_events_along_a_path():
    s = mine_coreflow(make_dataset(["ABA", "ABA"]), 1.0)
    assert [e for e, *_ in as_nested(s)] == [0]
    assert paths(s) == {(0,): 2, (0, 1): 2, (0, 1, 0): 2}


def test_avg_index_uses_original_positions():
    s = mine_coreflow(make_dataset(["CAB", "AB"]), 1.0)
    b = next(n for n in s.nodes if n.event == 2 and not n.hidden)
    # B sits at position 2 in CAB and 1 in AB
    assert paths(s)[(1, 2)] == 2
    assert b.avg_index == pytest.approx(1.5)


def test_threshold_rounding():
    assert MinSupport(0.3).threshold(10) == 3
    assert MinSupport(0.05).threshold(215) == 11
    assert MinSupport(0.05).threshold(4) == 1
    with pytest.raises(ValueError):
        MinSupport(0.0)
    with pytest.raises(ValueError):
        MinSupport(1.5)


def test_empty_dataset():
    with pytest.raises(EmptyDatasetError):
        mine_coreflow(Dataset("none", (), ()), 0.5)


@settings(max_examples=1000, deadline=None)
@given(datasets(max_sequences=5, max_events=4, max_len=4))
def test_matches_reference(d):
    for fraction in (0.2, 0.5, 1.0):
        ms = MinSupport(fraction)
        s = mine_coreflow(d, ms)
        assert as_nested(s) == reference_tree(d.event_lists(), ms.threshold(len(d)))


@settings(max_examples=200, deadline=None)
@given(datasets(max_sequences=8, max_events=4, max_len=6))
def test_nodes_shrink_as_support_rises(d):
    previous = None
    for level in MIN_SUPPORT_LEVELS + (0.5, 0.75, 1.0):
        s = mine_coreflow(d, level)
        assert validate(s)[0]
        threshold = MinSupport(level).threshold(len(d))
        current = paths(s)
        assert all(v >= threshold for v in current.values())
        if previous is not None:
            assert current.items() <= previous.items()
        previous = current
