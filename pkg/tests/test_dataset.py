import json
import statistics

import pytest
from hypothesis import given, settings

from models.dataset import Dataset, EventType, Sequence, avg_index, stats
from models.errors import DatasetError, EmptyDatasetError, ParseError
from pipeline.load import dump_dataset, load_dataset, parse_csv
from tests.strategies import datasets, make_dataset


# -------------------------------------------------
# LOADING
# -------------------------------------------------


def test_csv_single_sequence(write_file):
    path = write_file("d.csv", "sequence_id,event\ns1,A\ns1,B\ns1,A\n")
    d = load_dataset(path)

    assert d.labels == ["A", "B"]
    assert [s.id for s in d.sequences] == ["s1"]
    assert d.sequences[0].events == (0, 1, 0)
    assert d.name == "d"


def test_csv_interleaved_rows_keep_file_order():
    d = parse_csv("sequence_id,event\ns1,A\ns2,B\ns1,C\n", "mix")

    assert [s.id for s in d.sequences] == ["s1", "s2"]
    assert d.to_rows() == [("s1", ["A", "C"]), ("s2", ["B"])]


def test_csv_position_column_orders_events():
    d = parse_csv("sequence_id,event,position\ns1,B,2\ns1,A,1\ns1,C,2\n", "pos")
    assert d.to_rows() == [("s1", ["A", "B", "C"])]


def test_csv_empty_event_reports_line():
    with pytest.raises(ParseError) as exc:
        parse_csv("sequence_id,event\ns1,A\ns2,\n", "bad")
    assert exc.value.line == 3
    assert "line 3" in str(exc.value)


def test_csv_line_numbers_count_blank_lines():
    with pytest.raises(ParseError) as exc:
        parse_csv("sequence_id,event\ns1,A\n\ns1,\n", "bad")
    assert exc.value.line == 4


def test_csv_blank_lines_are_skipped():
    d = parse_csv("sequence_id,event\ns1,A\n\n  \ns1,B\n\n", "gaps")
    assert d.to_rows() == [("s1", ["A", "B"])]


def test_csv_only_blank_rows():
    with pytest.raises(EmptyDatasetError):
        parse_csv("sequence_id,event\n\n\n", "empty")


def test_csv_multiline_field_reports_its_line():
    with pytest.raises(ParseError) as exc:
        parse_csv('sequence_id,event\ns1,A\ns1,"B\nC"\ns1,D\n', "bad")
    assert exc.value.line == 3


def test_csv_extra_field_reports_line():
    with pytest.raises(ParseError) as exc:
        parse_csv("sequence_id,event\ns1,A\ns1,B,oops\n", "bad")
    assert exc.value.line == 3


def test_csv_bad_position():
    with pytest.raises(ParseError) as exc:
        parse_csv("sequence_id,event,position\ns1,A,first\n", "bad")
    assert exc.value.line == 2


def test_csv_missing_column():
    with pytest.raises(ParseError) as exc:
        parse_csv("id,label\ns1,A\n", "bad")
    assert exc.value.line == 1


def test_empty_file(write_file):
    with pytest.raises(EmptyDatasetError):
        load_dataset(write_file("empty.csv", ""))


def test_header_without_rows():
    with pytest.raises(EmptyDatasetError):
        parse_csv("sequence_id,event\n", "empty")


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_dataset(tmp_path / "nope.json")


def test_unknown_suffix(write_file):
    with pytest.raises(DatasetError):
        load_dataset(write_file("d.txt", "x"))


def test_json_errors(write_file):
    with pytest.raises(ParseError) as exc:
        load_dataset(write_file("bad.json", '{\n  "sequences": [\n'))
    assert exc.value.line is not None

    with pytest.raises(ParseError):
        load_dataset(write_file("nokey.json", '{"name": "x"}'))

    for body in ('{"sequences": 5}', '{"sequences": null}'):
        with pytest.raises(ParseError, match="must be a list"):
            load_dataset(write_file("notlist.json", body))

    with pytest.raises(ParseError):
        load_dataset(write_file("badevents.json", '{"sequences": [{"id": "a", "events": [1, 2]}]}'))

    with pytest.raises(EmptyDatasetError):
        load_dataset(write_file("none.json", '{"sequences": []}'))

    with pytest.raises(DatasetError):
        load_dataset(write_file("blank.json", '{"sequences": [{"id": "a", "events": []}]}'))


def test_json_round_trip_is_canonical(write_file):
    raw = {
        "name": "er",
        "sequences": [
            {"id": "p1", "events": ["Arrival", "Emergency", "Discharge-Alive"]},
            {"id": "p2", "events": ["Arrival", "ICU", "Die"]},
        ],
    }
    first = load_dataset(write_file("er.json", json.dumps(raw)))
    text = dump_dataset(first, "json")
    second = load_dataset(write_file("er2.json", text.decode("utf-8")))

    assert dump_dataset(second, "json") == text
    assert second.name == "er"
    assert second.to_rows() == first.to_rows()


def test_csv_dump_reloads(write_file, worked):
    text = dump_dataset(worked, "csv").decode("utf-8")
    assert text.splitlines()[0] == "sequence_id,event"

    again = load_dataset(write_file("w.csv", text))
    assert again.to_rows() == worked.to_rows()
    assert again.labels == worked.labels


# -------------------------------------------------
# MODEL
# -------------------------------------------------


def test_dataset_invariants():
    alphabet = (EventType(0, "A"),)
    with pytest.raises(DatasetError):
        Dataset("x", alphabet, (Sequence("a", (0,)), Sequence("a", (0,))))
    with pytest.raises(DatasetError):
        Dataset("x", alphabet, (Sequence("a", (1,)),))
    with pytest.raises(DatasetError):
        Dataset("x", (EventType(0, "A"), EventType(1, "A")), ())
    with pytest.raises(DatasetError):
        Dataset("x", (EventType(1, "A"),), ())


def test_label_lookup(worked):
    assert worked.event_id("C") == 2
    assert worked.event_id("Z") is None
    assert worked.label(3) == "D"


# -------------------------------------------------
# STATS / AVG INDEX
# -------------------------------------------------


def test_stats_uniform():
    st = stats(make_dataset(["ABC", "CBA", "AAA"]))
    assert (st.min_len, st.max_len, st.median_len, st.total_events) == (3, 3, 3.0, 9)
    assert st.unique_events == 3


def test_stats_even_median():
    st = stats(make_dataset(["AB", "ABCDE", "ABCD", "A"]))
    assert st.median_len == 3.0
    st = stats(make_dataset(["ABC", "ABCD"]))
    assert st.median_len == 3.5


def test_stats_empty_dataset():
    with pytest.raises(EmptyDatasetError):
        stats(Dataset("none", (), ()))


@settings(max_examples=100, deadline=None)
@given(datasets(max_sequences=10, max_events=5, max_len=8))
def test_stats_match_counting(d):
    lengths = []
    seen = set()
    for s in d.sequences:
        n = 0
        for e in s.events:
            n += 1
            seen.add(e)
        lengths.append(n)

    st = stats(d)
    assert st.num_sequences == len(lengths)
    assert st.total_events == sum(lengths)
    assert st.unique_events == len(seen)
    assert st.min_len == min(lengths) and st.max_len == max(lengths)
    assert st.median_len == statistics.median(lengths)
    assert st.min_len <= st.median_len <= st.max_len


def test_avg_index_examples():
    assert avg_index(make_dataset(["AB"]), 1) == 1.0
    assert avg_index(make_dataset(["AB", "BA"]), 1) == 0.5
    assert avg_index(make_dataset(["AAB"]), 0) == 0.0


def test_avg_index_absent():
    d = Dataset("x", (EventType(0, "A"), EventType(1, "B")), (Sequence("s", (0,)),))
    assert avg_index(d, 1) is None


@settings(max_examples=100, deadline=None)
@given(datasets(max_sequences=20, max_events=4, max_len=6))
def test_avg_index_matches_scan_and_ignores_order(d):
    reversed_d = Dataset(d.name, d.alphabet, tuple(reversed(d.sequences)))
    for e in range(len(d.alphabet)):
        firsts = [s.events.index(e) for s in d.sequences if e in s.events]
        expected = sum(firsts) / len(firsts)
        assert avg_index(d, e) == pytest.approx(expected)
        assert avg_index(reversed_d, e) == pytest.approx(expected)
