import json

import pytest

from models.dataset import stats
from models.summary import deserialize
from pipeline.load import dump_dataset, load_dataset
from seqsum import main


@pytest.fixture
def worked_csv(tmp_path, worked):
    path = tmp_path / "worked.csv"
    path.write_bytes(dump_dataset(worked, "csv"))
    return path


def test_stats(worked_csv, capsys):
    assert main(["stats", "--input", str(worked_csv)]) == 0
    out = capsys.readouterr().out
    assert "worked" in out and "total events" in out


def test_mine_coreflow(worked_csv, tmp_path):
    out = tmp_path / "tree.json"
    code = main(["mine", "--technique", "coreflow", "--min-support", "0.30",
                 "--input", str(worked_csv), "--output", str(out)])
    assert code == 0

    s = deserialize(out.read_bytes())
    shown = sorted((s.label(n.event), n.support) for n in s.visible_nodes())
    # threshold ceil(0.9) = 1 keeps every branch
    assert shown == [("A", 3), ("B", 2), ("C", 1), ("C", 1), ("D", 1), ("D", 1)]
    assert s.meta.granularity == 0.30


def test_mine_half_support(worked_csv, tmp_path):
    out = tmp_path / "tree.json"
    assert main(["mine", "--technique", "coreflow", "--min-support", "0.5",
                 "--input", str(worked_csv), "--output", str(out)]) == 0
    s = deserialize(out.read_bytes())
    assert sorted((s.label(n.event), n.support) for n in s.visible_nodes()) == [("A", 3), ("B", 2)]


def test_wrong_granularity_flag(worked_csv, tmp_path, capsys):
    code = main(["mine", "--technique", "synopsis", "--min-support", "0.1",
                 "--input", str(worked_csv), "--output", str(tmp_path / "x.json")])
    assert code == 1
    assert "--lambda" in capsys.readouterr().err
    assert not (tmp_path / "x.json").exists()

    code = main(["mine", "--technique", "sententree",
                 "--input", str(worked_csv), "--output", str(tmp_path / "x.json")])
    assert code == 1


def test_render_is_byte_identical(worked_csv, tmp_path):
    summary = tmp_path / "dag.json"
    assert main(["mine", "--technique", "sententree", "--min-support", "0.5",
                 "--input", str(worked_csv), "--output", str(summary)]) == 0

    first, second, layout = tmp_path / "a.svg", tmp_path / "b.svg", tmp_path / "layout.json"
    assert main(["render", "--input", str(summary), "--output", str(first), "--layout-json", str(layout)]) == 0
    assert main(["render", "--input", str(summary), "--output", str(second)]) == 0

    assert first.read_bytes() == second.read_bytes()
    assert "positions" in json.loads(layout.read_text())


def test_render_rejects_bad_layout_flags(worked_csv, tmp_path):
    summary = tmp_path / "s.json"
    main(["mine", "--technique", "synopsis", "--lambda", "0.5",
          "--input", str(worked_csv), "--output", str(summary)])
    assert main(["render", "--input", str(summary), "--output", str(tmp_path / "s.svg"),
                 "--node-width", "0"]) == 1


def test_invalid_summary_file_is_an_input_error(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({
        "kind": "Tree",
        "meta": {"technique": "coreflow", "granularity": 0.5, "dataset": "bad", "labels": ["A", "B"]},
        "nodes": [
            {"id": 0, "event": -1, "support": 2, "avgIndex": 0, "hidden": True},
            {"id": 1, "event": 0, "support": 2, "avgIndex": 0},
            {"id": 2, "event": 1, "support": 1, "avgIndex": 1},
        ],
        "edges": [
            {"source": 0, "target": 1, "support": 2},
            {"source": 0, "target": 2, "support": 1},
            {"source": 1, "target": 2, "support": 1},
        ],
    }))
    assert main(["render", "--input", str(bad), "--output", str(tmp_path / "bad.svg")]) == 1
    assert "not a valid summary" in capsys.readouterr().err


def test_eval(worked_csv, tmp_path, capsys):
    summary = tmp_path / "tree.json"
    main(["mine", "--technique", "coreflow", "--min-support", "0.5",
          "--input", str(worked_csv), "--output", str(summary)])
    insights = tmp_path / "insights.json"
    insights.write_text(json.dumps([
        {"events": ["A", "B"], "expectedCount": 2, "task": "common-pattern"},
        {"events": ["A", "D"], "expectedCount": 2},
        {"events": ["D"], "expectedCount": 0, "absence": True},
    ]))
    report = tmp_path / "report.json"

    assert main(["eval", "--summary", str(summary), "--insights", str(insights), "--report", str(report)]) == 0
    data = json.loads(report.read_text())
    assert data["containsKeyEvents"] == 0.5
    assert data["numbersMatch"] == 0.5
    assert len(data["unsupported"]) == 1
    assert "Contains key events" in capsys.readouterr().out


def test_generate_and_precompute(tmp_path):
    out = tmp_path / "er.csv"
    assert main(["generate", "--profile", "emergency", "--output", str(out)]) == 0
    st = stats(load_dataset(out))
    assert (st.num_sequences, st.total_events) == (100, 451)

    assert main(["generate", "--profile", "emergency", "--output", str(tmp_path / "er.txt")]) == 1


def test_precompute(worked_csv, tmp_path):
    out_dir = tmp_path / "pre"
    assert main(["precompute", "--input", str(worked_csv), "--out-dir", str(out_dir)]) == 0
    assert (out_dir / "index.csv").exists()
    assert len(list(out_dir.glob("*.svg"))) == 18


def test_bench(worked_csv, tmp_path):
    out_dir = tmp_path / "bench"
    assert main(["bench", "--datasets", str(worked_csv.parent), "--out-dir", str(out_dir)]) == 0
    lines = (out_dir / "bench.csv").read_text().splitlines()
    assert len(lines) == 19
    assert (out_dir / "bench.svg").read_bytes().startswith(b"<?xml")


def test_usage_and_input_errors(tmp_path):
    assert main(["mine", "--technique", "coreflow", "--bogus"]) == 1
    assert main(["stats", "--input", str(tmp_path / "missing.csv")]) == 1
    assert main([]) == 1

    broken = tmp_path / "broken.csv"
    broken.write_text("sequence_id,event\ns1,\n")
    assert main(["stats", "--input", str(broken)]) == 1


@pytest.mark.parametrize("body", [{"sequences": 5}, {"sequences": None}])
def test_sequences_must_be_a_list(tmp_path, capsys, body):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(body))

    assert main(["stats", "--input", str(bad)]) == 1
    assert "sequences must be a list" in capsys.readouterr().err


def test_null_patterns_in_summary(worked_csv, tmp_path):
    summary = tmp_path / "s.json"
    main(["mine", "--technique", "coreflow", "--min-support", "0.5",
          "--input", str(worked_csv), "--output", str(summary)])
    raw = json.loads(summary.read_text())
    raw["patterns"] = None
    summary.write_text(json.dumps(raw))

    assert main(["render", "--input", str(summary), "--output", str(tmp_path / "s.svg")]) == 1
