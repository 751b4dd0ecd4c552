import io
import json
import re
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import pandas as pd

from models.dataset import Dataset, EventType, Sequence
from models.errors import DatasetError, EmptyDatasetError, ParseError
from pipeline.schema_checker import require_keys, require_list

CSV_COLUMNS = ("sequence_id", "event")
FORMATS = ("csv", "json")


def _infer_format(path: Path, fmt: Optional[str]) -> str:
    if fmt:
        fmt = fmt.lower()
    else:
        fmt = path.suffix.lower().lstrip(".")

    if fmt not in FORMATS:
        raise DatasetError(f"Unsupported dataset format '{fmt}' for {path}. Use csv or json.")
    return fmt


def load_dataset(path, fmt: Optional[str] = None, name: Optional[str] = None) -> Dataset:
    """
    Load a dataset from CSV or JSON.

    CSV: header `sequence_id,event` (optional integer `position` column).
    Rows may be grouped or interleaved; order within a sequence_id is the
    file order unless `position` is given.

    JSON: {"name": str, "sequences": [{"id": str, "events": [str, ...]}]}
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Dataset file not found: {path}")

    fmt = _infer_format(path, fmt)
    text = path.read_text(encoding="utf-8")
    if not text.strip():
        raise EmptyDatasetError(f"Dataset file {path} is empty.")

    if fmt == "csv":
        return parse_csv(text, name or path.stem)
    return parse_json(text, name or path.stem)


def _cell(row, column: str) -> str:
    value = getattr(row, column)
    # short rows come back as NaN
    return value.strip() if isinstance(value, str) else ""


def parse_csv(text: str, name: str) -> Dataset:
    try:
        df = pd.read_csv(io.StringIO(text), dtype=str, keep_default_na=False, skip_blank_lines=False)
    except pd.errors.EmptyDataError:
        raise EmptyDatasetError(f"Dataset '{name}' is empty.")
    except pd.errors.ParserError as e:
        m = re.search(r"line (\d+)", str(e))
        raise ParseError(f"malformed CSV row: {e}", line=int(m.group(1)) if m else None)

    missing = [c for c in CSV_COLUMNS if c not in df.columns]
    if missing:
        raise ParseError(f"missing column(s) {missing}; header must be sequence_id,event", line=1)

    if df.empty:
        raise EmptyDatasetError(f"Dataset '{name}' has a header but no rows.")

    has_position = "position" in df.columns

    # Header is line 1, first data row is line 2. Blank lines stay in the
    # frame as rows so every row maps to one physical line.
    lines = text.splitlines()
    groups: Dict[str, List[Tuple[int, int, str]]] = {}
    order: Dict[str, int] = {}  # alphabet in first-appearance (file) order
    for idx, row in enumerate(df.itertuples(index=False)):
        line = idx + 2
        if line <= len(lines) and not lines[line - 1].strip():
            continue
        if any(isinstance(v, str) and ("\n" in v or "\r" in v) for v in row):
            raise ParseError("quoted field spans several lines", line=line)
        seq_id = _cell(row, "sequence_id")
        label = _cell(row, "event")
        if not seq_id:
            raise ParseError("empty sequence_id", line=line)
        if not label:
            raise ParseError("empty event label", line=line)

        pos = idx
        if has_position:
            raw = _cell(row, "position")
            try:
                pos = int(raw)
            except ValueError:
                raise ParseError(f"position '{raw}' is not an integer", line=line)

        groups.setdefault(seq_id, []).append((pos, idx, label))
        order.setdefault(label, len(order))

    if not groups:
        raise EmptyDatasetError(f"Dataset '{name}' has a header but no rows.")

    rows = []
    for seq_id, items in groups.items():
        items.sort(key=lambda t: (t[0], t[1]))
        rows.append((seq_id, [lbl for _, _, lbl in items]))

    return _build(name, rows, list(order))


def parse_json(text: str, name: str) -> Dataset:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", line=e.lineno)

    try:
        require_keys(raw, ("sequences",), "dataset")
        sequences = require_list(raw, "sequences", "dataset")
    except ValueError as e:
        raise ParseError(str(e))

    rows = []
    for i, seq in enumerate(sequences):
        try:
            require_keys(seq, ("id", "events"), f"sequences[{i}]")
        except ValueError as e:
            raise ParseError(str(e))
        events = seq["events"]
        if not isinstance(events, list) or not all(isinstance(ev, str) for ev in events):
            raise ParseError(f"sequences[{i}].events must be a list of strings")
        rows.append((str(seq["id"]), events))

    if not rows:
        raise EmptyDatasetError(f"Dataset '{name}' has no sequences.")

    return _build(raw.get("name") or name, rows, None)


def _build(name: str, rows, label_order: Optional[List[str]]) -> Dataset:
    for seq_id, events in rows:
        if not events:
            raise DatasetError(f"Sequence '{seq_id}' has no events.")

    if label_order is None:
        return Dataset.from_labels(name, rows)

    alphabet = tuple(EventType(i, label) for i, label in enumerate(label_order))
    lookup = {label: i for i, label in enumerate(label_order)}
    sequences = tuple(Sequence(sid, tuple(lookup[lbl] for lbl in evs)) for sid, evs in rows)
    return Dataset(name=name, alphabet=alphabet, sequences=sequences)


def dataset_to_dict(d: Dataset) -> Dict[str, Any]:
    return {
        "name": d.name,
        "sequences": [{"id": sid, "events": events} for sid, events in d.to_rows()],
    }


def dump_dataset(d: Dataset, fmt: str = "json") -> bytes:
    """Canonical serialization: sorted keys JSON, or grouped CSV."""
    if fmt == "json":
        text = json.dumps(dataset_to_dict(d), sort_keys=True, indent=2, ensure_ascii=False) + "\n"
        return text.encode("utf-8")

    if fmt == "csv":
        records = [(sid, label) for sid, events in d.to_rows() for label in events]
        df = pd.DataFrame(records, columns=list(CSV_COLUMNS))
        return df.to_csv(index=False, lineterminator="\n").encode("utf-8")

    raise DatasetError(f"Unsupported dataset format '{fmt}'.")
