import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import networkx as nx

from config import DEFAULT_TOLERANCE
from models.errors import SchemaError
from models.summary import Summary, to_digraph
from pipeline.schema_checker import require_keys

TASKS = ("common-pattern", "clustering", "anomaly")


@dataclass(frozen=True)
class InsightQuery:
    events: Tuple[str, ...]
    expected_count: int
    tolerance: float = DEFAULT_TOLERANCE
    description: str = ""
    task: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "events", tuple(self.events))
        if not self.events:
            raise ValueError("insight query needs at least one event.")
        if not 0.0 <= self.tolerance < 1.0:
            raise ValueError(f"tolerance must be in [0, 1), got {self.tolerance}.")
        if self.expected_count < 0:
            raise ValueError(f"expectedCount must be >= 0, got {self.expected_count}.")


@dataclass(frozen=True)
class InsightVerdict:
    contains_key_events: bool
    matched_count: Optional[int]
    numbers_match: bool
    matched_path_nodes: Tuple[int, ...] = ()


@dataclass(frozen=True)
class ScoreReport:
    verdicts: Tuple[Tuple[InsightQuery, InsightVerdict], ...]
    contains_fraction: Optional[float]
    numbers_fraction: Optional[float]


NO_MATCH = InsightVerdict(False, None, False, ())


def _resolve(s: Summary, labels) -> Optional[List[int]]:
    lookup = {label: i for i, label in enumerate(s.meta.labels)}
    ids = [lookup.get(label) for label in labels]
    return None if any(i is None for i in ids) else ids


def best_match(s: Summary, events: List[int]) -> Optional[Tuple[int, Tuple[int, ...]]]:
    """
    Best segment of a directed path through visible nodes that contains
    `events` in order. Score = smallest node/edge support on the segment
    (skipped nodes included); the largest score wins, earlier topological
    states win ties. Returns (score, matched node ids) or None.
    """
    nodes = s.node_map()
    edges = s.edge_map()
    g = to_digraph(s)
    k = len(events)

    # open[(v, j)]: best segment ending at v with events[:j+1] matched (v need not match)
    # done[v]: best segment whose last match (events[k-1]) is v
    open_states: Dict[Tuple[int, int], Tuple[int, Tuple[int, ...]]] = {}
    done: Dict[int, Tuple[int, Tuple[int, ...]]] = {}

    def offer(table, key, value):
        current = table.get(key)
        if current is None or value[0] > current[0]:
            table[key] = value

    for v in nx.lexicographical_topological_sort(g):
        node = nodes[v]
        if node.hidden:
            continue
        if node.event == events[0]:
            start = (node.support, (v,))
            offer(open_states, (v, 0), start)
            if k == 1:
                offer(done, v, start)

        for j in range(k):
            state = open_states.get((v, j))
            if state is None or j == k - 1:
                continue
            for w in g.successors(v):
                target = nodes[w]
                if target.hidden:
                    continue
                value = min(state[0], edges[(v, w)].support, target.support)
                offer(open_states, (w, j), (value, state[1]))
                if target.event == events[j + 1]:
                    matched = (value, state[1] + (w,))
                    offer(open_states, (w, j + 1), matched)
                    if j + 1 == k - 1:
                        offer(done, w, matched)

    if not done:
        return None
    best = None
    for v in nx.lexicographical_topological_sort(g):
        if v in done and (best is None or done[v][0] > best[0]):
            best = done[v]
    return best


def evaluate(s: Summary, q: InsightQuery) -> InsightVerdict:
    """Does the summary show the insight's events in order, with the quoted count?"""
    events = _resolve(s, q.events)
    if events is None:
        return NO_MATCH

    found = best_match(s, events)
    if found is None:
        return NO_MATCH

    count, path = found
    numbers_match = abs(count - q.expected_count) <= q.tolerance * q.expected_count
    return InsightVerdict(True, count, numbers_match, path)


def score_report(s: Summary, queries: List[InsightQuery]) -> ScoreReport:
    verdicts = tuple((q, evaluate(s, q)) for q in queries)
    if not verdicts:
        return ScoreReport((), None, None)
    n = len(verdicts)
    return ScoreReport(
        verdicts=verdicts,
        contains_fraction=sum(v.contains_key_events for _, v in verdicts) / n,
        numbers_fraction=sum(v.numbers_match for _, v in verdicts) / n,
    )


def report_to_dict(report: ScoreReport) -> Dict[str, Any]:
    return {
        "containsKeyEvents": report.contains_fraction,
        "numbersMatch": report.numbers_fraction,
        "queries": [
            {
                "events": list(q.events),
                "description": q.description,
                "task": q.task,
                "expectedCount": q.expected_count,
                "tolerance": q.tolerance,
                "containsKeyEvents": v.contains_key_events,
                "matchedCount": v.matched_count,
                "numbersMatch": v.numbers_match,
                "matchedPathNodes": list(v.matched_path_nodes),
            }
            for q, v in report.verdicts
        ],
    }


# -------------------------------------------------
# LOADING
# -------------------------------------------------


def parse_insights(raw: Any) -> Tuple[List[InsightQuery], List[Dict[str, Any]]]:
    """
    Insights JSON: a list of
    {"events": [...], "expectedCount": n, "tolerance": 0.1, "description": "...", "task": "..."}.
    Entries flagged "absence": true cannot be checked against a summary and
    are returned separately.
    """
    if not isinstance(raw, list):
        raise SchemaError("insights must be a JSON list.")

    queries, unsupported = [], []
    for i, entry in enumerate(raw):
        name = f"insights[{i}]"
        if not isinstance(entry, dict):
            raise SchemaError(f"{name} must be an object.")
        if entry.get("absence"):
            unsupported.append(entry)
            continue

        require_keys(entry, ("events", "expectedCount"), name)
        events = entry["events"]
        if not isinstance(events, list) or not all(isinstance(e, str) for e in events):
            raise SchemaError(f"{name}.events must be a list of strings.")
        task = entry.get("task")
        if task is not None and task not in TASKS:
            raise SchemaError(f"{name}.task '{task}' is not one of {', '.join(TASKS)}.")

        try:
            queries.append(
                InsightQuery(
                    events=tuple(events),
                    expected_count=int(entry["expectedCount"]),
                    tolerance=float(entry.get("tolerance", DEFAULT_TOLERANCE)),
                    description=str(entry.get("description", "")),
                    task=task,
                )
            )
        except (TypeError, ValueError) as e:
            raise SchemaError(f"{name}: {e}")
    return queries, unsupported


def load_insights(path) -> Tuple[List[InsightQuery], List[Dict[str, Any]]]:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Insights file not found: {path}")
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise SchemaError(f"insights file {path} is not valid JSON: {e.msg} (line {e.lineno})")
    return parse_insights(raw)
