from dataclasses import asdict, dataclass, field
from typing import Any, Dict, FrozenSet, Optional, Tuple

import config
from models.errors import StructureError
from models.summary import Summary, SummaryKind, to_digraph, validate
from viz.sugiyama import LayeredLayout
from viz.tidy_tree import tidy_positions

Point = Tuple[float, float]


@dataclass(frozen=True)
class LayoutConfig:
    node_width: float = config.NODE_WIDTH
    node_height: float = config.NODE_HEIGHT
    horizontal_gap: float = config.HORIZONTAL_GAP
    vertical_gap: float = config.VERTICAL_GAP
    canvas_width: float = config.CANVAS_WIDTH
    canvas_height: float = config.CANVAS_HEIGHT
    link_width_per_sequence: float = config.LINK_WIDTH_PER_SEQUENCE

    def __post_init__(self):
        for name, value in asdict(self).items():
            if value <= 0:
                raise ValueError(f"LayoutConfig.{name} must be positive, got {value}.")

    @property
    def column(self) -> float:
        return self.node_width + self.horizontal_gap

    @property
    def row(self) -> float:
        return self.node_height + self.vertical_gap

    def stroke_width(self, support: int) -> float:
        """support x px-per-sequence, clamped to [1, node_height]."""
        return min(max(support * self.link_width_per_sequence, 1.0), self.node_height)


@dataclass(frozen=True)
class LayoutResult:
    """
    Node positions are top-left corners of node rectangles. Edge routes are
    waypoints from the source's bottom center to the target's top center;
    the renderer joins consecutive waypoints with vertical cubic curves.
    """
    positions: Dict[int, Point]
    edge_routes: Dict[Tuple[int, int], Tuple[Point, ...]]
    size: Tuple[float, float]
    hidden: FrozenSet[int] = frozenset()
    config: LayoutConfig = field(default_factory=LayoutConfig)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "size": list(self.size),
            "positions": {str(k): list(v) for k, v in sorted(self.positions.items())},
            "hidden": sorted(self.hidden),
            "edges": [
                {"source": u, "target": v, "route": [list(p) for p in route]}
                for (u, v), route in sorted(self.edge_routes.items())
            ],
            "config": asdict(self.config),
        }


def _finish(s: Summary, positions: Dict[int, Point], cfg: LayoutConfig, waypoints=None, center: bool = True) -> LayoutResult:
    """Optionally center narrow drawings on the canvas, then route every edge."""
    if not positions:
        return LayoutResult({}, {}, (0.0, 0.0), frozenset(), cfg)

    content_w = max(x for x, _ in positions.values()) + cfg.node_width
    content_h = max(y for _, y in positions.values()) + cfg.node_height
    shift = max(0.0, (cfg.canvas_width - content_w) / 2.0) if center else 0.0
    positions = {k: (x + shift, y) for k, (x, y) in positions.items()}

    routes = {}
    for e in s.edges:
        sx, sy = positions[e.source]
        tx, ty = positions[e.target]
        middle = [(x + shift + cfg.node_width / 2.0, y + cfg.node_height / 2.0)
                  for x, y in (waypoints or {}).get((e.source, e.target), [])]
        routes[(e.source, e.target)] = tuple(
            [(sx + cfg.node_width / 2.0, sy + cfg.node_height)]
            + middle
            + [(tx + cfg.node_width / 2.0, ty)]
        )

    hidden = frozenset(n.node_id for n in s.nodes if n.hidden)
    size = (max(content_w + shift, cfg.canvas_width), content_h)
    return LayoutResult(positions, routes, size, hidden, cfg)


def layout_tree(s: Summary, cfg: Optional[LayoutConfig] = None) -> LayoutResult:
    """
    Tidy tree: subtrees compacted, parents centered over their children,
    y = depth x (node height + vertical gap).
    """
    cfg = cfg or LayoutConfig()
    if s.kind != SummaryKind.TREE:
        raise StructureError(f"layout_tree expects a Tree summary, got {s.kind.value}.")
    ok, violations = validate(s)
    if not ok:
        raise StructureError(f"invalid tree: {'; '.join(violations)}")
    if not s.nodes:
        return _finish(s, {}, cfg)

    children = s.children()
    targets = {e.target for e in s.edges}
    root = next(n.node_id for n in s.nodes if n.node_id not in targets)

    units = tidy_positions(root, children)
    positions = {k: (x * cfg.column, depth * cfg.row) for k, (x, depth) in units.items()}
    return _finish(s, positions, cfg)


def layout_dag(s: Summary, cfg: Optional[LayoutConfig] = None) -> LayoutResult:
    """Layered (Sugiyama) drawing; long edges bend through their dummy slots."""
    cfg = cfg or LayoutConfig()
    if not s.nodes:
        return _finish(s, {}, cfg)

    layered = LayeredLayout(to_digraph(s))
    slots = layered.slots()

    positions = {
        n.node_id: (slots[n.node_id][0] * cfg.column, slots[n.node_id][1] * cfg.row)
        for n in s.nodes
    }
    waypoints = {
        edge: [(slots[d][0] * cfg.column, slots[d][1] * cfg.row) for d in chain]
        for edge, chain in layered.chains.items()
        if chain
    }
    return _finish(s, positions, cfg, waypoints)


def layout_linear_set(s: Summary, cfg: Optional[LayoutConfig] = None) -> LayoutResult:
    """
    Non-empty pattern k in column k. Node y encodes avgIndex scaled so the largest
    avgIndex reaches the bottom of the canvas; within a column every node
    sits at least one node height below its predecessor in the pattern.
    """
    cfg = cfg or LayoutConfig()
    nodes = s.node_map()
    if not nodes:
        return _finish(s, {}, cfg)

    max_avg = max(n.avg_index for n in nodes.values())
    scale = (cfg.canvas_height - cfg.node_height) / max_avg if max_avg > 0 else 0.0

    positions: Dict[int, Point] = {}
    # largest clusters leftmost; stable for equal sizes. Clusters with an
    # empty pattern get no column, the renderer lists them in a caption.
    ordered = sorted((p for p in s.patterns if p.nodes), key=lambda p: -p.cluster_size)
    for k, pattern in enumerate(ordered):
        x = k * cfg.column
        prev_y = None
        for nid in pattern.nodes:
            y = nodes[nid].avg_index * scale
            if prev_y is not None:
                y = max(y, prev_y + cfg.node_height)
            positions[nid] = (x, y)
            prev_y = y

    missing = set(nodes) - set(positions)
    if missing:
        raise StructureError(f"nodes {sorted(missing)} belong to no pattern.")
    return _finish(s, positions, cfg, center=False)


def layout_summary(s: Summary, cfg: Optional[LayoutConfig] = None) -> LayoutResult:
    if s.kind == SummaryKind.TREE:
        return layout_tree(s, cfg)
    if s.kind == SummaryKind.DAG:
        return layout_dag(s, cfg)
    return layout_linear_set(s, cfg)
