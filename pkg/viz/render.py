from dataclasses import dataclass
from typing import List, Optional, Tuple

import config
from models.errors import StructureError
from models.summary import Summary, SummaryKind
from viz.layout import LayoutResult
from viz.svg import SvgBuilder

# 20-colour categorical cycle, indexed by event id
PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
    "#aec7e8", "#ffbb78", "#98df8a", "#ff9896", "#c5b0d5",
    "#c49c94", "#f7b6d2", "#c7c7c7", "#dbdb8d", "#9edae5",
)

TEXT_COLOR = "#222222"
COUNT_COLOR = "#555555"
EDGE_OPACITY = "0.55"


@dataclass(frozen=True)
class Style:
    palette: Tuple[str, ...] = PALETTE
    font_size: float = config.FONT_SIZE
    background: str = config.BACKGROUND
    margin: float = config.MARGIN
    label_max_chars: int = config.LABEL_MAX_CHARS

    def color(self, event: int) -> str:
        return self.palette[event % len(self.palette)]

    def truncate(self, label: str) -> str:
        if len(label) <= self.label_max_chars:
            return label
        return label[: self.label_max_chars - 1] + "…"


def _check_ids(s: Summary, l: LayoutResult) -> None:
    node_ids = {n.node_id for n in s.nodes}
    if node_ids != set(l.positions):
        extra = sorted(set(l.positions) - node_ids)
        missing = sorted(node_ids - set(l.positions))
        raise StructureError(f"layout does not match summary: missing {missing}, unknown {extra}.")
    edge_ids = {(e.source, e.target) for e in s.edges}
    if edge_ids != set(l.edge_routes):
        raise StructureError("layout edge routes do not match summary edges.")


def _midpoint(route):
    mid = len(route) // 2
    if len(route) % 2:
        return route[mid]
    (ax, ay), (bx, by) = route[mid - 1], route[mid]
    return (ax + bx) / 2.0, (ay + by) / 2.0


def empty_cluster_sizes(s: Summary) -> List[int]:
    """Sizes of LinearSet clusters whose pattern has no events, largest first."""
    return sorted((p.cluster_size for p in s.patterns if not p.nodes), reverse=True)


def render_svg(s: Summary, l: LayoutResult, style: Optional[Style] = None) -> bytes:
    """
    Draw a laid-out summary as SVG.

    Nodes: coloured rect + label per visible node. Edges: curves whose width
    grows with support. Counts sit on edges for Tree/DAG and beside nodes
    for LinearSet. Edges leaving a hidden node start at the top of the
    drawing area. LinearSet clusters without a common pattern are listed
    by size in a caption under the drawing.
    """
    style = style or Style()
    _check_ids(s, l)

    cfg = l.config
    m = style.margin
    width, height = l.size
    nodes = s.node_map()
    empty = empty_cluster_sizes(s)
    caption = 2 * style.font_size if empty else 0.0

    svg = SvgBuilder()
    svg.header(width + 2 * m, height + 2 * m + caption)
    svg.rect(0, 0, width + 2 * m, height + 2 * m + caption, style.background)

    font = f'font-family="sans-serif" font-size="{style.font_size:g}"'
    if empty:
        sizes = ", ".join(str(size) for size in empty)
        svg.text(m, height + m + 1.5 * style.font_size, f"no common pattern: {sizes}", f'{font} fill="{COUNT_COLOR}"')

    if not nodes:
        return svg.get_svg()

    svg.group_start({"class": "edges"})
    for e in s.edges:
        route = [(x + m, y + m) for x, y in l.edge_routes[(e.source, e.target)]]
        if nodes[e.source].hidden:
            route[0] = (route[0][0], m)
        svg.curve(
            route,
            style.color(nodes[e.target].event),
            cfg.stroke_width(e.support),
            f'stroke-opacity="{EDGE_OPACITY}"',
        )
        if s.kind != SummaryKind.LINEAR_SET:
            mx, my = _midpoint(route)
            svg.text(mx + 4, my, str(e.support), f'{font} fill="{COUNT_COLOR}"')
    svg.group_end()

    svg.group_start({"class": "nodes"})
    for n in s.nodes:
        if n.hidden:
            continue
        x, y = l.positions[n.node_id]
        x, y = x + m, y + m
        svg.rect(x, y, cfg.node_width, cfg.node_height, style.color(n.event), 'rx="3"')
        svg.text(
            x + cfg.node_width / 2.0,
            y + cfg.node_height / 2.0,
            style.truncate(s.label(n.event)),
            f'{font} fill="{TEXT_COLOR}" text-anchor="middle" dominant-baseline="central"',
        )
        if s.kind == SummaryKind.LINEAR_SET:
            svg.text(
                x + cfg.node_width + 4,
                y + cfg.node_height / 2.0,
                str(n.support),
                f'{font} fill="{COUNT_COLOR}" dominant-baseline="central"',
            )
    svg.group_end()

    return svg.get_svg()
