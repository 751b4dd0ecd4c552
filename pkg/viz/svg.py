from typing import Dict, Sequence, Tuple
from xml.sax.saxutils import escape, quoteattr


def fmt(value: float) -> str:
    # fixed two decimals, no "-0.00"
    text = f"{value:.2f}"
    return "0.00" if text == "-0.00" else text


class SvgBuilder:
    """Append-only SVG 1.1 document builder with fixed number formatting."""

    def __init__(self):
        self.svg = ""

    def header(self, width: float, height: float) -> None:
        w, h = fmt(width), fmt(height)
        self.svg += (
            '<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg version="1.1" xmlns="http://www.w3.org/2000/svg" '
            f'width="{w}" height="{h}" viewBox="0 0 {w} {h}">\n'
        )

    def group_start(self, attr: Dict[str, str]) -> None:
        parts = " ".join(f"{k}={quoteattr(str(v))}" for k, v in attr.items())
        self.svg += f"<g {parts}>\n" if parts else "<g>\n"

    def group_end(self) -> None:
        self.svg += "</g>\n"

    def rect(self, x: float, y: float, width: float, height: float, fill: str, extra: str = "") -> None:
        extra = f" {extra}" if extra else ""
        self.svg += (
            f'<rect x="{fmt(x)}" y="{fmt(y)}" width="{fmt(width)}" height="{fmt(height)}" '
            f'fill="{fill}"{extra}/>\n'
        )

    def curve(self, points: Sequence[Tuple[float, float]], stroke: str, width: float, extra: str = "") -> None:
        """Vertical cubic segments through consecutive waypoints."""
        x0, y0 = points[0]
        d = [f"M{fmt(x0)},{fmt(y0)}"]
        for (ax, ay), (bx, by) in zip(points, points[1:]):
            my = (ay + by) / 2.0
            d.append(f"C{fmt(ax)},{fmt(my)} {fmt(bx)},{fmt(my)} {fmt(bx)},{fmt(by)}")
        extra = f" {extra}" if extra else ""
        self.svg += (
            f'<path d="{" ".join(d)}" fill="none" stroke="{stroke}" '
            f'stroke-width="{fmt(width)}"{extra}/>\n'
        )

    def text(self, x: float, y: float, string: str, extra: str = "") -> None:
        extra = f" {extra}" if extra else ""
        self.svg += f'<text x="{fmt(x)}" y="{fmt(y)}"{extra}>{escape(string)}</text>\n'

    def get_svg(self) -> bytes:
        return f"{self.svg}</svg>\n".encode("utf-8")
