"""
SVG figures of Bloch-disk cross-sections.

Each arrow is drawn from the disk center to center + radius * (v.h, -v.w)
where (h, w) are the plane's horizontal and vertical axes; SVG y points
down, so Bloch "up" is negative pixel y. Output is deterministic: all
coordinates are printed with three decimals.
"""
import html
from typing import Any, Dict, List, Optional, Tuple

from pydantic import ValidationError

from src.core.exceptions import FigureError
from src.models import PovmElement, PovmSet, UsdDesign, Vec3, ZERO
from src.schemas import Arrow, ArrowStyle, FigureSpec, Guide, Plane
from src.services.bloch_core import decompose_rank1
from src.services.discrimination import DETECT_PHI, DETECT_PSI, INCONCLUSIVE

PREAMBLE = """\
<?xml version="1.0" encoding="UTF-8" standalone="no"?>
<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="%(width)d" height="%(height)d" viewBox="0 0 %(width)d %(height)d">
"""

POSTAMBLE = """\
</svg>
"""

# (stroke, width, dash)
STYLES: Dict[ArrowStyle, Tuple[str, float, Optional[str]]] = {
    ArrowStyle.STATE: ("#000000", 2.0, None),
    ArrowStyle.POVM: ("#808080", 2.0, None),
    ArrowStyle.INCONCLUSIVE: ("#808080", 2.0, "6,4"),
    ArrowStyle.MIXED: ("#000000", 3.0, None),
}

_AXIS_NAMES = {(1, 0, 0): "X", (0, 1, 0): "Y", (0, 0, 1): "Z"}


def _fmt(value: float) -> str:
    text = "%.3f" % value
    return "0.000" if text == "-0.000" else text


def _axis_name(v: Vec3) -> str:
    for key, name in _AXIS_NAMES.items():
        if v.as_tuple() == tuple(float(k) for k in key):
            return name
        if v.as_tuple() == tuple(-float(k) for k in key):
            return "-" + name
    return ""


class SVG:
    def __init__(self, width: int, height: int):
        self.width = width
        self.height = height
        self.commands: List[str] = []

    def markers(self, styles):
        self.commands.append("<defs>")
        for style in styles:
            stroke = STYLES[style][0]
            self.commands.append(
                '<marker id="head-%s" viewBox="0 0 10 10" refX="9" refY="5" '
                'markerWidth="6" markerHeight="6" orient="auto-start-reverse">'
                '<path d="M0,0 L10,5 L0,10 z" fill="%s"/></marker>' % (style.value, stroke)
            )
        self.commands.append("</defs>")

    def background(self, color: str = "#ffffff"):
        self.commands.append('<rect width="%d" height="%d" fill="%s"/>' % (self.width, self.height, color))

    def circle(self, cx: float, cy: float, r: float, css_class: str, stroke: str = "#000000"):
        self.commands.append(
            '<circle class="%s" cx="%s" cy="%s" r="%s" fill="none" stroke="%s" stroke-width="1"/>'
            % (css_class, _fmt(cx), _fmt(cy), _fmt(r), stroke)
        )

    def line(self, start, end, css_class: str, stroke: str, width: float,
             dash: Optional[str] = None, marker: Optional[str] = None):
        extra = ""
        if dash:
            extra += ' stroke-dasharray="%s"' % dash
        if marker:
            extra += ' marker-end="url(#%s)"' % marker
        self.commands.append(
            '<line class="%s" x1="%s" y1="%s" x2="%s" y2="%s" stroke="%s" stroke-width="%s"%s/>'
            % (css_class, _fmt(start[0]), _fmt(start[1]), _fmt(end[0]), _fmt(end[1]), stroke, width, extra)
        )

    def polyline(self, points, css_class: str, stroke: str = "#b0b0b0"):
        self.commands.append(
            '<polyline class="%s" points="%s" fill="none" stroke="%s" stroke-width="1" stroke-dasharray="2,3"/>'
            % (css_class, " ".join("%s,%s" % (_fmt(x), _fmt(y)) for x, y in points), stroke)
        )

    def text(self, x: float, y: float, text: str, color: str = "#444444"):
        self.commands.append(
            '<text x="%s" y="%s" fill="%s" font-size="12" font-family="sans-serif">%s</text>'
            % (_fmt(x), _fmt(y), color, html.escape(text))
        )

    def svg(self) -> str:
        body = "".join(item + "\n" for item in self.commands)
        return PREAMBLE % {"width": self.width, "height": self.height} + body + POSTAMBLE


def render_svg(fig: FigureSpec) -> str:
    svg = SVG(fig.width, fig.height)
    cx, cy = fig.center
    r = fig.radius

    svg.markers(sorted({a.style for a in fig.arrows}, key=lambda s: s.value))
    svg.background()
    svg.line((cx - r - 10, cy), (cx + r + 10, cy), "axis", "#d0d0d0", 1.0)
    svg.line((cx, cy + r + 10), (cx, cy - r - 10), "axis", "#d0d0d0", 1.0)
    h_name, v_name = _axis_name(fig.plane.horizontal), _axis_name(fig.plane.vertical)
    if h_name:
        svg.text(cx + r + 12, cy + 4, h_name)
    if v_name:
        svg.text(cx + 4, cy - r - 12, v_name)
    svg.circle(cx, cy, r, "unit-circle")
    if fig.title:
        svg.text(8, 16, fig.title)

    for guide in fig.guides:
        svg.polyline([fig.to_pixels(p) for p in guide.points], "guide")

    for arrow in fig.arrows:
        stroke, width, dash = STYLES[arrow.style]
        tip = fig.to_pixels(arrow.vector)
        svg.line(
            (cx, cy), tip, "arrow %s" % arrow.style.value, stroke, width,
            dash=dash, marker="head-%s" % arrow.style.value,
        )
        if arrow.label:
            svg.text(tip[0] + 6, tip[1] - 6, arrow.label)
    return svg.svg()


# --- Figure builders -------------------------------------------------------
def _figure(**fields: Any) -> FigureSpec:
    try:
        return FigureSpec(**fields)
    except ValidationError as e:
        reason = "; ".join(err["msg"] for err in e.errors())
        raise FigureError(f"figure does not fit the unit disk: {reason}") from None


def figure_decomposition(e: PovmElement, plane: Optional[Plane] = None) -> FigureSpec:
    """A mixed element and the two rank-1 parts it splits into."""
    d = decompose_rank1(e)
    return _figure(
        plane=plane or Plane(),
        title="rank-1 decomposition",
        arrows=(
            Arrow(vector=d.major.v, style=ArrowStyle.POVM, label="A1"),
            Arrow(vector=d.minor.v, style=ArrowStyle.POVM, label="A2"),
            Arrow(vector=e.v, style=ArrowStyle.MIXED, label="A"),
        ),
    )


def figure_povm(
    povm: Optional[PovmSet],
    states: Optional[Dict[str, Vec3]] = None,
    plane: Optional[Plane] = None,
) -> FigureSpec:
    arrows = [
        Arrow(vector=state, style=ArrowStyle.STATE, label=name)
        for name, state in (states or {}).items()
    ]
    arrows += [
        Arrow(vector=e.v, style=ArrowStyle.POVM, label="A%d" % (i + 1))
        for i, e in enumerate(povm.elements if povm else ())
    ]
    return _figure(plane=plane or Plane(), arrows=tuple(arrows))


def figure_usd(design: UsdDesign, plane: Optional[Plane] = None) -> FigureSpec:
    """Both input states and the three discrimination elements."""
    elements = design.povm.elements
    return _figure(
        plane=plane or Plane(),
        title="alpha = %.4f rad" % design.alpha,
        arrows=(
            Arrow(vector=design.r_psi, style=ArrowStyle.STATE, label="psi"),
            Arrow(vector=design.r_phi, style=ArrowStyle.STATE, label="phi"),
            Arrow(vector=elements[DETECT_PHI].v, style=ArrowStyle.POVM, label="A1"),
            Arrow(vector=elements[DETECT_PSI].v, style=ArrowStyle.POVM, label="A2"),
            Arrow(vector=elements[INCONCLUSIVE].v, style=ArrowStyle.INCONCLUSIVE, label="A?"),
        ),
    )


def figure_construction(design: UsdDesign, plane: Optional[Plane] = None) -> FigureSpec:
    """v_? found by laying -v_1 and -v_2 head to tail."""
    v1 = design.povm.elements[DETECT_PHI].v
    v2 = design.povm.elements[DETECT_PSI].v
    return _figure(
        plane=plane or Plane(),
        title="a? = %.4f" % design.a_inconclusive,
        guides=(Guide(points=(ZERO, -v1, -v1 - v2)),),
        arrows=(
            Arrow(vector=v1, style=ArrowStyle.POVM, label="A1"),
            Arrow(vector=v2, style=ArrowStyle.POVM, label="A2"),
            Arrow(vector=design.povm.elements[INCONCLUSIVE].v, style=ArrowStyle.INCONCLUSIVE, label="A?"),
        ),
    )
