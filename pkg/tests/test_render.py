import math
import xml.etree.ElementTree as ET

import pytest
from pydantic import ValidationError

from src.core.exceptions import FigureError
from src.models import PovmElement, Vec3
from src.schemas import Arrow, ArrowStyle, FigureSpec, Plane
from src.services import discrimination as usd
from src.services.render_service import (
    figure_construction,
    figure_decomposition,
    figure_povm,
    figure_usd,
    render_svg,
)

NS = "{http://www.w3.org/2000/svg}"


def parse(svg: str) -> ET.Element:
    return ET.fromstring(svg.encode("utf-8"))


def arrows(root: ET.Element):
    return [e for e in root.iter(NS + "line") if e.get("class", "").startswith("arrow")]


def tip(line: ET.Element):
    return float(line.get("x2")), float(line.get("y2"))


def length(line: ET.Element) -> float:
    return math.hypot(
        float(line.get("x2")) - float(line.get("x1")),
        float(line.get("y2")) - float(line.get("y1")),
    )


def test_empty_figure_is_circle_only():
    root = parse(render_svg(FigureSpec()))
    assert len(list(root.iter(NS + "circle"))) == 1
    assert arrows(root) == []


def test_von_neumann_arrows_are_opposite(von_neumann_z):
    root = parse(render_svg(figure_povm(von_neumann_z)))
    up, down = arrows(root)
    assert tip(up) == pytest.approx((200.0, 50.0), abs=0.5)
    assert tip(down) == pytest.approx((200.0, 350.0), abs=0.5)
    assert length(up) == pytest.approx(length(down))


def test_trine_tips_follow_bloch_mapping(trine):
    root = parse(render_svg(figure_povm(trine)))
    found = arrows(root)
    assert len(found) == 3
    for line, e in zip(found, trine.elements):
        expected = (200 + 150 * e.v.x, 200 - 150 * e.v.z)
        assert tip(line) == pytest.approx(expected, abs=0.5)
        assert line.get("marker-end") == "url(#head-povm)"


def test_usd_figure():
    d = usd.design_usd_for_angle(math.pi / 2)
    root = parse(render_svg(figure_usd(d)))
    found = arrows(root)
    assert len(found) == 5
    styles = [line.get("class").split()[1] for line in found]
    assert styles == ["state", "state", "povm", "povm", "inconclusive"]
    v1, v2 = d.povm.elements[usd.DETECT_PHI].v, d.povm.elements[usd.DETECT_PSI].v
    bisector = -(v1 + v2)
    assert tip(found[4]) == pytest.approx((200 + 150 * bisector.x, 200 - 150 * bisector.z), abs=0.5)
    # the inconclusive arrow lies on the bisector of the two state arrows
    assert tip(found[4])[0] - 200 == pytest.approx(-(tip(found[4])[1] - 200), abs=0.5)


def test_construction_figure_has_guide_path():
    d = usd.design_usd_for_angle(math.pi / 2)
    root = parse(render_svg(figure_construction(d)))
    guides = [e for e in root.iter(NS + "polyline") if e.get("class") == "guide"]
    assert len(guides) == 1
    points = guides[0].get("points").split()
    assert len(points) == 3
    assert points[0] == "200.000,200.000"
    assert len(arrows(root)) == 3


def test_decomposition_figure():
    root = parse(render_svg(figure_decomposition(PovmElement(a=1, v=(0, 0, 0.5)))))
    found = arrows(root)
    assert [line.get("class") for line in found] == ["arrow povm", "arrow povm", "arrow mixed"]
    assert tip(found[0]) == pytest.approx((200.0, 200 - 150 * 0.75), abs=0.5)
    assert tip(found[1]) == pytest.approx((200.0, 200 + 150 * 0.25), abs=0.5)


def test_render_is_deterministic(trine):
    fig = figure_povm(trine, {"psi": Vec3.of((0, 0, 1))})
    assert render_svg(fig) == render_svg(fig)


def test_labels_are_escaped():
    svg = render_svg(FigureSpec(arrows=(Arrow(vector=(0, 0, 1), label="<psi&phi>"),)))
    assert "&lt;psi&amp;phi&gt;" in svg
    parse(svg)


def test_other_plane():
    plane = Plane(horizontal=(0, 1, 0), vertical=(0, 0, 1))
    fig = FigureSpec(plane=plane, arrows=(Arrow(vector=(0, 1, 0), style=ArrowStyle.STATE),))
    root = parse(render_svg(fig))
    assert tip(arrows(root)[0]) == pytest.approx((350.0, 200.0), abs=0.5)
    labels = [t.text for t in root.iter(NS + "text")]
    assert "Y" in labels and "Z" in labels


def test_arrow_outside_canvas_is_rejected():
    with pytest.raises(ValidationError) as info:
        FigureSpec(arrows=(Arrow(vector=(0, 0, 2)),))
    assert info.value.errors()[0]["type"] == "figure_bounds"


def test_builder_reports_oversized_element_as_figure_error():
    e = PovmElement(a=1.8, v=(0, 0, 1.7))
    with pytest.raises(FigureError, match="unit disk"):
        figure_decomposition(e)
    with pytest.raises(FigureError, match="outside the canvas"):
        figure_povm(None, {"far": Vec3.of((0, 0, 1.7))})


def test_circle_must_fit():
    with pytest.raises(ValidationError):
        FigureSpec(width=200, height=200, radius=150)


def test_plane_axes_must_be_orthonormal():
    with pytest.raises(ValidationError) as info:
        Plane(horizontal=(1, 0, 0), vertical=(1, 0, 1))
    assert info.value.errors()[0]["type"] == "plane_axes"
