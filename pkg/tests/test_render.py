"""Tests for SVG figure generation."""

import math
import re
import xml.etree.ElementTree as ET

import pytest

from circleweb.minkgeom import circle_from_polar
from circleweb.polycurve import CurveFamily, eval_curve, family_curve
from circleweb.render import (
    EmptyPicture,
    RenderError,
    RenderSpec,
    render_boundary,
    render_web,
)

FIG1 = CurveFamily("cubic", m=1.0 / math.sqrt(3.0), x0=math.sqrt(3.0) / 2.0)
CURVE1 = family_curve(FIG1)

SVG_NS = "{http://www.w3.org/2000/svg}"

ARC_RE = re.compile(
    r"M (?P<x1>[-0-9.e+]+),(?P<y1>[-0-9.e+]+) "
    r"A (?P<r>[-0-9.e+]+),[-0-9.e+]+ 0 1 0 (?P<x2>[-0-9.e+]+),[-0-9.e+]+ A"
)


def _spec(**kw):
    defaults = dict(window=(-2.0, 2.0, -2.0, 2.0), size=400, count=8)
    defaults.update(kw)
    return RenderSpec(**defaults)


def test_render_web_well_formed():
    svg = render_web(CURVE1, _spec())
    root = ET.fromstring(svg)
    assert root.tag == f"{SVG_NS}svg"
    assert int(root.attrib["data-drawn"]) > 0
    groups = root.findall(f"./{SVG_NS}g/{SVG_NS}g")
    ids = [g.attrib.get("id") for g in groups]
    assert ids[:3] == ["foliation-1", "foliation-2", "foliation-3"]


def test_render_web_deterministic():
    a = render_web(CURVE1, _spec())
    b = render_web(CURVE1, _spec())
    assert a == b


def test_render_paths_carry_parameters():
    svg = render_web(CURVE1, _spec())
    root = ET.fromstring(svg)
    paths = root.findall(f".//{SVG_NS}g[@id='foliation-1']/{SVG_NS}path")
    assert paths
    for path in paths:
        assert "data-u" in path.attrib
        assert path.attrib["d"].startswith("M ")


def test_reparse_incidence():
    """Every drawn circle arc must match the circle computed from its own
    data-u parameter: same center and radius to 1e-8."""
    svg = render_web(CURVE1, _spec(count=10))
    root = ET.fromstring(svg)
    checked = 0
    for path in root.findall(f".//{SVG_NS}path"):
        u = path.attrib.get("data-u")
        if u is None or u == "inf":
            continue
        m = ARC_RE.match(path.attrib["d"])
        if m is None:
            continue  # clipped line segment
        x1, y1 = float(m.group("x1")), float(m.group("y1"))
        x2 = float(m.group("x2"))
        r = float(m.group("r"))
        cx, cy = (x1 + x2) / 2.0, y1
        circ = circle_from_polar(eval_curve(CURVE1, float(u)))
        assert abs(circ.center.x - cx) < 1e-8 * (1.0 + abs(cx))
        assert abs(circ.center.y - cy) < 1e-8 * (1.0 + abs(cy))
        assert abs(circ.radius - r) < 1e-8 * (1.0 + r)
        checked += 1
    assert checked >= 5


def test_render_empty_viewport():
    with pytest.raises(EmptyPicture):
        render_web(CURVE1, _spec(window=(500.0, 501.0, 500.0, 501.0),
                                 u_samples=([0.3], [0.4], [0.5])))


def test_render_overlays():
    svg = render_web(CURVE1, _spec(show_unit_circle=True, show_boundary=True,
                                   boundary_grid=21))
    root = ET.fromstring(svg)
    ids = {g.attrib.get("id") for g in root.iter(f"{SVG_NS}g")}
    assert "unit-circle" in ids
    assert "boundary" in ids


def test_render_boundary_stays_in_window():
    spec = _spec(boundary_grid=31)
    group = ET.fromstring(render_boundary(CURVE1, spec))
    assert group.attrib["id"] == "boundary"
    xmin, xmax, ymin, ymax = spec.window
    for path in group:
        nums = [float(v) for v in re.findall(r"[-0-9.e+]+", path.attrib["d"])]
        xs, ys = nums[0::2], nums[1::2]
        assert all(xmin - 1e-9 <= x <= xmax + 1e-9 for x in xs)
        assert all(ymin - 1e-9 <= y <= ymax + 1e-9 for y in ys)


def test_render_custom_u_samples():
    spec = _spec(u_samples=([0.3], [1.5], [-0.7]))
    root = ET.fromstring(render_web(CURVE1, spec))
    us = [p.attrib["data-u"] for p in root.findall(f".//{SVG_NS}path")]
    assert us == ["0.3", "1.5", "-0.7"]


def test_render_spec_validation():
    with pytest.raises(RenderError):
        RenderSpec(window=(1.0, 1.0, -1.0, 1.0))
    with pytest.raises(RenderError):
        RenderSpec(size=0)
    with pytest.raises(RenderError):
        RenderSpec(count=0)
    with pytest.raises(RenderError):
        RenderSpec(u_samples=([], [1.0], [2.0]))
    with pytest.raises(RenderError):
        RenderSpec(boundary_grid=2)
