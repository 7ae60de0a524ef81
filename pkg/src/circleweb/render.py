"""SVG rendering of stereographic web pictures.

Draws the foliation circles of a web in three colors (full circles, as in
the published figures), with optional overlays: the unit circle and the
marching-squares contour of the tangency-discriminant, which traces the
boundary arcs of the regular web domain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .minkgeom import ImaginaryCircle, PlanarCircle, PlanarPoint, circle_from_polar
from .polycurve import BasePointError, CurveError, INFINITY, RationalCurve, eval_curve
from .webcore import PointClass, discriminant_sign, solve_web_point

DEFAULT_COLORS = ("#c03028", "#2868c0", "#28a048")


class RenderError(Exception):
    pass


class EmptyPicture(RenderError):
    """Nothing drawable: every sampled circle imaginary or off-viewport."""


def _fmt(v: float) -> str:
    if v == 0.0:
        v = 0.0  # normalize -0.0
    return f"{v:.10g}"


@dataclass(frozen=True)
class RenderSpec:
    """Viewport, per-foliation samples, and styling for web figures."""

    window: tuple[float, float, float, float] = (-2.0, 2.0, -2.0, 2.0)
    size: int = 600
    count: int = 20
    u_range: tuple[float, float] = (-4.0, 4.0)
    u_samples: Optional[tuple[Sequence[float], ...]] = None
    colors: tuple[str, str, str] = DEFAULT_COLORS
    stroke_width: float = 1.2
    boundary_color: str = "#404040"
    show_boundary: bool = False
    show_unit_circle: bool = False
    boundary_grid: int = 81

    def __post_init__(self):
        xmin, xmax, ymin, ymax = self.window
        if not (xmax > xmin and ymax > ymin):
            raise RenderError("empty viewport window")
        if self.size <= 0:
            raise RenderError("pixel size must be positive")
        if self.u_samples is not None:
            if len(self.u_samples) != 3 or any(len(s) == 0 for s in self.u_samples):
                raise RenderError("u_samples needs three nonempty lists")
        elif self.count < 1:
            raise RenderError("sample count must be >= 1")
        if self.boundary_grid < 4:
            raise RenderError("boundary grid too coarse")


def _probe_regular(c: RationalCurve, spec: RenderSpec):
    """First Regular/RootAtInfinity web point on a coarse viewport scan."""
    xmin, xmax, ymin, ymax = spec.window
    for ix in range(1, 12):
        for iy in range(1, 12):
            p = PlanarPoint(xmin + ix * (xmax - xmin) / 12.0,
                            ymin + iy * (ymax - ymin) / 12.0)
            try:
                wp = solve_web_point(c, p)
            except Exception:
                continue
            if not isinstance(wp, PointClass) and not wp.has_infinite_root:
                return wp
    return None


def _foliation_samples(c: RationalCurve, spec: RenderSpec) -> list[list[float]]:
    if spec.u_samples is not None:
        return [list(s) for s in spec.u_samples]
    lo, hi = spec.u_range
    wp = _probe_regular(c, spec)
    if wp is None:
        # no regular probe: one band over the whole range, three slices
        cuts = np.linspace(lo, hi, 4)
    else:
        r = sorted(wp.roots)
        mids = [(r[0] + r[1]) / 2.0, (r[1] + r[2]) / 2.0]
        cuts = [lo, max(lo, min(mids[0], hi)), max(lo, min(mids[1], hi)), hi]
    bands = []
    for i in range(3):
        a, b = cuts[i], cuts[i + 1]
        pad = (b - a) / (spec.count + 1)
        bands.append(list(np.linspace(a + pad, b - pad, spec.count)))
    return bands


def _clip_line(a: float, b: float, cc: float,
               window: tuple[float, float, float, float]):
    """Segment of the line a*x+b*y+cc=0 inside the window, or None."""
    xmin, xmax, ymin, ymax = window
    pts = []
    if abs(b) > abs(a):
        for x in (xmin, xmax):
            y = -(a * x + cc) / b
            if ymin - 1e-12 <= y <= ymax + 1e-12:
                pts.append((x, y))
        for y in (ymin, ymax):
            if abs(a) > 0.0:
                x = -(b * y + cc) / a
                if xmin - 1e-12 <= x <= xmax + 1e-12:
                    pts.append((x, y))
    else:
        for y in (ymin, ymax):
            x = -(b * y + cc) / a
            if xmin - 1e-12 <= x <= xmax + 1e-12:
                pts.append((x, y))
        for x in (xmin, xmax):
            if abs(b) > 0.0:
                y = -(a * x + cc) / b
                if ymin - 1e-12 <= y <= ymax + 1e-12:
                    pts.append((x, y))
    uniq = []
    for p in pts:
        if all(abs(p[0] - q[0]) + abs(p[1] - q[1]) > 1e-9 for q in uniq):
            uniq.append(p)
    if len(uniq) < 2:
        return None
    uniq.sort()
    return uniq[0], uniq[-1]


def _circle_path(circ: PlanarCircle,
                 window: tuple[float, float, float, float]) -> Optional[str]:
    xmin, xmax, ymin, ymax = window
    if circ.is_line:
        seg = _clip_line(circ.A, circ.B, circ.C, window)
        if seg is None:
            return None
        (x1, y1), (x2, y2) = seg
        return f"M {_fmt(x1)},{_fmt(y1)} L {_fmt(x2)},{_fmt(y2)}"
    ctr, r = circ.center, circ.radius
    if (ctr.x + r < xmin or ctr.x - r > xmax
            or ctr.y + r < ymin or ctr.y - r > ymax):
        return None
    return (f"M {_fmt(ctr.x + r)},{_fmt(ctr.y)} "
            f"A {_fmt(r)},{_fmt(r)} 0 1 0 {_fmt(ctr.x - r)},{_fmt(ctr.y)} "
            f"A {_fmt(r)},{_fmt(r)} 0 1 0 {_fmt(ctr.x + r)},{_fmt(ctr.y)} Z")


def _marching_squares(values: np.ndarray, xs: np.ndarray, ys: np.ndarray):
    """Zero-level segments of a scalar grid, linear interpolation per edge."""
    segs = []
    ny, nx = values.shape

    def interp(x1, y1, v1, x2, y2, v2):
        t = v1 / (v1 - v2)
        return (x1 + t * (x2 - x1), y1 + t * (y2 - y1))

    for j in range(ny - 1):
        for i in range(nx - 1):
            corners = [
                (xs[i], ys[j], values[j, i]),
                (xs[i + 1], ys[j], values[j, i + 1]),
                (xs[i + 1], ys[j + 1], values[j + 1, i + 1]),
                (xs[i], ys[j + 1], values[j + 1, i]),
            ]
            pts = []
            for k in range(4):
                x1, y1, v1 = corners[k]
                x2, y2, v2 = corners[(k + 1) % 4]
                if v1 == 0.0:
                    pts.append((x1, y1))
                elif (v1 < 0.0) != (v2 < 0.0):
                    pts.append(interp(x1, y1, v1, x2, y2, v2))
            uniq = []
            for p in pts:
                if all(abs(p[0] - q[0]) + abs(p[1] - q[1]) > 1e-12 for q in uniq):
                    uniq.append(p)
            if len(uniq) >= 2:
                for k in range(0, len(uniq) - 1, 2):
                    segs.append((uniq[k], uniq[k + 1]))
    return segs


def render_boundary(c: RationalCurve, spec: RenderSpec) -> str:
    """SVG group tracing the zero contour of the tangency discriminant."""
    xmin, xmax, ymin, ymax = spec.window
    n = spec.boundary_grid
    xs = np.linspace(xmin, xmax, n)
    ys = np.linspace(ymin, ymax, n)
    vals = np.zeros((n, n))
    for j, y in enumerate(ys):
        for i, x in enumerate(xs):
            vals[j, i] = discriminant_sign(c, PlanarPoint(x, y))
    segs = _marching_squares(vals, xs, ys)
    parts = [f'<g id="boundary" stroke="{spec.boundary_color}" fill="none" '
             f'stroke-dasharray="4 3">']
    d = []
    for (p1, p2) in segs:
        d.append(f"M {_fmt(p1[0])},{_fmt(p1[1])} L {_fmt(p2[0])},{_fmt(p2[1])}")
    if d:
        parts.append(f'<path d="{" ".join(d)}"/>')
    parts.append("</g>")
    return "\n".join(parts)


def render_web(c: RationalCurve, spec: RenderSpec) -> str:
    """Full SVG document of the web: one group per foliation, each sampled
    circle as a single path, clipped to the viewport; deterministic text."""
    xmin, xmax, ymin, ymax = spec.window
    s = spec.size / (xmax - xmin)
    height = int(round(spec.size * (ymax - ymin) / (xmax - xmin)))
    samples = _foliation_samples(c, spec)
    groups = []
    drawn = 0
    skipped_imaginary = 0
    skipped_outside = 0
    sw = spec.stroke_width / s
    for band, (us, color) in enumerate(zip(samples, spec.colors), start=1):
        paths = []
        for u in us:
            try:
                circ = circle_from_polar(eval_curve(c, u)).normalized()
            except (ImaginaryCircle, BasePointError):
                skipped_imaginary += 1
                continue
            path = _circle_path(circ, spec.window)
            if path is None:
                skipped_outside += 1
                continue
            ulabel = "inf" if math.isinf(u) else _fmt(u)
            paths.append(f'<path data-u="{ulabel}" d="{path}"/>')
            drawn += 1
        groups.append(
            f'<g id="foliation-{band}" stroke="{color}" fill="none">\n'
            + "\n".join(paths) + "\n</g>")
    if drawn == 0:
        raise EmptyPicture(
            f"nothing drawable: {skipped_imaginary} imaginary, "
            f"{skipped_outside} outside the viewport")
    overlays = []
    if spec.show_unit_circle:
        overlays.append(
            '<g id="unit-circle" stroke="#999999" fill="none">'
            f'<path d="{_circle_path(PlanarCircle(1.0, 0.0, 0.0, -1.0), spec.window)}"/></g>')
    if spec.show_boundary:
        overlays.append(render_boundary(c, spec))
    body = "\n".join(groups + overlays)
    transform = (f"translate({_fmt(-xmin * s)},{_fmt(ymax * s)}) "
                 f"scale({_fmt(s)},{_fmt(-s)})")
    return (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{spec.size}" height="{height}" '
        f'viewBox="0 0 {spec.size} {height}" '
        f'data-drawn="{drawn}" data-skipped-imaginary="{skipped_imaginary}" '
        f'data-skipped-outside="{skipped_outside}">\n'
        f'<g transform="{transform}" stroke-width="{_fmt(sw)}" '
        'stroke-linecap="round">\n'
        f"{body}\n"
        "</g>\n"
        "</svg>\n"
    )
