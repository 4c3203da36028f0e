"""Deterministic SVG rendering of admissible regions.

All coordinates are written with three decimals, so identical inputs give
byte-identical files.
"""

from __future__ import annotations

from fractions import Fraction

from . import geometry as geo

VIEWPORT = (-3.0, 3.0, -3.0, 3.0)
PANEL = 200.0
GAP = 30.0
TITLE = 22.0
FILL = "#9ecae1"
STROKE = "#08519c"

# One (c, d) pair per panel, row by row from the top.
GRID_PARAMS = (
    ((Fraction(-1), Fraction(-1)), (Fraction(0), Fraction(-1)), (Fraction(2), Fraction(-1))),
    ((Fraction(-1, 8), Fraction(-1, 10)), (Fraction(0), Fraction(0)), (Fraction(-2), Fraction(1, 8))),
    ((Fraction(0), Fraction(1, 3)), (Fraction(0), Fraction(1)), (Fraction(1), Fraction(1))),
)


def _n(v):
    out = f"{round(float(v), 3):.3f}"
    return "0.000" if out == "-0.000" else out


class _Frame:
    """Maps region coordinates into one panel placed at ``(ox, oy)``."""

    def __init__(self, ox, oy, size=PANEL, viewport=VIEWPORT):
        self.ox, self.oy, self.size = ox, oy, size
        self.vp = viewport

    def x(self, re):
        xmin, xmax = self.vp[0], self.vp[1]
        return self.ox + (re - xmin) / (xmax - xmin) * self.size

    def y(self, im):
        ymin, ymax = self.vp[2], self.vp[3]
        return self.oy + (ymax - im) / (ymax - ymin) * self.size

    def scale(self, length):
        return length / (self.vp[1] - self.vp[0]) * self.size


def _rect_path(f):
    x0, y0 = f.ox, f.oy
    x1, y1 = f.ox + f.size, f.oy + f.size
    return f"M{_n(x0)},{_n(y0)} H{_n(x1)} V{_n(y1)} H{_n(x0)} Z"


def _circle_path(cx, cy, r):
    return (f"M{_n(cx - r)},{_n(cy)} A{_n(r)},{_n(r)} 0 1 0 {_n(cx + r)},{_n(cy)} "
            f"A{_n(r)},{_n(r)} 0 1 0 {_n(cx - r)},{_n(cy)} Z")


def _region_elements(r, f, clip_id):
    """Shading and boundary for one region inside frame ``f``."""
    out = []
    clip = f'clip-path="url(#{clip_id})"'
    if r.shape == geo.FULL:
        out.append(f'<path d="{_rect_path(f)}" fill="{FILL}"/>')
    elif r.shape == geo.HALF:
        bx = min(max(f.x(r.bound), f.ox), f.ox + f.size)
        lo, hi = (bx, f.ox + f.size) if r.orientation > 0 else (f.ox, bx)
        if hi > lo:
            out.append(f'<rect x="{_n(lo)}" y="{_n(f.oy)}" width="{_n(hi - lo)}" '
                       f'height="{_n(f.size)}" fill="{FILL}"/>')
        if f.vp[0] <= r.bound <= f.vp[1]:
            out.append(f'<line x1="{_n(f.x(r.bound))}" y1="{_n(f.oy)}" x2="{_n(f.x(r.bound))}" '
                       f'y2="{_n(f.oy + f.size)}" stroke="{STROKE}" stroke-width="1.5"/>')
    elif r.shape in (geo.DISK, geo.COMPLEMENT):
        cx, cy, rad = f.x(r.center.real), f.y(r.center.imag), f.scale(r.radius)
        if r.shape == geo.DISK:
            d = _circle_path(cx, cy, rad)
            out.append(f'<path d="{d}" fill="{FILL}" {clip}/>')
        else:
            d = _rect_path(f) + " " + _circle_path(cx, cy, rad)
            out.append(f'<path d="{d}" fill="{FILL}" fill-rule="evenodd" {clip}/>')
        out.append(f'<circle cx="{_n(cx)}" cy="{_n(cy)}" r="{_n(rad)}" fill="none" '
                   f'stroke="{STROKE}" stroke-width="1.5" {clip}/>')
    elif r.shape == geo.POINT:
        out.append(f'<circle cx="{_n(f.x(r.center.real))}" cy="{_n(f.y(r.center.imag))}" '
                   f'r="3.000" fill="{STROKE}" {clip}/>')
    return out


def _axes(f):
    x0, y0 = f.x(0.0), f.y(0.0)
    return [
        f'<rect x="{_n(f.ox)}" y="{_n(f.oy)}" width="{_n(f.size)}" height="{_n(f.size)}" '
        f'fill="none" stroke="black" stroke-width="1"/>',
        f'<line x1="{_n(f.ox)}" y1="{_n(y0)}" x2="{_n(f.ox + f.size)}" y2="{_n(y0)}" '
        f'stroke="gray" stroke-width="0.5"/>',
        f'<line x1="{_n(x0)}" y1="{_n(f.oy)}" x2="{_n(x0)}" y2="{_n(f.oy + f.size)}" '
        f'stroke="gray" stroke-width="0.5"/>',
    ]


def _panel(r, ox, oy, title, idx):
    f = _Frame(ox, oy)
    clip_id = f"panel{idx}"
    lines = [f'<g id="{clip_id}-group">',
             f'<clipPath id="{clip_id}"><rect x="{_n(ox)}" y="{_n(oy)}" width="{_n(PANEL)}" '
             f'height="{_n(PANEL)}"/></clipPath>']
    lines += _region_elements(r, f, clip_id)
    lines += _axes(f)
    lines.append(f'<text x="{_n(ox + PANEL / 2)}" y="{_n(oy - 6)}" font-family="sans-serif" '
                 f'font-size="11" text-anchor="middle">{title}</text>')
    lines.append("</g>")
    return lines


def _document(width, height, body):
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{_n(width)}" height="{_n(height)}" '
            f'viewBox="0 0 {_n(width)} {_n(height)}">')
    bg = f'<rect x="0.000" y="0.000" width="{_n(width)}" height="{_n(height)}" fill="white"/>'
    return "\n".join([head, bg] + body + ["</svg>"]) + "\n"


def _label(x):
    x = Fraction(x).limit_denominator(1000)
    return str(x)


def region_svg(r, title=""):
    """Single panel over the ``[-3, 3]^2`` viewport."""
    body = _panel(r, GAP, GAP + TITLE, title or r.describe(), 0)
    return _document(PANEL + 2 * GAP, PANEL + 2 * GAP + TITLE, body)


def panel_grid_svg(params=GRID_PARAMS):
    """3 x 3 grid of admittance regions, one panel per ``(c, d)`` pair."""
    body = []
    for i, row in enumerate(params):
        for j, (c, d) in enumerate(row):
            r = geo.classify_admittance(float(c), float(d))
            ox = GAP + j * (PANEL + GAP)
            oy = GAP + TITLE + i * (PANEL + GAP + TITLE)
            title = f"(c,d) = ({_label(c)}, {_label(d)}): {r.shape} ({r.case})"
            body += _panel(r, ox, oy, title, 3 * i + j)
    width = 3 * PANEL + 4 * GAP
    height = 3 * (PANEL + TITLE) + 4 * GAP
    return _document(width, height, body)
