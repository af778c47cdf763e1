"""Minimal SVG scatter rendering of the joint spectrum over the admissible
region: one circle per spectrum point, the boundary curves as polylines, and
a cross marking the isolated critical value (1, 0).

Pure string assembly; deterministic output for identical inputs.
"""

from .cubic import sample_locus
from .spectrum import SpectrumPoint

_W = 640.0
_H = 480.0
_MARGIN = 48.0


def _fmt(x: float) -> str:
    return format(x, ".6g")


class _Frame:
    def __init__(self, h_min, h_max, l_min, l_max):
        self.h_min, self.h_max = h_min, h_max
        self.l_min, self.l_max = l_min, l_max

    def x(self, h):
        return _MARGIN + (h - self.h_min) / (self.h_max - self.h_min) * (_W - 2 * _MARGIN)

    def y(self, l):
        return _H - _MARGIN - (l - self.l_min) / (self.l_max - self.l_min) * (_H - 2 * _MARGIN)

    def contains(self, h, l):
        return self.h_min <= h <= self.h_max and self.l_min <= l <= self.l_max


def render_spectrum_svg(spectrum: list[SpectrumPoint], locus_count: int = 400) -> str:
    hs = [p.h for p in spectrum] or [0.0]
    ls = [p.l for p in spectrum] or [0.0]
    pad_h = 0.08 * (max(hs) - min(hs) + 1.0)
    pad_l = 0.08 * (max(ls) - min(ls) + 1.0)
    frame = _Frame(
        min(min(hs), -1.0) - pad_h,
        max(max(hs), 1.0) + pad_h,
        min(ls) - pad_l,
        max(ls) + pad_l,
    )
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{int(_W)}" height="{int(_H)}" '
        f'viewBox="0 0 {int(_W)} {int(_H)}">',
        f'<rect x="0" y="0" width="{int(_W)}" height="{int(_H)}" fill="white"/>',
    ]
    # boundary curves, clipped to the plot frame
    for sign in (1, -1):
        pts = [
            bp for bp in sample_locus(locus_count) if bp.sign == sign
        ]
        pts.sort(key=lambda bp: bp.s)
        coords = [
            f"{_fmt(frame.x(bp.h))},{_fmt(frame.y(bp.l))}"
            for bp in pts
            if frame.contains(bp.h, bp.l)
        ]
        if coords:
            parts.append(
                f'<polyline fill="none" stroke="black" stroke-width="1" '
                f'points="{" ".join(coords)}"/>'
            )
    # pinch point marker as a cross (not a circle: circles count spectrum points)
    px, py = frame.x(1.0), frame.y(0.0)
    parts.append(
        f'<path d="M {_fmt(px - 4)} {_fmt(py - 4)} L {_fmt(px + 4)} {_fmt(py + 4)} '
        f'M {_fmt(px - 4)} {_fmt(py + 4)} L {_fmt(px + 4)} {_fmt(py - 4)}" '
        f'stroke="red" stroke-width="1.5"/>'
    )
    for p in spectrum:
        parts.append(
            f'<circle cx="{_fmt(frame.x(p.h))}" cy="{_fmt(frame.y(p.l))}" '
            f'r="2" fill="steelblue"/>'
        )
    parts.append(
        f'<text x="{_fmt(_W / 2)}" y="{_fmt(_H - 12)}" font-size="12" '
        f'text-anchor="middle">h</text>'
    )
    parts.append(
        f'<text x="16" y="{_fmt(_H / 2)}" font-size="12" text-anchor="middle">l</text>'
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
