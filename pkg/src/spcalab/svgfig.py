"""Minimal dependency-free SVG chart primitives.

Static, self-contained output: every figure is a single .svg file with no
scripts, fonts, or external references, so the files diff cleanly in review
and render anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field


def fmt(x: float) -> str:
    """Compact coordinate formatting (2 decimals, no trailing zeros)."""
    s = f"{x:.2f}"
    s = s.rstrip("0").rstrip(".")
    return s if s not in ("-0", "") else "0"


def esc(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def nice_ticks(lo: float, hi: float, target: int = 5) -> list[float]:
    """Round tick locations (1/2/5 x 10^k steps) covering [lo, hi]."""
    if not (math.isfinite(lo) and math.isfinite(hi)) or hi <= lo:
        return [lo]
    raw = (hi - lo) / max(target, 1)
    mag = 10.0 ** math.floor(math.log10(raw))
    step = next(s * mag for s in (1.0, 2.0, 5.0, 10.0) if raw <= s * mag)
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + 1e-9 * step:
        ticks.append(0.0 if abs(t) < 1e-12 * step else t)
        t += step
    return ticks


@dataclass
class Panel:
    """One framed x/y plotting area with linear data-to-pixel transforms."""

    panel_id: str
    x0: float
    y0: float
    width: float
    height: float
    xlim: tuple[float, float]
    ylim: tuple[float, float]
    title: str = ""
    xlabel: str = ""
    ylabel: str = ""
    elements: list[str] = field(default_factory=list)

    def px(self, x: float) -> float:
        a, b = self.xlim
        span = b - a if b != a else 1.0
        return self.x0 + (x - a) / span * self.width

    def py(self, y: float) -> float:
        a, b = self.ylim
        span = b - a if b != a else 1.0
        return self.y0 + self.height - (y - a) / span * self.height

    def add_polyline(self, xs, ys, stroke="#4878a8", width=1.0, opacity=0.5, dash=None, cls=None):
        pts = " ".join(f"{fmt(self.px(x))},{fmt(self.py(y))}" for x, y in zip(xs, ys))
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        extra += f' class="{cls}"' if cls else ""
        self.elements.append(
            f'<polyline points="{pts}" fill="none" stroke="{stroke}" '
            f'stroke-width="{fmt(width)}" stroke-opacity="{fmt(opacity)}"{extra}/>'
        )

    def add_vline(self, x, stroke="#303030", width=1.0, dash=None, cls=None):
        a, b = self.ylim
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        extra += f' class="{cls}"' if cls else ""
        self.elements.append(
            f'<line x1="{fmt(self.px(x))}" y1="{fmt(self.py(a))}" '
            f'x2="{fmt(self.px(x))}" y2="{fmt(self.py(b))}" '
            f'stroke="{stroke}" stroke-width="{fmt(width)}"{extra}/>'
        )

    def add_circle(self, x, y, r=2.5, fill="#c03028", opacity=0.7, cls=None):
        extra = f' class="{cls}"' if cls else ""
        self.elements.append(
            f'<circle cx="{fmt(self.px(x))}" cy="{fmt(self.py(y))}" r="{fmt(r)}" '
            f'fill="{fill}" fill-opacity="{fmt(opacity)}"{extra}/>'
        )

    def add_note(self, text, cls="warning"):
        self.elements.append(
            f'<text x="{fmt(self.x0 + 6)}" y="{fmt(self.y0 + 14)}" '
            f'class="{cls}" font-size="10" fill="#a03020">{esc(text)}</text>'
        )

    def _frame(self) -> list[str]:
        out = [
            f'<rect x="{fmt(self.x0)}" y="{fmt(self.y0)}" width="{fmt(self.width)}" '
            f'height="{fmt(self.height)}" fill="none" stroke="#202020" stroke-width="1"/>'
        ]
        for t in nice_ticks(*self.xlim):
            px = self.px(t)
            y1 = self.y0 + self.height
            out.append(
                f'<line x1="{fmt(px)}" y1="{fmt(y1)}" x2="{fmt(px)}" y2="{fmt(y1 + 4)}" '
                f'stroke="#202020" stroke-width="1"/>'
            )
            out.append(
                f'<text x="{fmt(px)}" y="{fmt(y1 + 15)}" font-size="9" '
                f'text-anchor="middle" fill="#202020">{fmt(t)}</text>'
            )
        for t in nice_ticks(*self.ylim):
            py = self.py(t)
            out.append(
                f'<line x1="{fmt(self.x0 - 4)}" y1="{fmt(py)}" x2="{fmt(self.x0)}" '
                f'y2="{fmt(py)}" stroke="#202020" stroke-width="1"/>'
            )
            out.append(
                f'<text x="{fmt(self.x0 - 6)}" y="{fmt(py + 3)}" font-size="9" '
                f'text-anchor="end" fill="#202020">{fmt(t)}</text>'
            )
        if self.title:
            out.append(
                f'<text x="{fmt(self.x0 + self.width / 2)}" y="{fmt(self.y0 - 8)}" '
                f'font-size="11" text-anchor="middle" fill="#202020">{esc(self.title)}</text>'
            )
        if self.xlabel:
            out.append(
                f'<text x="{fmt(self.x0 + self.width / 2)}" y="{fmt(self.y0 + self.height + 30)}" '
                f'font-size="10" text-anchor="middle" fill="#202020">{esc(self.xlabel)}</text>'
            )
        if self.ylabel:
            cx = self.x0 - 34
            cy = self.y0 + self.height / 2
            out.append(
                f'<text x="{fmt(cx)}" y="{fmt(cy)}" font-size="10" text-anchor="middle" '
                f'transform="rotate(-90 {fmt(cx)} {fmt(cy)})" fill="#202020">{esc(self.ylabel)}</text>'
            )
        return out

    def render(self) -> str:
        body = "\n".join(self._frame() + self.elements)
        return f'<g id="{self.panel_id}">\n{body}\n</g>'


def document(width: float, height: float, parts: list[str], title: str = "") -> str:
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{fmt(width)}" '
        f'height="{fmt(height)}" viewBox="0 0 {fmt(width)} {fmt(height)}">'
    )
    bg = f'<rect x="0" y="0" width="{fmt(width)}" height="{fmt(height)}" fill="#ffffff"/>'
    caption = (
        f'<text x="{fmt(width / 2)}" y="16" font-size="13" text-anchor="middle" '
        f'fill="#202020">{esc(title)}</text>'
        if title
        else ""
    )
    return "\n".join([head, bg, caption, *parts, "</svg>"]) + "\n"
