"""Minimal deterministic SVG scatter for pole-zero portraits.

Hand-rolled on purpose: plotting libraries embed run-dependent metadata,
and identical inputs must produce byte-identical files. One marker
element per data row (poles as crosses, zeros as circles) so figures and
CSV stay in one-to-one correspondence.
"""
from __future__ import annotations

from typing import List, Sequence, Tuple

SIZE = 640
MARGIN = 50
MARK = 4.0

_STYLE = {
    "pole": "#c0392b",
    "zero": "#1f4e9c",
    "doublet_pole": "#e67e22",
    "doublet_zero": "#e67e22",
}


def _bounds(pts):
    if not pts:
        return -1.0, 1.0, -1.0, 1.0
    xs = [p[1] for p in pts]
    ys = [p[2] for p in pts]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    # equal-aspect square window with 8% padding
    span = max(x1 - x0, y1 - y0, 1e-9) * 1.08
    cx, cy = (x0 + x1) / 2, (y0 + y1) / 2
    return cx - span / 2, cx + span / 2, cy - span / 2, cy + span / 2


def render_scatter(rows: Sequence[Tuple[str, float, float]], title: str = "") -> str:
    """SVG text for (kind, re, im) rows."""
    x0, x1, y0, y1 = _bounds(rows)
    inner = SIZE - 2 * MARGIN

    def sx(x: float) -> float:
        return MARGIN + (x - x0) / (x1 - x0) * inner

    def sy(y: float) -> float:
        return SIZE - MARGIN - (y - y0) / (y1 - y0) * inner

    out: List[str] = []
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}">'
    )
    out.append(f'<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white"/>')
    out.append(
        f'<rect x="{MARGIN}" y="{MARGIN}" width="{inner}" height="{inner}" '
        f'fill="none" stroke="#888" stroke-width="1"/>'
    )
    if x0 < 0 < x1:
        x = f"{sx(0.0):.2f}"
        out.append(
            f'<line x1="{x}" y1="{MARGIN}" x2="{x}" y2="{SIZE - MARGIN}" stroke="#ccc" stroke-width="1"/>'
        )
    if y0 < 0 < y1:
        y = f"{sy(0.0):.2f}"
        out.append(
            f'<line x1="{MARGIN}" y1="{y}" x2="{SIZE - MARGIN}" y2="{y}" stroke="#ccc" stroke-width="1"/>'
        )
    if title:
        out.append(
            f'<text x="{SIZE // 2}" y="30" text-anchor="middle" '
            f'font-family="monospace" font-size="14">{title}</text>'
        )
    out.append(
        f'<text x="{SIZE // 2}" y="{SIZE - 12}" text-anchor="middle" '
        f'font-family="monospace" font-size="11">[{x0:.3g}, {x1:.3g}] x [{y0:.3g}, {y1:.3g}]</text>'
    )
    for kind, re, im in rows:
        cx, cy = sx(re), sy(im)
        color = _STYLE.get(kind, "#000")
        if kind.endswith("pole"):
            d = (
                f"M {cx - MARK:.2f} {cy - MARK:.2f} L {cx + MARK:.2f} {cy + MARK:.2f} "
                f"M {cx - MARK:.2f} {cy + MARK:.2f} L {cx + MARK:.2f} {cy - MARK:.2f}"
            )
            out.append(
                f'<path class="pt-{kind}" d="{d}" stroke="{color}" stroke-width="1.3" fill="none"/>'
            )
        else:
            out.append(
                f'<circle class="pt-{kind}" cx="{cx:.2f}" cy="{cy:.2f}" r="{MARK:.2f}" '
                f'stroke="{color}" stroke-width="1.3" fill="none"/>'
            )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_scatter(path, rows, title: str = "") -> None:
    with open(path, "w") as fh:
        fh.write(render_scatter(rows, title))
