"""Minimal static SVG rendering for scatter plots and smoothed curves.

Hand-rolled so report output carries no plotting-framework dependency and is
byte-identical across runs: fixed canvas (1200x800), fixed float formatting,
no scripts, no timestamps.
"""

from __future__ import annotations

from typing import Mapping, Sequence

WIDTH, HEIGHT = 1200, 800
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 90, 260, 70, 70

PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939",
    "#8c6d31", "#843c39", "#7b4173", "#3182bd", "#e6550d", "#31a354",
    "#756bb1", "#636363", "#e7ba52", "#ad494a",
)


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _axis_range(values: Sequence[float]) -> tuple[float, float]:
    lo, hi = min(values), max(values)
    if lo == hi:
        lo, hi = lo - 1.0, hi + 1.0
    pad = 0.05 * (hi - lo)
    return lo - pad, hi + pad


class _Canvas:
    def __init__(self, title: str, xlabel: str, ylabel: str):
        self.parts: list[str] = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" '
            f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
            f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
            f'<text x="{WIDTH / 2:.0f}" y="40" font-size="24" '
            f'text-anchor="middle" font-family="sans-serif">{_esc(title)}</text>',
            f'<text x="{(MARGIN_L + WIDTH - MARGIN_R) / 2:.0f}" y="{HEIGHT - 20}" '
            f'font-size="16" text-anchor="middle" font-family="sans-serif">'
            f"{_esc(xlabel)}</text>",
            f'<text x="25" y="{(MARGIN_T + HEIGHT - MARGIN_B) / 2:.0f}" '
            f'font-size="16" text-anchor="middle" font-family="sans-serif" '
            f'transform="rotate(-90 25 {(MARGIN_T + HEIGHT - MARGIN_B) / 2:.0f})">'
            f"{_esc(ylabel)}</text>",
        ]

    def x_px(self, v: float, lo: float, hi: float) -> float:
        return MARGIN_L + (v - lo) / (hi - lo) * (WIDTH - MARGIN_L - MARGIN_R)

    def y_px(self, v: float, lo: float, hi: float) -> float:
        return HEIGHT - MARGIN_B - (v - lo) / (hi - lo) * (HEIGHT - MARGIN_T - MARGIN_B)

    def axes(self, xlo: float, xhi: float, ylo: float, yhi: float) -> None:
        x0, x1 = MARGIN_L, WIDTH - MARGIN_R
        y0, y1 = HEIGHT - MARGIN_B, MARGIN_T
        self.parts.append(
            f'<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>'
        )
        self.parts.append(
            f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>'
        )
        for i in range(5):
            vx = xlo + (xhi - xlo) * i / 4
            px = self.x_px(vx, xlo, xhi)
            self.parts.append(
                f'<line x1="{_fmt(px)}" y1="{y0}" x2="{_fmt(px)}" y2="{y0 + 6}" '
                'stroke="black"/>'
            )
            self.parts.append(
                f'<text x="{_fmt(px)}" y="{y0 + 24}" font-size="13" '
                f'text-anchor="middle" font-family="sans-serif">{_fmt(vx)}</text>'
            )
            vy = ylo + (yhi - ylo) * i / 4
            py = self.y_px(vy, ylo, yhi)
            self.parts.append(
                f'<line x1="{x0 - 6}" y1="{_fmt(py)}" x2="{x0}" y2="{_fmt(py)}" '
                'stroke="black"/>'
            )
            self.parts.append(
                f'<text x="{x0 - 10}" y="{_fmt(py + 4)}" font-size="13" '
                f'text-anchor="end" font-family="sans-serif">{_fmt(vy)}</text>'
            )

    def legend(self, entries: Sequence[tuple[str, str]]) -> None:
        x = WIDTH - MARGIN_R + 20
        for i, (label, color) in enumerate(entries):
            y = MARGIN_T + 20 * i
            self.parts.append(
                f'<rect x="{x}" y="{y}" width="12" height="12" fill="{color}"/>'
            )
            self.parts.append(
                f'<text x="{x + 18}" y="{y + 11}" font-size="13" '
                f'font-family="sans-serif">{_esc(label)}</text>'
            )

    def render(self) -> str:
        return "\n".join(self.parts + ["</svg>"]) + "\n"


def _esc(text: str) -> str:
    return (
        text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
    )


def scatter_svg(
    points: Sequence[tuple[float, float, str]],
    title: str,
    xlabel: str = "dimension 1",
    ylabel: str = "dimension 2",
    group_order: Sequence[str] | None = None,
) -> str:
    """Scatter of (x, y, group) triples; groups get palette colors."""
    if not points:
        raise ValueError("no points to plot")
    groups = list(group_order) if group_order else sorted({g for _, _, g in points})
    colors: Mapping[str, str] = {
        g: PALETTE[i % len(PALETTE)] for i, g in enumerate(groups)
    }
    xlo, xhi = _axis_range([p[0] for p in points])
    ylo, yhi = _axis_range([p[1] for p in points])
    canvas = _Canvas(title, xlabel, ylabel)
    canvas.axes(xlo, xhi, ylo, yhi)
    for x, y, g in points:
        canvas.parts.append(
            f'<circle cx="{_fmt(canvas.x_px(x, xlo, xhi))}" '
            f'cy="{_fmt(canvas.y_px(y, ylo, yhi))}" r="5" '
            f'fill="{colors.get(g, "#000000")}" fill-opacity="0.8"/>'
        )
    canvas.legend([(g, colors[g]) for g in groups])
    return canvas.render()


def curves_svg(
    grid: Sequence[float],
    curves: Sequence[tuple[str, Sequence[float]]],
    title: str,
    xlabel: str,
    ylabel: str,
) -> str:
    """Polyline chart of one or more curves over a shared grid."""
    if not curves:
        raise ValueError("no curves to plot")
    ys = [v for _, series in curves for v in series]
    xlo, xhi = _axis_range(list(grid))
    ylo, yhi = _axis_range(ys)
    canvas = _Canvas(title, xlabel, ylabel)
    canvas.axes(xlo, xhi, ylo, yhi)
    entries = []
    for i, (label, series) in enumerate(curves):
        color = PALETTE[i % len(PALETTE)]
        pts = " ".join(
            f"{_fmt(canvas.x_px(x, xlo, xhi))},{_fmt(canvas.y_px(y, ylo, yhi))}"
            for x, y in zip(grid, series)
        )
        canvas.parts.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="2.5"/>'
        )
        entries.append((label, color))
    canvas.legend(entries)
    return canvas.render()
