"""Tiny deterministic SVG line charts.

A chart is rendered from plain data into an SVG string with no timestamps,
random identifiers, or environment-dependent content, so the same input
always produces byte-identical output.
"""

from __future__ import annotations

from dataclasses import dataclass, field

WIDTH, HEIGHT = 640, 400
MARGIN_LEFT, MARGIN_RIGHT = 70, 160
MARGIN_TOP, MARGIN_BOTTOM = 50, 60

PALETTE = ["#1b6ca8", "#d1495b", "#66a182", "#edae49", "#775b9f", "#30323d"]


@dataclass
class Series:
    label: str
    values: list[float | None]
    # indices of x positions where this series is flagged (uniquely best)
    marked: set[int] = field(default_factory=set)


def _fmt(value: float) -> str:
    return f"{value:.2f}".rstrip("0").rstrip(".")


def line_chart(
    title: str,
    x_labels: list[str],
    series: list[Series],
    y_label: str,
    y_range: tuple[float, float] | None = None,
) -> str:
    if y_range is None:
        seen = [v for s in series for v in s.values if v is not None]
        lo = min(seen + [0.0])
        hi = max(seen + [1e-9])
        pad = 0.05 * (hi - lo) or 0.05
        y_range = (lo - pad if lo < 0 else 0.0, hi + pad)
    y_lo, y_hi = y_range

    plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM

    def x_pos(i: int) -> float:
        if len(x_labels) == 1:
            return MARGIN_LEFT + plot_w / 2
        return MARGIN_LEFT + plot_w * i / (len(x_labels) - 1)

    def y_pos(v: float) -> float:
        frac = (v - y_lo) / (y_hi - y_lo)
        return MARGIN_TOP + plot_h * (1.0 - frac)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" '
        f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.1f}" y="24" text-anchor="middle" '
        f'font-family="sans-serif" font-size="15">{title}</text>',
    ]

    # axes
    x0, y0 = MARGIN_LEFT, MARGIN_TOP + plot_h
    parts.append(
        f'<line x1="{x0}" y1="{MARGIN_TOP}" x2="{x0}" y2="{y0}" '
        f'stroke="black" stroke-width="1"/>'
    )
    parts.append(
        f'<line x1="{x0}" y1="{y0}" x2="{x0 + plot_w}" y2="{y0}" '
        f'stroke="black" stroke-width="1"/>'
    )
    for k in range(5):
        v = y_lo + (y_hi - y_lo) * k / 4
        y = y_pos(v)
        parts.append(
            f'<line x1="{x0 - 4}" y1="{y:.2f}" x2="{x0}" y2="{y:.2f}" '
            f'stroke="black" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{x0 - 8}" y="{y + 4:.2f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{_fmt(v)}</text>'
        )
    for i, label in enumerate(x_labels):
        x = x_pos(i)
        parts.append(
            f'<text x="{x:.2f}" y="{y0 + 18}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{label}</text>'
        )
    parts.append(
        f'<text x="18" y="{MARGIN_TOP + plot_h / 2:.1f}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12" '
        f'transform="rotate(-90 18 {MARGIN_TOP + plot_h / 2:.1f})">{y_label}</text>'
    )

    for si, s in enumerate(series):
        color = PALETTE[si % len(PALETTE)]
        points = [
            (x_pos(i), y_pos(v))
            for i, v in enumerate(s.values)
            if v is not None
        ]
        if len(points) > 1:
            path = " ".join(
                f"{'M' if i == 0 else 'L'}{x:.2f},{y:.2f}"
                for i, (x, y) in enumerate(points)
            )
            parts.append(
                f'<path d="{path}" fill="none" stroke="{color}" stroke-width="2"/>'
            )
        for i, v in enumerate(s.values):
            if v is None:
                continue
            x, y = x_pos(i), y_pos(v)
            parts.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="3" fill="{color}"/>')
            if i in s.marked:
                parts.append(
                    f'<circle cx="{x:.2f}" cy="{y:.2f}" r="6" fill="none" '
                    f'stroke="{color}" stroke-width="1.5"/>'
                )
        ly = MARGIN_TOP + 16 * si
        lx = WIDTH - MARGIN_RIGHT + 14
        parts.append(
            f'<line x1="{lx}" y1="{ly + 6}" x2="{lx + 18}" y2="{ly + 6}" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        parts.append(
            f'<text x="{lx + 24}" y="{ly + 10}" font-family="sans-serif" '
            f'font-size="11">{s.label}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
