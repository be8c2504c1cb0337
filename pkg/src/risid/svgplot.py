"""Static SVG line charts from results tables, sans plotting dependencies.

One chart per (metric, scenario) pair with the swept value on the x-axis and
one series per RIS id.  Output is plain SVG 1.1 text, deterministic for a
given input.
"""

import math
import re
from pathlib import Path
from typing import List, Sequence, Tuple

from .montecarlo import MetricsRow

WIDTH, HEIGHT = 640, 420
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 62, 120, 42, 48
PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]

METRICS = [
    ("p_miss", "miss probability"),
    ("p_false", "false-alarm probability"),
    ("d_max_avg", "average maximum detection value"),
]


def _ticks(lo: float, hi: float, n: int = 5) -> List[float]:
    if hi <= lo:
        hi = lo + 1.0
    step = (hi - lo) / (n - 1)
    return [lo + i * step for i in range(n)]


def _fmt(v: float) -> str:
    return f"{v:.4g}"


def render_line_chart(
    title: str,
    xlabel: str,
    ylabel: str,
    series: Sequence[Tuple[str, Sequence[float], Sequence[float]]],
) -> str:
    """Render labelled (xs, ys) series into an SVG document string."""
    if not series:
        raise ValueError("chart needs at least one series")
    xs_all = [x for _, xs, _ in series for x in xs]
    ys_all = [y for _, _, ys in series for y in ys]
    if not xs_all:
        raise ValueError("chart series contain no points")
    x_lo, x_hi = min(xs_all), max(xs_all)
    y_lo, y_hi = min(ys_all), max(ys_all)
    if x_hi == x_lo:
        x_lo, x_hi = x_lo - 0.5, x_hi + 0.5
    if y_hi == y_lo:
        y_lo, y_hi = y_lo - 0.5, y_hi + 0.5
    pad = 0.05 * (y_hi - y_lo)
    y_lo, y_hi = y_lo - pad, y_hi + pad

    plot_w = WIDTH - MARGIN_L - MARGIN_R
    plot_h = HEIGHT - MARGIN_T - MARGIN_B

    def px(x: float) -> float:
        return MARGIN_L + (x - x_lo) / (x_hi - x_lo) * plot_w

    def py(y: float) -> float:
        return MARGIN_T + plot_h - (y - y_lo) / (y_hi - y_lo) * plot_h

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.1f}" y="22" text-anchor="middle" font-size="14">{title}</text>',
    ]
    for xv in _ticks(x_lo, x_hi):
        x = px(xv)
        out.append(
            f'<line x1="{x:.1f}" y1="{MARGIN_T}" x2="{x:.1f}" y2="{MARGIN_T + plot_h}" '
            f'stroke="#dddddd"/>'
        )
        out.append(
            f'<text x="{x:.1f}" y="{MARGIN_T + plot_h + 16}" text-anchor="middle">{_fmt(xv)}</text>'
        )
    for yv in _ticks(y_lo, y_hi):
        y = py(yv)
        out.append(
            f'<line x1="{MARGIN_L}" y1="{y:.1f}" x2="{MARGIN_L + plot_w}" y2="{y:.1f}" '
            f'stroke="#dddddd"/>'
        )
        out.append(
            f'<text x="{MARGIN_L - 6}" y="{y + 4:.1f}" text-anchor="end">{_fmt(yv)}</text>'
        )
    out.append(
        f'<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{plot_w}" height="{plot_h}" '
        f'fill="none" stroke="#333333"/>'
    )
    out.append(
        f'<text x="{MARGIN_L + plot_w / 2:.1f}" y="{HEIGHT - 10}" text-anchor="middle">{xlabel}</text>'
    )
    out.append(
        f'<text x="16" y="{MARGIN_T + plot_h / 2:.1f}" text-anchor="middle" '
        f'transform="rotate(-90 16 {MARGIN_T + plot_h / 2:.1f})">{ylabel}</text>'
    )
    for k, (label, xs, ys) in enumerate(series):
        color = PALETTE[k % len(PALETTE)]
        pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys))
        out.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.8"/>'
        )
        for x, y in zip(xs, ys):
            out.append(f'<circle cx="{px(x):.2f}" cy="{py(y):.2f}" r="3" fill="{color}"/>')
        ly = MARGIN_T + 14 + 18 * k
        lx = MARGIN_L + plot_w + 10
        out.append(
            f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 18}" y2="{ly - 4}" '
            f'stroke="{color}" stroke-width="1.8"/>'
        )
        out.append(f'<text x="{lx + 24}" y="{ly}">{label}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _slug(text: str) -> str:
    return re.sub(r"[^a-z0-9]+", "_", text.lower()).strip("_") or "unnamed"


def plot_rows(rows: Sequence[MetricsRow], out_dir) -> List[Path]:
    """Write one SVG per (metric, scenario) with data; returns written paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    scenarios = sorted({r.scenario for r in rows})
    written = []
    for metric, metric_label in METRICS:
        for scenario in scenarios:
            group = [r for r in rows if r.scenario == scenario]
            series = []
            for ris_id in sorted({r.ris_id for r in group}):
                pts = [
                    (r.swept_value, getattr(r, metric))
                    for r in group
                    if r.ris_id == ris_id
                    and getattr(r, metric) is not None
                    and not math.isnan(r.swept_value)
                ]
                if pts:
                    pts.sort()
                    series.append(
                        (f"RIS {ris_id}", [p[0] for p in pts], [p[1] for p in pts])
                    )
            if not series:
                continue
            axis = next((r.swept_axis for r in group if r.swept_axis), "value")
            svg = render_line_chart(
                title=f"{metric_label} ({scenario})" if scenario else metric_label,
                xlabel=axis,
                ylabel=metric_label,
                series=series,
            )
            path = out_dir / f"{metric}__{_slug(scenario)}.svg"
            path.write_text(svg)
            written.append(path)
    if not written:
        raise ValueError("no plottable series found in the results table")
    return written
