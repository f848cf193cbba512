"""Single-file SVG charts for counter series, no plotting framework.

One chart per counter: the delta series as a polyline over seconds, the
top-ranked outliers as filled circles, and optionally one vertical marker
line at a caller-supplied moment.  Circles are used for nothing else, so a
chart with top_n outliers contains exactly top_n circle elements; the
marker is the only element with class "event-mark".  Identical inputs give
identical bytes.
"""

from __future__ import annotations

from typing import Sequence

from .trace import CounterSeries

WIDTH = 880
HEIGHT = 360
MARGIN_LEFT = 72
MARGIN_RIGHT = 24
MARGIN_TOP = 28
MARGIN_BOTTOM = 48

SERIES_COLOR = "#2a6f97"
OUTLIER_COLOR = "#d62828"
MARK_COLOR = "#c1121f"
AXIS_COLOR = "#444444"


def _coord(v: float) -> str:
    return f"{v:.2f}"


def render_plot(
    series: CounterSeries,
    lofs: Sequence[float],
    top_indices: Sequence[int],
    mark_time: float | None = None,
) -> str:
    """The SVG document as a string; emit_plot writes it to disk.

    ``lofs`` aligns with the series' non-missing samples in time order and
    ``top_indices`` index into that same sequence.
    """
    samples = [s for s in series.samples if s.delta is not None]
    if not samples:
        raise ValueError(f"series {series.event} has no usable samples")
    if len(lofs) != len(samples):
        raise ValueError(
            f"{len(lofs)} scores for {len(samples)} samples of {series.event}"
        )

    times = [s.timestamp for s in samples]
    values = [float(s.delta) for s in samples]
    t_lo, t_hi = min(times), max(times)
    v_lo, v_hi = min(values), max(values)
    if mark_time is not None:
        t_lo, t_hi = min(t_lo, mark_time), max(t_hi, mark_time)
    if t_hi == t_lo:
        t_hi = t_lo + 1.0
    if v_hi == v_lo:
        v_hi = v_lo + 1.0

    plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM

    def x(t: float) -> float:
        return MARGIN_LEFT + (t - t_lo) / (t_hi - t_lo) * plot_w

    def y(v: float) -> float:
        return MARGIN_TOP + (v_hi - v) / (v_hi - v_lo) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>',
        f'<text x="{MARGIN_LEFT}" y="18" font-family="sans-serif" font-size="13" '
        f'fill="{AXIS_COLOR}">{series.event.name}</text>',
    ]

    # axes
    x0, y0 = MARGIN_LEFT, HEIGHT - MARGIN_BOTTOM
    x1, y1 = WIDTH - MARGIN_RIGHT, MARGIN_TOP
    parts.append(
        f'<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="{AXIS_COLOR}" stroke-width="1"/>'
    )
    parts.append(
        f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="{AXIS_COLOR}" stroke-width="1"/>'
    )
    parts.append(
        f'<text x="{(x0 + x1) / 2:.0f}" y="{HEIGHT - 14}" font-family="sans-serif" '
        f'font-size="12" fill="{AXIS_COLOR}" text-anchor="middle">seconds</text>'
    )
    for t_val, anchor in ((t_lo, "start"), (t_hi, "end")):
        parts.append(
            f'<text x="{_coord(x(t_val))}" y="{y0 + 16}" font-family="sans-serif" '
            f'font-size="11" fill="{AXIS_COLOR}" text-anchor="{anchor}">{t_val:.9g}</text>'
        )
    for v_val in (v_lo, v_hi):
        parts.append(
            f'<text x="{x0 - 6}" y="{_coord(y(v_val) + 4)}" font-family="sans-serif" '
            f'font-size="11" fill="{AXIS_COLOR}" text-anchor="end">{v_val:.9g}</text>'
        )

    pts = " ".join(f"{_coord(x(t))},{_coord(y(v))}" for t, v in zip(times, values))
    parts.append(
        f'<polyline points="{pts}" fill="none" stroke="{SERIES_COLOR}" stroke-width="1.5"/>'
    )

    if mark_time is not None:
        parts.append(
            f'<line class="event-mark" x1="{_coord(x(mark_time))}" y1="{y1}" '
            f'x2="{_coord(x(mark_time))}" y2="{y0}" stroke="{MARK_COLOR}" '
            f'stroke-width="1.5" stroke-dasharray="5,3"/>'
        )

    for idx in top_indices:
        parts.append(
            f'<circle cx="{_coord(x(times[idx]))}" cy="{_coord(y(values[idx]))}" r="4" '
            f'fill="{OUTLIER_COLOR}"><title>lof={lofs[idx]:.9g}</title></circle>'
        )

    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def emit_plot(
    series: CounterSeries,
    lofs: Sequence[float],
    top_indices: Sequence[int],
    mark_time: float | None,
    out: str,
) -> None:
    svg = render_plot(series, lofs, top_indices, mark_time)
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(svg)
