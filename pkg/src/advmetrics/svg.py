"""Small deterministic SVG charts: a sweep path plot and a bar chart."""

from __future__ import annotations

from typing import Optional, Sequence

WIDTH, HEIGHT = 560, 420
MARGIN = 60


def _escape(text: str) -> str:
    return (text.replace("&", "&amp;").replace("<", "&lt;")
            .replace(">", "&gt;").replace('"', "&quot;"))


def _scale(value, lo, hi, pixel_lo, pixel_hi):
    if hi == lo:
        return (pixel_lo + pixel_hi) / 2
    return pixel_lo + (value - lo) / (hi - lo) * (pixel_hi - pixel_lo)


def _axes(title, xlabel, ylabel, xlo, xhi, ylo, yhi):
    parts = [
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2}" y="24" text-anchor="middle" '
        f'font-size="16">{_escape(title)}</text>',
        f'<line x1="{MARGIN}" y1="{HEIGHT - MARGIN}" x2="{WIDTH - MARGIN}" '
        f'y2="{HEIGHT - MARGIN}" stroke="black"/>',
        f'<line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" '
        f'y2="{HEIGHT - MARGIN}" stroke="black"/>',
        f'<text x="{WIDTH / 2}" y="{HEIGHT - 16}" text-anchor="middle" '
        f'font-size="12">{_escape(xlabel)}</text>',
        f'<text x="18" y="{HEIGHT / 2}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 18 {HEIGHT / 2})">{_escape(ylabel)}</text>',
    ]
    for i in range(5):
        fx = xlo + (xhi - xlo) * i / 4
        fy = ylo + (yhi - ylo) * i / 4
        px = _scale(fx, xlo, xhi, MARGIN, WIDTH - MARGIN)
        py = _scale(fy, ylo, yhi, HEIGHT - MARGIN, MARGIN)
        parts.append(f'<text x="{px:.1f}" y="{HEIGHT - MARGIN + 16}" '
                     f'text-anchor="middle" font-size="10">{fx:.2f}</text>')
        parts.append(f'<text x="{MARGIN - 8}" y="{py:.1f}" '
                     f'text-anchor="end" font-size="10">{fy:.2f}</text>')
    return parts


def path_plot(points: Sequence[tuple[float, float]],
              labels: Optional[Sequence[str]] = None,
              title: str = "", xlabel: str = "", ylabel: str = "") -> str:
    """Connected scatter: one dot per point, labels drawn beside the dots."""
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    xlo, xhi = min(xs), max(xs)
    ylo, yhi = min(ys), max(ys)
    pad_x = (xhi - xlo) * 0.08 or 0.05
    pad_y = (yhi - ylo) * 0.08 or 0.05
    xlo, xhi = xlo - pad_x, xhi + pad_x
    ylo, yhi = ylo - pad_y, yhi + pad_y
    parts = _axes(title, xlabel, ylabel, xlo, xhi, ylo, yhi)
    pixel = [
        (_scale(x, xlo, xhi, MARGIN, WIDTH - MARGIN),
         _scale(y, ylo, yhi, HEIGHT - MARGIN, MARGIN))
        for x, y in points]
    polyline = " ".join(f"{x:.1f},{y:.1f}" for x, y in pixel)
    parts.append(f'<polyline points="{polyline}" fill="none" '
                 f'stroke="steelblue" stroke-width="1.5"/>')
    for i, (x, y) in enumerate(pixel):
        parts.append(f'<circle cx="{x:.1f}" cy="{y:.1f}" r="3.5" '
                     f'fill="steelblue"/>')
        if labels is not None:
            parts.append(f'<text x="{x + 6:.1f}" y="{y - 6:.1f}" '
                         f'font-size="9">{_escape(labels[i])}</text>')
    return _document(parts)


def bar_chart(labels: Sequence[str], values: Sequence[float],
              title: str = "", ylabel: str = "") -> str:
    ylo, yhi = 0.0, max(max(values), 1e-9)
    parts = _axes(title, "", ylabel, 0, len(values), ylo, yhi)
    span = (WIDTH - 2 * MARGIN) / max(len(values), 1)
    for i, (label, value) in enumerate(zip(labels, values)):
        x = MARGIN + i * span + span * 0.15
        y = _scale(value, ylo, yhi, HEIGHT - MARGIN, MARGIN)
        parts.append(f'<rect x="{x:.1f}" y="{y:.1f}" width="{span * 0.7:.1f}" '
                     f'height="{HEIGHT - MARGIN - y:.1f}" fill="darkseagreen"/>')
        parts.append(f'<text x="{x + span * 0.35:.1f}" y="{HEIGHT - MARGIN + 28}" '
                     f'text-anchor="middle" font-size="9" '
                     f'transform="rotate(30 {x + span * 0.35:.1f} '
                     f'{HEIGHT - MARGIN + 28})">{_escape(label)}</text>')
        parts.append(f'<text x="{x + span * 0.35:.1f}" y="{y - 4:.1f}" '
                     f'text-anchor="middle" font-size="9">{value:.2f}</text>')
    return _document(parts)


def _document(parts: Sequence[str]) -> str:
    body = "\n  ".join(parts)
    return (f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" '
            f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">\n  {body}\n</svg>\n')
