"""Static SVG line chart of mean cumulative reward per algorithm."""
from xml.sax.saxutils import escape

import numpy as np

COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b")
WIDTH, HEIGHT, PAD = 640, 400, 60


def _ticks(lo, hi, n=5):
    return np.linspace(lo, hi, n)


def render_svg(summary, title="", field="reward_mean"):
    x = summary.checkpoints.astype(np.float64)
    series = {lab: np.asarray(getattr(summary, field)[lab]) for lab in summary.algorithms}
    finite = [v[np.isfinite(v)] for v in series.values()]
    finite = [v for v in finite if v.size]
    lo = min(v.min() for v in finite) if finite else 0.0
    hi = max(v.max() for v in finite) if finite else 1.0
    if hi <= lo:
        hi = lo + 1.0
    x0, x1 = (x.min(), x.max()) if x.size and x.max() > x.min() else (0.0, 1.0)

    def px(v):
        return PAD + (v - x0) / (x1 - x0) * (WIDTH - 2 * PAD)

    def py(v):
        return HEIGHT - PAD - (v - lo) / (hi - lo) * (HEIGHT - 2 * PAD)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
           f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">',
           f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
           f'<text x="{WIDTH / 2:.1f}" y="20" text-anchor="middle" font-size="13">{escape(title)}</text>',
           f'<line x1="{PAD}" y1="{HEIGHT - PAD}" x2="{WIDTH - PAD}" y2="{HEIGHT - PAD}" stroke="black"/>',
           f'<line x1="{PAD}" y1="{PAD}" x2="{PAD}" y2="{HEIGHT - PAD}" stroke="black"/>']
    for v in _ticks(lo, hi):
        out.append(f'<text x="{PAD - 5}" y="{py(v) + 4:.1f}" text-anchor="end">{v:.4g}</text>')
    for v in _ticks(x0, x1):
        out.append(f'<text x="{px(v):.1f}" y="{HEIGHT - PAD + 15}" text-anchor="middle">{v:.0f}</text>')
    out.append(f'<text x="{WIDTH / 2:.1f}" y="{HEIGHT - 15}" text-anchor="middle">t</text>')
    for i, (lab, v) in enumerate(series.items()):
        color = COLORS[i % len(COLORS)]
        ok = np.isfinite(v)
        pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(x[ok], v[ok]))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        out.append(f'<text x="{PAD + 10}" y="{PAD + 14 * i}" fill="{color}">{escape(lab)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svg(summary, path, title=""):
    with open(path, "w") as fh:
        fh.write(render_svg(summary, title))
