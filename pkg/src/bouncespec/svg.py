"""Minimal deterministic SVG writer: fixed 1000 x 1000 canvas, y axis up."""

from __future__ import annotations

CANVAS = 1000.0
MARGIN = 0.05


class Figure:
    def __init__(self):
        self._items = []  # (kind, points, style)

    def polygon(self, pts, stroke="black", fill="none", width=2.0, opacity=1.0):
        self._items.append(("polygon", list(pts), (stroke, fill, width, opacity)))

    def polyline(self, pts, stroke="black", width=1.5, opacity=1.0):
        self._items.append(("polyline", list(pts), (stroke, "none", width, opacity)))

    def dot(self, p, stroke="black"):
        self._items.append(("dot", [p], (stroke, stroke, 1.0, 1.0)))

    def label(self, p, text):
        self._items.append(("text", [p], text))

    def _fit(self):
        pts = [p for _, ps, _ in self._items for p in ps]
        if not pts:
            return lambda p: (0.0, 0.0)
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        x0, y0 = min(xs), min(ys)
        span = max(max(xs) - x0, max(ys) - y0) or 1.0
        s = CANVAS * (1 - 2 * MARGIN) / span
        off = CANVAS * MARGIN
        return lambda p: (off + s * (p[0] - x0), CANVAS - off - s * (p[1] - y0))

    def render(self) -> str:
        f = self._fit()
        out = ['<svg xmlns="http://www.w3.org/2000/svg" width="1000" height="1000" '
               'viewBox="0 0 1000 1000">',
               '<rect width="1000" height="1000" fill="white"/>']
        for kind, pts, style in self._items:
            q = [f(p) for p in pts]
            coords = " ".join("%.3f,%.3f" % c for c in q)
            if kind == "text":
                out.append('<text x="%.3f" y="%.3f" font-size="20" font-family="monospace">%s</text>'
                           % (q[0][0], q[0][1], style))
                continue
            stroke, fill, width, opacity = style
            if kind == "dot":
                out.append('<circle cx="%.3f" cy="%.3f" r="4" fill="%s"/>' % (q[0][0], q[0][1], fill))
            else:
                out.append('<%s points="%s" fill="%s" stroke="%s" stroke-width="%g" '
                           'stroke-opacity="%g"/>' % (kind, coords, fill, stroke, width, opacity))
        out.append("</svg>")
        return "\n".join(out) + "\n"

    def save(self, path):
        with open(path, "w") as fh:
            fh.write(self.render())
