"""Planar polygon kernel for labeled billiard tables.

A table is a simple polygon with counterclockwise vertices and one label per
edge; edge i runs from vertex i to vertex i+1.  Everything here is plain
float64 with a single incidence tolerance EPS_GEOM.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Sequence

EPS_GEOM = 1e-9

Point2 = tuple  # (x, y) pair of floats


class GeometryError(ValueError):
    pass


def cross(ax, ay, bx, by):
    return ax * by - ay * bx


def orient(p, q, r):
    # twice the signed area of (p, q, r); positive for a left turn
    return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])


def dist(p, q):
    return math.hypot(q[0] - p[0], q[1] - p[1])


def point_segment_distance(p, a, b):
    dx, dy = b[0] - a[0], b[1] - a[1]
    L2 = dx * dx + dy * dy
    if L2 == 0.0:
        return dist(p, a)
    t = ((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / L2
    t = min(1.0, max(0.0, t))
    return math.hypot(p[0] - a[0] - t * dx, p[1] - a[1] - t * dy)


def segments_intersect(a, b, c, d, eps=0.0):
    """True if closed segments ab and cd share a point (up to eps)."""
    d1 = orient(c, d, a)
    d2 = orient(c, d, b)
    d3 = orient(a, b, c)
    d4 = orient(a, b, d)
    if ((d1 > eps and d2 < -eps) or (d1 < -eps and d2 > eps)) and \
       ((d3 > eps and d4 < -eps) or (d3 < -eps and d4 > eps)):
        return True
    scale = max(dist(a, b), dist(c, d), 1.0)
    tol = eps + EPS_GEOM * scale
    return (point_segment_distance(a, c, d) <= tol or
            point_segment_distance(b, c, d) <= tol or
            point_segment_distance(c, a, b) <= tol or
            point_segment_distance(d, a, b) <= tol)


def signed_area(vertices: Sequence[Point2]) -> float:
    s = 0.0
    n = len(vertices)
    for i in range(n):
        x0, y0 = vertices[i]
        x1, y1 = vertices[(i + 1) % n]
        s += x0 * y1 - x1 * y0
    return 0.5 * s


@dataclass(frozen=True)
class Isometry2:
    """x -> M x + t with M orthogonal."""
    a: float = 1.0
    b: float = 0.0
    c: float = 0.0
    d: float = 1.0
    tx: float = 0.0
    ty: float = 0.0

    @property
    def det(self) -> float:
        return self.a * self.d - self.b * self.c

    def apply(self, p):
        x, y = p
        return (self.a * x + self.b * y + self.tx, self.c * x + self.d * y + self.ty)

    def apply_vector(self, v):
        x, y = v
        return (self.a * x + self.b * y, self.c * x + self.d * y)

    def compose(self, other: "Isometry2") -> "Isometry2":
        """self o other (apply other first)."""
        a = self.a * other.a + self.b * other.c
        b = self.a * other.b + self.b * other.d
        c = self.c * other.a + self.d * other.c
        d = self.c * other.b + self.d * other.d
        tx = self.a * other.tx + self.b * other.ty + self.tx
        ty = self.c * other.tx + self.d * other.ty + self.ty
        return Isometry2(a, b, c, d, tx, ty)

    def inverse(self) -> "Isometry2":
        # orthogonal: inverse of M is its transpose
        a, b, c, d = self.a, self.c, self.b, self.d
        tx = -(a * self.tx + b * self.ty)
        ty = -(c * self.tx + d * self.ty)
        return Isometry2(a, b, c, d, tx, ty)

    def close_to(self, other: "Isometry2", tol=1e-9) -> bool:
        return all(abs(u - v) <= tol for u, v in zip(self.as_tuple(), other.as_tuple()))

    def as_tuple(self):
        return (self.a, self.b, self.c, self.d, self.tx, self.ty)


IDENTITY = Isometry2()


def reflect_across_segment(seg) -> Isometry2:
    """Reflection in the line through the segment's endpoints."""
    (x0, y0), (x1, y1) = seg
    dx, dy = x1 - x0, y1 - y0
    L2 = dx * dx + dy * dy
    if not L2 > 0.0 or not math.isfinite(L2):
        raise GeometryError("cannot reflect across a zero-length segment")
    # M = 2 u u^T - I for the unit direction u
    a = (dx * dx - dy * dy) / L2
    b = 2.0 * dx * dy / L2
    d = -a
    tx = x0 - (a * x0 + b * y0)
    ty = y0 - (b * x0 + d * y0)
    return Isometry2(a, b, b, d, tx, ty)


@dataclass
class ValidationReport:
    problems: list = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.problems

    def __str__(self):
        if self.valid:
            return "valid"
        return "invalid: " + "; ".join(self.problems)


def _check(vertices, labels) -> ValidationReport:
    rep = ValidationReport()
    n = len(vertices)
    if n < 3:
        rep.problems.append("fewer than 3 vertices")
        return rep
    for p in vertices:
        if not (math.isfinite(p[0]) and math.isfinite(p[1])):
            rep.problems.append("non-finite coordinate")
            return rep
    if len(labels) != n:
        rep.problems.append("label count %d does not match %d edges" % (len(labels), n))
    seen = set()
    for lab in labels:
        if lab in seen:
            rep.problems.append("duplicate label %s" % lab)
        seen.add(lab)
    scale = max(max(abs(c) for p in vertices for c in p), 1.0)
    tol = EPS_GEOM * scale
    degenerate = False
    for i in range(n):
        if dist(vertices[i], vertices[(i + 1) % n]) <= tol:
            rep.problems.append("degenerate edge %d" % i)
            degenerate = True
    if degenerate:
        return rep
    for i in range(n):
        p, q, r = vertices[i - 1], vertices[i], vertices[(i + 1) % n]
        e1 = (q[0] - p[0], q[1] - p[1])
        e2 = (r[0] - q[0], r[1] - q[1])
        c = cross(*e1, *e2) / (math.hypot(*e1) * math.hypot(*e2))
        dot = e1[0] * e2[0] + e1[1] * e2[1]
        if abs(c) <= EPS_GEOM and dot > 0:
            rep.problems.append("straight angle at vertex %d" % i)
        elif abs(c) <= EPS_GEOM:
            rep.problems.append("zero angle at vertex %d" % i)
    # non-adjacent edge pairs must not touch
    for i in range(n):
        a, b = vertices[i], vertices[(i + 1) % n]
        for j in range(i + 1, n):
            if j == i + 1 or (i == 0 and j == n - 1):
                continue
            c, d = vertices[j], vertices[(j + 1) % n]
            if segments_intersect(a, b, c, d):
                rep.problems.append("self-intersection between edges %d and %d" % (i, j))
    if not rep.problems and abs(signed_area(vertices)) <= tol * tol:
        rep.problems.append("zero area")
    return rep


class LabeledPolygon:
    """Simple polygon, counterclockwise, one distinct label per edge.

    Clockwise input is reversed (labels follow their edges) with a warning.
    Construction raises GeometryError when the polygon is invalid; use
    `validate` on raw data to get the full report instead.
    """

    __slots__ = ("vertices", "labels", "_index", "_diam")

    def __init__(self, vertices: Iterable, labels: Sequence[str] | None = None, check=True,
                 orient=True):
        verts = [(float(x), float(y)) for x, y in vertices]
        n = len(verts)
        if labels is None:
            labels = ["E%d" % (i + 1) for i in range(n)]
        labels = [str(s) for s in labels]
        if orient and n >= 3 and len(labels) == n and signed_area(verts) < 0:
            warnings.warn("clockwise polygon reversed to counterclockwise", stacklevel=2)
            # edge i (v_i -> v_i+1) becomes an edge of the reversed cycle
            rv = verts[::-1]
            rl = [labels[(n - 2 - k) % n] for k in range(n)]
            verts, labels = rv, rl
        if check:
            rep = _check(verts, labels)
            if not rep.valid:
                raise GeometryError(str(rep))
        object.__setattr__(self, "vertices", tuple(verts))
        object.__setattr__(self, "labels", tuple(labels))
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(labels)})
        object.__setattr__(self, "_diam", None)

    def __setattr__(self, k, v):
        raise AttributeError("LabeledPolygon is immutable")

    def __len__(self):
        return len(self.vertices)

    def __eq__(self, other):
        return (isinstance(other, LabeledPolygon) and self.vertices == other.vertices
                and self.labels == other.labels)

    def __hash__(self):
        return hash((self.vertices, self.labels))

    def __repr__(self):
        return "LabeledPolygon(%r, %r)" % (list(self.vertices), list(self.labels))

    @property
    def n(self):
        return len(self.vertices)

    def edge(self, i):
        n = len(self.vertices)
        return self.vertices[i % n], self.vertices[(i + 1) % n]

    def edge_index(self, label) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise GeometryError("unknown edge label %r" % (label,)) from None

    def edge_by_label(self, label):
        return self.edge(self.edge_index(label))

    def diameter(self) -> float:
        if self._diam is None:
            object.__setattr__(self, "_diam", diameter(self))
        return self._diam

    def relabeled(self, labels):
        return LabeledPolygon(self.vertices, labels)

    def transformed(self, g: Isometry2):
        """Image under an isometry, re-oriented counterclockwise if g reflects."""
        pts = [g.apply(p) for p in self.vertices]
        if g.det < 0:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                return LabeledPolygon(pts, self.labels)
        return LabeledPolygon(pts, self.labels)

    # serialization
    def to_dict(self):
        return {"vertices": [[x, y] for x, y in self.vertices], "labels": list(self.labels)}

    def dumps(self) -> str:
        verts = ",\n    ".join("[%s, %s]" % (_fmt17(x), _fmt17(y)) for x, y in self.vertices)
        labels = ", ".join(json.dumps(s) for s in self.labels)
        return '{\n  "vertices": [\n    %s\n  ],\n  "labels": [%s]\n}\n' % (verts, labels)

    @classmethod
    def loads(cls, text: str) -> "LabeledPolygon":
        data = json.loads(text)
        if not isinstance(data, dict) or "vertices" not in data:
            raise GeometryError("polygon JSON needs a 'vertices' list")
        return cls(data["vertices"], data.get("labels"))

    def save(self, path):
        with open(path, "w") as fh:
            fh.write(self.dumps())

    @classmethod
    def load(cls, path) -> "LabeledPolygon":
        with open(path) as fh:
            return cls.loads(fh.read())


def _fmt17(x: float) -> str:
    s = "%.17g" % x
    if "e" not in s and "." not in s and "n" not in s:
        s += ".0"
    return s


def validate(poly) -> ValidationReport:
    """Full report for a LabeledPolygon or a (vertices, labels) pair."""
    if isinstance(poly, LabeledPolygon):
        return _check(list(poly.vertices), list(poly.labels))
    verts, labels = poly
    verts = [(float(x), float(y)) for x, y in verts]
    if labels is None:
        labels = ["E%d" % (i + 1) for i in range(len(verts))]
    # clockwise input is repairable, so orientation is not reported
    return _check(verts, list(labels))


def interior_angles(poly: LabeledPolygon) -> list:
    """Angle at each vertex i between edge i-1 and edge i, in (0, 2pi)."""
    V = poly.vertices
    n = len(V)
    out = []
    for i in range(n):
        p, q, r = V[i - 1], V[i], V[(i + 1) % n]
        # turn from incoming to outgoing direction; interior = pi - turn
        a1 = math.atan2(q[1] - p[1], q[0] - p[0])
        a2 = math.atan2(r[1] - q[1], r[0] - q[0])
        turn = (a2 - a1 + math.pi) % (2 * math.pi) - math.pi
        out.append(math.pi - turn)
    return out


def reflex_vertices(poly: LabeledPolygon) -> list:
    return [i for i, a in enumerate(interior_angles(poly)) if a > math.pi]


def is_strictly_convex(poly: LabeledPolygon) -> bool:
    V = poly.vertices
    n = len(V)
    signs = set()
    for i in range(n):
        p, q, r = V[i - 1], V[i], V[(i + 1) % n]
        signs.add(orient(p, q, r) > 0)
    return signs == {True}


def diameter(poly: LabeledPolygon) -> float:
    V = poly.vertices
    return max(dist(p, q) for i, p in enumerate(V) for q in V[i + 1:])


def min_feature_size(poly: LabeledPolygon) -> float:
    """Smallest edge length or vertex to non-incident edge distance."""
    V = poly.vertices
    n = len(V)
    best = min(dist(V[i], V[(i + 1) % n]) for i in range(n))
    for i in range(n):
        for j in range(n):
            if j == i or (j + 1) % n == i:
                continue
            best = min(best, point_segment_distance(V[i], V[j], V[(j + 1) % n]))
    return best


def similarity_to_chart(poly: LabeledPolygon):
    """Return f(p) placing v1 at 0, v2 at (1,0) and v3 in the upper half plane."""
    V = poly.vertices
    (x0, y0), (x1, y1) = V[0], V[1]
    dx, dy = x1 - x0, y1 - y0
    L2 = dx * dx + dy * dy
    # complex division by (v2 - v1)
    def f(p):
        u, v = p[0] - x0, p[1] - y0
        return ((u * dx + v * dy) / L2, (v * dx - u * dy) / L2)
    flip = f(V[2])[1] < 0
    if flip:
        return lambda p: (lambda q: (q[0], -q[1]))(f(p))
    return f


def normalize(poly: LabeledPolygon) -> LabeledPolygon:
    """Canonical chart: vertex 1 at the origin, vertex 2 at (1,0), Im v3 >= 0.

    When a reflection is needed the vertex order is kept, so the chart is
    listed clockwise; that only happens when vertex 2 is reflex.
    """
    f = similarity_to_chart(poly)
    pts = [f(p) for p in poly.vertices]
    pts[0] = (0.0, 0.0)
    pts[1] = (1.0, 0.0)
    return LabeledPolygon(pts, poly.labels, check=False, orient=False)


def normalized_vertices(poly: LabeledPolygon) -> list:
    return list(normalize(poly).vertices)


def point_in_polygon(p, poly: LabeledPolygon) -> bool:
    """Strict interior test by winding crossing count."""
    x, y = p
    V = poly.vertices
    n = len(V)
    inside = False
    for i in range(n):
        (x0, y0), (x1, y1) = V[i], V[(i + 1) % n]
        if (y0 > y) != (y1 > y):
            xc = x0 + (y - y0) * (x1 - x0) / (y1 - y0)
            if xc > x:
                inside = not inside
    return inside


def regular_polygon(n: int, labels=None) -> LabeledPolygon:
    pts = [(math.cos(2 * math.pi * k / n), math.sin(2 * math.pi * k / n)) for k in range(n)]
    return LabeledPolygon(pts, labels or [chr(65 + k) for k in range(n)])


def rectangle(w=1.0, h=1.0, labels=("A", "B", "C", "D")) -> LabeledPolygon:
    return LabeledPolygon([(0, 0), (w, 0), (w, h), (0, h)], labels)


def unit_square(labels=("A", "B", "C", "D")) -> LabeledPolygon:
    return rectangle(1.0, 1.0, labels)


def rhombus(angle=math.pi / 3, labels=("A", "B", "C", "D")) -> LabeledPolygon:
    """Unit rhombus with the given angle at vertex 1, the corner shared by A and B."""
    c, s = math.cos(angle), math.sin(angle)
    return LabeledPolygon([(0, 0), (1, 0), (1 - c, s), (-c, s)], labels)


def triangle_from_angles(alpha, beta, labels=("A", "B", "C")) -> LabeledPolygon:
    """Triangle with base (0,0)-(1,0), angle alpha at (0,0) and beta at (1,0)."""
    gamma = math.pi - alpha - beta
    if min(alpha, beta, gamma) <= 0:
        raise GeometryError("angles must be positive and sum below pi")
    r = math.sin(beta) / math.sin(gamma)
    return LabeledPolygon([(0, 0), (1, 0), (r * math.cos(alpha), r * math.sin(alpha))], labels)


def l_shape(labels=("A", "B", "C", "D", "E", "F")) -> LabeledPolygon:
    # reflex corner at (1,1)
    return LabeledPolygon([(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)], labels)
