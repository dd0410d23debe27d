"""Billiard flow on a labeled polygon.

Impacts are computed on the straight line of the development: the ray is
fixed once in the plane and every bounce only updates the isometry carrying
the table into the current copy.  Round-off therefore grows with the length
of the line, not with the number of reflections composed in direction space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .geometry import (GeometryError, IDENTITY, Isometry2, LabeledPolygon,
                       dist, point_segment_distance, reflect_across_segment)

TWO_PI = 2.0 * math.pi


class FlowError(GeometryError):
    pass


@dataclass(frozen=True)
class RayState:
    position: tuple
    angle: float

    @property
    def direction(self):
        return (math.cos(self.angle), math.sin(self.angle))


@dataclass(frozen=True)
class Hit:
    edge: int
    point: tuple
    t: float


@dataclass(frozen=True)
class Singular:
    vertex: int
    point: tuple
    t: float


@dataclass
class TraceResult:
    word: list
    terminal: str  # "completed" or "singular"
    impact_points: list = field(default_factory=list)
    vertex: int | None = None
    bounces: int = 0

    @property
    def singular(self) -> bool:
        return self.terminal == "singular"

    def word_string(self, sep=""):
        return sep.join(self.word)


def default_eps_vertex(poly: LabeledPolygon) -> float:
    return 1e-9 * poly.diameter()


def _first_hit(V, o, u, t_min, skip, eps_vertex):
    """First boundary event of the ray o + t u with t > t_min.

    Returns (kind, index, t, point) with kind "hit" or "singular", or None
    when no edge is met.
    """
    n = len(V)
    best_t = math.inf
    best = None
    ox, oy = o
    ux, uy = u
    for i in range(n):
        if i == skip:
            continue
        (ax, ay), (bx, by) = V[i], V[(i + 1) % n]
        ex, ey = bx - ax, by - ay
        den = ux * ey - uy * ex
        L = math.hypot(ex, ey)
        if abs(den) <= 1e-14 * L:
            continue  # parallel: a tangent touch is caught at the vertices
        wx, wy = ax - ox, ay - oy
        t = (wx * ey - wy * ex) / den
        s = (wx * uy - wy * ux) / den
        # accept hits within the vertex radius of the segment ends
        slack = eps_vertex / L
        if t > t_min and -slack <= s <= 1.0 + slack and t < best_t:
            best_t = t
            best = (i, s, L, den)
    if best is None:
        return None
    i, s, L, den = best
    p = (ox + best_t * ux, oy + best_t * uy)
    a, b = V[i], V[(i + 1) % n]
    da, db = dist(p, a), dist(p, b)
    if min(da, db) <= eps_vertex:
        return ("singular", i if da <= db else (i + 1) % n, best_t, p)
    # grazing incidence within the vertex radius counts as singular as well
    if abs(den) <= 1e-12 * L:
        return ("singular", i if da <= db else (i + 1) % n, best_t, p)
    return ("hit", i, best_t, p)


def _vertex_on_path(V, o, u, t0, t1, eps_vertex):
    # vertex strictly between two boundary events means the chord touches it
    ux, uy = u
    for k, (vx, vy) in enumerate(V):
        t = (vx - o[0]) * ux + (vy - o[1]) * uy
        if t0 < t < t1:
            d = abs((vx - o[0]) * uy - (vy - o[1]) * ux)
            if d <= eps_vertex:
                return k, t
    return None


def _edge_containing(poly, p, eps):
    best = None
    for i in range(poly.n):
        a, b = poly.edge(i)
        d = point_segment_distance(p, a, b)
        if d <= eps and (best is None or d < best[1]):
            best = (i, d)
    return None if best is None else best[0]


def _check_start(poly, p, u, eps_vertex):
    """Validate a starting state; returns the edge index p lies on, or None."""
    for k, v in enumerate(poly.vertices):
        if dist(p, v) <= eps_vertex:
            raise FlowError("starting point coincides with vertex %d" % k)
    e = _edge_containing(poly, p, eps_vertex)
    if e is None:
        return None
    a, b = poly.edge(e)
    ex, ey = b[0] - a[0], b[1] - a[1]
    L = math.hypot(ex, ey)
    inward = (ex * u[1] - ey * u[0]) / L  # interior lies to the left of the edge
    if abs(inward) <= 1e-12:
        raise FlowError("ray launched along its own edge %s" % poly.labels[e])
    if inward < 0:
        raise FlowError("ray on edge %s points out of the table" % poly.labels[e])
    return e


def step(poly: LabeledPolygon, state: RayState, eps_vertex=None, skip_edge=None):
    """First boundary event of the ray from `state` inside the table."""
    if eps_vertex is None:
        eps_vertex = default_eps_vertex(poly)
    u = state.direction
    p = tuple(state.position)
    if skip_edge is None:
        skip_edge = _check_start(poly, p, u, eps_vertex)
    ev = _first_hit(poly.vertices, p, u, 0.0, skip_edge, eps_vertex)
    if ev is None:
        raise FlowError("ray left the table without meeting an edge")
    kind, idx, t, q = ev
    vv = _vertex_on_path(poly.vertices, p, u, eps_vertex, t, eps_vertex)
    if vv is not None:
        k, tv = vv
        return Singular(k, poly.vertices[k], tv)
    if kind == "singular":
        return Singular(idx, poly.vertices[idx], t)
    return Hit(idx, q, t)


def reflect_direction(theta: float, edge) -> float:
    """Outgoing angle after optical reflection off the segment `edge`."""
    a, b = edge
    ex, ey = b[0] - a[0], b[1] - a[1]
    L = math.hypot(ex, ey)
    if L == 0.0:
        raise GeometryError("degenerate edge")
    ux, uy = math.cos(theta), math.sin(theta)
    if abs(ux * ey - uy * ex) <= 1e-12 * L:
        raise FlowError("ray is tangent to the edge")
    phi = math.atan2(ey, ex)
    return (2.0 * phi - theta) % TWO_PI


def trace(poly: LabeledPolygon, p, theta: float, n_bounces: int, eps_vertex=None) -> TraceResult:
    """Follow the billiard flow for up to n_bounces reflections.

    When p lies on an edge, that edge is the launch edge and is not emitted.
    """
    if n_bounces < 0:
        raise ValueError("n_bounces must be >= 0")
    if eps_vertex is None:
        eps_vertex = default_eps_vertex(poly)
    p = (float(p[0]), float(p[1]))
    d = (math.cos(theta), math.sin(theta))
    skip = _check_start(poly, p, d, eps_vertex)
    V = poly.vertices
    labels = poly.labels
    g = IDENTITY  # maps the table onto the current copy of the development
    t = 0.0
    word, pts = [], []
    for _ in range(n_bounces):
        gi = g.inverse()
        o = gi.apply(p)
        u = gi.apply_vector(d)
        ev = _first_hit(V, o, u, t + 1e-12 * (1.0 + abs(t)), skip, eps_vertex)
        if ev is None:
            raise FlowError("ray left the table without meeting an edge")
        kind, idx, t_hit, q = ev
        vv = _vertex_on_path(V, o, u, t + eps_vertex, t_hit, eps_vertex)
        if vv is not None:
            return TraceResult(word, "singular", pts, vertex=vv[0], bounces=len(word))
        if kind == "singular":
            return TraceResult(word, "singular", pts, vertex=idx, bounces=len(word))
        word.append(labels[idx])
        pts.append(q)
        g = g.compose(reflect_across_segment(poly.edge(idx)))
        skip = idx
        t = t_hit
    return TraceResult(word, "completed", pts, bounces=len(word))


def unfolded_impacts(poly: LabeledPolygon, word, points):
    """Carry impact points (table coordinates) into the development of word."""
    g = IDENTITY
    out = []
    for lab, q in zip(word, points):
        out.append(g.apply(q))
        g = g.compose(reflect_across_segment(poly.edge_by_label(lab)))
    return out


def outgoing_angle(poly: LabeledPolygon, theta: float, word) -> float:
    """Direction (table coordinates) after bouncing off the edges in word."""
    for lab in word:
        theta = reflect_direction(theta, poly.edge_by_label(lab))
    return theta
