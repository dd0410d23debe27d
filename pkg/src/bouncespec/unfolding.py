"""Developments along edge words and the corridor of lines realizing a word.

A word w = w_1 ... w_n is realized by a nonsingular trajectory exactly when
some straight line in the development crosses every portal strictly inside
it, in the right direction, without leaving the copies in between.  Lines are
parametrized as y = a x + b in a frame adapted to the first two portals, so
each condition is a half-plane in (a, b) and the feasible set is a convex
polygon maintained by clipping.

For non-convex tables the chord inside a copy must also stay in that copy.
The chord from the entry edge to the exit edge lies inside the polygon iff it
separates the two shortest boundary-hugging paths between those edges (the
"hourglass"); the inner vertices of these paths add one half-plane each.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

from .geometry import (EPS_GEOM, GeometryError, IDENTITY, Isometry2, LabeledPolygon,
                       is_strictly_convex, orient, point_in_polygon, reflect_across_segment)
from .flow import FlowError, reflect_direction, trace

TWO_PI = 2.0 * math.pi
WIDTH_FLOOR = 1e-10


class CorridorError(GeometryError):
    """Numeric failure of the feasibility solver."""


def parse_word(poly: LabeledPolygon, word) -> tuple:
    """Accept a sequence of labels, a comma separated string, or a plain string
    of single-character labels."""
    if isinstance(word, str):
        if "," in word:
            letters = [s.strip() for s in word.split(",") if s.strip()]
        elif word in poly.labels:
            letters = [word]
        else:
            letters = list(word)
    else:
        letters = list(word)
    for c in letters:
        poly.edge_index(c)
    return tuple(letters)


def has_repeat(word) -> bool:
    return any(word[i] == word[i + 1] for i in range(len(word) - 1))


# -- developments -----------------------------------------------------------

@dataclass(frozen=True)
class Portal:
    left: tuple
    right: tuple
    edge: int


@dataclass(frozen=True)
class Development:
    poly: LabeledPolygon
    word: tuple
    copies: tuple
    portals: tuple

    def copy_vertices(self, j):
        g = self.copies[j]
        return [g.apply(v) for v in self.poly.vertices]


def _portal(poly, g, i):
    a, b = poly.vertices[i], poly.vertices[(i + 1) % poly.n]
    # leaving a copy through edge (a, b): b is on the left for a direct copy
    if g.det > 0:
        return Portal(g.apply(b), g.apply(a), i)
    return Portal(g.apply(a), g.apply(b), i)


def develop(poly: LabeledPolygon, word, allow_repeats=False) -> Development:
    """Chain of reflected copies of the table along word."""
    w = parse_word(poly, word)
    if has_repeat(w) and not allow_repeats:
        raise GeometryError("word repeats a letter consecutively: %s" % ",".join(w))
    copies = [IDENTITY]
    portals = []
    g = IDENTITY
    for c in w:
        i = poly.edge_index(c)
        portals.append(_portal(poly, g, i))
        g = g.compose(reflect_across_segment(poly.edge(i)))
        copies.append(g)
    return Development(poly, w, tuple(copies), tuple(portals))


# -- hourglass constraints for non-convex copies ----------------------------

_HOURGLASS_CACHE: dict = {}


def _visible(V, i, j):
    n = len(V)
    if (j - i) % n in (1, n - 1):
        return True
    p, q = V[i], V[j]
    L = math.hypot(q[0] - p[0], q[1] - p[1])
    tol = 1e-12 * L * L
    for k in range(n):
        if k == i or k == j:
            continue
        # a vertex on the open segment blocks it
        r = V[k]
        if abs(orient(p, q, r)) <= tol:
            t = ((r[0] - p[0]) * (q[0] - p[0]) + (r[1] - p[1]) * (q[1] - p[1])) / (L * L)
            if 0.0 < t < 1.0:
                return False
    for k in range(n):
        a, b = V[k], V[(k + 1) % n]
        if k in (i, j) or (k + 1) % n in (i, j):
            continue
        d1, d2 = orient(p, q, a), orient(p, q, b)
        d3, d4 = orient(a, b, p), orient(a, b, q)
        if d1 * d2 < 0 and d3 * d4 < 0:
            return False
    mid = ((p[0] + q[0]) / 2, (p[1] + q[1]) / 2)
    return _inside(V, mid)


def _inside(V, p):
    x, y = p
    inside = False
    n = len(V)
    for i in range(n):
        (x0, y0), (x1, y1) = V[i], V[(i + 1) % n]
        if (y0 > y) != (y1 > y):
            if x0 + (y - y0) * (x1 - x0) / (y1 - y0) > x:
                inside = not inside
    return inside


def _shortest_path(V, vis, s, t):
    if s == t:
        return []
    n = len(V)
    best = [math.inf] * n
    prev = [-1] * n
    best[s] = 0.0
    heap = [(0.0, s)]
    while heap:
        d, u = heapq.heappop(heap)
        if d > best[u]:
            continue
        if u == t:
            break
        for v in range(n):
            if vis[u][v]:
                nd = d + math.hypot(V[v][0] - V[u][0], V[v][1] - V[u][1])
                if nd < best[v] - 1e-15:
                    best[v] = nd
                    prev[v] = u
                    heapq.heappush(heap, (nd, v))
    path = []
    u = prev[t]
    while u != s and u != -1:
        path.append(u)
        u = prev[u]
    return path[::-1]


def hourglass(poly: LabeledPolygon):
    """Map (entry edge, exit edge) -> (right vertices, left vertices).

    Right vertices must lie strictly right of the chord from the entry edge to
    the exit edge (polygon coordinates), left vertices strictly left.  Empty
    for convex tables.
    """
    key = poly.vertices
    hit = _HOURGLASS_CACHE.get(key)
    if hit is not None:
        return hit
    n = poly.n
    table = {}
    if not is_strictly_convex(poly):
        V = poly.vertices
        vis = [[i != j and _visible(V, i, j) for j in range(n)] for i in range(n)]
        for e_in in range(n):
            for e_out in range(n):
                if e_in == e_out:
                    continue
                right = _shortest_path(V, vis, (e_in + 1) % n, e_out)
                left = _shortest_path(V, vis, (e_out + 1) % n, e_in)
                if right or left:
                    table[(e_in, e_out)] = (tuple(right), tuple(left))
    _HOURGLASS_CACHE[key] = table
    return table


# -- line program -----------------------------------------------------------

def _clip(region, alpha, beta, gamma):
    """Keep the part of a convex polygon where alpha*a + beta*b <= gamma."""
    out = []
    m = len(region)
    if m == 0:
        return out
    vals = [alpha * a + beta * b - gamma for a, b in region]
    for k in range(m):
        p, fp = region[k], vals[k]
        q, fq = region[(k + 1) % m], vals[(k + 1) % m]
        if fp <= 0.0:
            out.append(p)
        if (fp < 0.0 < fq) or (fq < 0.0 < fp):
            t = fp / (fp - fq)
            out.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
    return out if len(out) >= 3 else []


def _area(region):
    s = 0.0
    m = len(region)
    for k in range(m):
        x0, y0 = region[k]
        x1, y1 = region[(k + 1) % m]
        s += x0 * y1 - x1 * y0
    return 0.5 * s


def _centroid(region):
    A = 0.0
    cx = cy = 0.0
    m = len(region)
    x0, y0 = region[0]
    for k in range(1, m - 1):
        x1, y1 = region[k]
        x2, y2 = region[k + 1]
        t = ((x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0)) / 2.0
        A += t
        cx += t * (x0 + x1 + x2) / 3.0
        cy += t * (y0 + y1 + y2) / 3.0
    if A <= 0.0:
        return (sum(p[0] for p in region) / m, sum(p[1] for p in region) / m)
    return (cx / A, cy / A)


@dataclass(frozen=True)
class Frame:
    origin: tuple
    ex: tuple  # unit x-axis

    @property
    def angle(self):
        return math.atan2(self.ex[1], self.ex[0])

    def coords(self, q):
        dx, dy = q[0] - self.origin[0], q[1] - self.origin[1]
        return (dx * self.ex[0] + dy * self.ex[1], -dx * self.ex[1] + dy * self.ex[0])

    def to_plane(self, X, Y):
        ox, oy = self.origin
        return (ox + X * self.ex[0] - Y * self.ex[1], oy + X * self.ex[1] + Y * self.ex[0])

    def line(self, a, b):
        """Point (on the frame's y-axis) and angle of the line y = a x + b."""
        return self.to_plane(0.0, b), (self.angle + math.atan(a)) % TWO_PI


def _frame_for(p1: Portal, p2: Portal):
    """Frame whose x-axis bisects the cone of directions from portal 1 to portal 2."""
    vecs = []
    scale = math.hypot(p1.left[0] - p1.right[0], p1.left[1] - p1.right[1])
    for s in (p1.left, p1.right):
        for t in (p2.left, p2.right):
            dx, dy = t[0] - s[0], t[1] - s[1]
            L = math.hypot(dx, dy)
            # a shared endpoint gives a round-off vector with no direction
            if L > 1e-9 * scale:
                vecs.append((dx / L, dy / L))
    rx = sum(v[0] for v in vecs)
    ry = sum(v[1] for v in vecs)
    ref = math.atan2(ry, rx)
    offs = [math.remainder(math.atan2(v[1], v[0]) - ref, TWO_PI) for v in vecs]
    lo, hi = min(offs), max(offs)
    phi = ref + 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    origin = ((p1.left[0] + p1.right[0]) / 2, (p1.left[1] + p1.right[1]) / 2)
    return Frame(origin, (math.cos(phi), math.sin(phi))), half


class _Program:
    """Convex polygon of admissible (a, b) in a fixed frame."""

    __slots__ = ("frame", "region", "margin")

    def __init__(self, frame, region, margin):
        self.frame = frame
        self.region = region
        self.margin = margin

    def require(self, q, side):
        """side=+1: q strictly left of the directed line, -1: strictly right."""
        X, Y = self.frame.coords(q)
        m = self.margin
        if side > 0:
            self.region = _clip(self.region, X, 1.0, Y - m)
        else:
            self.region = _clip(self.region, -X, -1.0, -Y - m)
        return bool(self.region)

    def copy(self):
        return _Program(self.frame, list(self.region), self.margin)


# -- corridor state ----------------------------------------------------------

class CorridorState:
    """Incrementally extendable corridor of a word (append only)."""

    __slots__ = ("poly", "word", "g_prev", "g", "portals", "prog", "margin", "parent", "_width")

    def __init__(self, poly, word, g_prev, g, portals, prog, margin, parent=None):
        self.poly = poly
        self.word = word
        self.g_prev = g_prev  # copy before the last portal
        self.g = g  # copy after the last portal
        self.portals = portals
        self.prog = prog
        self.margin = margin
        self.parent = parent
        self._width = None

    @classmethod
    def start(cls, poly: LabeledPolygon, label, eps_geom=EPS_GEOM):
        i = poly.edge_index(label)
        port = _portal(poly, IDENTITY, i)
        g = reflect_across_segment(poly.edge(i))
        return cls(poly, (label,), IDENTITY, g, (port,), None, eps_geom * poly.diameter())

    @property
    def feasible(self):
        return len(self.word) == 1 or bool(self.prog is not None and self.prog.region)

    def extend(self, label):
        """Corridor of word + label, or None when infeasible."""
        poly = self.poly
        if label == self.word[-1]:
            return None
        i = poly.edge_index(label)
        g = self.g
        port = _portal(poly, g, i)
        portals = self.portals + (port,)
        if self.prog is None:
            frame, half = _frame_for(self.portals[0], port)
            T = math.tan(min(half + 0.05, 0.5 * math.pi - 1e-6))
            p0 = self.portals[0]
            B = (1.0 + T) * math.hypot(p0.left[0] - p0.right[0], p0.left[1] - p0.right[1]) + 1.0
            prog = _Program(frame, [(-T, -B), (T, -B), (T, B), (-T, B)], self.margin)
            if not (prog.require(p0.left, 1) and prog.require(p0.right, -1)):
                return None
        else:
            prog = self.prog.copy()
        if not (prog.require(port.left, 1) and prog.require(port.right, -1)):
            return None
        # the chord through the copy between the last two portals
        hg = hourglass(poly).get((poly.edge_index(self.word[-1]), i))
        if hg:
            s = 1 if g.det > 0 else -1
            for k in hg[0]:
                if not prog.require(g.apply(poly.vertices[k]), -s):
                    return None
            for k in hg[1]:
                if not prog.require(g.apply(poly.vertices[k]), s):
                    return None
        g_next = g.compose(reflect_across_segment(poly.edge(i)))
        return CorridorState(poly, self.word + (label,), g, g_next, portals, prog, self.margin,
                             self)

    # geometry of the feasible set

    def width(self):
        """Projected portal extent, never more than the width of any prefix."""
        if self._width is None:
            w = self._own_width()
            if self.parent is not None:
                w = min(w, self.parent.width())
                self.parent = None  # the cached value is all we need from it
            self._width = w
        return self._width

    def _own_width(self):
        if len(self.word) == 1:
            p = self.portals[0]
            return math.hypot(p.left[0] - p.right[0], p.left[1] - p.right[1])
        if not self.prog.region:
            return 0.0
        a_c, b_c = _centroid(self.prog.region)
        frame = self.prog.frame
        best = math.inf
        for port in self.portals:
            L = frame.coords(port.left)
            R = frame.coords(port.right)
            dx, dy = R[0] - L[0], R[1] - L[1]
            ss = []
            for a, b in self.prog.region:
                den = dy - a * dx
                if den == 0.0:
                    continue
                ss.append((a * L[0] + b - L[1]) / den)
            if not ss:
                return 0.0
            length = math.hypot(dx, dy)
            # project the crossing segment perpendicular to the witness
            sin = abs(dy - a_c * dx) / (length * math.hypot(1.0, a_c))
            best = min(best, (max(ss) - min(ss)) * length * sin)
        return max(best, 0.0)

    def angle_interval(self):
        if len(self.word) == 1:
            a, b = self.poly.edge_by_label(self.word[0])
            phi = math.atan2(b[1] - a[1], b[0] - a[0])
            return (phi - math.pi, phi)
        base = self.prog.frame.angle
        angs = [base + math.atan(a) for a, _ in self.prog.region]
        return (min(angs), max(angs))

    def witness_from(self, a, b):
        """Crossing point on the first portal and direction of the line (a, b)."""
        frame = self.prog.frame
        q, theta = frame.line(a, b)
        p = self.portals[0]
        return _crossing(p, q, theta), theta

    def witness(self):
        if len(self.word) == 1:
            p = self.portals[0]
            mid = ((p.left[0] + p.right[0]) / 2, (p.left[1] + p.right[1]) / 2)
            ex, ey = p.left[0] - p.right[0], p.left[1] - p.right[1]
            # perpendicular, heading out through the edge
            return mid, math.atan2(-ex, ey) % TWO_PI
        return self.witness_from(*_centroid(self.prog.region))


def _crossing(port, q, theta):
    dx, dy = math.cos(theta), math.sin(theta)
    ex, ey = port.right[0] - port.left[0], port.right[1] - port.left[1]
    den = dx * ey - dy * ex
    wx, wy = port.left[0] - q[0], port.left[1] - q[1]
    t = (wx * ey - wy * ex) / den
    return (q[0] + t * dx, q[1] + t * dy)


def state_for(poly: LabeledPolygon, word, eps_geom=EPS_GEOM):
    """CorridorState for word, or None if some prefix is already infeasible."""
    w = parse_word(poly, word)
    if not w:
        raise GeometryError("empty word")
    st = CorridorState.start(poly, w[0], eps_geom)
    for c in w[1:]:
        st = st.extend(c)
        if st is None:
            return None
    return st


def closed_loop(poly: LabeledPolygon, word, point, theta) -> bool:
    """Trace the witness and compare with word."""
    if len(word) == 1:
        return True
    i = poly.edge_index(word[0])
    try:
        out = reflect_direction(theta, poly.edge(i))
        res = trace(poly, point, out, len(word) - 1)
    except FlowError:
        return False
    return res.terminal == "completed" and tuple(res.word) == tuple(word[1:])


# -- public corridor object --------------------------------------------------

@dataclass(frozen=True)
class Corridor:
    word: tuple
    feasible: bool
    witness: tuple | None = None  # (point on the first portal, angle)
    width: float = 0.0
    angle_interval: tuple | None = None
    marginal: bool = False
    region: tuple = ()
    frame: Frame | None = None
    note: str = ""


def corridor(dev: Development, eps_geom=EPS_GEOM, verify=True) -> Corridor:
    """Decide whether some nonsingular trajectory realizes the development's word."""
    poly, w = dev.poly, dev.word
    if not w:
        raise GeometryError("empty word")
    if has_repeat(w):
        # the repeated portal would have to be crossed in both senses
        return Corridor(w, False, note="consecutive repeat")
    st = state_for(poly, w, eps_geom)
    if st is None:
        return Corridor(w, False)
    return corridor_from_state(st, verify)


def corridor_from_state(st: CorridorState, verify=True) -> Corridor:
    poly, w = st.poly, st.word
    diam = poly.diameter()
    width = st.width()
    marginal = width < WIDTH_FLOOR * diam
    region = tuple(st.prog.region) if st.prog else ()
    frame = st.prog.frame if st.prog else None
    wit = st.witness()
    if verify and not closed_loop(poly, w, *wit):
        # try points pulled from the centroid toward each vertex of the region
        ok = False
        if region:
            c = _centroid(region)
            for v in region:
                for f in (0.5, 0.9):
                    cand = st.witness_from(c[0] + f * (v[0] - c[0]), c[1] + f * (v[1] - c[1]))
                    if closed_loop(poly, w, *cand):
                        wit, ok = cand, True
                        break
                if ok:
                    break
        if not ok:
            return Corridor(w, False, None, width, None, True, region, frame,
                            "feasible set found but no witness traced the word")
    return Corridor(w, True, wit, width, st.angle_interval(), marginal, region, frame)


def is_realizable(poly: LabeledPolygon, word) -> bool:
    return corridor(develop(poly, word, allow_repeats=True)).feasible


def corridor_width(dev: Development) -> float:
    c = corridor(dev, verify=False)
    if not c.feasible:
        raise GeometryError("corridor of %s is empty" % ",".join(dev.word))
    return c.width


def direction_bound(poly: LabeledPolygon, word, d_min: float) -> float:
    """Largest angle between two realizing directions when every realizing
    line travels at least d_min between its first and last impacts."""
    if not d_min > 0:
        raise ValueError("d_min must be positive")
    if not is_realizable(poly, word):
        raise GeometryError("word is not realizable")
    return math.atan(2.0 * poly.diameter() / d_min)


def sample_feasible_lines(c: Corridor, n: int, rng):
    """n lines drawn uniformly from the corridor's (a, b) region.

    Returns (point, angle) pairs with the point on the frame's y-axis.
    """
    if not c.feasible or not c.region:
        raise GeometryError("no two-portal feasible region to sample")
    reg = c.region
    tris, acc = [], []
    tot = 0.0
    for k in range(1, len(reg) - 1):
        t = abs(_area([reg[0], reg[k], reg[k + 1]]))
        tot += t
        tris.append((reg[0], reg[k], reg[k + 1]))
        acc.append(tot)
    out = []
    for _ in range(n):
        u = rng.random() * tot
        k = next(i for i, s in enumerate(acc) if s >= u)
        p0, p1, p2 = tris[k]
        r1, r2 = rng.random(), rng.random()
        if r1 + r2 > 1.0:
            r1, r2 = 1.0 - r1, 1.0 - r2
        a = p0[0] + r1 * (p1[0] - p0[0]) + r2 * (p2[0] - p0[0])
        b = p0[1] + r1 * (p1[1] - p0[1]) + r2 * (p2[1] - p0[1])
        out.append(c.frame.line(a, b))
    return out
