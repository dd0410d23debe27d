"""Radii within which a finite set of words survives vertex perturbation.

Every vertex of every copy in a development is a smooth function of the
table's vertex coordinates.  If a realizing line stays delta away from all
copy vertices, and no copy vertex moves by more than L per unit of vertex
perturbation, then any perturbation smaller than delta / L keeps each vertex
on its side of the line, so the word is still realized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import (GeometryError, LabeledPolygon, min_feature_size, normalize,
                       point_segment_distance, validate)
from .unfolding import corridor, develop, is_realizable, parse_word

FEATURE_CAP = 0.25
MAX_REJECTIONS = 1000


# -- vertex clearance ---------------------------------------------------------

def _line_hit(p, d, a, b):
    """Parameter t with p + t d on the line through a, b."""
    ex, ey = b[0] - a[0], b[1] - a[1]
    den = d[0] * ey - d[1] * ex
    return ((a[0] - p[0]) * ey - (a[1] - p[1]) * ex) / den


def vertex_clearance(poly: LabeledPolygon, word):
    """(delta, witness) for a realizable word.

    delta is the least distance from the witness's chord inside each copy of
    the development to that copy's vertices.  The witness is the corridor
    witness (point on the first edge, direction).
    """
    w = parse_word(poly, word)
    c = corridor(develop(poly, w, allow_repeats=True))
    if not c.feasible:
        raise GeometryError("word is not realizable: %s" % ",".join(w))
    dev = develop(poly, w)
    p, theta = c.witness
    d = (math.cos(theta), math.sin(theta))
    hits = []
    for port in dev.portals:
        t = _line_hit(p, d, port.left, port.right)
        hits.append((p[0] + t * d[0], p[1] + t * d[1]))
    if len(w) == 1:
        delta = min(math.dist(hits[0], v) for v in poly.vertices)
        return delta, c.witness
    delta = math.inf
    # copy j lies between portals j-1 and j
    for j in range(1, len(w)):
        a, b = hits[j - 1], hits[j]
        for v in dev.copy_vertices(j):
            delta = min(delta, point_segment_distance(v, a, b))
    return delta, c.witness


# -- sensitivity of the development --------------------------------------------

class _Jet:
    """A point with its gradient with respect to all table coordinates."""

    __slots__ = ("x", "y", "gx", "gy")

    def __init__(self, x, y, gx, gy):
        self.x, self.y, self.gx, self.gy = x, y, gx, gy


def _reflect_jet(p: _Jet, a: _Jet, b: _Jet) -> _Jet:
    # p' = a + R (p - a), R = [[c, s], [s, -c]] with c = (dx^2 - dy^2)/L2, s = 2 dx dy / L2
    dx, dy = b.x - a.x, b.y - a.y
    gdx, gdy = b.gx - a.gx, b.gy - a.gy
    L2 = dx * dx + dy * dy
    gL2 = 2 * dx * gdx + 2 * dy * gdy
    cn, sn = dx * dx - dy * dy, 2 * dx * dy
    gcn = 2 * dx * gdx - 2 * dy * gdy
    gsn = 2 * dy * gdx + 2 * dx * gdy
    c, s = cn / L2, sn / L2
    gc = (gcn * L2 - cn * gL2) / (L2 * L2)
    gs = (gsn * L2 - sn * gL2) / (L2 * L2)
    ux, uy = p.x - a.x, p.y - a.y
    gux, guy = p.gx - a.gx, p.gy - a.gy
    x = a.x + c * ux + s * uy
    y = a.y + s * ux - c * uy
    gx = a.gx + gc * ux + c * gux + gs * uy + s * guy
    gy = a.gy + gs * ux + s * gux - gc * uy - c * guy
    return _Jet(x, y, gx, gy)


def development_jacobians(poly: LabeledPolygon, word):
    """Per copy, per vertex, the 2 x 2n Jacobian of that copy vertex with
    respect to the flattened table coordinates (x0, y0, x1, y1, ...)."""
    w = parse_word(poly, word)
    n = poly.n
    m = 2 * n
    cur = []
    for k, (x, y) in enumerate(poly.vertices):
        gx, gy = np.zeros(m), np.zeros(m)
        gx[2 * k] = 1.0
        gy[2 * k + 1] = 1.0
        cur.append(_Jet(x, y, gx, gy))
    out = [cur]
    for c in w:
        i = poly.edge_index(c)
        a, b = cur[i], cur[(i + 1) % n]
        cur = [_reflect_jet(p, a, b) for p in cur]
        out.append(cur)
    return [[np.vstack([p.gx, p.gy]) for p in copy] for copy in out]


def sensitivity(poly: LabeledPolygon, word) -> float:
    """Bound on copy-vertex displacement per unit displacement of every vertex.

    With each table vertex moved by at most eps, copy vertex q moves by at
    most sum_i ||J_qi|| eps to first order, J_qi the 2x2 block for vertex i.
    Falls back to 3^|w| if the chain is numerically degenerate.
    """
    w = parse_word(poly, word)
    try:
        jac = development_jacobians(poly, w)
    except (ZeroDivisionError, FloatingPointError):
        return 3.0 ** len(w)
    best = 1.0
    for copy in jac:
        for J in copy:
            blocks = J.reshape(2, poly.n, 2).transpose(1, 0, 2)
            tot = sum(np.linalg.norm(B, 2) for B in blocks)
            if not math.isfinite(tot):
                return 3.0 ** len(w)
            best = max(best, float(tot))
    return best


# -- persistence radius --------------------------------------------------------

@dataclass(frozen=True)
class PersistenceCertificate:
    words: tuple
    epsilon: float
    delta: float  # clearance of the binding word
    witness: tuple
    L: float  # sensitivity of the binding word
    binding: tuple | None
    capped: bool = False
    samples_checked: int = 0
    per_word: tuple = field(default=(), repr=False)  # (word, delta, L)

    def describe(self):
        b = ",".join(self.binding) if self.binding else "-"
        return ("epsilon %.12g over %d words (binding %s: delta %.12g, L %.12g%s)"
                % (self.epsilon, len(self.words), b, self.delta, self.L,
                   ", capped by feature size" if self.capped else ""))


def persistence_radius(poly: LabeledPolygon, words) -> PersistenceCertificate:
    """Perturbation radius keeping every word of `words` realizable."""
    ws = sorted({parse_word(poly, x) for x in words})
    if not ws:
        raise ValueError("empty word set")
    rows = []
    best = None
    for w in ws:
        delta, wit = vertex_clearance(poly, w)
        if not delta > 0:
            raise GeometryError("zero clearance for %s" % ",".join(w))
        L = sensitivity(poly, w)
        rows.append((w, delta, L))
        if best is None or delta / L < best[1] / best[2]:
            best = (w, delta, L, wit)
    w, delta, L, wit = best
    eps = delta / L
    cap = FEATURE_CAP * min_feature_size(poly)
    capped = cap < eps
    return PersistenceCertificate(tuple(ws), min(eps, cap), delta, wit, L, w, capped,
                                  0, tuple(rows))


# -- sampling ------------------------------------------------------------------

def _jitter(poly, epsilon, rng):
    pts = []
    for x, y in poly.vertices:
        r = epsilon * math.sqrt(rng.random())
        t = 2 * math.pi * rng.random()
        pts.append((x + r * math.cos(t), y + r * math.sin(t)))
    return pts


def sample_perturbed(poly: LabeledPolygon, epsilon: float, count: int, seed=0):
    """count valid polygons with every vertex moved inside the open epsilon disk.

    Sample i draws from its own stream spawned from seed, so results do not
    depend on evaluation order.
    """
    if epsilon < 0:
        raise ValueError("epsilon must be nonnegative")
    if count < 0:
        raise ValueError("count must be nonnegative")
    if epsilon == 0:
        return [LabeledPolygon(poly.vertices, poly.labels) for _ in range(count)]
    out = []
    for i, child in enumerate(np.random.SeedSequence(seed).spawn(count)):
        rng = np.random.default_rng(child)
        for _ in range(MAX_REJECTIONS):
            pts = _jitter(poly, epsilon, rng)
            try:
                q = LabeledPolygon(pts, poly.labels, orient=False)
            except GeometryError:
                continue
            if validate(q).valid:
                out.append(q)
                break
        else:
            raise GeometryError("epsilon %g too large: %d consecutive invalid samples (sample %d)"
                                % (epsilon, MAX_REJECTIONS, i))
    return out


def vertex_distance(P: LabeledPolygon, Q: LabeledPolygon) -> float:
    """Largest distance between corresponding vertices of the normalized charts."""
    return max(math.dist(a, b) for a, b in zip(normalize(P).vertices, normalize(Q).vertices))


@dataclass
class ImpossibilityReport:
    certificate: PersistenceCertificate
    epsilon: float  # radius actually sampled (differs from the certificate when scaled)
    count: int
    seed: int
    checked: int
    failures: list  # (sample index, word)
    distinct_pair: tuple | None  # (i, j, vertex distance)
    samples: list = field(default_factory=list, repr=False)

    @property
    def persistence(self) -> float:
        bad = {i for i, _ in self.failures}
        return 1.0 - len(bad) / self.count if self.count else 1.0

    @property
    def passed(self) -> bool:
        return not self.failures and self.distinct_pair is not None

    def describe(self):
        lines = [self.certificate.describe(),
                 "sampled epsilon %.12g, %d samples, seed %d" % (self.epsilon, self.count, self.seed),
                 "persistence %.1f%% (%d word checks, %d failures)"
                 % (100 * self.persistence, self.checked, len(self.failures))]
        if self.failures:
            i, w = self.failures[0]
            lines.append("counterexample: sample %d loses %s" % (i, ",".join(w)))
        if self.distinct_pair:
            i, j, d = self.distinct_pair
            lines.append("samples %d and %d share every word at vertex distance %.6g" % (i, j, d))
        else:
            lines.append("no pair of samples farther apart than epsilon/2")
        lines.append("PASSED" if self.passed else "FAILED")
        return "\n".join(lines)


def demonstrate_impossibility(poly: LabeledPolygon, words, count=200, seed=0, scale=1.0):
    """Sample the certified ball and check that every word survives everywhere.

    scale multiplies the sampled radius; values above 1 are a diagnostic
    mode outside the certificate, where failures are expected.
    """
    cert = persistence_radius(poly, words)
    eps = cert.epsilon * scale
    samples = sample_perturbed(poly, eps, count, seed)
    failures = []
    checked = 0
    for i, Q in enumerate(samples):
        for w in cert.words:
            checked += 1
            if not is_realizable(Q, w):
                failures.append((i, w))
    bad = {i for i, _ in failures}
    good = [i for i in range(len(samples)) if i not in bad]
    pair = None
    # farthest pair among the samples that kept every word
    for a in range(len(good)):
        for b in range(a + 1, len(good)):
            d = vertex_distance(samples[good[a]], samples[good[b]])
            if pair is None or d > pair[2]:
                pair = (good[a], good[b], d)
    if pair is not None and not pair[2] > eps / 2:
        pair = None
    cert = PersistenceCertificate(cert.words, cert.epsilon, cert.delta, cert.witness, cert.L,
                                  cert.binding, cert.capped, len(samples), cert.per_word)
    return ImpossibilityReport(cert, eps, count, seed, checked, failures, pair, samples)
