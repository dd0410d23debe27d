"""Inverse problems answered from bounce-language queries alone.

Every routine here talks to the table only through a spectrum oracle
(`contains`, `list_extensions`); none of them reads polygon geometry.  All
"for every n" conditions are checked up to a finite depth and reported as
certified to that depth.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Protocol

from .geometry import EPS_GEOM, LabeledPolygon, normalize, triangle_from_angles
from .language import LanguageTable, PolygonSpectrum
from .sturmian import insertion_strings


class OracleError(ValueError):
    """The oracle answered inconsistently or cannot answer the query."""


class SearchBudgetExceeded(RuntimeError):
    """The search ran out of budget before deciding."""


class SpectrumOracle(Protocol):
    alphabet: tuple

    def contains(self, word) -> bool: ...

    def list_extensions(self, word) -> set: ...


class PolygonOracle:
    """Oracle backed by a hidden polygon.

    The polygon is kept private; callers only see membership answers.
    """

    def __init__(self, poly: LabeledPolygon, preload: int = 0, eps_geom=EPS_GEOM):
        self._spec = PolygonSpectrum(poly, preload, eps_geom)
        self.alphabet = tuple(poly.labels)
        self.queries = 0

    def contains(self, word) -> bool:
        self.queries += 1
        return self._spec.contains(tuple(word))

    def list_extensions(self, word) -> set:
        w = tuple(word)
        return {c for c in self.alphabet if (not w or c != w[-1]) and self.contains(w + (c,))}


class WordListOracle:
    """Oracle replaying a stored language table."""

    def __init__(self, table: LanguageTable):
        self._table = table
        self.alphabet = tuple(table.alphabet)
        self.max_len = table.max_len
        for w in table.words:
            if any(w[i] == w[i + 1] for i in range(len(w) - 1)):
                raise OracleError("stored word has a consecutive repeat: %s" % ",".join(w))
        if not table.is_factor_closed():
            raise OracleError("stored language is not closed under factors")

    @classmethod
    def from_file(cls, path):
        with open(path) as fh:
            return cls(LanguageTable.loads(fh.read()))

    def contains(self, word) -> bool:
        w = tuple(word)
        if len(w) > self.max_len:
            raise OracleError("word longer than the stored language (%d > %d)"
                              % (len(w), self.max_len))
        return w in self._table.words

    def list_extensions(self, word) -> set:
        w = tuple(word)
        return {c for c in self.alphabet if (not w or c != w[-1]) and self.contains(w + (c,))}


def _words_of_length(oracle, n):
    out = [(c,) for c in oracle.alphabet if oracle.contains((c,))]
    for _ in range(n - 1):
        out = [w + (c,) for w in out for c in sorted(oracle.list_extensions(w))]
    return out


def _prefixes(oracle, w):
    return {c for c in oracle.alphabet if c != w[0] and oracle.contains((c,) + w)}


def oracle_is_convex(oracle) -> bool:
    """Every ordered pair of distinct labels occurs."""
    return all(oracle.contains((x, y)) for x in oracle.alphabet for y in oracle.alphabet if x != y)


# -- adjacency --------------------------------------------------------------

def is_grazing(oracle, w, pair, depth) -> bool:
    """Finite-depth grazing test for the witness w of the pair {A, B}.

    w is flagged when, for E0 in the pair and G the other label, some history
    h of `depth` letters ending in E0 both precedes w and can instead be
    followed by an edge F outside {A, B, w[0]}: lines arriving along h split
    at a vertex between F and the continuation along w.  Only edges F that
    cannot see G count, since a grazed vertex is reflex and is shared by F
    and G; splits at the far end of w[0] are thereby ignored.
    """
    A, B = pair
    for E0 in (A, B):
        G = B if E0 == A else A
        # F and G must meet at the grazed vertex, which is reflex: two edges
        # at a reflex vertex never see each other
        bad = {F for F in oracle.alphabet if F not in (A, B, w[0])}
        bad = {F for F in bad if oracle.contains((E0, F)) and not oracle.contains((F, G))}
        if bad and _graze_dfs(oracle, (E0,), w, bad, depth):
            return True
    return False


def _graze_dfs(oracle, h, w, cand, depth):
    if len(h) >= depth:
        return True
    for x in oracle.alphabet:
        if x == h[0]:
            continue
        hh = (x,) + h
        if not oracle.contains(hh + w):
            continue
        c2 = {F for F in cand if oracle.contains(hh + (F,))}
        if c2 and _graze_dfs(oracle, hh, w, c2, depth):
            return True
    return False


@dataclass
class AdjacencyResult:
    pairs: set
    cyclic_order: list | None
    depth: int
    witnesses: dict = field(default_factory=dict)
    convex: bool = False

    def certified(self):
        return "certified to depth %d" % self.depth


def adjacency_pairs(oracle, depth: int, grazing_depth: int | None = None) -> AdjacencyResult:
    """Unordered adjacent label pairs, and the cyclic order when it closes up.

    A pair {A, B} is reported when some word w of length `depth` has exactly
    {A, B} as the letters that can precede it and w is not grazing.  On tables
    whose language contains every ordered pair (convex tables) the grazing
    test is skipped, since contiguity of prefix arcs already rules it out.
    """
    if depth < 2:
        raise ValueError("depth must be >= 2")
    gd = depth if grazing_depth is None else grazing_depth
    convex = oracle_is_convex(oracle)
    words = _words_of_length(oracle, depth)
    if not words:
        raise OracleError("oracle has no words of length %d" % depth)
    pairs = {}
    rejected = set()
    for w in words:
        pre = _prefixes(oracle, w)
        if len(pre) != 2:
            continue
        key = frozenset(pre)
        if key in pairs:
            continue
        if not convex and (key, w) not in rejected:
            if is_grazing(oracle, w, tuple(sorted(pre)), gd):
                rejected.add((key, w))
                continue
        pairs[key] = w
    order = _cyclic_order(oracle.alphabet, pairs.keys())
    return AdjacencyResult(set(pairs), order, depth, dict(pairs), convex)


def _cyclic_order(alphabet, pairs):
    nbr = {c: set() for c in alphabet}
    for p in pairs:
        a, b = tuple(p)
        nbr[a].add(b)
        nbr[b].add(a)
    if any(len(v) != 2 for v in nbr.values()):
        return None
    start = sorted(alphabet)[0]
    order = [start]
    prev, cur = None, start
    while True:
        nxt = sorted(nbr[cur] - {prev})[0] if prev is not None else sorted(nbr[cur])[0]
        if nxt == start:
            break
        if nxt in order:
            return None
        order.append(nxt)
        prev, cur = cur, nxt
    return order if len(order) == len(alphabet) else None


# -- right angles -------------------------------------------------------------

def detect_right_angle(oracle, A, B, depth: int) -> bool:
    """Search a nested chain E_n..E_1 A B E_1..E_n in the language for n <= depth."""
    if not oracle.contains((A, B)):
        return False

    def grow(core, n):
        if n == depth:
            return True
        left, right = core[0], core[-1]
        for e in sorted(oracle.alphabet):
            if e == left or e == right:
                continue
            nxt = (e,) + core + (e,)
            if oracle.contains(nxt) and grow(nxt, n + 1):
                return True
        return False

    return grow((A, B), 0) or grow((B, A), 0)


# -- matching families ----------------------------------------------------------

@dataclass(frozen=True)
class Record:
    head: tuple
    insertion: tuple
    tail: tuple

    @property
    def depth(self):
        return len(self.head)

    @property
    def word(self):
        return self.head + self.insertion + self.tail


@dataclass
class MatchingFamily:
    pair: tuple
    sequences: list
    closed: bool
    depth: int
    k: int

    @property
    def size(self):
        return len(self.sequences)

    @property
    def total_insertion(self):
        return sum(len(r.insertion) for r in self.sequences)

    def insertions(self):
        return ["".join(r.insertion) for r in self.sequences]

    def check(self):
        """Structural invariants; returns a list of violations."""
        bad = []
        A, B = self.pair
        m = len(self.sequences)
        last = None
        for r in self.sequences:
            if r.insertion:
                last = r.insertion[-1]
        for i, r in enumerate(self.sequences):
            ins = r.insertion
            if any(c not in (A, B) for c in ins) or any(ins[j] == ins[j + 1] for j in range(len(ins) - 1)):
                bad.append("insertion %d does not alternate" % i)
            if len(ins) not in (self.k, self.k - 1):
                bad.append("insertion %d has length %d" % (i, len(ins)))
            if ins:
                if last is not None and ins[0] == last:
                    bad.append("insertion %d repeats the previous letter" % i)
                last = ins[-1]
            nxt = self.sequences[(i + 1) % m]
            if (i + 1 < m or self.closed) and tuple(reversed(r.tail)) != nxt.head:
                bad.append("tail %d does not match head %d" % (i, (i + 1) % m))
        return bad


def _alt(first, length, A, B):
    other = B if first == A else A
    return tuple(first if j % 2 == 0 else other for j in range(length))


class _RecordSearch:
    def __init__(self, oracle, A, B, n, k, budget, two_sided=False):
        self.o = oracle
        self.A, self.B = A, B
        self.n = n
        self.k = k
        self.budget = budget
        self.two_sided = two_sided
        self.used = 0
        self._tails = {}
        self._sided = {}

    def _q(self, w):
        self.used += 1
        if self.used > self.budget:
            raise SearchBudgetExceeded("matching search exceeded %d queries" % self.budget)
        return self.o.contains(w)

    def tails(self, head, ins):
        """All tails t (n letters, t[0] not in {A,B}) with head+ins+t in the language."""
        key = (head, ins)
        hit = self._tails.get(key)
        if hit is not None:
            return hit
        base = head + ins
        out = []
        if not self._q(base):
            self._tails[key] = out
            return out
        stack = [()]
        while stack:
            t = stack.pop()
            if len(t) == self.n:
                out.append(t)
                continue
            prev = base[-1] if not t else t[-1]
            for c in sorted(self.o.alphabet, reverse=True):
                if c == prev or (not t and c in (self.A, self.B)):
                    continue
                if self._q(base + t + (c,)):
                    stack.append(t + (c,))
        out.sort()
        self._tails[key] = out
        return out

    def _insertions(self):
        for L in (self.k, self.k - 1):
            if L == 0:
                yield ()
            elif L > 0:
                yield _alt(self.A, L, self.A, self.B)
                yield _alt(self.B, L, self.A, self.B)

    def sided(self, rec):
        """Same head and tail also occur around the corner with another insertion.

        Lines on both sides of the vertex share the record's head and tail,
        which pins the record near the corner rather than anywhere along A or B.
        """
        if not self.two_sided:
            return True
        hit = self._sided.get(rec)
        if hit is None:
            hit = any(Y != rec.insertion and self._q(rec.head + Y + rec.tail)
                      for Y in self._insertions())
            self._sided[rec] = hit
        return hit

    def starts(self):
        """Records with an insertion of length k, grown outward from the middle."""
        A, B, n = self.A, self.B, self.n
        for first in (B, A):
            ins = _alt(first, self.k, A, B)
            if not self._q(ins):
                continue
            heads = [()]
            for _ in range(n):
                nxt = []
                for h in heads:
                    for c in sorted(self.o.alphabet):
                        if h and c == h[0]:
                            continue
                        if not h and (c in (A, B)):
                            continue
                        if self._q((c,) + h + ins):
                            nxt.append((c,) + h)
                heads = nxt
            for h in heads:
                for t in self.tails(h, ins):
                    r = Record(h, ins, t)
                    if self.sided(r):
                        yield r

    def successors(self, rec, carry):
        """Records whose head is the reversed tail of rec, honouring the start letter."""
        head = tuple(reversed(rec.tail))
        out = []
        for L in (self.k, self.k - 1):
            if L < 0:
                continue
            if L == 0:
                for t in self.tails(head, ()):
                    out.append((Record(head, (), t), carry))
                continue
            first = self.A if carry == self.B else self.B
            ins = _alt(first, L, self.A, self.B)
            for t in self.tails(head, ins):
                out.append((Record(head, ins, t), ins[-1]))
        out = [x for x in out if self.sided(x[0])]
        return out


def _shortest_cycle(search, start, max_len):
    carry0 = start.insertion[-1]
    goal_head = start.head
    first0 = start.insertion[0]
    parent = {(start, carry0): None}
    queue = deque([((start, carry0), 1)])
    while queue:
        (rec, carry), length = queue.popleft()
        # can we close back to the start?
        if tuple(reversed(rec.tail)) == goal_head and first0 != carry and length > 0:
            path = []
            node = (rec, carry)
            while node is not None:
                path.append(node[0])
                node = parent[node]
            return path[::-1]
        if length >= max_len:
            continue
        for nxt in search.successors(rec, carry):
            if nxt not in parent:
                parent[nxt] = (rec, carry)
                queue.append((nxt, length + 1))
    return None


def max_alternation_oracle(oracle, A, B, search_len):
    best = 0
    for k in range(1, search_len + 1):
        if oracle.contains(_alt(A, k, A, B)) or oracle.contains(_alt(B, k, A, B)):
            best = k
        else:
            break
    return best


def _signature(cycle):
    size = len(cycle)
    total = sum(len(r.insertion) for r in cycle)
    # a family must turn the corner an even number of times
    return (2 * size, 2 * total) if size % 2 else (size, total)


def _vote(search, max_starts, max_family):
    """Shortest closing cycle from each start, grouped by signature.

    Drift at finite depth lets a few starts close into short spurious
    cycles; the signature shared by most starts wins, ties going to the
    smaller family.
    """
    groups = {}
    for i, start in enumerate(search.starts()):
        if i >= max_starts:
            break
        cyc = _shortest_cycle(search, start, max_family)
        if cyc is not None:
            groups.setdefault(_signature(cyc), []).append(cyc)
    if not groups:
        return None, {}
    sig = max(groups, key=lambda g: (len(groups[g]), -g[0], -g[1]))
    return groups[sig][0], {g: len(v) for g, v in groups.items()}


def _as_family(cycle, A, B, depth, k):
    seqs = list(cycle)
    if len(seqs) % 2 == 1:
        seqs = seqs + seqs
    return MatchingFamily((A, B), seqs, True, depth, k)


def find_matching_family(oracle, A, B, depth: int, max_family=48, budget=2_000_000,
                         max_starts=64, k=None):
    """Closed family of matching sequences for the corner {A, B} at depth n.

    Every start record (insertion of length k) is chained forward until it
    closes; the majority signature (family size, insertion total) is
    returned.  Records whose head and tail also admit another insertion are
    tried first, since those are pinned to the corner.  Returns None when nothing closes within the searched starts;
    raises SearchBudgetExceeded when the query budget runs out first.
    """
    if A == B:
        raise ValueError("labels must differ")
    if k is None:
        k = max_alternation_oracle(oracle, A, B, 4 * len(oracle.alphabet) + 24)
    if k < 1:
        return None
    cyc = None
    # records seen from both sides of the vertex first; when none of them
    # close up (pi/angle not an integer), every record takes part
    for two_sided in (True, False):
        search = _RecordSearch(oracle, A, B, depth, k, budget, two_sided)
        cyc, _ = _vote(search, max_starts, max_family)
        if cyc is not None:
            break
    if cyc is None:
        return None
    return _as_family(cyc, A, B, depth, k)


# -- the matching graph and its richest cycle ------------------------------------

def _matching_graph(search, max_nodes):
    """States (record, carry letter) reachable from the start records."""
    index, nodes, adj = {}, [], []
    queue = deque()
    for start in search.starts():
        node = (start, start.insertion[-1])
        if node not in index:
            index[node] = len(nodes)
            nodes.append(node)
            adj.append([])
            queue.append(node)
    while queue:
        u = queue.popleft()
        iu = index[u]
        for v in search.successors(*u):
            if v not in index:
                if len(nodes) >= max_nodes:
                    raise SearchBudgetExceeded("matching graph exceeds %d states" % max_nodes)
                index[v] = len(nodes)
                nodes.append(v)
                adj.append([])
                queue.append(v)
            adj[iu].append(index[v])
    return nodes, adj


def _components(adj):
    """Strongly connected components (iterative Tarjan)."""
    n = len(adj)
    index = [-1] * n
    low = [0] * n
    on = [False] * n
    stack, comps = [], []
    counter = 0
    for root in range(n):
        if index[root] >= 0:
            continue
        work = [(root, 0)]
        while work:
            v, i = work.pop()
            if i == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on[v] = True
            if i < len(adj[v]):
                work.append((v, i + 1))
                w = adj[v][i]
                if index[w] < 0:
                    work.append((w, 0))
                elif on[w]:
                    low[v] = min(low[v], index[w])
                continue
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(sorted(comp))
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return comps


def _max_mean_cycle(comp, adj, weight):
    """Karp's algorithm on one component: (mean, cycle as node list)."""
    pos = {v: i for i, v in enumerate(comp)}
    m = len(comp)
    NEG = float("-inf")
    D = [[NEG] * m for _ in range(m + 1)]
    pred = [[-1] * m for _ in range(m + 1)]
    D[0][0] = 0.0
    for step in range(1, m + 1):
        prev, cur, pr = D[step - 1], D[step], pred[step]
        for u in comp:
            du = prev[pos[u]]
            if du == NEG:
                continue
            for w in adj[u]:
                j = pos.get(w)
                if j is not None and du + weight[w] > cur[j]:
                    cur[j] = du + weight[w]
                    pr[j] = pos[u]
    best, arg = NEG, -1
    for j in range(m):
        if D[m][j] == NEG:
            continue
        val = min((D[m][j] - D[s][j]) / (m - s) for s in range(m) if D[s][j] != NEG)
        if val > best:
            best, arg = val, j
    if arg < 0:
        return None
    # walk the m-step optimal path back; its cycles include an optimal one
    walk = [arg]
    for step in range(m, 0, -1):
        walk.append(pred[step][walk[-1]])
    walk.reverse()
    seen = {}
    cands = []
    for i, j in enumerate(walk):
        if j in seen:
            cyc = walk[seen[j]:i]
            cands.append(cyc)
        seen[j] = i
    cyc = max(cands, key=lambda c: (sum(weight[comp[j]] for j in c) / len(c), -len(c)))
    # rotate so the cycle starts at a k-insertion record, with the successor order kept
    nodes = [comp[j] for j in cyc]
    return best, nodes


def richest_family(oracle, A, B, depth: int, max_nodes=20_000, budget=2_000_000, k=None):
    """Closed family with the largest average insertion length at depth n.

    Records with the shorter insertion are the ones that can sit far from
    the corner at finite depth, so families rich in them close up through
    drift; the family with the largest average is the least contaminated.
    """
    if k is None:
        k = max_alternation_oracle(oracle, A, B, 4 * len(oracle.alphabet) + 24)
    if k < 1:
        return None
    search = _RecordSearch(oracle, A, B, depth, k, budget)
    nodes, adj = _matching_graph(search, max_nodes)
    weight = [len(rec.insertion) for rec, _ in nodes]
    best = None
    for comp in _components(adj):
        if len(comp) == 1 and comp[0] not in adj[comp[0]]:
            continue
        got = _max_mean_cycle(comp, adj, weight)
        if got is None:
            continue
        mean, cyc = got
        if best is None or mean > best[0] + 1e-12 or (abs(mean - best[0]) <= 1e-12
                                                       and len(cyc) < len(best[1])):
            best = (mean, cyc)
    if best is None:
        return None
    cyc = [nodes[i][0] for i in best[1]]
    j = max(range(len(cyc)), key=lambda i: (len(cyc[i].insertion), -i))
    cyc = cyc[j:] + cyc[:j]
    return MatchingFamily((A, B), cyc, True, depth, k)


@dataclass(frozen=True)
class AngleEstimate:
    pair: tuple
    value: float
    kind: str  # "exact_rational" or "estimate"
    p: int
    q: int
    num_sequences: int
    total_insertion: int
    depth: int
    notes: str = ""

    def describe(self):
        if self.kind == "exact_rational":
            return "exact_rational %d/%d -> pi*%d/%d (certified to depth %d)" % (
                self.p, self.q, self.p, self.q, self.depth)
        return "estimate %d/%d*pi = %.12g (depth %d)" % (
            self.num_sequences, self.total_insertion, self.value, self.depth)


def estimate_angle(oracle, A, B, depth: int, stable=3, max_family=48, budget=2_000_000,
                   max_starts=64) -> AngleEstimate | None:
    """Angle at the corner {A, B} from matching families at depths 1..depth.

    When the voted family's size and insertion total agree over the last
    `stable` depths the angle is reported as an exact rational multiple of
    pi.  Otherwise the richest family at the final depth gives the estimate.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    k = max_alternation_oracle(oracle, A, B, 4 * len(oracle.alphabet) + 24)
    if k < 1:
        return None
    history = []
    for n in range(1, depth + 1):
        fam = find_matching_family(oracle, A, B, n, max_family, budget, max_starts, k)
        history.append(None if fam is None else (fam.size, fam.total_insertion))
    tail = history[-stable:]
    if len(tail) == stable and tail[-1] is not None and all(h == tail[-1] for h in tail):
        size, total = tail[-1]
        fr = Fraction(size, total)
    else:
        fr = None
    if fr is not None and verify_rational_angle(oracle, A, B, fr.numerator, fr.denominator,
                                                depth, budget):
        return AngleEstimate((A, B), math.pi * fr.numerator / fr.denominator, "exact_rational",
                             fr.numerator, fr.denominator, size, total, depth,
                             "stable over the last %d depths, pattern certified" % stable)
    fam = richest_family(oracle, A, B, depth, budget=budget, k=k)
    if fam is None:
        return None
    return family_estimate(fam, "voted families did not stabilize; richest family used")


def family_estimate(fam: MatchingFamily, notes="") -> AngleEstimate:
    """pi times the family size over its total insertion length."""
    size, total = fam.size, fam.total_insertion
    if total == 0:
        raise ValueError("family has no insertions")
    fr = Fraction(size, total)
    return AngleEstimate(tuple(fam.pair), math.pi * size / total, "estimate", fr.numerator,
                         fr.denominator, size, total, fam.depth, notes)


# -- rational certification -------------------------------------------------------

def _heads(search, ins):
    """All n-letter heads h (last letter outside {A, B}) with h + ins in the language."""
    A, B = search.A, search.B
    heads = [()]
    for _ in range(search.n):
        nxt = []
        for h in heads:
            for c in sorted(search.o.alphabet):
                if (h and c == h[0]) or (not h and c in (A, B)):
                    continue
                if search._q((c,) + h + ins):
                    nxt.append((c,) + h)
        heads = nxt
    return heads


def _pattern_chain(search, pattern):
    """Closed chain of records whose insertions follow `pattern` cyclically."""
    m = len(pattern)
    for head in _heads(search, pattern[0]):
        stack = [(0, head, [])]
        # whether (i, h) can close up depends only on i and h
        seen = set()
        while stack:
            i, h, recs = stack.pop()
            if (i, h) in seen:
                continue
            seen.add((i, h))
            for t in reversed(search.tails(h, pattern[i])):
                r = Record(h, pattern[i], t)
                nh = tuple(reversed(t))
                if i == m - 1:
                    if nh == head:
                        return recs + [r]
                    continue
                stack.append((i + 1, nh, recs + [r]))
    return None


def verify_rational_angle(oracle, A, B, p: int, q: int, depth: int,
                          budget=5_000_000) -> bool:
    """Certify, for every n <= depth, a closed family of exactly 2p records
    whose insertions are the square-code insertion strings of p/q (any
    cyclic rotation), written with A and B."""
    if gcd(p, q) != 1:
        raise ValueError("p and q must be coprime")
    pat = insertion_strings(p, q).strings
    sub = {"A": A, "B": B}
    pat = [tuple(sub[c] for c in s) for s in pat]
    rots = []
    for r in range(len(pat)):
        rot = tuple(pat[r:] + pat[:r])
        if rot not in rots:
            rots.append(rot)
    for n in range(1, depth + 1):
        search = _RecordSearch(oracle, A, B, n, max(len(s) for s in pat), budget)
        if not any(_pattern_chain(search, rot) is not None for rot in rots):
            return False
    return True


# -- triangles -------------------------------------------------------------------

class AngleSumError(ValueError):
    """Estimated triangle angles do not add up to pi."""


@dataclass(frozen=True)
class TriangleReconstruction:
    labels: tuple
    angles: tuple  # at the vertices between (L2, L0), (L0, L1), (L1, L2)
    estimates: tuple
    polygon: LabeledPolygon
    raw_sum: float


def _weight(est, oracle):
    if est.kind == "exact_rational":
        return 0.0
    A, B = est.pair
    k = max_alternation_oracle(oracle, A, B, 4 * len(oracle.alphabet) + 24)
    lo, hi = (math.pi, 2 * math.pi) if k <= 1 else (math.pi / k, math.pi / (k - 1))
    return hi - lo


def reconstruct_triangle(oracle, depth: int, tol=0.05, **kw) -> TriangleReconstruction:
    """Triangle, up to similarity, from the angles heard at its three corners.

    The three estimates must add to pi within `tol`; the residual is then
    shared among the inexact corners in proportion to the width of their
    alternation bracket, which is where the finite-depth error lives.
    """
    labels = tuple(oracle.alphabet)
    if len(labels) != 3:
        raise ValueError("a triangle oracle has exactly three labels, got %d" % len(labels))
    L0, L1, L2 = labels
    pairs = [(L2, L0), (L0, L1), (L1, L2)]
    ests = []
    for A, B in pairs:
        e = estimate_angle(oracle, A, B, depth, **kw)
        if e is None:
            raise SearchBudgetExceeded("no matching family at corner %s%s" % (A, B))
        ests.append(e)
    vals = [e.value for e in ests]
    total = sum(vals)
    if abs(total - math.pi) > tol:
        raise AngleSumError("angles sum to %.6f, off pi by %.3g" % (total, total - math.pi))
    w = [_weight(e, oracle) for e in ests]
    if sum(w) == 0.0:
        w = vals
    resid = math.pi - total
    angles = tuple(v + resid * wi / sum(w) for v, wi in zip(vals, w))
    tri = triangle_from_angles(angles[0], angles[1], labels=labels)
    return TriangleReconstruction(labels, angles, tuple(ests), normalize(tri), total)
