"""Bounded-length bounce languages, alternation runs and the convexity test."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .geometry import EPS_GEOM, LabeledPolygon
from .unfolding import (WIDTH_FLOOR, CorridorState, closed_loop, corridor,
                        corridor_from_state, develop, has_repeat, parse_word, state_for)


@dataclass(frozen=True)
class LanguageTable:
    alphabet: tuple
    max_len: int
    words: frozenset
    marginal: frozenset = frozenset()

    def __contains__(self, word):
        return tuple(word) in self.words

    def __len__(self):
        return len(self.words)

    def of_length(self, k):
        return sorted(w for w in self.words if len(w) == k)

    def sorted_words(self):
        return sorted(self.words, key=lambda w: (len(w), w))

    def extensions(self, word):
        w = tuple(word)
        return {c for c in self.alphabet if w + (c,) in self.words}

    def prefixes(self, word):
        w = tuple(word)
        return {c for c in self.alphabet if (c,) + w in self.words}

    def is_factor_closed(self):
        return all(w[1:] in self.words and w[:-1] in self.words
                   for w in self.words if len(w) > 1)

    def dumps(self):
        """One word per line, letters comma separated, lexicographic order."""
        return "".join(",".join(w) + "\n" for w in sorted(self.words))

    @classmethod
    def loads(cls, text, alphabet=None):
        words = set()
        for line in text.splitlines():
            line = line.strip()
            if line and not line.startswith("#"):
                words.add(tuple(s.strip() for s in line.split(",")))
        if alphabet is None:
            alphabet = sorted({c for w in words for c in w})
        L = max((len(w) for w in words), default=0)
        return cls(tuple(alphabet), L, frozenset(words))


def _accepted(st: CorridorState, verify):
    """(member, marginal) for a nonempty corridor state."""
    width = st.width()
    if verify and len(st.word) > 1 and not closed_loop(st.poly, st.word, *st.witness()):
        # the centroid witness failed to replay; retry from other region points
        if not corridor_from_state(st, verify=True).feasible:
            return False, True
    return True, width < WIDTH_FLOOR * st.poly.diameter()


def enumerate_language(poly: LabeledPolygon, max_len: int, eps_geom=EPS_GEOM,
                       verify=True) -> LanguageTable:
    """All realizable words of length <= max_len, by breadth-first extension.

    A word is only extended when its own corridor is nonempty; every accepted
    word's witness is traced back through the flow when verify is set.
    """
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    labels = poly.labels
    words = set()
    marginal = set()
    frontier = []
    for c in labels:
        st = CorridorState.start(poly, c, eps_geom)
        words.add(st.word)
        frontier.append(st)
    for _ in range(max_len - 1):
        nxt = []
        for st in frontier:
            for c in labels:
                if c == st.word[-1]:
                    continue
                # factor closure: the suffix must already be a member
                if st.word[1:] + (c,) not in words:
                    continue
                child = st.extend(c)
                if child is None:
                    continue
                ok, thin = _accepted(child, verify)
                if not ok:
                    continue
                words.add(child.word)
                if thin:
                    marginal.add(child.word)
                nxt.append(child)
        frontier = nxt
    return LanguageTable(tuple(labels), max_len, frozenset(words), frozenset(marginal))


@lru_cache(maxsize=200_000)
def _contains_cached(poly, word):
    return corridor(develop(poly, word, allow_repeats=True)).feasible


def contains(poly: LabeledPolygon, word) -> bool:
    """Membership of a single word (memoized)."""
    w = parse_word(poly, word)
    if not w or has_repeat(w):
        return False
    return _contains_cached(poly, w)


def _alternating(A, B, k):
    return tuple(A if i % 2 == 0 else B for i in range(k))


def max_alternation(source, A, B, search_len: int) -> int:
    """Longest factor ABAB... or BABA... present up to search_len letters."""
    if A == B:
        raise ValueError("labels must differ")
    if isinstance(source, LanguageTable):
        best = 0
        for w in source.words:
            run = 0
            for i, c in enumerate(w):
                if c in (A, B) and (run == 0 or w[i - 1] != c):
                    run += 1
                elif c in (A, B):
                    run = 1
                else:
                    run = 0
                best = max(best, run)
        return min(best, search_len)
    best = 0
    for k in range(1, search_len + 1):
        if contains(source, _alternating(A, B, k)) or contains(source, _alternating(B, A, k)):
            best = k
        else:
            break
    return best


def coarse_angle_bound(k: int):
    """Interval holding the A/B angle when the longest alternation has k letters."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if k == 1:
        return (math.pi, 2.0 * math.pi)
    return (math.pi / k, math.pi / (k - 1))


def convexity_test(table: LanguageTable) -> bool:
    if table.max_len < 2:
        raise ValueError("need words of length 2")
    return all((x, y) in table.words for x in table.alphabet for y in table.alphabet if x != y)


class PolygonSpectrum:
    """Membership queries against a polygon's language with memoized corridors.

    Queries beyond the enumerated length fall back to direct corridor checks.
    """

    def __init__(self, poly: LabeledPolygon, max_len: int = 0, eps_geom=EPS_GEOM):
        self._poly = poly
        self.alphabet = tuple(poly.labels)
        self._eps = eps_geom
        self._table = enumerate_language(poly, max_len, eps_geom) if max_len else None
        self._cache = {}

    def contains(self, word) -> bool:
        w = tuple(word)
        if not w or has_repeat(w):
            return False
        if self._table is not None and len(w) <= self._table.max_len:
            return w in self._table.words
        hit = self._cache.get(w)
        if hit is None:
            st = state_for(self._poly, w, self._eps)
            hit = st is not None and (len(w) == 1 or closed_loop(self._poly, w, *st.witness())
                                      or corridor(develop(self._poly, w)).feasible)
            self._cache[w] = hit
        return hit

    def list_extensions(self, word):
        w = tuple(word)
        return {c for c in self.alphabet if (not w or c != w[-1]) and self.contains(w + (c,))}

    def list_prefixes(self, word):
        w = tuple(word)
        return {c for c in self.alphabet if (not w or c != w[0]) and self.contains((c,) + w)}
