"""Square-table codes of rational slope and the insertion strings built from them.

Letters: 0 for a crossing of a horizontal grid line, 1 for a vertical one.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd


def _check(p, q):
    if not (isinstance(p, int) and isinstance(q, int)):
        raise TypeError("p and q must be integers")
    if p < 1 or q < 1:
        raise ValueError("p and q must be positive")
    if gcd(p, q) != 1:
        raise ValueError("p and q must be coprime, got %d/%d" % (p, q))


def _ceil_div(a, b):
    return -((-a) // b)


@dataclass(frozen=True)
class SquareCode:
    p: int
    q: int
    word: str

    def __post_init__(self):
        assert self.word.startswith("0")
        assert self.word.count("0") == 2 * self.p
        assert self.word.count("1") == 2 * self.q

    def runs(self):
        """Lengths of the blocks of 1s following each 0."""
        return [len(s) for s in self.word.split("0")[1:]]


@dataclass(frozen=True)
class InsertionPattern:
    p: int
    q: int
    strings: tuple

    @property
    def lengths(self):
        return tuple(len(s) for s in self.strings)

    @property
    def total(self):
        return sum(self.lengths)

    def display(self):
        return tuple(s if s else "-" for s in self.strings)


def cutting_sequence(p: int, q: int) -> str:
    """One period of the grid coding of a line of slope p/q.

    The line starts just right of a lattice point; between consecutive
    horizontal crossings it meets floor((j+1)q/p) - floor(jq/p) vertical lines.
    """
    _check(p, q)
    out = []
    for j in range(p):
        out.append("0")
        out.append("1" * ((j + 1) * q // p - j * q // p))
    return "".join(out)


def _upper_runs(p, q):
    # vertical crossings between horizontal ones for the line started just
    # above the lattice point instead of just right of it
    return [_ceil_div((j + 1) * q, p) - _ceil_div(j * q, p) for j in range(p)]


def square_bounce_word(p: int, q: int) -> SquareCode:
    """Bounce code of one period of a slope p/q trajectory on the unit square.

    The period is two periods of the cutting sequence.  It is rotated to the
    phase of a trajectory leaving a corner, whose first run of 1s is a
    shortest one.
    """
    _check(p, q)
    runs = _upper_runs(p, q)
    k = runs.index(min(runs))
    runs = runs[k:] + runs[:k]
    half = "".join("0" + "1" * r for r in runs)
    return SquareCode(p, q, half + half)


def insertion_strings(p: int, q: int) -> InsertionPattern:
    """Alternating A/B strings whose lengths are the runs of 1s of the square code."""
    code = square_bounce_word(p, q)
    strings = []
    nxt = "B"
    for r in code.runs():
        if r == 0:
            strings.append("")
            continue
        s = "".join(nxt if i % 2 == 0 else _other(nxt) for i in range(r))
        strings.append(s)
        nxt = _other(s[-1])
    return InsertionPattern(p, q, tuple(strings))


def _other(c):
    return "A" if c == "B" else "B"


def is_balanced(word: str) -> bool:
    """Runs of 1s between 0s (cyclically) take at most two consecutive values."""
    if "0" not in word:
        return False
    k = word.index("0")
    rot = word[k:] + word[:k]
    runs = [len(s) for s in rot.split("0")[1:]]
    return max(runs) - min(runs) <= 1
