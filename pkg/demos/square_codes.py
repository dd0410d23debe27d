# Square-table codes and where they come from.
#
# A line of slope p/q on the unit square, read as a sequence of wall hits,
# is the grid cutting sequence of that slope folded back into one cell.

import math

from bouncespec.flow import trace
from bouncespec.geometry import unit_square
from bouncespec.sturmian import cutting_sequence, insertion_strings, square_bounce_word

S = unit_square()
CODE = {"A": "0", "C": "0", "B": "1", "D": "1"}

for p, q in [(3, 2), (5, 12), (1, 1)]:
    print("slope %d/%d" % (p, q))
    print("  cutting sequence ", cutting_sequence(p, q))
    print("  square code      ", square_bounce_word(p, q).word)

    # launch just right of the corner at the origin; A (the floor) is the first 0
    r = trace(S, (1e-7, 0.0), math.atan2(p, q), 2 * (p + q))
    traced = "0" + "".join(CODE[c] for c in r.word[:-1])
    print("  traced           ", traced)
    # the trace may start at a different point of the same closed orbit
    code = square_bounce_word(p, q).word
    print("  same cyclic word  ", len(traced) == len(code) and traced in code + code)

# the insertions are the runs of 1s between consecutive 0s, spelled with A and B
for p, q in [(3, 2), (5, 12)]:
    pat = insertion_strings(p, q)
    print("%d/%d insertions" % (p, q), " ".join(pat.display()), " total", pat.total)
