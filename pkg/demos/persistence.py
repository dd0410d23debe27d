# Finite data cannot pin down a table.
#
# Any finite set of words survives every small enough wiggle of the vertices,
# so two different tables share all of them.  Here the radius is computed,
# sampled, and two visibly different squares are exhibited.

import os

from bouncespec.geometry import unit_square
from bouncespec.language import enumerate_language
from bouncespec.perturbation import demonstrate_impossibility
from bouncespec.svg import Figure

S = unit_square()
words = sorted(enumerate_language(S, 4).words)
print(len(words), "words of length <= 4")

rep = demonstrate_impossibility(S, words, count=200, seed=1)
print(rep.describe())

# past the certified radius words start to disappear
bad = demonstrate_impossibility(S, words, count=100, seed=1, scale=100)
print("at 100x the radius: persistence %.0f%%" % (100 * bad.persistence))

out = os.path.join(os.path.dirname(__file__), "out")
os.makedirs(out, exist_ok=True)
i, j, _ = rep.distinct_pair
fig = Figure()
fig.polygon(rep.samples[i].vertices, stroke="crimson", width=1.5)
fig.polygon(rep.samples[j].vertices, stroke="royalblue", width=1.5)
fig.polygon(S.vertices, stroke="black", width=1.0, opacity=0.6)
fig.save(os.path.join(out, "twins.svg"))
print("wrote", os.path.join(out, "twins.svg"))
