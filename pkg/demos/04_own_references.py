"""
Own references can move one's own score
=======================================

Adding a reference to one of a's papers changes the score of a under the
discounted index, because the new reference redirects indirect influence
that flows through a's paper.
"""

from citeinfluence import Database, InfluenceParams, influence_index
from citeinfluence.model import add_reference

# a and b cite each other; c cites b.  Edges are (cited, citing).
d = Database({"a": ["p"], "b": ["q"], "c": ["r"]}, [("q", "p"), ("p", "q"), ("q", "r")])
params = InfluenceParams(0.5)
before = influence_index(d, params).per_author

# Now a's paper p also cites c's paper r.
d2 = add_reference(d, cited="r", citing="p")
after = influence_index(d2, params).per_author

for a in d.authors:
    print(f"{a}: {before[a]:.6f} -> {after[a]:.6f}")
print("exact values for a: 4/3 =", 4 / 3, " 15/13 =", 15 / 13)
