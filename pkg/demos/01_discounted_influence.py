"""
Discounted influence on small databases
=======================================

Paper influence, author influence and the totals identity, starting from
two authors who cite each other.
"""

import numpy as np

from citeinfluence import (
    InfluenceParams,
    bilateral_author_influence,
    exerted_totals,
    fixture,
    generate_random_db,
    influence_index,
    pi_delta_pair,
)

# Two authors, one paper each, citing each other.  Influence of p on q
# alternates between odd path lengths, which gives 1 / (1 + delta).
mutual = fixture("mutual-pair")
for delta in (0.1, 0.5, 0.9):
    params = InfluenceParams(delta)
    print(f"delta={delta}: PI(p,q)={pi_delta_pair(mutual, params, 'p', 'q'):.10f}"
          f"  expected {1 / (1 + delta):.10f}"
          f"  AI(a,a)={bilateral_author_influence(mutual, params, 'a', 'a'):.6f}")

# Each author ends up with exactly one unit of influence.
print(influence_index(mutual).per_author)

# In a chain r -> q -> p the oldest paper cites nothing, so part of r's
# debt leaks out of the system: sigma(r) = 1 - delta^2.
chain = fixture("chain-3")
print({p: round(v, 6) for p, v in exerted_totals(chain, InfluenceParams(0.5)).items()})

# On any database in the domain the scores add up to the number of authors.
d = generate_random_db(200, papers_per_author=(1, 5), refs_per_paper=(0, 4), seed=1)
res = influence_index(d, InfluenceParams(0.5))
scores = np.array(list(res.per_author.values()))
print(f"{d.n_authors} authors, sum of scores {scores.sum():.12f}")
print(f"top five: {sorted(res.per_author.items(), key=lambda kv: -kv[1])[:5]}")
