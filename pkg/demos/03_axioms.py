"""
Axioms as executable checks
===========================

Randomized metamorphic tests of every registered index, witnesses of
violations, and the two-database impossibility argument.
"""

from citeinfluence import InfluenceParams, demonstrate_impossibility, find_violation, registry
from citeinfluence.axioms import TRANSFORM_AXIOMS, run_trial
from citeinfluence.counting import independence_indices

reg = registry(InfluenceParams(0.5))

# Each of the five independence indices breaks exactly one axiom.
for ix in independence_indices():
    verdicts = {ax: find_violation(ix, ax, seed=0, budget=100).outcome for ax in TRANSFORM_AXIOMS}
    broken = [ax for ax, out in verdicts.items() if out == "violated"]
    print(f"{ix.name:>22} breaks {broken} (designated: {ix.violates})")

# The discounted index: which transformations move somebody's score?
ix = reg["influence"]
for ax in TRANSFORM_AXIOMS:
    v = find_violation(ix, ax, seed=0, budget=100)
    line = f"{ax:>22}: {v.outcome}"
    if v.violated:
        w = v.witness
        line += f" (trial {v.trial}, author {w.author}: {w.before:.6f} -> {w.after:.6f})"
    print(line)

# Any witness replays from its seed and trial number.
v = find_violation(ix, "splitting", seed=0)
print("replayed:", run_trial(ix, "splitting", v.seed, v.trial).witness.after == v.witness.after)

# No index keeps Null Author, Field Comparability and Author Anonymity at once.
for name, ix in reg.items():
    print(f"{name:>22} fails {demonstrate_impossibility(ix).failed}")
