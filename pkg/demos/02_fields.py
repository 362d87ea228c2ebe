"""
Comparing fields
================

Two citation-disjoint fields, where every paper of the first field gets
twice the citations of its counterpart in the second field.
"""

from citeinfluence import InfluenceParams, check_field_comparability, field_components, fixture, registry

d = fixture("two-field-doubled")
print("components:", [sorted(c) for c in field_components(d).components])

reg = registry(InfluenceParams(0.5))

# The Euclidean index rewards the field that simply cites more.
# The comparable direct index and the discounted index give each field
# an average of exactly one.
for name in ("euclid", "h", "comparable-direct", "influence"):
    v = check_field_comparability(reg[name], d)
    means = v.detail["component_means"]
    print(f"{name:>18}: field means {means[0]:.6f} / {means[1]:.6f} -> {v.outcome}")
