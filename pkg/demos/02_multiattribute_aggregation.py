"""Combining per-attribute worths into one overall utility.

The multiplicative rule needs one master constant K, solved from the
scaling constants k_j; the sign of sum(k) - 1 decides K's sign, and
sum(k) = 1 collapses the whole thing to a weighted average.
"""

from maud import AttributeSpec, Direction, aggregate, build_profile, solve_master_constant

attrs = [
    AttributeSpec("cost", "Cost", "$", 460.0, 60.0, Direction.DECREASING),
    AttributeSpec("weight", "Weight", "lbs", 140.0, 20.0, Direction.DECREASING),
    AttributeSpec("impact", "Impact", "0-10", 0.0, 10.0, Direction.INCREASING),
]

for k in [(0.56, 0.06, 0.23),   # sum 0.85 -> K > 0
          (0.70, 0.60, 0.40),   # sum 1.70 -> -1 < K < 0
          (0.50, 0.30, 0.20)]:  # sum 1.00 -> additive
    K, mode = solve_master_constant(k)
    print(f"k = {k}  sum = {sum(k):.2f}  ->  K = {K}  ({mode.value})")

print()
profile = build_profile(attrs, [2.0, 2.0, 2.0], (0.56, 0.06, 0.23))
print("profile with k = (0.56, 0.06, 0.23):")
print("  everything at its best   ->", aggregate(profile, [1, 1, 1]))
print("  everything at its worst  ->", aggregate(profile, [0, 0, 0]))

# the corner property: one attribute at best, the rest at worst, recovers k_j
for j, name in enumerate(a.id for a in attrs):
    corner = [0.0] * 3
    corner[j] = 1.0
    print(f"  only {name:<7} at best    ->", round(aggregate(profile, corner), 12))

print()
print("mixed worths (0.9, 0.5, 0.7) ->", round(aggregate(profile, [0.9, 0.5, 0.7]), 6))
