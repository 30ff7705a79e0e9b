"""Single-attribute value curves and what the risk coefficient does.

A curve maps an attribute level to a 0..1 worth, anchored at 0 on the
worst end of the assessed range and 1 on the best end.  The signed
coefficient c bends it: c > 0 bows the curve up (risk averse -- early
gains count more), c < 0 bows it down (risk seeking), c = 0 is linear.
"""

import numpy as np

from maud import AttributeSpec, Direction, evaluate_utility, make_exponential_utility
from maud.assessment import certainty_equivalent_for

cost = AttributeSpec(
    id="cost", label="Manufacturing cost", units="$ per unit",
    range_worst=460.0, range_best=60.0,
    direction=Direction.DECREASING)

print("Three designers looking at the same cost range ($460 worst .. $60 best)\n")

for c, label in [(3.2, "strongly risk averse"),
                 (0.0, "risk neutral"),
                 (-2.0, "risk seeking")]:
    u = make_exponential_utility(cost, c)
    row = "  ".join(f"u(${x:>3.0f})={evaluate_utility(u, x):.3f}"
                    for x in np.linspace(460, 60, 6))
    print(f"c = {c:+.1f} ({label})")
    print("   " + row)

    # the certainty equivalent of a 50/50 lottery between best and worst:
    # where this designer is indifferent between the sure thing and the gamble
    ce = certainty_equivalent_for(cost, c)
    print(f"   indifferent to a 50/50 $60-vs-$460 lottery at a sure ${ce:.2f}\n")

print("The risk-averse designer accepts a much worse sure cost to escape the")
print("gamble; the risk seeker has to be paid (a better sure cost) to give it up.")
