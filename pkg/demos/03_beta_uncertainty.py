"""Describing an uncertain estimate with a bounded beta distribution.

A designer supplies bounds plus a most-likely (or mean) value -- the
familiar three-point estimating workflow -- and the missing shape
parameter is solved from it.  Expected utility under the fitted
distribution then has both a closed form (integer shapes) and an adaptive
quadrature, which must agree.
"""

from maud import (
    AttributeSpec,
    BetaSpec,
    Direction,
    beta_density,
    beta_mean,
    beta_mode,
    expected_utility_quadrature,
    expected_utility_series,
    fit_beta,
    make_exponential_utility,
)

# "my cost is between 10 and 100, most likely 18, and I can pin p = 1.1"
spec = fit_beta(10.0, 100.0, p=1.1, mode=18.0)
print(f"fitted: p = {spec.shape_p}, q = {spec.shape_q:.6g}")
print(f"mean   = {beta_mean(spec):.6g}")
print(f"mode   = {beta_mode(spec):.6g}")

print("\ndensity across the support:")
for x in (10.0, 18.0, 30.0, 55.0, 85.0, 100.0):
    bar = "#" * int(120 * beta_density(spec, x))
    print(f"  f({x:>5.1f}) = {beta_density(spec, x):.5f}  {bar}")

# expected utility of an uncertain cost, closed form vs quadrature
cost = AttributeSpec("cost", "Cost", "$", 300.0, 50.0, Direction.DECREASING)
u = make_exponential_utility(cost, 2.0)
estimate = BetaSpec(80.0, 220.0, 2.0, 3.0)

quad = expected_utility_quadrature(u, estimate)
series = expected_utility_series(u, estimate)
print(f"\nuncertain cost on (80, 220), shapes (2, 3), risk-averse curve:")
print(f"  E[u] by adaptive quadrature : {quad:.12f}")
print(f"  E[u] by closed form         : {series:.12f}")
print(f"  |difference|                : {abs(quad - series):.2e}")

# uncertainty is costly to the risk averse: compare against the sure mean
from maud import evaluate_utility

sure = evaluate_utility(u, beta_mean(estimate))
print(f"\n  u(mean cost)                : {sure:.6f}")
print(f"  E[u(cost)]                  : {quad:.6f}   (lower: the spread hurts)")
