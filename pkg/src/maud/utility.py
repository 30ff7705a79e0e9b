"""Single-attribute value curves and multiplicative multiattribute utility.

An attribute's worth is a normalized exponential curve anchored at 0 on the
worst end of its range and 1 on the best end; the signed risk coefficient
``c`` bends it (positive = concave = risk averse, negative = convex, zero =
linear).  Attribute utilities combine through the Keeney-Raiffa
multiplicative form

    U = (1/K) * [ prod_j (K k_j u_j + 1) - 1 ]

whose master constant K is the unique nonzero root of

    1 + K = prod_j (1 + K k_j)

with K > 0 when sum(k) < 1 and -1 < K < 0 when sum(k) > 1.  When the
weights sum to one the form degenerates to the additive rule sum(k_j u_j).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .errors import (
    AlignmentError,
    InvalidAttributeError,
    InvalidWeightsError,
    OutOfRangeError,
    UtilityDomainError,
)
from .numerics import (
    LINEARITY_THRESHOLD,
    bisect_root,
    invert_normalized_exponential,
    normalized_exponential,
)

#: |sum(k) - 1| at or below this selects the additive limit.
ADDITIVE_TOLERANCE = 1e-9

#: Required residual of the master-constant equation at the returned root.
MASTER_RESIDUAL_TOLERANCE = 1e-10


class Direction(str, enum.Enum):
    INCREASING = "increasing_preferred"
    DECREASING = "decreasing_preferred"


class AggregationMode(str, enum.Enum):
    MULTIPLICATIVE = "multiplicative"
    ADDITIVE = "additive_limit"


@dataclass(frozen=True, slots=True)
class AttributeSpec:
    """One measurable performance dimension of a design.

    ``range_worst`` maps to utility 0 and ``range_best`` to utility 1;
    ``direction`` must agree with the orientation of the pair.
    """

    id: str
    label: str
    units: str
    range_worst: float
    range_best: float
    direction: Direction

    def __post_init__(self):
        if not self.id:
            raise InvalidAttributeError("attribute id must be nonempty", field="id")
        if not (math.isfinite(self.range_worst) and math.isfinite(self.range_best)):
            raise InvalidAttributeError(
                f"attribute {self.id!r}: range bounds must be finite",
                field="range_worst")
        if self.range_worst == self.range_best:
            raise InvalidAttributeError(
                f"attribute {self.id!r}: degenerate range "
                f"(worst == best == {self.range_worst!r})",
                field="range_worst")
        increasing = self.range_best > self.range_worst
        if increasing != (self.direction is Direction.INCREASING):
            raise InvalidAttributeError(
                f"attribute {self.id!r}: direction {self.direction.value} is "
                "inconsistent with the orientation of (range_worst, range_best)",
                field="direction")

    @property
    def span(self) -> float:
        """Signed span range_best - range_worst."""
        return self.range_best - self.range_worst

    @property
    def low(self) -> float:
        return min(self.range_worst, self.range_best)

    @property
    def high(self) -> float:
        return max(self.range_worst, self.range_best)

    def to_normalized(self, x: float) -> float:
        """Map x to z in [0, 1] with z=0 at the worst end, z=1 at the best."""
        return (x - self.range_worst) / self.span

    def from_normalized(self, z: float) -> float:
        return self.range_worst + z * self.span


@dataclass(frozen=True, slots=True)
class SingleAttributeUtility:
    """Normalized exponential value curve over one attribute's range.

    In the normalized coordinate z = (x - range_worst)/(range_best -
    range_worst) the curve is u(z) = (1 - e^(-cz)) / (1 - e^(-c)); ``a``
    and ``b`` are the equivalent coefficients of the raw-coordinate form
    u(x) = a - b e^(g x), recovered from the normalization (g = -c/span).
    """

    attribute: AttributeSpec
    risk_coefficient: float

    def __post_init__(self):
        if not math.isfinite(self.risk_coefficient):
            raise InvalidAttributeError(
                f"attribute {self.attribute.id!r}: risk coefficient must be finite",
                field="risk_coefficient")

    @property
    def is_linear(self) -> bool:
        return abs(self.risk_coefficient) < LINEARITY_THRESHOLD

    @property
    def a(self) -> float:
        """Constant coefficient of the raw-coordinate form a - b e^(g x)."""
        if self.is_linear:
            return -self.attribute.range_worst / self.attribute.span
        return 1.0 / -math.expm1(-self.risk_coefficient)

    @property
    def b(self) -> float:
        """Exponential coefficient of the raw-coordinate form."""
        c = self.risk_coefficient
        if self.is_linear:
            return -1.0 / self.attribute.span  # linear limit: a + x/span
        return math.exp(c * self.attribute.range_worst / self.attribute.span) \
            / -math.expm1(-c)

    @property
    def growth(self) -> float:
        """Exponent coefficient g of the raw-coordinate form."""
        return -self.risk_coefficient / self.attribute.span

    def value_normalized(self, z: float) -> float:
        u = normalized_exponential(z, self.risk_coefficient)
        return min(1.0, max(0.0, u))

    def __call__(self, x: float) -> float:
        return evaluate_utility(self, x)


def make_exponential_utility(attribute: AttributeSpec,
                             risk_coefficient: float) -> SingleAttributeUtility:
    """Construct the normalized curve; |c| under the linearity threshold
    collapses to the exact linear form."""
    c = risk_coefficient
    if abs(c) < LINEARITY_THRESHOLD:
        c = 0.0
    return SingleAttributeUtility(attribute=attribute, risk_coefficient=c)


def evaluate_utility(u: SingleAttributeUtility, x: float) -> float:
    """Value of the curve at x; x must lie inside the closed attribute range."""
    spec = u.attribute
    if not (spec.low <= x <= spec.high):
        raise OutOfRangeError(
            f"attribute {spec.id!r}: x={x!r} outside range "
            f"[{spec.low!r}, {spec.high!r}] (no extrapolation)",
            field=spec.id)
    return u.value_normalized(spec.to_normalized(x))


def certainty_equivalent_normalized(u: SingleAttributeUtility) -> float:
    """z with u(z) = 0.5: the 50/50 best/worst lottery's certainty equivalent."""
    return invert_normalized_exponential(0.5, u.risk_coefficient)


def _log_residual(k: tuple[float, ...], K: float) -> float:
    """h(K) = sum(log1p(K k_j)) - log1p(K); same root as the product form,
    stable for large K."""
    return math.fsum(math.log1p(K * kj) for kj in k) - math.log1p(K)


def _d_log_residual(k: tuple[float, ...], K: float) -> float:
    return math.fsum(kj / (1.0 + K * kj) for kj in k) - 1.0 / (1.0 + K)


def master_equation_residual(k, K: float) -> float:
    """prod(1 + K k_j) - (1 + K), evaluated stably."""
    return (1.0 + K) * math.expm1(_log_residual(tuple(k), K))


def _validate_weights(k) -> tuple[float, ...]:
    k = tuple(float(v) for v in k)
    if len(k) < 2:
        raise InvalidWeightsError("need at least two scaling constants")
    for j, kj in enumerate(k):
        if not (0.0 < kj < 1.0) or not math.isfinite(kj):
            raise InvalidWeightsError(
                f"scaling constant k[{j}]={kj!r} outside (0, 1)",
                field=f"k[{j}]")
    return k


def solve_master_constant(k) -> tuple[float | None, AggregationMode]:
    """Solve 1 + K = prod(1 + K k_j) for the unique nonzero admissible root.

    Returns ``(None, ADDITIVE)`` when sum(k) is within ADDITIVE_TOLERANCE
    of one (only the trivial root K = 0 exists there).  Otherwise the root
    is positive for sum(k) < 1 and in (-1, 0) for sum(k) > 1; it is located
    by bisection on the log form and polished with as many as three Newton
    steps, keeping the iterate with the smallest residual.
    """
    k = _validate_weights(k)
    s = math.fsum(k)
    if abs(s - 1.0) <= ADDITIVE_TOLERANCE:
        return None, AggregationMode.ADDITIVE

    h = lambda K: _log_residual(k, K)
    if s < 1.0:
        lo = 1e-12
        hi = 1.0
        while h(hi) <= 0.0:
            hi *= 2.0
            if hi > 1e15:
                raise InvalidWeightsError(
                    "master constant exceeds bracketing bound; weights too small")
    else:
        lo = -1.0 + 1e-12
        hi = -1e-12
    K = bisect_root(h, lo, hi, width=1e-12)

    best_K, best_res = K, abs(master_equation_residual(k, K))
    for _ in range(3):
        d = _d_log_residual(k, K)
        if d == 0.0:
            break
        step = _log_residual(k, K) / d
        K_next = K - step
        if not (lo <= K_next <= hi) or not math.isfinite(K_next):
            break
        res = abs(master_equation_residual(k, K_next))
        if res < best_res:
            best_K, best_res = K_next, res
        K = K_next
    return best_K, AggregationMode.MULTIPLICATIVE


@dataclass(frozen=True, slots=True)
class UserProfile:
    """A user's assessed preference structure over J attributes.

    ``utilities`` and ``scaling_constants`` are index-aligned with
    ``attributes``; ``master_constant`` is None in the additive limit.
    """

    attributes: tuple[AttributeSpec, ...]
    utilities: tuple[SingleAttributeUtility, ...]
    scaling_constants: tuple[float, ...]
    master_constant: float | None
    aggregation_mode: AggregationMode
    fit_residuals: tuple[tuple[float, ...], ...] = field(default=())

    def __post_init__(self):
        J = len(self.attributes)
        if not (len(self.utilities) == len(self.scaling_constants) == J):
            raise AlignmentError(
                "attributes, utilities and scaling constants must align")
        ids = [a.id for a in self.attributes]
        if len(set(ids)) != J:
            raise InvalidAttributeError("duplicate attribute ids in profile")
        for u, a in zip(self.utilities, self.attributes):
            if u.attribute != a:
                raise AlignmentError(
                    f"utility for {u.attribute.id!r} out of order with "
                    f"attribute {a.id!r}")
        k = _validate_weights(self.scaling_constants)
        if self.aggregation_mode is AggregationMode.ADDITIVE:
            if abs(math.fsum(k) - 1.0) > ADDITIVE_TOLERANCE:
                raise InvalidWeightsError(
                    "additive profile requires scaling constants summing to 1")
        else:
            K = self.master_constant
            if K is None or K == 0.0 or K <= -1.0:
                raise InvalidWeightsError(
                    "multiplicative profile requires K > -1, K != 0")
            if abs(master_equation_residual(k, K)) > MASTER_RESIDUAL_TOLERANCE:
                raise InvalidWeightsError(
                    "master constant does not satisfy its defining equation")

    @property
    def attribute_ids(self) -> tuple[str, ...]:
        return tuple(a.id for a in self.attributes)

    def utility_for(self, attribute_id: str) -> SingleAttributeUtility:
        for u in self.utilities:
            if u.attribute.id == attribute_id:
                return u
        raise AlignmentError(f"profile has no attribute {attribute_id!r}")


def build_profile(attributes, risk_coefficients, scaling_constants,
                  fit_residuals=()) -> UserProfile:
    """Assemble and validate a profile from raw parameters."""
    attributes = tuple(attributes)
    utilities = tuple(
        make_exponential_utility(a, c)
        for a, c in zip(attributes, risk_coefficients, strict=True))
    k = tuple(float(v) for v in scaling_constants)
    K, mode = solve_master_constant(k)
    return UserProfile(
        attributes=attributes,
        utilities=utilities,
        scaling_constants=k,
        master_constant=K,
        aggregation_mode=mode,
        fit_residuals=tuple(tuple(r) for r in fit_residuals),
    )


def _check_u_values(profile: UserProfile, u_values) -> tuple[float, ...]:
    u = tuple(float(v) for v in u_values)
    if len(u) != len(profile.attributes):
        raise AlignmentError(
            f"expected {len(profile.attributes)} utility values, got {len(u)}")
    for j, uj in enumerate(u):
        if not (0.0 <= uj <= 1.0):
            raise UtilityDomainError(
                f"u[{j}]={uj!r} outside [0, 1]; refusing to clamp",
                field=f"u[{j}]")
    return u


def aggregate(profile: UserProfile, u_values) -> float:
    """Overall utility of a vector of single-attribute utilities.

    Multiplicative mode evaluates the product form through log1p/expm1 so
    the additive limit K -> 0 is approached without cancellation; additive
    mode is the plain weighted sum.
    """
    u = _check_u_values(profile, u_values)
    k = profile.scaling_constants
    if profile.aggregation_mode is AggregationMode.ADDITIVE:
        return math.fsum(kj * uj for kj, uj in zip(k, u))
    K = profile.master_constant
    log_prod = math.fsum(math.log1p(K * kj * uj) for kj, uj in zip(k, u))
    return math.expm1(log_prod) / K + 0.0  # normalize -0.0


def aggregate_expected(profile: UserProfile, expected_u_values) -> float:
    """Expected overall utility from per-attribute expected utilities.

    Under independent attribute levels the expectation of the product form
    factorizes, so expectations substitute directly for the deterministic
    values; the arithmetic is identical to :func:`aggregate`.
    """
    return aggregate(profile, expected_u_values)
