"""Four-parameter beta uncertainty and expected single-attribute utility.

Performance estimates are either point values or beta random variables on
a bounded interval (x_L, x_U) with shape parameters p, q >= 1:

    f(x) = G(p+q) / (r G(p) G(q)) * ((x-x_L)/r)^(p-1) * ((x_U-x)/r)^(q-1)

with r = x_U - x_L, zero outside the interval; p = q = 1 is the uniform
distribution, and p, q > 1 gives a unimodal density.  Mean and mode are

    mean = x_L + r * p / (p + q)
    mode = x_L + r * (p - 1) / (p + q - 2)

which also let one shape be solved from the other plus an elicited mean or
most-likely value (the PERT-style three-point workflow).

Expected utility of an exponential value curve under a beta estimate has a
finite closed form when p and q are integers, obtained by binomial
expansion of (1-y)^(q-1) and repeated integration by parts of
int_0^1 y^s e^(lambda y) dy.  Adaptive quadrature of the defining integral
is the authoritative evaluator; the closed form is a fast path validated
against it (the two must agree to 1e-7 across the supported domain).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    EstimateRangeError,
    InfeasibleFitError,
    InvalidBetaError,
    UndefinedModeError,
    UnsupportedShapeError,
)
from .numerics import adaptive_gauss_legendre, normalized_exponential_np
from .utility import SingleAttributeUtility, evaluate_utility

#: Largest integer shape the closed-form fast path accepts.
SERIES_MAX_SHAPE = 10

#: Absolute tolerance for the authoritative quadrature path.
QUADRATURE_TOLERANCE = 1e-10

#: |risk coefficient| below which the fast path defers to quadrature; the
#: closed form loses roughly eps/|c| absolute accuracy as c -> 0.
SERIES_MIN_RISK = 1e-6


@dataclass(frozen=True, slots=True)
class BetaSpec:
    """Beta distribution on (lower, upper) with shapes >= 1."""

    lower: float
    upper: float
    shape_p: float
    shape_q: float

    def __post_init__(self):
        if not (math.isfinite(self.lower) and math.isfinite(self.upper)):
            raise InvalidBetaError("support bounds must be finite", field="lower")
        if not self.lower < self.upper:
            raise InvalidBetaError(
                f"require lower < upper, got ({self.lower!r}, {self.upper!r})",
                field="lower")
        for name, s in (("shape_p", self.shape_p), ("shape_q", self.shape_q)):
            if not math.isfinite(s) or s < 1.0:
                raise InvalidBetaError(
                    f"{name}={s!r}: shapes below 1 (U-shaped densities) are "
                    "not supported", field=name)

    @property
    def range(self) -> float:
        return self.upper - self.lower

    @property
    def is_uniform(self) -> bool:
        return self.shape_p == 1.0 and self.shape_q == 1.0

    @property
    def has_integer_shapes(self) -> bool:
        return float(self.shape_p).is_integer() and float(self.shape_q).is_integer()

    def to_document(self) -> dict:
        return {"lower": self.lower, "upper": self.upper,
                "p": self.shape_p, "q": self.shape_q}

    @classmethod
    def from_document(cls, doc: dict) -> "BetaSpec":
        try:
            return cls(lower=float(doc["lower"]), upper=float(doc["upper"]),
                       shape_p=float(doc["p"]), shape_q=float(doc["q"]))
        except KeyError as exc:
            raise InvalidBetaError(f"beta document missing key {exc}") from exc


def _log_norm(p: float, q: float) -> float:
    return math.lgamma(p + q) - math.lgamma(p) - math.lgamma(q)


def _norm_constant(p: float, q: float) -> float:
    """G(p+q)/(G(p)G(q)); exact factorial arithmetic for integer shapes."""
    if float(p).is_integer() and float(q).is_integer():
        ip, iq = int(p), int(q)
        return float(math.factorial(ip + iq - 1)
                     // (math.factorial(ip - 1) * math.factorial(iq - 1)))
    return math.exp(_log_norm(p, q))


def beta_density(spec: BetaSpec, x: float) -> float:
    """Density at x; zero outside the open support ("otherwise" branch)."""
    if x < spec.lower or x > spec.upper:
        return 0.0
    t = (x - spec.lower) / spec.range
    # 0^0 == 1 covers the uniform edges exactly
    return (_norm_constant(spec.shape_p, spec.shape_q) / spec.range
            * t ** (spec.shape_p - 1.0) * (1.0 - t) ** (spec.shape_q - 1.0))


def beta_mean(spec: BetaSpec) -> float:
    return spec.lower + spec.range * spec.shape_p / (spec.shape_p + spec.shape_q)


def beta_mode(spec: BetaSpec) -> float:
    """Most-likely value; undefined for the uniform case p = q = 1."""
    if spec.shape_p == 1.0 and spec.shape_q == 1.0:
        raise UndefinedModeError("uniform distribution has no unique mode")
    return spec.lower + spec.range * (spec.shape_p - 1.0) / (spec.shape_p + spec.shape_q - 2.0)


def density_curve(spec: BetaSpec, points: int = 101) -> list[tuple[float, float]]:
    """Evenly spaced (x, density) samples across the support, for plotting."""
    if points < 2:
        raise InvalidBetaError("need at least two curve points", field="points")
    xs = np.linspace(spec.lower, spec.upper, points)
    return [(float(x), beta_density(spec, float(x))) for x in xs]


def fit_beta(lower: float, upper: float, *, p: float | None = None,
             q: float | None = None, mode: float | None = None,
             mean: float | None = None) -> BetaSpec:
    """Solve the unknown shape from one known shape plus a mean or mode.

    With t = (target - lower)/(upper - lower):

      mean target:  q = p (1-t)/t        (p known; symmetric when q known)
      mode target:  q = (p-1)/t - p + 2  (p known; symmetric when q known)

    Mode targets need the known shape > 1 (a boundary mode cannot sit
    strictly inside the interval).  If the implied shape falls below 1 the
    fit is infeasible and the error reports the target interval that would
    have worked, so an elicitation screen can re-prompt.
    """
    if not (math.isfinite(lower) and math.isfinite(upper)) or not lower < upper:
        raise InvalidBetaError(
            f"require finite lower < upper, got ({lower!r}, {upper!r})",
            field="lower")
    if (p is None) == (q is None):
        raise InvalidBetaError("exactly one of p, q must be given", field="p")
    if (mode is None) == (mean is None):
        raise InvalidBetaError("exactly one of mode, mean must be given",
                               field="mode")
    known = p if p is not None else q
    known_name = "p" if p is not None else "q"
    if not math.isfinite(known) or known < 1.0:
        raise InvalidBetaError(f"known shape {known_name}={known!r} must be >= 1",
                               field=known_name)
    target = mode if mode is not None else mean
    target_name = "mode" if mode is not None else "mean"
    if not lower < target < upper:
        raise InvalidBetaError(
            f"{target_name}={target!r} must lie strictly inside "
            f"({lower!r}, {upper!r})", field=target_name)

    r = upper - lower
    t = (target - lower) / r

    if target_name == "mean":
        if p is not None:
            other = p * (1.0 - t) / t
            if other < 1.0:
                raise InfeasibleFitError(
                    f"mean={mean!r} with p={p!r} implies q={other!r} < 1",
                    feasible_low=lower, feasible_high=lower + r * p / (p + 1.0),
                    field="mean")
            return BetaSpec(lower, upper, shape_p=p, shape_q=other)
        other = q * t / (1.0 - t)
        if other < 1.0:
            raise InfeasibleFitError(
                f"mean={mean!r} with q={q!r} implies p={other!r} < 1",
                feasible_low=lower + r / (q + 1.0), feasible_high=upper,
                field="mean")
        return BetaSpec(lower, upper, shape_p=other, shape_q=q)

    # mode target
    if known <= 1.0:
        raise InfeasibleFitError(
            f"mode fitting requires the known shape > 1, got {known_name}={known!r}",
            field=known_name)
    if p is not None:
        other = (p - 1.0) / t - p + 2.0
        if other <= 1.0:
            raise InfeasibleFitError(
                f"mode={mode!r} with p={p!r} implies q={other!r} <= 1",
                feasible_low=lower, feasible_high=upper, field="mode")
        return BetaSpec(lower, upper, shape_p=p, shape_q=other)
    other = (q - 1.0) / (1.0 - t) - q + 2.0
    if other <= 1.0:
        raise InfeasibleFitError(
            f"mode={mode!r} with q={q!r} implies p={other!r} <= 1",
            feasible_low=lower, feasible_high=upper, field="mode")
    return BetaSpec(lower, upper, shape_p=other, shape_q=q)


@dataclass(frozen=True, slots=True)
class AttributeEstimate:
    """Estimated performance on one attribute: a point value or a beta."""

    attribute_id: str
    value: float | None = None
    spec: BetaSpec | None = None

    def __post_init__(self):
        if (self.value is None) == (self.spec is None):
            raise InvalidBetaError(
                f"estimate for {self.attribute_id!r} must be exactly one of "
                "point value or beta spec")

    @classmethod
    def point(cls, attribute_id: str, value: float) -> "AttributeEstimate":
        return cls(attribute_id=attribute_id, value=float(value))

    @classmethod
    def beta(cls, attribute_id: str, spec: BetaSpec) -> "AttributeEstimate":
        return cls(attribute_id=attribute_id, spec=spec)

    @property
    def kind(self) -> str:
        return "point" if self.value is not None else "beta"

    def to_document(self) -> dict:
        if self.value is not None:
            return {"attribute": self.attribute_id, "kind": "point",
                    "value": self.value}
        return {"attribute": self.attribute_id, "kind": "beta",
                "beta": self.spec.to_document()}

    @classmethod
    def from_document(cls, doc: dict) -> "AttributeEstimate":
        if doc.get("kind") == "point":
            return cls.point(doc["attribute"], doc["value"])
        if doc.get("kind") == "beta":
            return cls.beta(doc["attribute"], BetaSpec.from_document(doc["beta"]))
        raise InvalidBetaError(f"unknown estimate kind {doc.get('kind')!r}")


def _check_support(u: SingleAttributeUtility, spec: BetaSpec) -> tuple[float, float]:
    """Support must sit inside the assessed attribute range; returns the
    support endpoints in the normalized utility coordinate."""
    attr = u.attribute
    slack = 1e-9 * (attr.high - attr.low)
    if spec.lower < attr.low - slack or spec.upper > attr.high + slack:
        raise EstimateRangeError(
            f"estimate support ({spec.lower!r}, {spec.upper!r}) exceeds "
            f"attribute {attr.id!r} range [{attr.low!r}, {attr.high!r}]",
            field=attr.id)
    z_lo = attr.to_normalized(spec.lower)
    z_hi = attr.to_normalized(spec.upper)
    return z_lo, z_hi


def _finish_unit_interval(value: float, what: str) -> float:
    if value < -1e-6 or value > 1.0 + 1e-6:
        raise InvalidBetaError(f"{what} produced {value!r}, outside [0, 1]")
    return min(1.0, max(0.0, value))


def expected_utility_quadrature(u: SingleAttributeUtility, spec: BetaSpec) -> float:
    """E[u(X)] for X ~ spec, by adaptive quadrature in the normalized
    variable y = (x - lower)/range (absolute tolerance 1e-10)."""
    z_lo, z_hi = _check_support(u, spec)
    p, q = spec.shape_p, spec.shape_q
    norm = _norm_constant(p, q)
    c = u.risk_coefficient

    def integrand(y: np.ndarray) -> np.ndarray:
        z = np.clip(z_lo + (z_hi - z_lo) * y, 0.0, 1.0)
        uu = np.clip(normalized_exponential_np(z, c), 0.0, 1.0)
        return norm * uu * y ** (p - 1.0) * (1.0 - y) ** (q - 1.0)

    val = adaptive_gauss_legendre(integrand, 0.0, 1.0,
                                  abs_tol=QUADRATURE_TOLERANCE)
    return _finish_unit_interval(val, "expected-utility quadrature")


def _exp_moment_primitive(s: int, lam: float) -> float:
    """J_s(lam) = int_0^1 y^s e^(lam y) dy for integer s >= 0.

    Repeated integration by parts yields a finite descending sum, but that
    form cancels catastrophically for |lam| < s, so the primitive is summed
    as an equivalent series with all-positive terms:

      lam >= 0:  sum_k lam^k / (k! (s+k+1))
      lam <  0:  e^lam * sum_k |lam|^k s! / (s+k+1)!
    """
    if lam == 0.0:
        return 1.0 / (s + 1.0)
    if lam > 0.0:
        term = 1.0  # lam^k / k!
        total = term / (s + 1.0)
        for k in range(1, 10_000):
            term *= lam / k
            contrib = term / (s + k + 1.0)
            total += contrib
            if contrib < total * 1e-17:
                break
        return total
    mu = -lam
    term = 1.0 / (s + 1.0)  # mu^k s!/(s+k+1)! at k = 0
    total = term
    for k in range(1, 10_000):
        term *= mu / (s + k + 1.0)
        total += term
        if term < total * 1e-17:
            break
    return math.exp(lam) * total


def exponential_beta_moment(lam: float, p: int, q: int) -> float:
    """E[e^(lam Y)] for Y ~ Beta(p, q) on (0, 1), integer shapes >= 1.

    Binomial expansion of (1-y)^(q-1) against the integration-by-parts
    primitive; the closed form this realizes is valid for every integer
    p, q >= 1 (including q = 1 and the uniform p = q = 1).
    """
    total = 0.0
    for n in range(1, q + 1):
        coeff = math.comb(q - 1, n - 1)
        term = coeff * _exp_moment_primitive(p + n - 2, lam)
        total += term if (n - 1) % 2 == 0 else -term
    return _norm_constant(p, q) * total


def expected_utility_series(u: SingleAttributeUtility, spec: BetaSpec) -> float:
    """Closed-form E[u(X)] for integer shapes and a non-linear curve.

    Writing the curve as a - b e^(g x) and pushing the beta through the
    exponential gives E[u] = a - b e^(g x_L) E[e^(g r Y)]; in the
    normalized coordinate that is A (1 - e^(-c z_L) M) with M the
    exponential moment of the unit beta.  Raises unsupported-shape for
    non-integer shapes, shapes above SERIES_MAX_SHAPE, or a linear curve
    (callers use the exact linear shortcut instead).
    """
    if not spec.has_integer_shapes:
        raise UnsupportedShapeError(
            f"closed form needs integer shapes, got p={spec.shape_p!r}, "
            f"q={spec.shape_q!r}; fall back to quadrature", field="p")
    p, q = int(spec.shape_p), int(spec.shape_q)
    if p > SERIES_MAX_SHAPE or q > SERIES_MAX_SHAPE:
        raise UnsupportedShapeError(
            f"closed form supports shapes up to {SERIES_MAX_SHAPE}, got "
            f"p={p}, q={q}; fall back to quadrature", field="p")
    c = u.risk_coefficient
    if u.is_linear:
        raise UnsupportedShapeError(
            "closed form needs a non-linear curve (c != 0); use the linear "
            "shortcut E[u] = u(mean)", field="risk_coefficient")
    z_lo, z_hi = _check_support(u, spec)
    lam = -c * (z_hi - z_lo)
    moment = exponential_beta_moment(lam, p, q)
    amplitude = -1.0 / math.expm1(-c)
    val = amplitude * (1.0 - math.exp(-c * z_lo) * moment)
    return _finish_unit_interval(val, "expected-utility closed form")


def expected_single_attribute_utility(u: SingleAttributeUtility,
                                      estimate: AttributeEstimate) -> float:
    """Production dispatch for E[u]: point estimates evaluate directly,
    linear curves use u(mean) exactly, integer-shape betas take the closed
    form, everything else the quadrature."""
    if estimate.kind == "point":
        return evaluate_utility(u, estimate.value)
    spec = estimate.spec
    if u.is_linear:
        _check_support(u, spec)
        return evaluate_utility(u, beta_mean(spec))
    if spec.has_integer_shapes and spec.shape_p <= SERIES_MAX_SHAPE \
            and spec.shape_q <= SERIES_MAX_SHAPE \
            and abs(u.risk_coefficient) >= SERIES_MIN_RISK:
        return expected_utility_series(u, spec)
    return expected_utility_quadrature(u, spec)
