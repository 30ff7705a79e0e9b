"""Shared numerical kernels: stable exponential value curves, scalar root
bracketing/bisection, and globally adaptive Gauss-Legendre quadrature.

Everything here is pure and deterministic; callers rely on bitwise
reproducibility for replay and fingerprinting.
"""

from __future__ import annotations

import heapq
import math

import numpy as np

from .errors import ConvergenceError

#: |c| below this is treated as the exact linear limit (avoids 0/0 in the
#: normalized exponential form).
LINEARITY_THRESHOLD = 1e-9


def normalized_exponential(z: float, c: float) -> float:
    """Evaluate u(z) = (1 - exp(-c z)) / (1 - exp(-c)) on z in [0, 1].

    The curve is anchored at u(0) = 0, u(1) = 1, is strictly increasing,
    and is concave for c > 0 (risk averse toward the z = 1 end), convex
    for c < 0.  ``c`` within LINEARITY_THRESHOLD of zero returns z itself.

    Evaluation uses expm1 ratios, switching to a log-space form for very
    large negative c where exp(|c|) would overflow.
    """
    if abs(c) < LINEARITY_THRESHOLD:
        return float(z)
    if c > 0.0:
        return math.expm1(-c * z) / math.expm1(-c)
    m = -c
    if m <= 500.0:
        return math.expm1(m * z) / math.expm1(m)
    # (e^{mz}-1)/(e^m-1) = e^{m(z-1)} (1-e^{-mz})/(1-e^{-m}) done in logs
    log_num = -m * z
    log_den = -m
    return math.exp(
        m * (z - 1.0)
        + (math.log1p(-math.exp(log_num)) if log_num > -745.0 else 0.0)
        - (math.log1p(-math.exp(log_den)) if log_den > -745.0 else 0.0)
    )


def normalized_exponential_np(z: np.ndarray, c: float) -> np.ndarray:
    """Vectorized :func:`normalized_exponential` for quadrature inner loops.

    Valid for |c| <= 500; the quadrature path never sees larger values
    because elicitation rejects them upstream.
    """
    if abs(c) < LINEARITY_THRESHOLD:
        return np.asarray(z, dtype=float)
    return np.expm1(-c * np.asarray(z, dtype=float)) / math.expm1(-c)


def invert_normalized_exponential(u: float, c: float) -> float:
    """Return z in [0, 1] with normalized_exponential(z, c) == u."""
    if not 0.0 <= u <= 1.0:
        raise ValueError("u must lie in [0, 1]")
    if abs(c) < LINEARITY_THRESHOLD:
        return float(u)
    # exp(-c z) = 1 - u (1 - exp(-c))
    return -math.log1p(u * math.expm1(-c)) / c


def bisect_root(f, lo: float, hi: float, *, width: float = 1e-12,
                max_iter: int = 200) -> float:
    """Bisection for a sign-changing f on [lo, hi], to interval ``width``.

    Deterministic: fixed midpoint rule, stops when the bracket is narrower
    than ``width`` or cannot shrink in floating point.  Raises if the
    bracket does not actually change sign.
    """
    flo = f(lo)
    fhi = f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0.0) == (fhi > 0.0):
        raise ConvergenceError(
            f"no sign change on bracket [{lo!r}, {hi!r}]")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi or (hi - lo) <= width:
            break
        fmid = f(mid)
        if fmid == 0.0:
            return mid
        if (fmid > 0.0) == (fhi > 0.0):
            hi, fhi = mid, fmid
        else:
            lo, flo = mid, fmid
    return 0.5 * (lo + hi)


# 10- and 20-point Gauss-Legendre nodes/weights on [-1, 1]; the nested pair
# gives a per-panel error estimate without endpoint evaluations.
_GL10_X, _GL10_W = np.polynomial.legendre.leggauss(10)
_GL20_X, _GL20_W = np.polynomial.legendre.leggauss(20)


def _panel(f, a: float, b: float) -> tuple[float, float]:
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    v20 = half * float(np.dot(_GL20_W, f(half * _GL20_X + mid)))
    v10 = half * float(np.dot(_GL10_W, f(half * _GL10_X + mid)))
    return v20, abs(v20 - v10)


def adaptive_gauss_legendre(f, a: float, b: float, *, abs_tol: float = 1e-10,
                            max_panels: int = 20_000) -> float:
    """Integrate ``f`` over [a, b] to absolute tolerance ``abs_tol``.

    Globally adaptive: panels live in a worst-first heap and the panel with
    the largest error estimate is split until the summed estimate meets the
    tolerance.  Nodes are interior (open rule), so integrable endpoint
    behavior such as (x - a)^(p-1) with p slightly above 1 is handled by
    geometric refinement toward the endpoint rather than by evaluating at
    it.  ``f`` must accept a numpy array of abscissae.
    """
    if not a < b:
        raise ValueError("require a < b")
    value, err = _panel(f, a, b)
    # heap entries: (-err, tie-break counter, a, b, value, err)
    counter = 0
    heap = [(-err, counter, a, b, value, err)]
    total_value = value
    total_err = err
    min_width = (b - a) * 1e-14
    panels = 1
    while total_err > abs_tol and panels < max_panels:
        neg_err, _, pa, pb, pval, perr = heapq.heappop(heap)
        if (pb - pa) <= min_width:
            # at floating-point resolution; keep the panel as-is
            heapq.heappush(heap, (0.0, counter + 1, pa, pb, pval, perr))
            counter += 1
            others = total_err - perr
            if others <= abs_tol * 0.5:
                break
            continue
        pm = 0.5 * (pa + pb)
        lv, le = _panel(f, pa, pm)
        rv, re = _panel(f, pm, pb)
        counter += 1
        heapq.heappush(heap, (-le, counter, pa, pm, lv, le))
        counter += 1
        heapq.heappush(heap, (-re, counter, pm, pb, rv, re))
        total_value += (lv + rv) - pval
        total_err += (le + re) - perr
        panels += 1
    if total_err > abs_tol and panels >= max_panels:
        raise ConvergenceError(
            f"quadrature did not reach tol={abs_tol:g} within "
            f"{max_panels} panels (err~{total_err:.3g})")
    # final clean sum in a deterministic order
    return math.fsum(entry[4] for entry in sorted(heap, key=lambda e: e[2]))
