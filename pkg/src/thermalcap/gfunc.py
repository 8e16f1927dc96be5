"""Thermal entropy function g and the bounded gap function built from it.

g(x) = (x+1)ln(x+1) - x ln x is the von Neumann entropy, in nats, of a
bosonic thermal state with mean photon number x.  The gap function

    delta(Y, X) = g(X/(Y+1)) - g(X+Y) + g(Y)

measures the difference between the pipelined upper bound and the
coherent-state lower bound on thermal-channel capacity; it is strictly
increasing in X, bounded by delta_limit(Y) = Y ln(1 + 1/Y) < 1.

Everything here is in nats; conversion to bits happens once, in the
reporting layer.  Domain violations raise ValueError, never clamp.
"""

from __future__ import annotations

import math

__all__ = [
    "g",
    "g_prime",
    "g_second",
    "delta",
    "delta_prime",
    "delta_second",
    "delta_limit",
]

# Below this, x*log1p(1/x) underflows structure; g(x) < 7e-298.
_TINY = 1e-300


def _require_finite(value: float, name: str) -> float:
    value = float(value)
    if math.isnan(value) or math.isinf(value):
        raise ValueError(f"{name} must be finite, got {value}")
    return value


def _require_nonnegative(value: float, name: str) -> float:
    value = _require_finite(value, name)
    if value < 0.0:
        raise ValueError(f"{name} must be >= 0, got {value}")
    return value


def _require_positive(value: float, name: str) -> float:
    value = _require_finite(value, name)
    if value <= 0.0:
        raise ValueError(f"{name} must be > 0, got {value}")
    return value


def _xlog1p_inv(u: float) -> float:
    """u * log(1 + 1/u) for u >= 0, continuous at 0."""
    if u < _TINY:
        return 0.0
    return u * math.log1p(1.0 / u)


def g(x: float) -> float:
    """Thermal-state entropy (x+1)ln(x+1) - x ln x in nats.

    Evaluated as x*log1p(1/x) + log1p(x), which keeps full relative
    precision for x from 1e-12 to 1e12; the naive difference form loses
    everything at both ends.  g(0) = 0 by continuous extension.
    """
    x = _require_nonnegative(x, "x")
    if x < _TINY:
        return 0.0
    return _xlog1p_inv(x) + math.log1p(x)


def g_prime(x: float) -> float:
    """First derivative of g: ln(1 + 1/x), strictly decreasing on x > 0."""
    x = _require_positive(x, "x")
    return math.log1p(1.0 / x)


def g_second(x: float) -> float:
    """Second derivative of g: -1/(x(x+1)), negative everywhere on x > 0."""
    x = _require_positive(x, "x")
    return -1.0 / (x * (x + 1.0))


def delta(y: float, x: float) -> float:
    """Gap function delta_Y(X) = g(X/(Y+1)) - g(X+Y) + g(Y), in nats.

    Uses the identity g(a) - ln(a+1) = a*log1p(1/a) to cancel the
    logarithmic parts analytically:

        delta(Y, X) = h(Y) + h(X/(Y+1)) - h(X+Y),  h(u) = u*log1p(1/u),

    so delta(Y, 0) = 0 exactly and delta < delta_limit(Y) holds
    structurally (h is increasing and X/(Y+1) < X+Y).
    """
    y = _require_positive(y, "Y")
    x = _require_nonnegative(x, "X")
    if x == 0.0:
        return 0.0
    return _xlog1p_inv(y) + _xlog1p_inv(x / (y + 1.0)) - _xlog1p_inv(x + y)


def delta_prime(y: float, x: float) -> float:
    """d/dX of delta: ln(1+(Y+1)/X)/(Y+1) - ln(1+1/(X+Y)); positive for X > 0."""
    y = _require_positive(y, "Y")
    x = _require_positive(x, "X")
    return math.log1p((y + 1.0) / x) / (y + 1.0) - math.log1p(1.0 / (x + y))


def delta_second(y: float, x: float) -> float:
    """d^2/dX^2 of delta: (1/(X+Y+1))(1/(X+Y) - 1/X); negative for X > 0."""
    y = _require_positive(y, "Y")
    x = _require_positive(x, "X")
    return (1.0 / (x + y + 1.0)) * (1.0 / (x + y) - 1.0 / x)


def delta_limit(y: float) -> float:
    """Large-X limit of delta_Y: Y ln(1 + 1/Y), strictly below 1 for all Y > 0."""
    y = _require_positive(y, "Y")
    return _xlog1p_inv(y)
