"""Capacity bounds for the thermal noise channel and their gap certificate.

The coherent-state rate

    lower = (g(lam*N + Y) - g(Y)) / ln 2,   Y = (1-lam)*N_E,

is an achievable lower bound on the constrained classical capacity; the
pipelining decomposition gives the upper bound

    upper = g(lam*N / (Y+1)) / ln 2.

Their difference equals delta(Y, lam*N)/ln 2, which is bounded by
delta_limit(Y)/ln 2 < 1/ln 2 bits for every channel and every signal
budget N.  `report` assembles both bounds, both gap routes, and the
refined and universal gap bounds into a certified interval; the true
capacity is not known in general, so only the interval is ever reported.

All public values are in bits; `gfunc` supplies nats and the single
division by ln 2 happens here.
"""

from __future__ import annotations

from dataclasses import dataclass
import math

from . import gfunc
from .gaussian_core import ChannelParams

__all__ = [
    "BoundReport",
    "holevo_lower",
    "additive_extension_upper",
    "pure_loss_capacity",
    "gap",
    "refined_gap_bound",
    "report",
    "LN2",
    "UNIVERSAL_GAP_BITS",
    "CERTIFICATION_TOL",
    "MAX_ENV_PHOTONS",
    "MAX_SIGNAL_PHOTONS",
]

LN2 = math.log(2.0)
UNIVERSAL_GAP_BITS = 1.0 / LN2

# Absolute certification tolerance in bits; every reported quantity is
# O(30) or less on the validated domain, so doubles leave ample margin.
CERTIFICATION_TOL = 1e-10

# Validated parameter domain; keeps every g-evaluation inside the range
# where its relative accuracy is tested.
MAX_ENV_PHOTONS = 1e6
MAX_SIGNAL_PHOTONS = 1e9


@dataclass(frozen=True)
class BoundReport:
    """Certified capacity interval for one (channel, signal budget) pair.

    certified is True iff lower <= upper, gap == upper - lower, and
    gap <= refined_gap_bound <= universal_gap_bound all hold within
    CERTIFICATION_TOL, and additionally the gap agrees with its
    independent delta-function route to the same tolerance.
    """

    lower_bits: float
    upper_bits: float
    gap_bits: float
    refined_gap_bound_bits: float
    universal_gap_bound_bits: float
    certified: bool


def _validate(params: ChannelParams, n_signal: float) -> float:
    n_signal = float(n_signal)
    if not (math.isfinite(n_signal) and 0.0 <= n_signal <= MAX_SIGNAL_PHOTONS):
        raise ValueError(
            f"signal photon number must be in [0, {MAX_SIGNAL_PHOTONS:g}], got {n_signal}"
        )
    if params.environment_photons > MAX_ENV_PHOTONS:
        raise ValueError(
            f"environment photon number must be <= {MAX_ENV_PHOTONS:g}, "
            f"got {params.environment_photons}"
        )
    return n_signal


def pure_loss_capacity(lam: float, n_signal: float) -> float:
    """Exact capacity of the zero-temperature channel: g(lam*N)/ln 2 bits."""
    if not (math.isfinite(lam) and 0.0 < lam <= 1.0):
        raise ValueError(f"transmissivity must be in (0, 1], got {lam}")
    n_signal = float(n_signal)
    if not (math.isfinite(n_signal) and 0.0 <= n_signal <= MAX_SIGNAL_PHOTONS):
        raise ValueError(
            f"signal photon number must be in [0, {MAX_SIGNAL_PHOTONS:g}], got {n_signal}"
        )
    return gfunc.g(lam * n_signal) / LN2


def holevo_lower(params: ChannelParams, n_signal: float) -> float:
    """Coherent-state achievable rate, bits per channel use.

    (g(lam*N + Y) - g(Y))/ln 2 with Y = (1-lam)*N_E; zero at N = 0 and
    strictly increasing in N.  When Y = 0 this is evaluated through the
    pure-loss expression so the two bounds coincide bit-for-bit there.
    """
    n_signal = _validate(params, n_signal)
    lam = params.transmissivity
    y = (1.0 - lam) * params.environment_photons
    if y == 0.0:
        return pure_loss_capacity(lam, n_signal)
    return (gfunc.g(lam * n_signal + y) - gfunc.g(y)) / LN2


def additive_extension_upper(params: ChannelParams, n_signal: float) -> float:
    """Pipelined upper bound g(lam*N/(Y+1))/ln 2 bits, Y = (1-lam)*N_E.

    lam/(Y+1) is the pure-loss transmissivity of the channel's
    amplifier-after-loss factorization, so this is the exact capacity of
    a channel that simulates this one after post-processing.
    """
    n_signal = _validate(params, n_signal)
    lam = params.transmissivity
    y = (1.0 - lam) * params.environment_photons
    if y == 0.0:
        return pure_loss_capacity(lam, n_signal)
    return gfunc.g(lam * n_signal / (y + 1.0)) / LN2


def gap(params: ChannelParams, n_signal: float) -> float:
    """Upper bound minus lower bound, in bits.

    Equals delta(Y, lam*N)/ln 2; `report` certifies that the two routes
    agree to CERTIFICATION_TOL.  Exactly zero whenever Y = 0.
    """
    return additive_extension_upper(params, n_signal) - holevo_lower(params, n_signal)


def refined_gap_bound(params: ChannelParams) -> float:
    """N-independent gap bound delta_limit((1-lam)*N_E)/ln 2 bits.

    Strictly below the universal 1/ln 2 for every channel; returns 0 by
    continuous extension when (1-lam)*N_E = 0 (pure loss or identity),
    where the gap itself is exactly zero.
    """
    _validate(params, 0.0)
    y = (1.0 - params.transmissivity) * params.environment_photons
    if y == 0.0:
        return 0.0
    return gfunc.delta_limit(y) / LN2


def report(params: ChannelParams, n_signal: float) -> BoundReport:
    """Assemble the certified bound interval for one channel and budget."""
    n_signal = _validate(params, n_signal)
    lower = holevo_lower(params, n_signal)
    upper = additive_extension_upper(params, n_signal)
    gap_bits = upper - lower
    refined = refined_gap_bound(params)

    y = (1.0 - params.transmissivity) * params.environment_photons
    x = params.transmissivity * n_signal
    gap_via_delta = gfunc.delta(y, x) / LN2 if y > 0.0 else 0.0

    tol = CERTIFICATION_TOL
    certified = (
        lower <= upper + tol
        and -tol <= gap_bits
        and gap_bits <= refined + tol
        and refined <= UNIVERSAL_GAP_BITS + tol
        and abs(gap_bits - gap_via_delta) <= tol
    )
    return BoundReport(
        lower_bits=lower,
        upper_bits=upper,
        gap_bits=gap_bits,
        refined_gap_bound_bits=refined,
        universal_gap_bound_bits=UNIVERSAL_GAP_BITS,
        certified=certified,
    )
