"""Tests for the capacity bound formulas and the gap certificate."""

import math

import numpy as np
import pytest

from thermalcap import gfunc
from thermalcap.bounds import (
    CERTIFICATION_TOL,
    LN2,
    UNIVERSAL_GAP_BITS,
    additive_extension_upper,
    gap,
    holevo_lower,
    pure_loss_capacity,
    refined_gap_bound,
    report,
)
from thermalcap.gaussian_core import ChannelParams


def params(lam, n_env):
    return ChannelParams(transmissivity=lam, environment_photons=n_env)


# High-precision reference values (50-digit evaluation, rounded to double).
LOWER_REFERENCE = {
    (0.5, 1.0, 10.0): 2.6485405143302299,
    (0.5, 0.0, 4.0): 2.7548875021634687,
    (0.6, 0.0, 1.0): 1.5270944046799439,
    (0.6, 0.5, 2.0): 1.5716581099847417,
    (0.9, 5.0, 100.0): 6.5730386708780655,
    (0.3, 0.05, 1.0): 0.86438761125974527,
    (0.75, 2.0, 0.5): 0.49154055888383438,
}
UPPER_REFERENCE = {
    (0.5, 1.0, 10.0): 3.3771826282657020,
    (0.5, 0.0, 4.0): 2.7548875021634687,
    (0.6, 0.0, 1.0): 1.5270944046799439,
    (0.9, 5.0, 100.0): 7.3615418548249511,
    (0.3, 0.05, 1.0): 0.99150037595026795,
    (0.75, 2.0, 0.5): 0.90241011860920293,
}


def test_holevo_lower_reference_values():
    for (lam, n_env, n), expected in LOWER_REFERENCE.items():
        value = holevo_lower(params(lam, n_env), n)
        assert abs(value - expected) <= 1e-13 * expected


def test_additive_extension_upper_reference_values():
    for (lam, n_env, n), expected in UPPER_REFERENCE.items():
        value = additive_extension_upper(params(lam, n_env), n)
        assert abs(value - expected) <= 1e-13 * expected


def test_upper_bound_exact_closed_form_point():
    # lam*N/((1-lam)*N_E + 1) = 1 here, so the upper bound is g(1)/ln 2 = 2.
    assert additive_extension_upper(params(0.6, 0.5), 2.0) == 2.0


def test_zero_signal_gives_zero():
    for lam, n_env in ((0.5, 0.0), (0.5, 1.0), (0.9, 5.0)):
        assert holevo_lower(params(lam, n_env), 0.0) == 0.0
        assert additive_extension_upper(params(lam, n_env), 0.0) == 0.0
    assert pure_loss_capacity(0.7, 0.0) == 0.0


def test_pure_loss_capacity_examples():
    assert abs(pure_loss_capacity(1.0, 1.0) - 2.0) < 1e-15
    assert abs(pure_loss_capacity(0.25, 4.0) - 2.0) < 1e-15


def test_lower_strictly_increasing_in_n():
    p = params(0.7, 1.5)
    values = [holevo_lower(p, n) for n in np.linspace(0.1, 50.0, 40)]
    assert all(b > a for a, b in zip(values, values[1:]))


def test_gap_reference_value_and_route_consistency():
    p = params(0.5, 1.0)
    g = gap(p, 10.0)
    assert abs(g - 0.72864211393547216) <= 1e-13
    # Same number via the gap function directly: X = lam*N, Y = (1-lam)*N_E.
    assert abs(g - gfunc.delta(0.5, 5.0) / LN2) <= 1e-10


def test_refined_gap_bound_values():
    assert refined_gap_bound(params(0.5, 2.0)) == 1.0  # Y = 1 gives ln 2 nats
    assert abs(refined_gap_bound(params(0.5, 1.0)) - 0.79248125036057809) <= 1e-13
    assert refined_gap_bound(params(0.5, 0.0)) == 0.0


def test_refined_gap_bound_approaches_universal():
    p = params(0.5, 1e6)
    value = refined_gap_bound(p)
    assert value < UNIVERSAL_GAP_BITS
    assert UNIVERSAL_GAP_BITS - value < 2e-6


def test_interval_order_on_random_triples():
    rng = np.random.default_rng(2024)
    for _ in range(10_000):
        lam = float(rng.uniform(0.01, 0.999))
        n_env = float(rng.uniform(1e-3, 50.0))
        n = float(rng.uniform(1e-3, 100.0))
        p = params(lam, n_env)
        lower = holevo_lower(p, n)
        upper = additive_extension_upper(p, n)
        refined = refined_gap_bound(p)
        assert upper - lower >= -1e-10
        assert refined - (upper - lower) >= -1e-10
        assert UNIVERSAL_GAP_BITS - refined >= -1e-10


def test_route_consistency_on_random_triples():
    rng = np.random.default_rng(99)
    for _ in range(2000):
        lam = float(rng.uniform(0.01, 0.999))
        n_env = float(rng.uniform(1e-3, 50.0))
        n = float(rng.uniform(1e-3, 100.0))
        p = params(lam, n_env)
        via_delta = gfunc.delta((1.0 - lam) * n_env, lam * n) / LN2
        assert abs(gap(p, n) - via_delta) <= 1e-10


def test_gap_strictly_increasing_in_n():
    p = params(0.6, 2.0)
    values = [gap(p, n) for n in np.geomspace(0.01, 1e4, 60)]
    assert all(b > a for a, b in zip(values, values[1:]))


def test_gap_reaches_limit_at_large_n():
    # At N = 1e8 the gap has converged to its large-signal limit.
    for lam in (0.3, 0.5, 0.7, 0.9):
        for n_env in (0.1, 0.5, 1.0, 2.0, 5.0):
            p = params(lam, n_env)
            gap_nats = gap(p, 1e8) * LN2
            limit_nats = gfunc.delta_limit((1.0 - lam) * n_env)
            assert abs(gap_nats - limit_nats) <= 1e-6


def test_zero_temperature_collapse_is_exact():
    rng = np.random.default_rng(17)
    for _ in range(200):
        lam = float(rng.uniform(0.01, 1.0))
        n = float(rng.uniform(0.0, 100.0))
        p = params(lam, 0.0)
        analytic = pure_loss_capacity(lam, n)
        assert holevo_lower(p, n) == analytic
        assert additive_extension_upper(p, n) == analytic
        assert gap(p, n) == 0.0


def test_report_assembles_certified_interval():
    r = report(params(0.5, 1.0), 10.0)
    assert abs(r.lower_bits - 2.6485405143302299) < 1e-12
    assert abs(r.upper_bits - 3.3771826282657020) < 1e-12
    assert abs(r.gap_bits - (r.upper_bits - r.lower_bits)) <= CERTIFICATION_TOL
    assert r.gap_bits <= r.refined_gap_bound_bits + CERTIFICATION_TOL
    assert r.refined_gap_bound_bits <= r.universal_gap_bound_bits + CERTIFICATION_TOL
    assert r.universal_gap_bound_bits == UNIVERSAL_GAP_BITS
    assert r.certified


def test_report_zero_temperature():
    r = report(params(0.7, 0.0), 5.0)
    assert r.lower_bits == r.upper_bits
    assert r.gap_bits == 0.0
    assert r.certified


def test_report_large_parameters_certified():
    r = report(params(0.9, 10.0), 100.0)
    assert r.gap_bits < UNIVERSAL_GAP_BITS
    assert r.certified


def test_universal_gap_constant():
    assert abs(UNIVERSAL_GAP_BITS - 1.0 / math.log(2.0)) < 1e-15


def test_domain_errors():
    with pytest.raises(ValueError):
        holevo_lower(params(0.5, 1.0), -1.0)
    with pytest.raises(ValueError):
        holevo_lower(params(0.5, 1.0), 2e9)  # above validated signal range
    with pytest.raises(ValueError):
        additive_extension_upper(params(0.5, 1.0), float("nan"))
    with pytest.raises(ValueError):
        holevo_lower(params(0.5, 2e6), 1.0)  # above validated environment range
    with pytest.raises(ValueError):
        pure_loss_capacity(0.0, 1.0)
    with pytest.raises(ValueError):
        pure_loss_capacity(0.5, -1.0)
