"""Discrete error distributions, entropy accounting, keyed derivation."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ipcrypt.noise import (
    CENTERED_BINOMIAL,
    DISCRETE_GAUSSIAN,
    ENTROPY_FLOOR_BITS,
    NONCE_BYTES,
    ErrorKey,
    ErrorParams,
    derive_error,
    entropy_bits,
    keygen,
    point_distribution,
    sample_error,
)


def cb_params(n=256, scale=0.5, eta=2):
    return ErrorParams(n=n, scale=scale, distribution=CENTERED_BINOMIAL, eta=eta)


def dg_params(n=256, scale=0.5, sigma=1.0):
    return ErrorParams(n=n, scale=scale, distribution=DISCRETE_GAUSSIAN, sigma=sigma)


# ---------------------------------------------------------------- distributions


def test_binomial_eta2_point_distribution_exact():
    support, probs = point_distribution(cb_params())
    np.testing.assert_array_equal(support, [-2, -1, 0, 1, 2])
    np.testing.assert_allclose(probs, np.array([1, 4, 6, 4, 1]) / 16.0, atol=1e-15)


def test_gaussian_support_truncates_at_six_sigma():
    support, probs = point_distribution(dg_params(sigma=1.0))
    np.testing.assert_array_equal(support[[0, -1]], [-6, 6])
    support, _ = point_distribution(dg_params(sigma=2.5))
    np.testing.assert_array_equal(support[[0, -1]], [-15, 15])
    assert probs.sum() == pytest.approx(1.0, abs=1e-12)
    # Symmetric and unimodal around zero.
    np.testing.assert_allclose(probs, probs[::-1], atol=1e-15)


def test_entropy_bits_binomial_eta2_frozen_value():
    # H = 1.5 + (3/8) log2(8/3), computed by hand.
    assert entropy_bits(cb_params()) == pytest.approx(2.0306390622, abs=1e-9)


def test_entropy_floor_enforced_at_construction():
    cb_params(n=64)  # 64 * 2.0306 bits clears the floor
    with pytest.raises(ValueError, match="128-bit floor"):
        cb_params(n=32)
    assert ENTROPY_FLOOR_BITS == 128.0


def test_error_params_validation():
    with pytest.raises(ValueError, match="grid size"):
        cb_params(n=0)
    with pytest.raises(ValueError, match="scale"):
        cb_params(scale=0.0)
    with pytest.raises(ValueError, match="scale"):
        cb_params(scale=float("inf"))
    with pytest.raises(ValueError, match="eta"):
        cb_params(eta=0)
    with pytest.raises(ValueError, match="sigma"):
        dg_params(sigma=-1.0)
    with pytest.raises(ValueError, match="distribution"):
        ErrorParams(n=256, scale=0.5, distribution="uniform")


# ---------------------------------------------------------------- sampling


def test_sample_error_values_live_on_scaled_support():
    params = cb_params(scale=0.25)
    e = sample_error(params, np.random.default_rng(0))
    assert e.n == 256
    lattice = e.values / 0.25
    np.testing.assert_array_equal(lattice, np.round(lattice))
    assert np.abs(lattice).max() <= 2


def test_sample_error_gaussian_respects_truncation():
    params = dg_params(scale=1.0, sigma=1.0)
    e = sample_error(params, np.random.default_rng(1))
    np.testing.assert_array_equal(e.values, np.round(e.values))
    assert np.abs(e.values).max() <= 6


def test_sample_error_moments():
    """1e5 draws: mean near 0, variance near eta/2 * scale^2 (within 5%)."""
    params = cb_params(n=1000, scale=1.0)
    rng = np.random.default_rng(42)
    draws = np.concatenate([sample_error(params, rng).values for _ in range(100)])
    assert abs(draws.mean()) < 0.02
    assert draws.var() == pytest.approx(1.0, rel=0.05)


def test_sample_error_gaussian_moments():
    params = dg_params(n=1000, scale=1.0, sigma=1.5)
    rng = np.random.default_rng(43)
    draws = np.concatenate([sample_error(params, rng).values for _ in range(100)])
    assert abs(draws.mean()) < 0.03
    assert draws.var() == pytest.approx(1.5**2, rel=0.05)


@given(st.sampled_from([0.125, 0.5, 1.0, 3.0]), st.integers(0, 2**32 - 1))
@settings(max_examples=25, deadline=None)
def test_scale_factors_out_of_sampling(scale, seed):
    """Same generator stream: scaled params give exactly scaled values."""
    base = sample_error(cb_params(scale=1.0), np.random.default_rng(seed))
    scaled = sample_error(cb_params(scale=scale), np.random.default_rng(seed))
    np.testing.assert_array_equal(scaled.values, scale * base.values)


# ---------------------------------------------------------------- keys


def test_keygen_pulls_seed_from_generator():
    params = cb_params()
    k1 = keygen(params, np.random.default_rng(5))
    k2 = keygen(params, np.random.default_rng(5))
    assert k1.seed == k2.seed
    assert len(k1.seed) == 32
    assert k1.params == params


def test_key_seed_is_not_in_repr():
    key = keygen(cb_params(), np.random.default_rng(5))
    assert key.seed.hex() not in repr(key)


def test_key_validates_seed_length():
    with pytest.raises(ValueError, match="32 bytes"):
        ErrorKey(seed=b"\x00" * 16, params=cb_params())


# ---------------------------------------------------------------- derivation


def test_derive_error_is_deterministic_per_nonce():
    key = keygen(cb_params(), np.random.default_rng(7))
    nonce = bytes(range(16))
    e1 = derive_error(key, nonce)
    e2 = derive_error(key, nonce)
    np.testing.assert_array_equal(e1.values, e2.values)


def test_derive_error_distinct_nonces_differ():
    """100 fresh nonce pairs never collide in the derived error."""
    key = keygen(cb_params(), np.random.default_rng(8))
    rng = np.random.default_rng(9)
    for _ in range(100):
        n1, n2 = rng.bytes(16), rng.bytes(16)
        assert n1 != n2
        e1, e2 = derive_error(key, n1), derive_error(key, n2)
        assert (e1.values != e2.values).any()


def test_derive_error_depends_on_key_seed():
    params = cb_params()
    nonce = b"\x00" * 16
    e1 = derive_error(ErrorKey(seed=b"\x01" * 32, params=params), nonce)
    e2 = derive_error(ErrorKey(seed=b"\x02" * 32, params=params), nonce)
    assert (e1.values != e2.values).any()


def test_derive_error_matches_declared_distribution():
    key = ErrorKey(seed=b"\x05" * 32, params=cb_params(scale=0.5))
    e = derive_error(key, b"\xaa" * 16)
    lattice = e.values / 0.5
    np.testing.assert_array_equal(lattice, np.round(lattice))
    assert np.abs(lattice).max() <= 2


def test_derive_error_rejects_bad_nonce():
    key = keygen(cb_params(), np.random.default_rng(1))
    assert NONCE_BYTES == 16
    with pytest.raises(ValueError, match="16 bytes"):
        derive_error(key, b"\x00" * 8)
