"""Bit-string embeddings: basis properties, capacities, roundtrips."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ipcrypt.encoding import (
    MAP1_FOURIER_ID,
    MAP1_HAAR_ID,
    MAP2_ID,
    EncodingScheme,
    Message,
    basis_vector,
    decode,
    decode_map1,
    decode_map2,
    encode,
    encode_map1,
    encode_map2,
    map1_capacity,
)
from ipcrypt.grid import inner_product, make_grid_function, zeros

# ---------------------------------------------------------------- messages


def test_message_is_msb_first():
    assert Message.from_int(6, 3).bits == (1, 1, 0)
    assert Message((1, 0, 1)).to_int() == 5
    assert Message.from_int(0, 4).bits == (0, 0, 0, 0)


@given(st.integers(min_value=1, max_value=24).flatmap(
    lambda t: st.tuples(st.just(t), st.integers(min_value=0, max_value=(1 << t) - 1))
))
def test_message_int_roundtrip(t_value):
    t, value = t_value
    msg = Message.from_int(value, t)
    assert msg.t == t
    assert msg.to_int() == value
    assert Message(msg.bits).to_int() == value


def test_message_validation():
    with pytest.raises(ValueError):
        Message(())
    with pytest.raises(ValueError):
        Message((0, 2))
    with pytest.raises(ValueError):
        Message.from_int(8, 3)  # needs four bits
    with pytest.raises(ValueError):
        Message.from_int(-1, 3)
    with pytest.raises(ValueError):
        Message.from_int(0, 0)


def test_message_random_is_reproducible():
    a = Message.random(16, np.random.default_rng(3))
    b = Message.random(16, np.random.default_rng(3))
    assert a == b
    assert set(a.bits) <= {0, 1}


# ---------------------------------------------------------------- schemes


def test_scheme_constructors_and_ids():
    assert EncodingScheme.map1(4, 64).encoding_id == MAP1_FOURIER_ID
    assert EncodingScheme.map1(4, 64, basis="haar").encoding_id == MAP1_HAAR_ID
    assert EncodingScheme.map2(4, 64).encoding_id == MAP2_ID
    for scheme in (
        EncodingScheme.map1(4, 64),
        EncodingScheme.map1(4, 64, basis="haar"),
        EncodingScheme.map2(4, 64),
    ):
        again = EncodingScheme.from_encoding_id(scheme.encoding_id, 4, 64)
        assert again == scheme


def test_scheme_validation():
    with pytest.raises(ValueError, match="kind"):
        EncodingScheme(kind="map3", t=4, n=64)
    with pytest.raises(ValueError, match="basis"):
        EncodingScheme.map1(4, 64, basis="walsh")
    with pytest.raises(ValueError, match="2\\^t"):
        EncodingScheme.map1(21, 1 << 21)  # decode table would be intractable
    with pytest.raises(ValueError, match="no basis"):
        EncodingScheme(kind="map2", t=4, n=64, basis="fourier")
    with pytest.raises(ValueError, match="t \\| n"):
        EncodingScheme.map2(3, 64)
    with pytest.raises(ValueError):
        EncodingScheme.from_encoding_id(0x7F, 4, 64)


# ---------------------------------------------------------------- capacities


def test_map1_capacity_values():
    assert map1_capacity(4, "fourier") == 3
    assert map1_capacity(5, "fourier") == 5
    assert map1_capacity(512, "fourier") == 511
    assert map1_capacity(8, "haar") == 8
    assert map1_capacity(12, "haar") == 4
    assert map1_capacity(96, "haar") == 32
    assert map1_capacity(256, "haar") == 256


def test_fourier_nyquist_mode_vanishes_at_midpoints():
    """cos(2 pi (n/2) y) is identically zero at the midpoints, hence excluded."""
    n = 8
    y = (np.arange(n) + 0.5) / n
    assert np.abs(np.cos(2.0 * np.pi * (n // 2) * y)).max() < 1e-12
    scheme = EncodingScheme.map1(3, n)
    with pytest.raises(ValueError, match="capacity"):
        basis_vector(n, scheme)


def test_basis_vector_bounds():
    scheme = EncodingScheme.map1(3, 8, basis="haar")
    with pytest.raises(ValueError, match="capacity"):
        basis_vector(0, scheme)
    with pytest.raises(ValueError, match="capacity"):
        basis_vector(9, scheme)
    with pytest.raises(ValueError, match="map1"):
        basis_vector(1, EncodingScheme.map2(4, 8))


# ---------------------------------------------------------------- orthonormality


def test_fourier_basis_is_orthonormal_in_grid_inner_product():
    n = 512
    scheme = EncodingScheme.map1(2, n)
    table = np.column_stack(
        [basis_vector(k, scheme) for k in range(1, map1_capacity(n, "fourier") + 1)]
    )
    gram = (table.T @ table) / n
    assert np.abs(gram - np.eye(table.shape[1])).max() < 1e-10


def test_haar_basis_is_orthonormal_in_grid_inner_product():
    n = 64
    scheme = EncodingScheme.map1(2, n, basis="haar")
    table = np.column_stack([basis_vector(k, scheme) for k in range(1, n + 1)])
    gram = (table.T @ table) / n
    assert np.abs(gram - np.eye(n)).max() < 1e-12


def test_basis_vectors_have_unit_norm():
    scheme_f = EncodingScheme.map1(2, 128)
    scheme_h = EncodingScheme.map1(2, 128, basis="haar")
    for k in (1, 2, 3, 17, 64):
        for scheme in (scheme_f, scheme_h):
            u = make_grid_function(basis_vector(k, scheme))
            assert inner_product(u, u) == pytest.approx(1.0, abs=1e-12)


def test_haar_vector_hand_values():
    """k = 4 means level 1, shift 1: supported on [1/2, 1), amplitude sqrt(2)."""
    scheme = EncodingScheme.map1(2, 8, basis="haar")
    v = basis_vector(4, scheme)
    root2 = math.sqrt(2.0)
    np.testing.assert_allclose(v, [0, 0, 0, 0, root2, root2, -root2, -root2])
    np.testing.assert_array_equal(basis_vector(1, scheme), np.ones(8))


def test_fourier_vector_hand_value():
    scheme = EncodingScheme.map1(2, 8)
    v = basis_vector(2, scheme)  # sqrt(2) cos(2 pi y)
    assert v[0] == pytest.approx(math.sqrt(2.0) * math.cos(2.0 * np.pi * 0.0625))


# ---------------------------------------------------------------- map1 codec


def test_encode_map1_uses_message_plus_one_indexing():
    scheme = EncodingScheme.map1(2, 16)
    msg = Message.from_int(1, 2)  # bits 01 -> basis element k = 2
    np.testing.assert_array_equal(
        encode_map1(msg, scheme).values, basis_vector(2, scheme)
    )


def test_decode_map1_zero_input_gives_smallest_index():
    scheme = EncodingScheme.map1(4, 64)
    assert decode_map1(zeros(64), scheme).to_int() == 0


def test_map1_roundtrip_full_space_fourier():
    scheme = EncodingScheme.map1(8, 257)  # odd n: capacity 257 >= 256
    for value in range(1 << 8):
        msg = Message.from_int(value, 8)
        assert decode_map1(encode_map1(msg, scheme), scheme) == msg


def test_map1_roundtrip_full_space_haar_t10():
    scheme = EncodingScheme.map1(10, 1024, basis="haar")
    for value in range(1 << 10):
        msg = Message.from_int(value, 10)
        assert decode_map1(encode_map1(msg, scheme), scheme) == msg


def test_map1_roundtrip_survives_small_perturbation():
    """Orthonormality leaves a gap: grid-norm 0.1 noise cannot flip the argmax."""
    scheme = EncodingScheme.map1(6, 256)
    rng = np.random.default_rng(7)
    for _ in range(50):
        msg = Message.random(6, rng)
        u = encode_map1(msg, scheme)
        g = rng.standard_normal(256)
        g *= 0.1 / (math.sqrt(1.0 / 256) * np.linalg.norm(g))
        noisy = make_grid_function(u.values + g)
        assert decode_map1(noisy, scheme) == msg


def test_map1_length_mismatch():
    scheme = EncodingScheme.map1(4, 64)
    with pytest.raises(ValueError, match="length"):
        encode_map1(Message.from_int(0, 3), scheme)
    with pytest.raises(ValueError, match="mismatch"):
        decode_map1(zeros(32), scheme)


# ---------------------------------------------------------------- map2 codec


def test_encode_map2_hand_value():
    scheme = EncodingScheme.map2(4, 8)
    out = encode_map2(Message((1, 0, 1, 0)), scheme)
    np.testing.assert_array_equal(out.values, [1, 1, 0, 0, 1, 1, 0, 0])


def test_decode_map2_threshold_is_inclusive():
    """A subinterval mean of exactly 1/2 decodes as bit 1."""
    scheme = EncodingScheme.map2(2, 4)
    u = make_grid_function([1.0, 0.0, 0.0, 0.0])  # means 0.5 and 0.0
    assert decode_map2(u, scheme).bits == (1, 0)


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_map2_roundtrip_random(data):
    t = data.draw(st.sampled_from([1, 2, 4, 8, 16, 32, 64]))
    cells = data.draw(st.integers(min_value=1, max_value=8))
    n = t * cells
    msg = Message(tuple(data.draw(st.integers(0, 1)) for _ in range(t)))
    scheme = EncodingScheme.map2(t, n)
    assert decode_map2(encode_map2(msg, scheme), scheme) == msg


def test_map2_length_mismatch():
    scheme = EncodingScheme.map2(4, 8)
    with pytest.raises(ValueError, match="length"):
        encode_map2(Message.from_int(0, 2), scheme)
    with pytest.raises(ValueError, match="mismatch"):
        decode_map2(zeros(4), scheme)


# ---------------------------------------------------------------- dispatchers


def test_dispatchers_select_by_kind():
    rng = np.random.default_rng(1)
    msg = Message.random(4, rng)
    for scheme in (
        EncodingScheme.map1(4, 64),
        EncodingScheme.map1(4, 64, basis="haar"),
        EncodingScheme.map2(4, 64),
    ):
        assert decode(encode(msg, scheme), scheme) == msg
