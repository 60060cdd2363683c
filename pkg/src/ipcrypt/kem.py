"""Desk-scale key encapsulation from plain LWE over Z_q.

Parameters q = 3329, dimension 256, centered binomial eta = 2.  The
public matrix A is regenerated from a 32-byte seed through SHAKE-256
with rejection sampling, so public keys stay small.  The secret is a
matrix of 256 small columns, one per shared-secret bit, which keeps the
ciphertext a single (u, v) vector pair: encapsulation hides each bit in
v = B^T r + e + bit * round(q/2) and decapsulation thresholds
v - S^T u at q/4.  With these parameters the accumulated noise is
bounded well inside q/4, so decapsulation never fails.

This is a teaching artifact: parameters are far below any real security
level and no claim is made beyond one-shot key transport in this toy
setting.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

__all__ = [
    "KemParams",
    "DESK_PARAMS",
    "KemPublicKey",
    "KemSecretKey",
    "KemKeyPair",
    "KemCiphertext",
    "SharedSecret",
    "xof_expand",
    "expand_matrix",
    "cbd",
    "kem_keygen",
    "kem_encaps",
    "kem_decaps",
    "LweKem",
    "DEFAULT_KEM",
]


def xof_expand(data: bytes, out_len: int) -> bytes:
    """First out_len bytes of the SHAKE-256 stream over data.

    Longer requests extend shorter ones: the output for out_len = a is a
    prefix of the output for out_len = b whenever a <= b.
    """
    if out_len < 0:
        raise ValueError(f"output length must be nonnegative, got {out_len}")
    return hashlib.shake_256(data).digest(out_len)


@dataclass(frozen=True)
class KemParams:
    q: int = 3329
    dim: int = 256
    secret_bits: int = 256
    eta: int = 2

    def __post_init__(self) -> None:
        if self.q < 2 or self.dim < 1 or self.secret_bits < 1 or self.eta < 1:
            raise ValueError("KEM parameters must be positive")
        if self.secret_bits % 8 != 0:
            raise ValueError("secret_bits must be a multiple of 8")

    @property
    def half_q(self) -> int:
        return (self.q + 1) // 2


DESK_PARAMS = KemParams()
DESK_PARAM_ID = 0x01


@dataclass(frozen=True, eq=False)
class KemPublicKey:
    params: KemParams
    seed_a: bytes
    b_pub: np.ndarray

    def __post_init__(self) -> None:
        if len(self.seed_a) != 32:
            raise ValueError(f"matrix seed must be 32 bytes, got {len(self.seed_a)}")
        b = np.asarray(self.b_pub, dtype=np.int64)
        shape = (self.params.dim, self.params.secret_bits)
        if b.shape != shape:
            raise ValueError(f"public matrix shape {b.shape} != {shape}")
        if np.any(b < 0) or np.any(b >= self.params.q):
            raise ValueError("public matrix entries must lie in [0, q)")
        b = b.copy()
        b.flags.writeable = False
        object.__setattr__(self, "b_pub", b)


@dataclass(frozen=True, eq=False)
class KemSecretKey:
    params: KemParams
    s: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        s = np.asarray(self.s, dtype=np.int64)
        shape = (self.params.dim, self.params.secret_bits)
        if s.shape != shape:
            raise ValueError(f"secret matrix shape {s.shape} != {shape}")
        if np.any(np.abs(s) > self.params.eta):
            raise ValueError("secret entries must be bounded by eta")
        s = s.copy()
        s.flags.writeable = False
        object.__setattr__(self, "s", s)


@dataclass(frozen=True, eq=False)
class KemKeyPair:
    public: KemPublicKey
    secret: KemSecretKey


@dataclass(frozen=True, eq=False)
class KemCiphertext:
    u: np.ndarray
    v: np.ndarray

    def __post_init__(self) -> None:
        for name in ("u", "v"):
            arr = np.asarray(getattr(self, name), dtype=np.int64)
            if arr.ndim != 1:
                raise ValueError(f"ciphertext component {name} must be 1-d")
            if np.any(arr < 0):
                raise ValueError(f"ciphertext component {name} must be nonnegative")
            arr = arr.copy()
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)


@dataclass(frozen=True)
class SharedSecret:
    data: bytes = field(repr=False)

    def __post_init__(self) -> None:
        if len(self.data) == 0:
            raise ValueError("shared secret must not be empty")


@lru_cache(maxsize=16)
def expand_matrix(seed: bytes, params: KemParams = DESK_PARAMS) -> np.ndarray:
    """Uniform dim x dim matrix mod q from the XOF stream over seed.

    16-bit words are read little endian and rejected above the largest
    multiple of q below 2^16, so accepted words reduce to exactly uniform
    residues.  The squeeze length doubles until enough words survive,
    which keeps the matrix a pure function of the seed.  Results are
    cached (and frozen) since encapsulation re-expands the same seed.
    """
    need = params.dim * params.dim
    limit = (1 << 16) // params.q * params.q
    out_len = 2 * need * 2 + 64
    while True:
        words = np.frombuffer(xof_expand(seed, out_len), dtype="<u2")
        accepted = words[words < limit]
        if accepted.size >= need:
            a = accepted[:need].astype(np.int64) % params.q
            a = a.reshape(params.dim, params.dim)
            a.flags.writeable = False
            return a
        out_len *= 2


def cbd(rng: np.random.Generator, shape, eta: int) -> np.ndarray:
    """Centered binomial draws: sum of eta coin differences per entry."""
    if eta < 1:
        raise ValueError(f"eta must be positive, got {eta}")
    size = tuple(np.atleast_1d(shape)) + (eta,)
    a = rng.integers(0, 2, size=size, dtype=np.int64)
    b = rng.integers(0, 2, size=size, dtype=np.int64)
    return (a - b).sum(axis=-1)


def kem_keygen(params: KemParams = DESK_PARAMS, rng: np.random.Generator | None = None) -> KemKeyPair:
    if rng is None:
        rng = np.random.default_rng()
    seed_a = rng.bytes(32)
    a = expand_matrix(seed_a, params)
    s = cbd(rng, (params.dim, params.secret_bits), params.eta)
    e = cbd(rng, (params.dim, params.secret_bits), params.eta)
    b = (a @ s + e) % params.q
    public = KemPublicKey(params=params, seed_a=seed_a, b_pub=b)
    secret = KemSecretKey(params=params, s=s)
    return KemKeyPair(public=public, secret=secret)


def _pack_bits(bits: np.ndarray) -> bytes:
    return np.packbits(bits.astype(np.uint8), bitorder="little").tobytes()


def kem_encaps(
    pk: KemPublicKey, rng: np.random.Generator | None = None
) -> tuple[SharedSecret, KemCiphertext]:
    """Draw fresh secret bits and hide them against pk."""
    if rng is None:
        rng = np.random.default_rng()
    params = pk.params
    bits = rng.integers(0, 2, size=params.secret_bits, dtype=np.int64)
    r = cbd(rng, params.dim, params.eta)
    e_u = cbd(rng, params.dim, params.eta)
    e_v = cbd(rng, params.secret_bits, params.eta)
    a = expand_matrix(pk.seed_a, params)
    u = (a.T @ r + e_u) % params.q
    v = (pk.b_pub.T @ r + e_v + bits * params.half_q) % params.q
    return SharedSecret(_pack_bits(bits)), KemCiphertext(u=u, v=v)


def kem_decaps(sk: KemSecretKey, ct: KemCiphertext) -> SharedSecret:
    """Threshold v - S^T u at q/4 to recover the encapsulated bits."""
    params = sk.params
    if ct.u.shape != (params.dim,) or ct.v.shape != (params.secret_bits,):
        raise ValueError(
            f"ciphertext shapes {ct.u.shape}/{ct.v.shape} do not match "
            f"({params.dim},)/({params.secret_bits},)"
        )
    if np.any(ct.u >= params.q) or np.any(ct.v >= params.q):
        raise ValueError("ciphertext entries must lie in [0, q)")
    c = (ct.v - sk.s.T @ ct.u) % params.q
    c = np.where(c > params.q // 2, c - params.q, c)
    bits = (np.abs(c) > params.q / 4).astype(np.int64)
    return SharedSecret(_pack_bits(bits))


class LweKem:
    """Keygen / encaps / decaps bundle with fixed parameters.

    The hybrid scheme talks to this interface only, so any object with
    the same three methods can stand in (mocks in tests do exactly that).
    """

    def __init__(self, params: KemParams = DESK_PARAMS) -> None:
        self.params = params

    def keygen(self, rng: np.random.Generator | None = None) -> KemKeyPair:
        return kem_keygen(self.params, rng)

    def encaps(
        self, pk: KemPublicKey, rng: np.random.Generator | None = None
    ) -> tuple[SharedSecret, KemCiphertext]:
        return kem_encaps(pk, rng)

    def decaps(self, sk: KemSecretKey, ct: KemCiphertext) -> SharedSecret:
        return kem_decaps(sk, ct)


DEFAULT_KEM = LweKem(DESK_PARAMS)
