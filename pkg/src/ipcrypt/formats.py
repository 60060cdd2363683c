"""Binary file containers for keys and ciphertexts.

Every container opens with a 4-byte magic and a version byte, then
fixed-width little-endian fields.  Layouts:

  IPK1   symmetric error key
         magic, version=1, distribution id (0x01 gaussian, 0x02
         binomial), distribution parameter (f64 sigma or u32 eta),
         f64 scale, u32 grid size, 32-byte seed
  IPC1   symmetric ciphertext
         magic, version=1, u32 n, u32 t, encoding id byte, 16-byte
         nonce, grid body (u32 count + f64 samples)
  IPQ1   KEM material
         magic, version=1, parameter id byte, kind byte (0x01 public,
         0x02 secret, 0x03 ciphertext), then coefficients: public =
         32-byte seed + dim*bits u16; secret = dim*bits i8;
         ciphertext = dim u16 + bits u16
  IPH1   hybrid ciphertext
         magic, version=1, u32 length of the embedded IPQ1 ciphertext
         block, that block, then the IPC1 block to the end

Readers reject wrong magics, unknown versions and ids, truncation, and
trailing bytes.
"""

from __future__ import annotations

import struct

import numpy as np

from .encoding import MAP1_FOURIER_ID, MAP1_HAAR_ID, MAP2_ID
from .grid import from_bytes as grid_from_bytes
from .grid import to_bytes as grid_to_bytes
from .hybrid import HybridCiphertext
from .kem import (
    DESK_PARAM_ID,
    DESK_PARAMS,
    KemCiphertext,
    KemParams,
    KemPublicKey,
    KemSecretKey,
)
from .noise import CENTERED_BINOMIAL, DISCRETE_GAUSSIAN, ErrorKey, ErrorParams
from .symmetric import SymCiphertext

__all__ = [
    "write_error_key",
    "read_error_key",
    "write_sym_ciphertext",
    "read_sym_ciphertext",
    "write_kem_public_key",
    "read_kem_public_key",
    "write_kem_secret_key",
    "read_kem_secret_key",
    "write_kem_ciphertext",
    "read_kem_ciphertext",
    "write_hybrid_ciphertext",
    "read_hybrid_ciphertext",
]

_VERSION = 1

_KEY_MAGIC = b"IPK1"
_SYM_MAGIC = b"IPC1"
_KEM_MAGIC = b"IPQ1"
_HYB_MAGIC = b"IPH1"

_DIST_GAUSSIAN = 0x01
_DIST_BINOMIAL = 0x02

_KIND_PUBLIC = 0x01
_KIND_SECRET = 0x02
_KIND_CIPHERTEXT = 0x03

_PARAM_SETS = {DESK_PARAM_ID: DESK_PARAMS}

_ENCODING_IDS = (MAP1_FOURIER_ID, MAP1_HAAR_ID, MAP2_ID)


class _Reader:
    """Cursor over a byte string with typed, bounds-checked reads."""

    def __init__(self, data: bytes, label: str) -> None:
        self.data = data
        self.pos = 0
        self.label = label

    def take(self, count: int, what: str) -> bytes:
        if self.pos + count > len(self.data):
            raise ValueError(f"truncated {self.label}: missing {what}")
        out = self.data[self.pos : self.pos + count]
        self.pos += count
        return out

    def u8(self, what: str) -> int:
        return self.take(1, what)[0]

    def u32(self, what: str) -> int:
        return struct.unpack("<I", self.take(4, what))[0]

    def f64(self, what: str) -> float:
        return struct.unpack("<d", self.take(8, what))[0]

    def array(self, dtype: str, count: int, what: str) -> np.ndarray:
        raw = self.take(count * np.dtype(dtype).itemsize, what)
        return np.frombuffer(raw, dtype=dtype).astype(np.int64)

    def expect_magic(self, magic: bytes) -> None:
        got = self.take(len(magic), "magic")
        if got != magic:
            raise ValueError(f"bad magic for {self.label}: expected {magic!r}, got {got!r}")

    def expect_version(self) -> None:
        version = self.u8("version")
        if version != _VERSION:
            raise ValueError(f"unsupported {self.label} version {version}")

    def done(self) -> None:
        if self.pos != len(self.data):
            raise ValueError(
                f"{len(self.data) - self.pos} trailing bytes after {self.label}"
            )

    def rest(self) -> bytes:
        out = self.data[self.pos :]
        self.pos = len(self.data)
        return out


def write_error_key(key: ErrorKey) -> bytes:
    p = key.params
    if p.distribution == DISCRETE_GAUSSIAN:
        dist = struct.pack("<Bd", _DIST_GAUSSIAN, p.sigma)
    else:
        dist = struct.pack("<BI", _DIST_BINOMIAL, p.eta)
    return (
        _KEY_MAGIC
        + struct.pack("<B", _VERSION)
        + dist
        + struct.pack("<dI", p.scale, p.n)
        + key.seed
    )


def read_error_key(data: bytes) -> ErrorKey:
    r = _Reader(data, "error key")
    r.expect_magic(_KEY_MAGIC)
    r.expect_version()
    dist_id = r.u8("distribution id")
    if dist_id == _DIST_GAUSSIAN:
        sigma = r.f64("sigma")
        scale = r.f64("scale")
        n = r.u32("grid size")
        params = ErrorParams(n=n, scale=scale, distribution=DISCRETE_GAUSSIAN, sigma=sigma)
    elif dist_id == _DIST_BINOMIAL:
        eta = r.u32("eta")
        scale = r.f64("scale")
        n = r.u32("grid size")
        params = ErrorParams(n=n, scale=scale, distribution=CENTERED_BINOMIAL, eta=eta)
    else:
        raise ValueError(f"unknown distribution id {dist_id:#04x}")
    seed = r.take(32, "seed")
    r.done()
    return ErrorKey(seed=seed, params=params)


def write_sym_ciphertext(ct: SymCiphertext) -> bytes:
    return (
        _SYM_MAGIC
        + struct.pack("<BIIB", _VERSION, ct.n, ct.t, ct.encoding_id)
        + ct.nonce
        + grid_to_bytes(ct.body)
    )


def read_sym_ciphertext(data: bytes) -> SymCiphertext:
    r = _Reader(data, "symmetric ciphertext")
    r.expect_magic(_SYM_MAGIC)
    r.expect_version()
    n = r.u32("grid size")
    t = r.u32("message length")
    encoding_id = r.u8("encoding id")
    if encoding_id not in _ENCODING_IDS:
        raise ValueError(f"unknown encoding id {encoding_id:#04x}")
    nonce = r.take(16, "nonce")
    body = grid_from_bytes(r.rest())
    if body.n != n:
        raise ValueError(f"body grid size {body.n} != header n = {n}")
    return SymCiphertext(n=n, t=t, encoding_id=encoding_id, nonce=nonce, body=body)


def _kem_header(kind: int) -> bytes:
    return _KEM_MAGIC + struct.pack("<BBB", _VERSION, DESK_PARAM_ID, kind)


def _read_kem_header(r: _Reader, expected_kind: int, kind_name: str) -> KemParams:
    r.expect_magic(_KEM_MAGIC)
    r.expect_version()
    param_id = r.u8("parameter id")
    if param_id not in _PARAM_SETS:
        raise ValueError(f"unknown KEM parameter id {param_id:#04x}")
    kind = r.u8("kind")
    if kind != expected_kind:
        raise ValueError(f"expected a KEM {kind_name} file, got kind {kind:#04x}")
    return _PARAM_SETS[param_id]


def write_kem_public_key(pk: KemPublicKey) -> bytes:
    return (
        _kem_header(_KIND_PUBLIC)
        + pk.seed_a
        + pk.b_pub.astype("<u2").tobytes()
    )


def read_kem_public_key(data: bytes) -> KemPublicKey:
    r = _Reader(data, "KEM public key")
    params = _read_kem_header(r, _KIND_PUBLIC, "public key")
    seed_a = r.take(32, "matrix seed")
    count = params.dim * params.secret_bits
    b = r.array("<u2", count, "public matrix").reshape(params.dim, params.secret_bits)
    r.done()
    return KemPublicKey(params=params, seed_a=seed_a, b_pub=b)


def write_kem_secret_key(sk: KemSecretKey) -> bytes:
    return _kem_header(_KIND_SECRET) + sk.s.astype("<i1").tobytes()


def read_kem_secret_key(data: bytes) -> KemSecretKey:
    r = _Reader(data, "KEM secret key")
    params = _read_kem_header(r, _KIND_SECRET, "secret key")
    count = params.dim * params.secret_bits
    s = r.array("<i1", count, "secret matrix").reshape(params.dim, params.secret_bits)
    r.done()
    return KemSecretKey(params=params, s=s)


def write_kem_ciphertext(ct: KemCiphertext) -> bytes:
    return (
        _kem_header(_KIND_CIPHERTEXT)
        + ct.u.astype("<u2").tobytes()
        + ct.v.astype("<u2").tobytes()
    )


def read_kem_ciphertext(data: bytes) -> KemCiphertext:
    r = _Reader(data, "KEM ciphertext")
    params = _read_kem_header(r, _KIND_CIPHERTEXT, "ciphertext")
    u = r.array("<u2", params.dim, "u component")
    v = r.array("<u2", params.secret_bits, "v component")
    r.done()
    return KemCiphertext(u=u, v=v)


def write_hybrid_ciphertext(ct: HybridCiphertext) -> bytes:
    c1 = write_kem_ciphertext(ct.c1)
    c2 = write_sym_ciphertext(ct.c2)
    return _HYB_MAGIC + struct.pack("<BI", _VERSION, len(c1)) + c1 + c2


def read_hybrid_ciphertext(data: bytes) -> HybridCiphertext:
    r = _Reader(data, "hybrid ciphertext")
    r.expect_magic(_HYB_MAGIC)
    r.expect_version()
    c1_len = r.u32("first block length")
    c1 = read_kem_ciphertext(r.take(c1_len, "first block"))
    c2 = read_sym_ciphertext(r.rest())
    return HybridCiphertext(c1=c1, c2=c2)
