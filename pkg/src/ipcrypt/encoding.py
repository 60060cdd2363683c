"""Bit-string messages and their embeddings into grid functions.

Two embeddings are provided.  Map1 sends the t-bit message mu, read as
the integer k - 1, to the k-th member of an orthonormal basis: either
the trigonometric system {1, sqrt(2) cos(2 pi j y), sqrt(2) sin(2 pi j y)}
or the dyadic step system (Haar).  Map2 sends bit j to the indicator of
the j-th of t equal subintervals, so the message is a piecewise constant
0/1 profile.  Both are exactly invertible from clean samples; decoding
tolerances against perturbation differ and are probed in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .grid import GridFunction, make_grid_function, midpoints

__all__ = [
    "Message",
    "EncodingScheme",
    "MAP1_FOURIER_ID",
    "MAP1_HAAR_ID",
    "MAP2_ID",
    "map1_capacity",
    "basis_vector",
    "encode",
    "decode",
    "encode_map1",
    "decode_map1",
    "encode_map2",
    "decode_map2",
]

MAP1_FOURIER_ID = 0x01
MAP1_HAAR_ID = 0x02
MAP2_ID = 0x03

# Map1 decoding enumerates all 2^t candidates; keep that tractable.
_MAP1_MAX_T = 20


@dataclass(frozen=True)
class Message:
    """Immutable bit string, most significant bit first."""

    bits: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.bits) == 0:
            raise ValueError("message must have at least one bit")
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("message bits must be 0 or 1")
        object.__setattr__(self, "bits", tuple(int(b) for b in self.bits))

    @property
    def t(self) -> int:
        return len(self.bits)

    def __len__(self) -> int:
        return len(self.bits)

    def to_int(self) -> int:
        value = 0
        for b in self.bits:
            value = (value << 1) | b
        return value

    @classmethod
    def from_int(cls, value: int, t: int) -> "Message":
        if t < 1:
            raise ValueError(f"bit length must be positive, got {t}")
        if not 0 <= value < (1 << t):
            raise ValueError(f"value {value} does not fit in {t} bits")
        return cls(tuple((value >> (t - 1 - i)) & 1 for i in range(t)))

    @classmethod
    def random(cls, t: int, rng: np.random.Generator) -> "Message":
        if t < 1:
            raise ValueError(f"bit length must be positive, got {t}")
        return cls(tuple(int(b) for b in rng.integers(0, 2, size=t)))


@dataclass(frozen=True)
class EncodingScheme:
    """Which embedding to use, with message length t and grid size n."""

    kind: str
    t: int
    n: int
    basis: str | None = field(default=None)

    def __post_init__(self) -> None:
        if self.kind not in ("map1", "map2"):
            raise ValueError(f"unknown encoding kind {self.kind!r}")
        if self.t < 1:
            raise ValueError(f"message length must be positive, got {self.t}")
        if self.n < 1:
            raise ValueError(f"grid size must be positive, got {self.n}")
        if self.kind == "map1":
            if self.basis not in ("fourier", "haar"):
                raise ValueError(f"map1 basis must be fourier or haar, got {self.basis!r}")
            if self.t > _MAP1_MAX_T:
                raise ValueError(
                    f"map1 decoding enumerates 2^t candidates; t = {self.t} exceeds {_MAP1_MAX_T}"
                )
        else:
            if self.basis is not None:
                raise ValueError("map2 takes no basis")
            if self.n % self.t != 0:
                raise ValueError(
                    f"map2 needs t | n for exact subinterval cells, got t = {self.t}, n = {self.n}"
                )

    @classmethod
    def map1(cls, t: int, n: int, basis: str = "fourier") -> "EncodingScheme":
        return cls(kind="map1", t=t, n=n, basis=basis)

    @classmethod
    def map2(cls, t: int, n: int) -> "EncodingScheme":
        return cls(kind="map2", t=t, n=n)

    @property
    def encoding_id(self) -> int:
        if self.kind == "map2":
            return MAP2_ID
        return MAP1_FOURIER_ID if self.basis == "fourier" else MAP1_HAAR_ID

    @classmethod
    def from_encoding_id(cls, encoding_id: int, t: int, n: int) -> "EncodingScheme":
        if encoding_id == MAP1_FOURIER_ID:
            return cls.map1(t, n, basis="fourier")
        if encoding_id == MAP1_HAAR_ID:
            return cls.map1(t, n, basis="haar")
        if encoding_id == MAP2_ID:
            return cls.map2(t, n)
        raise ValueError(f"unknown encoding id {encoding_id:#04x}")


def map1_capacity(n: int, basis: str) -> int:
    """Largest basis index that stays orthonormal on the n-point grid.

    The trigonometric system loses its top cosine at even n (it vanishes
    at every midpoint), and the dyadic system needs its half-cells to
    align with whole grid cells, which caps it at the largest power of
    two dividing n.
    """
    if basis == "fourier":
        return n - 1 if n % 2 == 0 else n
    if basis == "haar":
        return n & -n
    raise ValueError(f"map1 basis must be fourier or haar, got {basis!r}")


def _fourier_vector(k: int, n: int) -> np.ndarray:
    y = midpoints(n)
    if k == 1:
        return np.ones(n)
    j = k // 2
    if k % 2 == 0:
        return np.sqrt(2.0) * np.cos(2.0 * np.pi * j * y)
    return np.sqrt(2.0) * np.sin(2.0 * np.pi * j * y)


def _haar_vector(k: int, n: int) -> np.ndarray:
    if k == 1:
        return np.ones(n)
    # k - 1 = 2^level + shift enumerates the mother-wavelet dyad.
    level = (k - 1).bit_length() - 1
    shift = (k - 1) - (1 << level)
    y = midpoints(n)
    scaled = (1 << level) * y - shift
    out = np.zeros(n)
    out[(scaled >= 0.0) & (scaled < 0.5)] = 1.0
    out[(scaled >= 0.5) & (scaled < 1.0)] = -1.0
    return np.sqrt(float(1 << level)) * out


def basis_vector(k: int, scheme: EncodingScheme) -> np.ndarray:
    """Samples of the k-th (1-based) Map1 basis function at the midpoints."""
    if scheme.kind != "map1":
        raise ValueError("basis_vector applies to map1 schemes only")
    cap = map1_capacity(scheme.n, scheme.basis)
    if not 1 <= k <= cap:
        raise ValueError(
            f"basis index {k} outside grid capacity [1, {cap}] for n = {scheme.n}"
        )
    if scheme.basis == "fourier":
        return _fourier_vector(k, scheme.n)
    return _haar_vector(k, scheme.n)


def encode_map1(msg: Message, scheme: EncodingScheme) -> GridFunction:
    if msg.t != scheme.t:
        raise ValueError(f"message length {msg.t} != scheme t = {scheme.t}")
    return make_grid_function(basis_vector(msg.to_int() + 1, scheme))


@lru_cache(maxsize=16)
def _decode_table(scheme: EncodingScheme) -> np.ndarray:
    """Columns of candidate basis vectors, reused across decode calls."""
    k_hi = min(1 << scheme.t, map1_capacity(scheme.n, scheme.basis))
    table = np.column_stack([basis_vector(k, scheme) for k in range(1, k_hi + 1)])
    table.flags.writeable = False
    return table


def decode_map1(u: GridFunction, scheme: EncodingScheme) -> Message:
    """Nearest-basis-element decoding by maximal correlation.

    Ties break toward the smaller index, so decoding is a deterministic
    function of the samples.
    """
    if u.n != scheme.n:
        raise ValueError(f"grid size mismatch: {u.n} vs {scheme.n}")
    corr = np.abs(_decode_table(scheme).T @ u.values)
    return Message.from_int(int(np.argmax(corr)), scheme.t)


def encode_map2(msg: Message, scheme: EncodingScheme) -> GridFunction:
    if msg.t != scheme.t:
        raise ValueError(f"message length {msg.t} != scheme t = {scheme.t}")
    cells = scheme.n // scheme.t
    return make_grid_function(np.repeat(np.asarray(msg.bits, dtype=np.float64), cells))


def decode_map2(u: GridFunction, scheme: EncodingScheme) -> Message:
    """Per-subinterval mean thresholded at 1/2."""
    if u.n != scheme.n:
        raise ValueError(f"grid size mismatch: {u.n} vs {scheme.n}")
    means = u.values.reshape(scheme.t, scheme.n // scheme.t).mean(axis=1)
    return Message(tuple(int(m >= 0.5) for m in means))


def encode(msg: Message, scheme: EncodingScheme) -> GridFunction:
    if scheme.kind == "map1":
        return encode_map1(msg, scheme)
    return encode_map2(msg, scheme)


def decode(u: GridFunction, scheme: EncodingScheme) -> Message:
    if scheme.kind == "map1":
        return decode_map1(u, scheme)
    return decode_map2(u, scheme)
