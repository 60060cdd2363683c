"""Noise-masked operator cipher: C = S(encode(mu)) + E.

Encryption pushes the encoded message through the smoothing operator and
adds a small keyed error; the operator buries the message in the flat
tail of its spectrum and the error makes naive un-smoothing blow up for
anyone without the key.  The key holder regenerates E from (key, nonce),
subtracts it, inverts on the exact singular system, and decodes.

Nonces exist so one key can encrypt many messages: reusing a nonce
reuses the error, and the difference of two such ciphertexts leaks the
difference of the smoothed messages (see the attacks module).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import hso
from .encoding import EncodingScheme, Message, decode, encode
from .grid import GridFunction, make_grid_function
from .noise import NONCE_BYTES, CENTERED_BINOMIAL, ErrorKey, ErrorParams, derive_error
from .noise import keygen as _noise_keygen

__all__ = [
    "SymCiphertext",
    "recommended_error_params",
    "RECOMMENDED_N",
    "RECOMMENDED_SCALE",
    "sym_keygen",
    "sym_encrypt",
    "sym_decrypt",
]

RECOMMENDED_N = 256
RECOMMENDED_SCALE = 0.5


def recommended_error_params(n: int = RECOMMENDED_N, scale: float = RECOMMENDED_SCALE) -> ErrorParams:
    """Default working point: centered binomial eta = 2 at half-integer scale."""
    return ErrorParams(n=n, scale=scale, distribution=CENTERED_BINOMIAL, eta=2)


@dataclass(frozen=True, eq=False)
class SymCiphertext:
    """Self-describing ciphertext: grid body plus decode header."""

    n: int
    t: int
    encoding_id: int
    nonce: bytes
    body: GridFunction

    def __post_init__(self) -> None:
        if self.body.n != self.n:
            raise ValueError(f"body grid size {self.body.n} != header n = {self.n}")
        if len(self.nonce) != NONCE_BYTES:
            raise ValueError(f"nonce must be {NONCE_BYTES} bytes, got {len(self.nonce)}")
        # Validates the id and its compatibility with (t, n).
        self.scheme()

    def scheme(self) -> EncodingScheme:
        return EncodingScheme.from_encoding_id(self.encoding_id, self.t, self.n)


def sym_keygen(params: ErrorParams, rng: np.random.Generator) -> ErrorKey:
    return _noise_keygen(params, rng)


def sym_encrypt(
    key: ErrorKey,
    msg: Message,
    scheme: EncodingScheme,
    nonce: bytes,
    *,
    error_override: GridFunction | None = None,
) -> SymCiphertext:
    """C = S(encode(msg)) + derive_error(key, nonce).

    error_override substitutes the derived error and exists for
    experiments that need a chosen or reused error term; normal callers
    never pass it.
    """
    if scheme.n != key.params.n:
        raise ValueError(f"scheme grid {scheme.n} != key grid {key.params.n}")
    op = hso.build_hso(scheme.n)
    smoothed = hso.apply_operator(op, encode(msg, scheme))
    if error_override is None:
        error = derive_error(key, nonce)
    else:
        if error_override.n != scheme.n:
            raise ValueError(
                f"override error grid {error_override.n} != scheme grid {scheme.n}"
            )
        error = error_override
    body = make_grid_function(smoothed.values + error.values)
    return SymCiphertext(
        n=scheme.n,
        t=scheme.t,
        encoding_id=scheme.encoding_id,
        nonce=bytes(nonce),
        body=body,
    )


def sym_decrypt(key: ErrorKey, ct: SymCiphertext) -> Message:
    """Subtract the regenerated error, invert exactly, decode."""
    if ct.n != key.params.n:
        raise ValueError(f"ciphertext grid {ct.n} != key grid {key.params.n}")
    error = derive_error(key, ct.nonce)
    clean = make_grid_function(ct.body.values - error.values)
    factors = hso.hso_svd(ct.n)
    recovered = hso.naive_inverse_apply(factors, clean)
    return decode(recovered, ct.scheme())
