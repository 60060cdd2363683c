"""Attacks on the noise-masked cipher, honest and otherwise.

The naive attack inverts the ciphertext on the exact singular system and
decodes; the keyed error, amplified by 1/s_k across the spectrum, swamps
the message and decoding degenerates to coin flipping.  Regularized
variants (Tikhonov filtering, truncated SVD) trade that amplification
for bias and do recover low-frequency structure when the noise is small,
which is exactly the scale/cutoff trade-off the experiments chart.

Two structural leaks are also implemented: nonce reuse, where the
difference of two ciphertexts cancels the error exactly, and a
known-plaintext experiment checking that recovered error terms from
chosen queries say nothing about fresh errors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import hso
from .encoding import EncodingScheme, Message, decode, encode
from .grid import GridFunction, make_grid_function, norm
from .noise import ErrorKey
from .symmetric import SymCiphertext, sym_encrypt

__all__ = [
    "Tikhonov",
    "Tsvd",
    "AttackReport",
    "KnownPlaintextReport",
    "bit_accuracy",
    "tikhonov_apply",
    "attack_naive",
    "attack_regularized",
    "error_reuse_diff",
    "decode_difference",
    "known_plaintext_experiment",
]


@dataclass(frozen=True)
class Tikhonov:
    """Filter factors s / (s^2 + alpha)."""

    alpha: float

    def __post_init__(self) -> None:
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")


@dataclass(frozen=True)
class Tsvd:
    """Keep the k largest modes, zero the rest."""

    k: int

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError(f"cutoff must be positive, got {self.k}")


@dataclass(frozen=True)
class AttackReport:
    """What an attack recovered and how far its inversion landed.

    bit_accuracy compares against the true message when one is supplied,
    else None.  residual_norm is the grid distance between the inverted
    ciphertext and the encoding of the reference message (truth when
    given, otherwise the recovered one).
    """

    method: str
    recovered: Message
    bit_accuracy: float | None
    residual_norm: float


@dataclass(frozen=True)
class KnownPlaintextReport:
    """Outcome of the chosen-message error-recovery experiment."""

    queries: int
    all_errors_distinct: bool
    holdout_accuracies: tuple[float, ...]

    @property
    def mean_holdout_accuracy(self) -> float:
        if not self.holdout_accuracies:
            return 0.0
        return float(np.mean(self.holdout_accuracies))


def bit_accuracy(a: Message, b: Message) -> float:
    """Fraction of agreeing bits."""
    if a.t != b.t:
        raise ValueError(f"message lengths differ: {a.t} vs {b.t}")
    agree = sum(int(x == y) for x, y in zip(a.bits, b.bits))
    return agree / a.t


def tikhonov_apply(factors: hso.SVDFactors, v: GridFunction, alpha: float) -> GridFunction:
    """Filtered inversion sum_k s_k/(s_k^2 + alpha) <v, u_k> u_k."""
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if v.n != factors.n:
        raise ValueError(f"grid size mismatch: {v.n} vs {factors.n}")
    s = factors.singular_values
    u = factors.left_vectors
    coeffs = (u.T @ v.values) * s / (s * s + alpha)
    return make_grid_function(u @ coeffs)


def _report(
    method: str,
    inverted: GridFunction,
    scheme: EncodingScheme,
    truth: Message | None,
) -> AttackReport:
    recovered = decode(inverted, scheme)
    reference = truth if truth is not None else recovered
    residual = norm(make_grid_function(inverted.values - encode(reference, scheme).values))
    accuracy = bit_accuracy(recovered, truth) if truth is not None else None
    return AttackReport(
        method=method,
        recovered=recovered,
        bit_accuracy=accuracy,
        residual_norm=residual,
    )


def attack_naive(
    ct: SymCiphertext, factors: hso.SVDFactors, truth: Message | None = None
) -> AttackReport:
    """Invert the raw ciphertext as if there were no error term."""
    if ct.n != factors.n:
        raise ValueError(f"ciphertext grid {ct.n} != factors grid {factors.n}")
    inverted = hso.naive_inverse_apply(factors, ct.body)
    return _report("naive", inverted, ct.scheme(), truth)


def attack_regularized(
    ct: SymCiphertext,
    factors: hso.SVDFactors,
    method: Tikhonov | Tsvd,
    truth: Message | None = None,
) -> AttackReport:
    """Invert with a stabilizing filter instead of the exact inverse."""
    if ct.n != factors.n:
        raise ValueError(f"ciphertext grid {ct.n} != factors grid {factors.n}")
    if isinstance(method, Tikhonov):
        inverted = tikhonov_apply(factors, ct.body, method.alpha)
        label = f"tikhonov:{method.alpha:g}"
    elif isinstance(method, Tsvd):
        if method.k > factors.n:
            raise ValueError(f"cutoff {method.k} exceeds {factors.n} modes")
        inverted = hso.naive_inverse_apply(factors, ct.body, k_max=method.k)
        label = f"tsvd:{method.k}"
    else:
        raise ValueError(f"unknown regularization method {method!r}")
    return _report(label, inverted, ct.scheme(), truth)


def error_reuse_diff(ct1: SymCiphertext, ct2: SymCiphertext) -> GridFunction:
    """Difference of two same-nonce ciphertexts: the error cancels exactly.

    What remains is S(encode(mu1) - encode(mu2)), a noise-free linear
    image of the message difference.
    """
    if ct1.nonce != ct2.nonce:
        raise ValueError("ciphertexts use different nonces; the error does not cancel")
    if ct1.n != ct2.n:
        raise ValueError(f"grid size mismatch: {ct1.n} vs {ct2.n}")
    return make_grid_function(ct1.body.values - ct2.body.values)


def decode_difference(diff: GridFunction, scheme: EncodingScheme) -> tuple[int, ...]:
    """Per-bit message difference in {-1, 0, +1} from a ciphertext difference.

    Inverts the noise-free difference exactly and reads each subinterval
    mean (piecewise-constant scheme) or basis correlation sign pattern.
    Only the piecewise-constant scheme admits a per-bit reading; the
    basis-indexed scheme is rejected.
    """
    if scheme.kind != "map2":
        raise ValueError("per-bit difference decoding needs the subinterval scheme")
    if diff.n != scheme.n:
        raise ValueError(f"grid size mismatch: {diff.n} vs {scheme.n}")
    factors = hso.hso_svd(scheme.n)
    inverted = hso.naive_inverse_apply(factors, diff)
    means = inverted.values.reshape(scheme.t, scheme.n // scheme.t).mean(axis=1)
    return tuple(0 if abs(m) < 0.5 else (1 if m > 0 else -1) for m in means)


def known_plaintext_experiment(
    key: ErrorKey,
    queries: list[Message],
    scheme: EncodingScheme,
    rng: np.random.Generator,
    holdout_trials: int = 100,
) -> KnownPlaintextReport:
    """Recover error terms from chosen messages, then try to reuse them.

    Each query is encrypted under a fresh nonce; knowing the message, the
    attacker recovers E = C - S(encode(mu)) exactly.  The report records
    whether all recovered errors are distinct and how well the first one
    decrypts fresh holdout ciphertexts (at chance level, if the keyed
    derivation does its job).
    """
    if not queries:
        return KnownPlaintextReport(
            queries=0, all_errors_distinct=True, holdout_accuracies=()
        )
    op = hso.build_hso(scheme.n)
    recovered_errors = []
    for msg in queries:
        nonce = rng.bytes(16)
        ct = sym_encrypt(key, msg, scheme, nonce)
        smoothed = hso.apply_operator(op, encode(msg, scheme))
        recovered_errors.append(ct.body.values - smoothed.values)

    seen = {e.tobytes() for e in recovered_errors}
    all_distinct = len(seen) == len(recovered_errors)

    factors = hso.hso_svd(scheme.n)
    predictor = recovered_errors[0]
    accuracies = []
    for _ in range(holdout_trials):
        msg = Message.random(scheme.t, rng)
        ct = sym_encrypt(key, msg, scheme, rng.bytes(16))
        stripped = make_grid_function(ct.body.values - predictor)
        guess = decode(hso.naive_inverse_apply(factors, stripped), scheme)
        accuracies.append(bit_accuracy(guess, msg))

    return KnownPlaintextReport(
        queries=len(queries),
        all_errors_distinct=all_distinct,
        holdout_accuracies=tuple(accuracies),
    )
