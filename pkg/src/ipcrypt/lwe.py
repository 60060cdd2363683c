"""Finite-dimensional noisy linear systems over Z_q and the dictionary
between them and the operator cipher.

An instance is b = A s + e mod q with uniform A and s and small e.  At
desk scale the secret is recoverable by enumerating Z_q^m and testing
whether the residual stays inside the error bound; the enumeration is
chunked and refuses search spaces beyond ENUMERATION_LIMIT.  The report
at the bottom lines up both worlds aspect by aspect: dimension, data,
solution recovery, and the role of noise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hso import AmplificationReport, DecayClassification

__all__ = [
    "LweParams",
    "LweInstance",
    "AnalogyReport",
    "ENUMERATION_LIMIT",
    "centered",
    "lwe_gen",
    "lwe_brute_force",
    "analogy_report",
]

ENUMERATION_LIMIT = 10**7

_MISSING = "missing"


def _is_prime(q: int) -> bool:
    if q < 2:
        return False
    if q < 4:
        return True
    if q % 2 == 0:
        return False
    f = 3
    while f * f <= q:
        if q % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class LweParams:
    """Modulus q (prime), secret dimension m, sample count n, error bound."""

    q: int
    m: int
    n: int
    error_bound: int

    def __post_init__(self) -> None:
        if not _is_prime(self.q):
            raise ValueError(f"modulus must be prime, got {self.q}")
        if self.m < 1:
            raise ValueError(f"secret dimension must be positive, got {self.m}")
        if self.n < self.m:
            raise ValueError(f"need at least m = {self.m} samples, got {self.n}")
        if not 0 <= self.error_bound < self.q / 4:
            raise ValueError(
                f"error bound must lie in [0, q/4) = [0, {self.q / 4}), got {self.error_bound}"
            )


@dataclass(frozen=True, eq=False)
class LweInstance:
    """A sampled system; stores the witness (secret, error) for checking."""

    params: LweParams
    a_matrix: np.ndarray
    b: np.ndarray
    secret: np.ndarray
    error: np.ndarray

    def __post_init__(self) -> None:
        p = self.params
        a = np.asarray(self.a_matrix, dtype=np.int64)
        b = np.asarray(self.b, dtype=np.int64)
        s = np.asarray(self.secret, dtype=np.int64)
        e = np.asarray(self.error, dtype=np.int64)
        if a.shape != (p.n, p.m):
            raise ValueError(f"sample matrix shape {a.shape} != ({p.n}, {p.m})")
        if b.shape != (p.n,) or s.shape != (p.m,) or e.shape != (p.n,):
            raise ValueError("component shapes do not match the parameters")
        for name, arr in (("a_matrix", a), ("b", b), ("secret", s)):
            if np.any(arr < 0) or np.any(arr >= p.q):
                raise ValueError(f"{name} entries must lie in [0, q)")
        if np.any(np.abs(e) > p.error_bound):
            raise ValueError(f"error entries must be bounded by {p.error_bound}")
        if np.any((a @ s + e - b) % p.q != 0):
            raise ValueError("b != A s + e mod q")
        for name, arr in (("a_matrix", a), ("b", b), ("secret", s), ("error", e)):
            arr = arr.copy()
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)


def centered(x, q: int):
    """Centered representative in (-q/2, q/2]; elementwise on arrays."""
    if q < 2:
        raise ValueError(f"modulus must be at least 2, got {q}")
    r = np.mod(x, q)
    out = np.where(r > q // 2, r - q, r)
    if np.isscalar(x):
        return int(out)
    return out.astype(np.int64)


def lwe_gen(params: LweParams, rng: np.random.Generator) -> LweInstance:
    """Uniform A and s, error uniform on centered integers in [-B, B]."""
    a = rng.integers(0, params.q, size=(params.n, params.m), dtype=np.int64)
    s = rng.integers(0, params.q, size=params.m, dtype=np.int64)
    e = rng.integers(-params.error_bound, params.error_bound + 1, size=params.n, dtype=np.int64)
    b = (a @ s + e) % params.q
    return LweInstance(params=params, a_matrix=a, b=b, secret=s, error=e)


def lwe_brute_force(
    a_matrix: np.ndarray, b: np.ndarray, q: int, error_bound: int
) -> list[tuple[int, ...]]:
    """All candidate secrets whose residual stays inside the error bound.

    Enumerates Z_q^m in ascending lexicographic order, in chunks, and
    keeps s with max_i |centered(b_i - (A s)_i)| <= bound.  Refuses when
    q^m exceeds ENUMERATION_LIMIT.
    """
    a = np.asarray(a_matrix, dtype=np.int64)
    bb = np.asarray(b, dtype=np.int64)
    if a.ndim != 2 or bb.ndim != 1 or a.shape[0] != bb.shape[0]:
        raise ValueError(f"incompatible shapes {a.shape} and {bb.shape}")
    m = a.shape[1]
    total = q**m
    if total > ENUMERATION_LIMIT:
        raise ValueError(
            f"search space q^m = {total} exceeds the enumeration limit {ENUMERATION_LIMIT}"
        )
    # Digit weights make chunk index -> candidate tuple lexicographic.
    weights = q ** np.arange(m - 1, -1, -1, dtype=np.int64)
    found: list[tuple[int, ...]] = []
    chunk = 1 << 16
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        cands = (idx[None, :] // weights[:, None]) % q
        resid = centered(bb[:, None] - a @ cands, q)
        ok = np.flatnonzero(np.max(np.abs(resid), axis=0) <= error_bound)
        found.extend(tuple(int(x) for x in cands[:, j]) for j in ok)
    return found


@dataclass(frozen=True)
class AnalogyReport:
    """Aspect-by-aspect dictionary between the two problem families.

    Every field is optional; absent halves render as explicit "missing"
    markers so a report never silently invents numbers.  All fields are
    primitives, and to_keyvalues / from_keyvalues round-trip losslessly.
    """

    q: int | None = None
    secret_dim: int | None = None
    num_samples: int | None = None
    error_bound: int | None = None
    brute_force_status: str | None = None
    grid_n: int | None = None
    decay_kind: str | None = None
    decay_exponent: float | None = None
    decay_rate: float | None = None
    decay_fit_quality: float | None = None
    amplification_mean: float | None = None
    amplification_max: float | None = None
    noise_scale: float | None = None
    amplification_trials: int | None = None

    _INT_FIELDS = (
        "q",
        "secret_dim",
        "num_samples",
        "error_bound",
        "grid_n",
        "amplification_trials",
    )
    _FLOAT_FIELDS = (
        "decay_exponent",
        "decay_rate",
        "decay_fit_quality",
        "amplification_mean",
        "amplification_max",
        "noise_scale",
    )
    _STR_FIELDS = ("brute_force_status", "decay_kind")

    def rows(self) -> list[tuple[str, str, str]]:
        """(label, finite-dimensional cell, operator cell) for the table."""
        if self.q is not None and self.secret_dim is not None:
            dim_fin = f"secret space Z_{self.q}^{self.secret_dim}"
        else:
            dim_fin = _MISSING
        dim_op = (
            f"function space on [0,1], grid n = {self.grid_n}"
            if self.grid_n is not None
            else _MISSING
        )

        if self.num_samples is not None and self.q is not None:
            data_fin = f"{self.num_samples} noisy samples b = A s + e mod {self.q}"
        else:
            data_fin = _MISSING
        if self.decay_kind is not None:
            if self.decay_exponent is not None:
                law = f"exponent {self.decay_exponent:.3g}"
            elif self.decay_rate is not None:
                law = f"rate {self.decay_rate:.3g}"
            else:
                law = "law unknown"
            data_op = f"smoothed samples, {self.decay_kind} singular decay ({law})"
        else:
            data_op = _MISSING

        sol_fin = (
            f"enumeration: {self.brute_force_status}"
            if self.brute_force_status is not None
            else _MISSING
        )
        sol_op = (
            f"naive inversion amplifies noise x{self.amplification_mean:.3g} (mean)"
            if self.amplification_mean is not None
            else _MISSING
        )

        noise_fin = (
            f"integer error bounded by {self.error_bound}"
            if self.error_bound is not None
            else _MISSING
        )
        noise_op = (
            f"grid error at scale {self.noise_scale:g}"
            if self.noise_scale is not None
            else _MISSING
        )

        return [
            ("Dimension", dim_fin, dim_op),
            ("Data", data_fin, data_op),
            ("Solution", sol_fin, sol_op),
            ("Noise", noise_fin, noise_op),
        ]

    def to_text(self) -> str:
        rows = [("aspect", "finite-dimensional", "operator"), *self.rows()]
        widths = [max(len(r[i]) for r in rows) for i in range(3)]
        lines = [
            "  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip()
            for row in rows
        ]
        return "\n".join(lines) + "\n"

    def to_keyvalues(self) -> str:
        """One key=value line per field; None renders as "missing"."""
        lines = []
        for name in self._INT_FIELDS + self._FLOAT_FIELDS + self._STR_FIELDS:
            value = getattr(self, name)
            if value is None:
                text = _MISSING
            elif name in self._FLOAT_FIELDS:
                text = repr(float(value))
            else:
                text = str(value)
            lines.append(f"{name}={text}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_keyvalues(cls, text: str) -> "AnalogyReport":
        kwargs = {}
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            name, _, value = line.partition("=")
            if name in cls._INT_FIELDS:
                kwargs[name] = None if value == _MISSING else int(value)
            elif name in cls._FLOAT_FIELDS:
                kwargs[name] = None if value == _MISSING else float(value)
            elif name in cls._STR_FIELDS:
                kwargs[name] = None if value == _MISSING else value
            else:
                raise ValueError(f"unknown analogy field {name!r}")
        return cls(**kwargs)


def analogy_report(
    lwe: LweParams | None = None,
    decay: DecayClassification | None = None,
    amplification: AmplificationReport | None = None,
    brute_force_status: str | None = None,
    grid_n: int | None = None,
) -> AnalogyReport:
    """Assemble the dictionary from whichever summaries are at hand."""
    if grid_n is None and amplification is not None:
        grid_n = amplification.n
    return AnalogyReport(
        q=lwe.q if lwe else None,
        secret_dim=lwe.m if lwe else None,
        num_samples=lwe.n if lwe else None,
        error_bound=lwe.error_bound if lwe else None,
        brute_force_status=brute_force_status,
        grid_n=grid_n,
        decay_kind=decay.kind if decay else None,
        decay_exponent=decay.decay_exponent if decay else None,
        decay_rate=decay.decay_rate if decay else None,
        decay_fit_quality=decay.fit_quality if decay else None,
        amplification_mean=amplification.amplification_factor if amplification else None,
        amplification_max=amplification.max_amplification if amplification else None,
        noise_scale=amplification.noise_scale if amplification else None,
        amplification_trials=amplification.trials if amplification else None,
    )
