"""Seeded random matrix families built on a portable counter-based generator.

The generator and every family construction are pure functions of
``(family, n, seed)``, so regression corpora can be reproduced exactly in any
language.  The full recipe (constants, mixing function, draw order) is spelled
out in the ``SplitMix64`` docstring and in the README.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

FAMILIES = (
    "ginibre",
    "hermitian",
    "nilpotent-sq-zero",
    "normal",
    "unitary",
    "nilpotent-pairs",
)

PAIR_FAMILIES = ("nilpotent-pairs",)

N_MAX = 64

_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_MASK = (1 << 64) - 1

_GS_ATTEMPTS = 16
_GS_BREAKDOWN = 1e-8


class SamplingError(RuntimeError):
    """Raised when a family construction cannot be completed."""


class SplitMix64:
    """Deterministic 64-bit generator with a counter-based state.

    The k-th raw output (k = 1, 2, ...) is ``mix(seed + k * GAMMA) mod 2^64``
    with GAMMA = 0x9E3779B97F4A7C15 and

        mix(z): z ^= z >> 30; z *= 0xBF58476D1CE4E5B9;
                z ^= z >> 27; z *= 0x94D049BB133111EB;
                z ^= z >> 31

    Uniforms are ``((raw >> 11) + 1) * 2^-53`` in (0, 1].  Gaussians come from
    Box-Muller pairs: raws are consumed two at a time (u1, u2) producing
    ``sqrt(-2 ln u1) * (cos, sin)(2 pi u2)``; the cosine value is emitted
    first.  A standard complex normal consumes one pair: ``(z0 + i z1)/sqrt 2``.
    Scalar and vectorized draws advance the same counter and agree exactly.
    """

    def __init__(self, seed: int):
        self._seed = seed & _MASK
        self._count = 0
        self._gauss_pending: float | None = None

    def raw(self) -> int:
        self._count += 1
        z = (self._seed + self._count * _GAMMA) & _MASK
        z = (z ^ (z >> 30)) * _MIX1 & _MASK
        z = (z ^ (z >> 27)) * _MIX2 & _MASK
        return z ^ (z >> 31)

    def uniform(self) -> float:
        return ((self.raw() >> 11) + 1) * 2.0**-53

    def raws(self, count: int) -> np.ndarray:
        ks = np.arange(self._count + 1, self._count + count + 1, dtype=np.uint64)
        self._count += count
        z = np.uint64(self._seed) + ks * np.uint64(_GAMMA)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
        return z ^ (z >> np.uint64(31))

    def uniforms(self, count: int) -> np.ndarray:
        return ((self.raws(count) >> np.uint64(11)).astype(np.float64) + 1.0) * 2.0**-53

    def gauss(self) -> float:
        if self._gauss_pending is not None:
            z = self._gauss_pending
            self._gauss_pending = None
            return z
        u1 = self.uniform()
        u2 = self.uniform()
        r = math.sqrt(-2.0 * math.log(u1))
        self._gauss_pending = r * math.sin(2.0 * math.pi * u2)
        return r * math.cos(2.0 * math.pi * u2)

    def gaussians(self, count: int) -> np.ndarray:
        out = np.empty(count)
        k = 0
        if self._gauss_pending is not None and count > 0:
            out[0] = self._gauss_pending
            self._gauss_pending = None
            k = 1
        remaining = count - k
        if remaining > 0:
            pairs = (remaining + 1) // 2
            u = self.uniforms(2 * pairs)
            r = np.sqrt(-2.0 * np.log(u[0::2]))
            ang = 2.0 * np.pi * u[1::2]
            z = np.empty(2 * pairs)
            z[0::2] = r * np.cos(ang)
            z[1::2] = r * np.sin(ang)
            out[k:] = z[:remaining]
            if remaining % 2 == 1:
                self._gauss_pending = float(z[remaining])
        return out

    def complex_gaussians(self, count: int) -> np.ndarray:
        g = self.gaussians(2 * count)
        return (g[0::2] + 1j * g[1::2]) / math.sqrt(2.0)


@dataclass(frozen=True)
class SamplerSpec:
    """One family draw: generation is a pure function of these fields."""

    family: str
    n: int
    seed: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; choose from {FAMILIES}")
        if not 1 <= self.n <= N_MAX:
            raise ValueError(f"dimension must be in [1, {N_MAX}], got {self.n}")


def parse_sampler(text: str) -> SamplerSpec:
    """Parse a ``family:n:seed`` selector string."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"sampler spec must be family:n:seed, got {text!r}")
    family, n_s, seed_s = parts
    try:
        n = int(n_s)
        seed = int(seed_s)
    except ValueError as exc:
        raise ValueError(f"bad sampler spec {text!r}: {exc}") from None
    return SamplerSpec(family, n, seed)


def _ginibre(rng: SplitMix64, n: int) -> np.ndarray:
    return rng.complex_gaussians(n * n).reshape(n, n)


def _orthogonalize(y: np.ndarray, x: np.ndarray) -> np.ndarray:
    # two projection passes kill the round-off residual of the first
    for _ in range(2):
        y = y - x * (np.vdot(x, y) / np.vdot(x, x))
    return y


def _nilpotent(rng: SplitMix64, n: int) -> np.ndarray:
    for _ in range(_GS_ATTEMPTS):
        x = rng.complex_gaussians(n)
        y = rng.complex_gaussians(n)
        nx = np.linalg.norm(x)
        if nx < _GS_BREAKDOWN:
            continue
        y = _orthogonalize(y, x)
        if np.linalg.norm(y) < _GS_BREAKDOWN * np.linalg.norm(x):
            continue
        return np.outer(x, y.conj())
    raise SamplingError(f"nilpotent construction failed after {_GS_ATTEMPTS} attempts")


def _unitary(rng: SplitMix64, n: int) -> np.ndarray:
    for _ in range(_GS_ATTEMPTS):
        g = _ginibre(rng, n)
        q = np.empty_like(g)
        ok = True
        for j in range(n):
            v = g[:, j].copy()
            # modified Gram-Schmidt with one re-orthogonalization pass
            for _pass in range(2):
                for i in range(j):
                    v -= q[:, i] * np.vdot(q[:, i], v)
            nv = np.linalg.norm(v)
            if nv < _GS_BREAKDOWN:
                ok = False
                break
            q[:, j] = v / nv
        if ok:
            return q
    raise SamplingError(f"unitary construction failed after {_GS_ATTEMPTS} attempts")


def sample(spec: SamplerSpec):
    """Draw from a family.  Returns a matrix, or a pair for pair families."""
    rng = SplitMix64(spec.seed)
    n = spec.n
    if spec.family == "ginibre":
        return _ginibre(rng, n)
    if spec.family == "hermitian":
        g = _ginibre(rng, n)
        return (g + g.conj().T) / 2.0
    if spec.family == "nilpotent-sq-zero":
        return _nilpotent(rng, n)
    if spec.family == "normal":
        u = _unitary(rng, n)
        d = rng.complex_gaussians(n)
        return u @ np.diag(d) @ u.conj().T
    if spec.family == "unitary":
        return _unitary(rng, n)
    if spec.family == "nilpotent-pairs":
        t = _nilpotent(rng, n)
        return t, t.conj().T
    raise ValueError(f"unknown family {spec.family!r}")


def sample_pair(family: str, n: int, seed: int):
    """Draw a pair (B, C) from a family.

    Pair families produce their intrinsic pair from ``seed``.  Scalar families
    draw two independent samples with seeds ``2*seed`` and ``2*seed + 1``.
    """
    if family in PAIR_FAMILIES:
        return sample(SamplerSpec(family, n, seed))
    b = sample(SamplerSpec(family, n, 2 * seed))
    c = sample(SamplerSpec(family, n, 2 * seed + 1))
    return b, c
