"""Domain types and the SNR-boost objective shared by every solver.

A reflected channel ``h_n`` is stored in polar form (magnitude, phase). A beam
is a vector of integer phase indices ``k_n`` into the alphabet
``{w, 2w, ..., Kw}`` with ``w = 2*pi/K``; the realized phase shift is
``k_n * w``. Indices are kept as integers so membership in the alphabet is
exact and two beams can be compared for equality.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

TWO_PI = 2.0 * math.pi


class DimensionMismatchError(ValueError):
    """Beam length does not match the number of reflected channels."""


class BudgetExceededError(RuntimeError):
    """An exhaustive search would evaluate more beams than allowed."""


def wrap_phase(x):
    """Map phases (scalar or array) onto the half-open interval [0, 2*pi)."""
    y = np.mod(x, TWO_PI)
    # np.mod can round a tiny negative input up to exactly 2*pi
    y = np.where(y >= TWO_PI, 0.0, y)
    if np.ndim(y) == 0:
        return float(y)
    return y


def db(x):
    """Linear power ratio to decibels."""
    return 10.0 * np.log10(x)


def dbm_to_watts(p_dbm: float) -> float:
    return 10.0 ** ((p_dbm - 30.0) / 10.0)


@dataclass(frozen=True)
class Channel:
    """One complex channel ``beta * exp(j*alpha)``."""

    beta: float
    alpha: float = 0.0

    def __post_init__(self):
        beta = float(self.beta)
        alpha = float(self.alpha)
        if not math.isfinite(beta) or beta < 0.0:
            raise ValueError(f"channel magnitude must be finite and >= 0, got {self.beta!r}")
        if not math.isfinite(alpha):
            raise ValueError(f"channel phase must be finite, got {self.alpha!r}")
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "alpha", wrap_phase(alpha))

    @classmethod
    def from_complex(cls, z: complex) -> "Channel":
        z = complex(z)
        return cls(abs(z), math.atan2(z.imag, z.real))

    @classmethod
    def from_rect(cls, re: float, im: float) -> "Channel":
        return cls.from_complex(complex(re, im))

    def to_complex(self) -> complex:
        return self.beta * complex(math.cos(self.alpha), math.sin(self.alpha))

    @property
    def rect(self) -> tuple[float, float]:
        z = self.to_complex()
        return (z.real, z.imag)

    def to_dict(self) -> dict:
        return {"beta": self.beta, "alpha": self.alpha}


@dataclass(frozen=True)
class Instance:
    """Background channel ``h0`` plus the ``N`` IRS-reflected channels."""

    h0: Channel
    reflected: tuple[Channel, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "reflected", tuple(self.reflected))
        if self.h0.beta <= 0.0:
            raise ValueError("background channel magnitude must be > 0 (the SNR boost divides by beta0^2)")

    @classmethod
    def from_complex(cls, h0: complex, reflected: Iterable[complex]) -> "Instance":
        h = np.asarray(list(reflected) if not isinstance(reflected, np.ndarray) else reflected, dtype=complex)
        betas = np.abs(h)
        alphas = wrap_phase(np.angle(h)) if h.size else np.zeros(0)
        chans = tuple(Channel(b, a) for b, a in zip(betas.tolist(), np.atleast_1d(alphas).tolist()))
        return cls(Channel.from_complex(h0), chans)

    @classmethod
    def from_polar(cls, beta0: float, alpha0: float, betas: Sequence[float], alphas: Sequence[float]) -> "Instance":
        if len(betas) != len(alphas):
            raise DimensionMismatchError("betas and alphas differ in length")
        return cls(Channel(beta0, alpha0), tuple(Channel(b, a) for b, a in zip(betas, alphas)))

    @property
    def n(self) -> int:
        return len(self.reflected)

    @cached_property
    def betas(self) -> np.ndarray:
        return np.fromiter((c.beta for c in self.reflected), dtype=float, count=self.n)

    @cached_property
    def alphas(self) -> np.ndarray:
        return np.fromiter((c.alpha for c in self.reflected), dtype=float, count=self.n)

    @cached_property
    def gains(self) -> np.ndarray:
        """Reflected channels as a complex array."""
        return self.betas * np.exp(1j * self.alphas)

    # -- JSON interchange -------------------------------------------------

    def to_dict(self) -> dict:
        return {"h0": self.h0.to_dict(), "reflected": [c.to_dict() for c in self.reflected]}

    @classmethod
    def from_dict(cls, data: dict) -> "Instance":
        try:
            h0 = Channel(data["h0"]["beta"], data["h0"]["alpha"])
            refl = tuple(Channel(c["beta"], c["alpha"]) for c in data["reflected"])
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed instance record: {exc}") from exc
        return cls(h0, refl)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "Instance":
        return cls.from_dict(json.loads(text))

    def save(self, path) -> None:
        Path(path).write_text(self.to_json() + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path) -> "Instance":
        return cls.from_json(Path(path).read_text(encoding="utf-8"))


@dataclass(frozen=True)
class PhaseAlphabet:
    """The K-ary phase set ``{w, 2w, ..., Kw}``."""

    k_levels: int

    def __post_init__(self):
        if int(self.k_levels) != self.k_levels or self.k_levels < 2:
            raise ValueError(f"K must be an integer >= 2, got {self.k_levels!r}")
        object.__setattr__(self, "k_levels", int(self.k_levels))

    @property
    def omega(self) -> float:
        return TWO_PI / self.k_levels

    def phase(self, k):
        return np.asarray(k) * self.omega

    def rotations(self, k) -> np.ndarray:
        """``exp(j*k*w)``; reduced mod K first so index K maps to exactly 1."""
        return np.exp(1j * (np.mod(k, self.k_levels) * self.omega))

    @property
    def indices(self) -> range:
        return range(1, self.k_levels + 1)


BINARY = PhaseAlphabet(2)


@dataclass(frozen=True)
class BeamConfig:
    """Per-element phase indices ``k_n`` in ``{1..K}``."""

    k: tuple[int, ...]
    alphabet: PhaseAlphabet = field(default=BINARY)

    def __post_init__(self):
        arr = np.asarray(self.k, dtype=np.int64).reshape(-1)
        if arr.size and (arr.min() < 1 or arr.max() > self.alphabet.k_levels):
            raise ValueError(f"phase indices must lie in 1..{self.alphabet.k_levels}")
        object.__setattr__(self, "k", tuple(arr.tolist()))

    @classmethod
    def from_signs(cls, x) -> "BeamConfig":
        """Binary beam from signs ``x_n`` in {-1, +1} (+1 is theta = 2*pi, -1 is theta = pi)."""
        x = np.asarray(x)
        return cls(tuple(np.where(x > 0, 2, 1).tolist()), BINARY)

    def __len__(self) -> int:
        return len(self.k)

    @cached_property
    def indices(self) -> np.ndarray:
        return np.asarray(self.k, dtype=np.int64)

    @property
    def phases(self) -> np.ndarray:
        return self.indices * self.alphabet.omega

    @property
    def signs(self) -> np.ndarray:
        """``exp(j*theta_n)`` as a real +/-1 vector; only defined for K=2."""
        if self.alphabet.k_levels != 2:
            raise ValueError("signs are only defined for binary beams")
        return np.where(self.indices == 2, 1, -1)

    def rotations(self) -> np.ndarray:
        return self.alphabet.rotations(self.indices)


def _check(inst: Instance, beam: BeamConfig) -> None:
    if len(beam) != inst.n:
        raise DimensionMismatchError(f"beam has {len(beam)} phases but the instance has {inst.n} reflected channels")


def combined_reflection(inst: Instance, beam: BeamConfig) -> complex:
    """``sum_n h_n exp(j*theta_n)`` over the reflected channels."""
    _check(inst, beam)
    if inst.n == 0:
        return 0j
    return complex(np.sum(inst.gains * beam.rotations()))


def snr_boost(inst: Instance, beam: BeamConfig) -> float:
    """SNR with the IRS divided by SNR without it.

    ``|beta0*exp(j*alpha0) + sum_n beta_n*exp(j*(alpha_n + theta_n))|^2 / beta0^2``
    """
    total = inst.h0.to_complex() + combined_reflection(inst, beam)
    return (abs(total) / inst.h0.beta) ** 2


def baseline_snr(inst: Instance, power_dbm: float, noise_dbm: float) -> float:
    """Linear SNR of the direct path alone, ``P*beta0^2/sigma^2``."""
    if not (math.isfinite(power_dbm) and math.isfinite(noise_dbm)):
        raise ValueError("power levels must be finite")
    return dbm_to_watts(power_dbm) * inst.h0.beta**2 / dbm_to_watts(noise_dbm)


def snr(inst: Instance, beam: BeamConfig, power_dbm: float, noise_dbm: float) -> float:
    """Received linear SNR for transmit power and noise power given in dBm."""
    return snr_boost(inst, beam) * baseline_snr(inst, power_dbm, noise_dbm)


def continuous_relaxation(inst: Instance) -> np.ndarray:
    """Unquantized phases ``alpha0 - alpha_n`` that co-phase every channel with h0."""
    return wrap_phase(inst.h0.alpha - inst.alphas) if inst.n else np.zeros(0)


def alignment_bound(inst: Instance) -> float:
    """``((beta0 + sum beta_n) / beta0)^2``, the boost of perfect continuous alignment."""
    return ((inst.h0.beta + float(np.sum(inst.betas))) / inst.h0.beta) ** 2
