"""K-ary beamforming by sectorization around the background channel.

Four sectors of width w/2 surround ``arg(h0)``::

    S_i = [alpha0 + (2-i)*w/2, alpha0 + (3-i)*w/2],   i = 1..4

The optimal beam puts every rotated channel ``h_n exp(j*theta_n)`` inside
three consecutive sectors (S1..S3 or S2..S4), which leaves at most two
admissible phases per element. Restricting to two consecutive sectors leaves
exactly one, giving at most three candidate beams and a guaranteed fraction
``(1 + cos(pi/K))/2`` of the optimum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import TWO_PI, BeamConfig, BudgetExceededError, Instance, PhaseAlphabet, snr_boost

DEFAULT_BUDGET = 2**24
_SNAP = 1e-12


@dataclass(frozen=True)
class Sector:
    index: int
    start: float
    end: float

    @property
    def width(self) -> float:
        return self.end - self.start


def sectors(alpha0: float, alphabet: PhaseAlphabet) -> tuple[Sector, ...]:
    half = alphabet.omega / 2.0
    return tuple(Sector(i, alpha0 + (2 - i) * half, alpha0 + (3 - i) * half) for i in range(1, 5))


@dataclass(frozen=True)
class Arc:
    """Angular interval ``[start, start + width)`` on the unit circle."""

    start: float
    width: float

    def contains(self, phase, closed: bool = False, tol: float = 0.0):
        rel = np.mod(np.asarray(phase) - self.start + tol, TWO_PI)
        return rel <= self.width + 2 * tol if closed else rel < self.width


def sector_pair(alpha0: float, alphabet: PhaseAlphabet, i: int) -> Arc:
    """``S_i U S_{i+1}`` for i in 1..3; width w."""
    if i not in (1, 2, 3):
        raise ValueError("sector pair index must be 1, 2 or 3")
    return Arc(alpha0 + (1 - i) * alphabet.omega / 2.0, alphabet.omega)


def sector_triple(alpha0: float, alphabet: PhaseAlphabet, i: int) -> Arc:
    """``S_i U S_{i+1} U S_{i+2}`` for i in 1..2; width 3w/2."""
    if i not in (1, 2):
        raise ValueError("sector triple index must be 1 or 2")
    return Arc(alpha0 - i * alphabet.omega / 2.0, 1.5 * alphabet.omega)


def rotation_indices(alphas: np.ndarray, arc_start: float, alphabet: PhaseAlphabet) -> np.ndarray:
    """For each phase, the unique k with ``alpha + k*w`` in ``[arc_start, arc_start + w)``.

    Landing within 1e-12 rad of the closed end snaps to it, so floating-point
    residue cannot push an exact boundary hit onto the next index.
    """
    K = alphabet.k_levels
    t = np.mod(arc_start - np.asarray(alphas, dtype=float), TWO_PI) / alphabet.omega
    j = np.rint(t)
    k = np.where(np.abs(t - j) <= _SNAP * K, j, np.ceil(t)).astype(np.int64) % K
    return np.where(k == 0, K, k)


def rotate_into_arc(channel, arc: Arc, alphabet: PhaseAlphabet) -> int:
    """Phase index that rotates ``channel`` into the half-open arc (width must be w)."""
    if not math.isclose(arc.width, alphabet.omega, rel_tol=1e-12):
        raise ValueError("arc width must equal the phase spacing")
    if channel.beta <= 0:
        raise ValueError("a zero channel has no phase to rotate")
    return int(rotation_indices(np.array([channel.alpha]), arc.start, alphabet)[0])


@dataclass(frozen=True)
class CandidateSet:
    beams: tuple[BeamConfig, ...]
    arcs: tuple[Arc, ...]
    boosts: tuple[float, ...]

    def best(self) -> BeamConfig:
        return self.beams[int(np.argmax(self.boosts))]


def apx_candidates(inst: Instance, alphabet: PhaseAlphabet) -> CandidateSet:
    """One beam per sector pair: every rotated channel lands in ``S_i U S_{i+1}``."""
    alpha0 = inst.h0.alpha
    zero = inst.betas == 0.0
    h0 = inst.h0.to_complex()
    beams, arcs, boosts = [], [], []
    for i in (1, 2, 3):
        arc = sector_pair(alpha0, alphabet, i)
        k = rotation_indices(inst.alphas, arc.start, alphabet)
        k[zero] = alphabet.k_levels
        total = h0 + np.sum(inst.gains * alphabet.rotations(k))
        beams.append(BeamConfig(k, alphabet))
        arcs.append(arc)
        boosts.append((abs(total) / inst.h0.beta) ** 2)
    return CandidateSet(tuple(beams), tuple(arcs), tuple(boosts))


def solve_apx(inst: Instance, alphabet: PhaseAlphabet) -> BeamConfig:
    """Best of the (at most three) sector-pair beams; O(N)."""
    if inst.n == 0:
        return BeamConfig((), alphabet)
    return apx_candidates(inst, alphabet).best()


def apx_ratio_bound(K: int) -> float:
    """Guaranteed fraction of the optimum reached by :func:`solve_apx`."""
    if K < 2:
        raise ValueError("K must be >= 2")
    return (1.0 + math.cos(math.pi / K)) / 2.0


def admissible_indices(alpha: float, arc: Arc, alphabet: PhaseAlphabet, tol: float = 1e-9) -> list[int]:
    """All k placing ``alpha + k*w`` in the closed arc (one or two for width 3w/2)."""
    ks = np.arange(1, alphabet.k_levels + 1)
    hit = arc.contains(alpha + ks * alphabet.omega, closed=True, tol=tol)
    return ks[hit].tolist()


def _best_over_product(h0: complex, choices: list[list[int]], gains: np.ndarray, alphabet: PhaseAlphabet, chunk: int = 1 << 16):
    """Exhaustive max of ``|h0 + sum_n h_n exp(j*k_n*w)|`` with k_n drawn from ``choices[n]``.

    Elements with a single choice are folded into the constant; the rest pick
    option 0 or 1, enumerated as bit patterns in chunks.
    """
    n = len(choices)
    base = np.array([c[0] for c in choices], dtype=np.int64)
    two = [i for i in range(n) if len(choices[i]) > 1]
    alt = np.array([choices[i][1] for i in two], dtype=np.int64)
    const = h0 + np.sum(gains * alphabet.rotations(base)) if n else h0
    delta = gains[two] * (alphabet.rotations(alt) - alphabet.rotations(base[two])) if two else np.zeros(0, complex)
    m = len(two)
    best_val, best_code = -1.0, 0
    shifts = np.arange(m, dtype=np.int64)
    for lo in range(0, 1 << m, chunk):
        codes = np.arange(lo, min(lo + chunk, 1 << m), dtype=np.int64)
        bits = (codes[:, None] >> shifts[None, :]) & 1
        vals = np.abs(const + bits @ delta) if m else np.abs(np.full(codes.size, const))
        i = int(np.argmax(vals))
        if vals[i] > best_val:
            best_val, best_code = float(vals[i]), int(codes[i])
    k = base.copy()
    for bit, i in enumerate(two):
        if (best_code >> bit) & 1:
            k[i] = alt[bit]
    return k, best_val


def solve_restricted_exact(inst: Instance, alphabet: PhaseAlphabet, budget: int = DEFAULT_BUDGET) -> BeamConfig:
    """Exact optimum by searching only beams confined to S1..S3 or S2..S4."""
    if 2**inst.n > budget:
        raise BudgetExceededError(f"2^{inst.n} beams exceed the budget of {budget}")
    if inst.n == 0:
        return BeamConfig((), alphabet)
    h0 = inst.h0.to_complex()
    K = alphabet.k_levels
    best = None
    for i in (1, 2):
        arc = sector_triple(inst.h0.alpha, alphabet, i)
        choices = [
            [K] if beta == 0.0 else admissible_indices(alpha, arc, alphabet)
            for beta, alpha in zip(inst.betas.tolist(), inst.alphas.tolist())
        ]
        k, val = _best_over_product(h0, choices, inst.gains, alphabet)
        if best is None or val > best[1]:
            best = (k, val)
    return BeamConfig(best[0], alphabet)
