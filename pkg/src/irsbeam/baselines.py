"""Reference algorithms: closest-point projection, exhaustive search, ratio bounds."""

from __future__ import annotations

import math

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .core import BeamConfig, BudgetExceededError, Instance, PhaseAlphabet, continuous_relaxation

DEFAULT_BUDGET = 2**24


def solve_cpp(inst: Instance, alphabet: PhaseAlphabet) -> BeamConfig:
    """Round each co-phasing angle ``alpha0 - alpha_n`` to the nearest alphabet phase.

    Distance is circular, so a relaxed phase just below 2*pi rounds to
    ``K*w = 2*pi`` rather than to ``(K-1)*w``. Exact midpoints go to the
    smaller index.
    """
    K, omega = alphabet.k_levels, alphabet.omega
    if inst.n == 0:
        return BeamConfig((), alphabet)
    theta = continuous_relaxation(inst)
    lo = np.floor(theta / omega)
    d_lo = theta - lo * omega
    d_hi = (lo + 1) * omega - theta
    k_lo = np.where(lo == 0, K, lo).astype(np.int64)
    k_hi = (lo + 1).astype(np.int64)
    k = np.where(d_lo < d_hi, k_lo, np.where(d_hi < d_lo, k_hi, np.minimum(k_lo, k_hi)))
    return BeamConfig(k, alphabet)


def _lex_sums(gains: np.ndarray, alphabet: PhaseAlphabet) -> np.ndarray:
    """``sum_n h_n exp(j*k_n*w)`` over all index vectors, in lexicographic order."""
    rot = alphabet.rotations(np.arange(1, alphabet.k_levels + 1))
    s = np.zeros(1, dtype=complex)
    for h in gains:
        s = (s[:, None] + h * rot[None, :]).ravel()
    return s


def _extreme_points(s: np.ndarray) -> np.ndarray:
    """Indices (first occurrences) of the convex-hull vertices of the points ``s``.

    ``|z + s_b|^2`` is convex in ``s_b``, so its maximum over the set is always
    attained at a hull vertex; the other points can be dropped without loss.
    """
    pts = np.column_stack((s.real, s.imag))
    uniq, first = np.unique(pts, axis=0, return_index=True)
    if len(uniq) < 4:
        return np.sort(first)
    try:
        hull = ConvexHull(uniq)
    except (QhullError, ValueError):
        return np.sort(first)
    return np.sort(first[hull.vertices])


def _decode(code: int, width: int, K: int) -> list[int]:
    digits = []
    for _ in range(width):
        code, d = divmod(code, K)
        digits.append(d + 1)
    return digits[::-1]


def brute_force(inst: Instance, alphabet: PhaseAlphabet, budget: int = DEFAULT_BUDGET, chunk: int = 1 << 20) -> BeamConfig:
    """Exact argmax over all ``K^N`` beams.

    Meet in the middle: the elements are split in two halves, each half's
    ``K^(N/2)`` partial sums enumerated, and the second half reduced to its
    hull vertices before pairing. Ties go to the lexicographically smallest
    index vector.
    """
    K, N = alphabet.k_levels, inst.n
    if K**N > budget:
        raise BudgetExceededError(f"{K}^{N} beams exceed the budget of {budget}")
    if N == 0:
        return BeamConfig((), alphabet)
    na = (N + 1) // 2
    sa = inst.h0.to_complex() + _lex_sums(inst.gains[:na], alphabet)
    sb = _lex_sums(inst.gains[na:], alphabet)
    cand = _extreme_points(sb)
    sb_c = sb[cand]
    rows = max(1, chunk // len(cand))
    best_val, best = -1.0, (0, 0)
    for lo in range(0, len(sa), rows):
        vals = np.abs(sa[lo : lo + rows, None] + sb_c[None, :])
        i = int(np.argmax(vals))
        a, b = divmod(i, len(cand))
        if vals[a, b] > best_val:
            best_val, best = float(vals[a, b]), (lo + a, int(cand[b]))
    k = _decode(best[0], na, K) + _decode(best[1], N - na, K)
    return BeamConfig(tuple(k), alphabet)


def cpp_ratio_bound(K: int) -> float:
    """``cos^2(pi/K)``; worst-case fraction of the optimum reached by CPP."""
    if K < 2:
        raise ValueError("K must be >= 2")
    return math.cos(math.pi / K) ** 2


def sdr_ratio_bound(K: int) -> float:
    """``(K*sin(pi/K))^2 / (4*pi)``, the semidefinite-relaxation guarantee."""
    if K < 2:
        raise ValueError("K must be >= 2")
    return (K * math.sin(math.pi / K)) ** 2 / (4.0 * math.pi)
