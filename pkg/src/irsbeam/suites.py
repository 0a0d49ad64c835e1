"""Randomized property suites run by ``irsbeam verify``.

Each suite draws its instances from ``seed`` and reports every violation it
finds, so a failing run can be replayed exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .baselines import brute_force, cpp_ratio_bound, solve_cpp
from .binary import solve_binary_optimal
from .core import BINARY, PhaseAlphabet, snr_boost
from .kary import apx_ratio_bound, solve_apx, solve_restricted_exact
from .sim import random_instance, worst_case_cpp_instance

SUITES = ("binary-oracle", "apx-ratio", "restricted-exact", "cpp-bound", "worst-case")
REL_TOL = 1e-9
BIG_BUDGET = 2**62


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    failures: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def _rel_gap(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


def binary_oracle(seed: int, count: int = 1000, n_max: int = 14) -> SuiteResult:
    res = SuiteResult("binary-oracle")
    rng = np.random.default_rng(seed)
    for i in range(count):
        inst = random_instance(rng, int(rng.integers(1, n_max + 1)))
        got = snr_boost(inst, solve_binary_optimal(inst))
        want = snr_boost(inst, brute_force(inst, BINARY, BIG_BUDGET))
        res.checked += 1
        if _rel_gap(got, want) > REL_TOL:
            res.failures.append(f"#{i} N={inst.n}: optimal={got!r} brute={want!r} instance={inst.to_json()}")
    return res


def _ratio_suite(name: str, solver: Callable, bound: Callable[[int], float], seed: int, count: int, n_max: int, ks) -> SuiteResult:
    res = SuiteResult(name)
    rng = np.random.default_rng(seed)
    worst: dict[int, float] = {}
    for k in ks:
        alphabet = PhaseAlphabet(k)
        for i in range(count):
            inst = random_instance(rng, int(rng.integers(1, n_max + 1)))
            got = snr_boost(inst, solver(inst, alphabet))
            opt = snr_boost(inst, brute_force(inst, alphabet, BIG_BUDGET))
            ratio = got / opt
            worst[k] = min(worst.get(k, 1.0), ratio)
            res.checked += 1
            if ratio < bound(k) - REL_TOL:
                res.failures.append(f"K={k} #{i} N={inst.n}: ratio={ratio!r} < {bound(k)!r} instance={inst.to_json()}")
    res.notes = [f"K={k}: worst ratio {w:.6f} (bound {bound(k):.6f})" for k, w in worst.items()]
    return res


def apx_ratio(seed: int, count: int = 200, n_max: int = 8, ks=(2, 3, 4, 8)) -> SuiteResult:
    return _ratio_suite("apx-ratio", solve_apx, apx_ratio_bound, seed, count, n_max, ks)


def cpp_bound(seed: int, count: int = 200, n_max: int = 8, ks=(2, 3, 4, 8)) -> SuiteResult:
    return _ratio_suite("cpp-bound", solve_cpp, cpp_ratio_bound, seed, count, n_max, ks)


def restricted_exact(seed: int, count: int = 100, n_max: int = 10, ks=(4, 8)) -> SuiteResult:
    res = SuiteResult("restricted-exact")
    rng = np.random.default_rng(seed)
    for k in ks:
        alphabet = PhaseAlphabet(k)
        for i in range(count):
            inst = random_instance(rng, int(rng.integers(1, n_max + 1)))
            got = snr_boost(inst, solve_restricted_exact(inst, alphabet, BIG_BUDGET))
            want = snr_boost(inst, brute_force(inst, alphabet, BIG_BUDGET))
            res.checked += 1
            if _rel_gap(got, want) > REL_TOL:
                res.failures.append(f"K={k} #{i} N={inst.n}: restricted={got!r} brute={want!r} instance={inst.to_json()}")
    return res


def worst_case_ratio(k: int, n: int = 8, beta_n: float = 1.0, eps: float = 1e-3, beta0_factor: float = 1e-4) -> tuple[float, float, float]:
    """(CPP boost, optimal boost, ratio) on the adversarial instance with ``beta0 = factor*N*beta_n``."""
    inst = worst_case_cpp_instance(k, n, beta0_factor * n * beta_n, beta_n, eps)
    alphabet = PhaseAlphabet(k)
    cpp = snr_boost(inst, solve_cpp(inst, alphabet))
    opt = snr_boost(inst, brute_force(inst, alphabet, BIG_BUDGET))
    return cpp, opt, cpp / opt


def worst_case(seed: int = 0, count: Optional[int] = None, ks=(3, 4, 8)) -> SuiteResult:
    res = SuiteResult("worst-case")
    for k in ks:
        cpp, opt, ratio = worst_case_ratio(k)
        target = cpp_ratio_bound(k)
        res.checked += 1
        res.notes.append(f"K={k}: CPP/optimal = {ratio:.6f} (cos^2(pi/K) = {target:.6f})")
        if abs(ratio - target) > 0.01:
            res.failures.append(f"K={k}: ratio {ratio!r} not within 0.01 of {target!r}")
    # binary degeneracy: equal magnitudes, beta0 = 1, beta_n = 0.1
    inst = worst_case_cpp_instance(2, 20, 1.0, 0.1, 1e-3)
    cpp = snr_boost(inst, solve_cpp(inst, BINARY))
    opt = snr_boost(inst, solve_binary_optimal(inst))
    res.checked += 1
    res.notes.append(f"K=2 N=20: CPP boost {cpp:.6f}, optimal boost {opt:.6f}")
    if not (cpp <= 1.01 and opt >= 2.0 * cpp):
        res.failures.append(f"K=2: CPP boost {cpp!r}, optimal {opt!r}")
    return res


RUNNERS: dict[str, Callable[..., SuiteResult]] = {
    "binary-oracle": binary_oracle,
    "apx-ratio": apx_ratio,
    "restricted-exact": restricted_exact,
    "cpp-bound": cpp_bound,
    "worst-case": worst_case,
}


def run_suite(name: str, seed: int = 0, count: Optional[int] = None) -> SuiteResult:
    if name not in RUNNERS:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    if count is None or name == "worst-case":
        return RUNNERS[name](seed)
    return RUNNERS[name](seed, count)
