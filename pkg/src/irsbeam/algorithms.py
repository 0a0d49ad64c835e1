"""Name -> solver registry used by the Monte Carlo harness and the CLI."""

from __future__ import annotations

from typing import Callable

from .baselines import DEFAULT_BUDGET, brute_force, solve_cpp
from .binary import solve_binary_optimal
from .core import BeamConfig, BudgetExceededError, Instance, PhaseAlphabet
from .kary import solve_apx, solve_restricted_exact

Solver = Callable[[Instance, PhaseAlphabet, int], BeamConfig]

ALGORITHMS: dict[str, Solver] = {
    "binary-optimal": lambda inst, a, budget: solve_binary_optimal(inst),
    "apx": lambda inst, a, budget: solve_apx(inst, a),
    "cpp": lambda inst, a, budget: solve_cpp(inst, a),
    "brute-force": lambda inst, a, budget: brute_force(inst, a, budget),
    "restricted-exact": lambda inst, a, budget: solve_restricted_exact(inst, a, budget),
}


def validate(name: str, k_levels: int, n: int, budget: int = DEFAULT_BUDGET) -> None:
    """Raise before any work is done if ``name`` cannot run at this (K, N)."""
    if name not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {name!r}; choose from {', '.join(ALGORITHMS)}")
    if name == "binary-optimal" and k_levels != 2:
        raise ValueError("binary-optimal requires K=2")
    if name == "brute-force" and k_levels**n > budget:
        raise BudgetExceededError(f"{k_levels}^{n} beams exceed the budget of {budget}")
    if name == "restricted-exact" and 2**n > budget:
        raise BudgetExceededError(f"2^{n} beams exceed the budget of {budget}")


def run(name: str, inst: Instance, alphabet: PhaseAlphabet, budget: int = DEFAULT_BUDGET) -> BeamConfig:
    validate(name, alphabet.k_levels, inst.n, budget)
    return ALGORITHMS[name](inst, alphabet, budget)
