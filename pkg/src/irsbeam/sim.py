"""Channel generation, estimation error, adversarial instances and Monte Carlo runs.

Randomness comes from numpy's PCG64 bit generator. Trial ``i`` of a campaign
with seed ``s`` draws from ``PCG64(SeedSequence(s, spawn_key=(i,)))``, so each
trial is reproducible on its own and trials can be farmed out to workers in
any order.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from . import algorithms
from .baselines import DEFAULT_BUDGET
from .core import Channel, Instance, PhaseAlphabet, db, dbm_to_watts, snr_boost, wrap_phase

TX_POS = (50.0, -200.0, 20.0)
IRS_POS = (-2.0, -1.0, 0.0)
RX_POS = (0.0, 0.0, 0.0)
IRS_SWEEP = ((-1.0, -1.0, 0.0), (-2.0, -1.0, 0.0), (-2.5, -1.0, 0.0), (-3.0, -1.0, 0.0), (-3.5, -1.0, 0.0), (-4.0, -1.0, 0.0))
PERCENTILES = (1, 5, 50)


def direct_pathloss_db(d: float) -> float:
    """Transmitter-to-receiver pathloss in dB, ``d`` in meters."""
    return 32.6 + 36.7 * math.log10(d)


def reflect_pathloss_db(d: float) -> float:
    """Pathloss in dB of one hop of the IRS path."""
    return 30.0 + 22.0 * math.log10(d)


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(trial,))))


def complex_normal(rng: np.random.Generator, size, scale: float = 1.0) -> np.ndarray:
    """CN(0, scale^2): real and imaginary parts each N(0, scale^2/2)."""
    return scale * (rng.standard_normal(size) + 1j * rng.standard_normal(size)) / math.sqrt(2.0)


@dataclass(frozen=True)
class ChannelModelConfig:
    tx_pos: tuple[float, float, float] = TX_POS
    irs_pos: tuple[float, float, float] = IRS_POS
    rx_pos: tuple[float, float, float] = RX_POS
    n_elements: int = 200
    power_dbm: float = 30.0
    noise_dbm: float = -90.0
    seed: int = 0

    def __post_init__(self):
        for name in ("tx_pos", "irs_pos", "rx_pos"):
            pos = tuple(float(c) for c in getattr(self, name))
            if len(pos) != 3:
                raise ValueError(f"{name} must have three coordinates")
            object.__setattr__(self, name, pos)
        if self.n_elements < 1:
            raise ValueError("the IRS needs at least one element")
        for a, b in (("tx_pos", "rx_pos"), ("tx_pos", "irs_pos"), ("irs_pos", "rx_pos")):
            if math.dist(getattr(self, a), getattr(self, b)) == 0.0:
                raise ValueError(f"{a} and {b} coincide")

    @property
    def pathlosses_db(self) -> tuple[float, float, float]:
        """(direct, tx->IRS, IRS->rx) pathlosses."""
        return (
            direct_pathloss_db(math.dist(self.tx_pos, self.rx_pos)),
            reflect_pathloss_db(math.dist(self.tx_pos, self.irs_pos)),
            reflect_pathloss_db(math.dist(self.irs_pos, self.rx_pos)),
        )

    @property
    def amplitude_ratio(self) -> float:
        """Large-scale ``beta0/beta_n`` (fading excluded)."""
        pl0, pl1, pl2 = self.pathlosses_db
        return 10.0 ** ((pl1 + pl2 - pl0) / 20.0)


def generate_instance(cfg: ChannelModelConfig, rng: np.random.Generator) -> Instance:
    """Rayleigh-faded direct and cascaded channels under the pathloss model."""
    pl0, pl1, pl2 = cfg.pathlosses_db
    h0 = 10.0 ** (-pl0 / 20.0) * complex_normal(rng, 1)[0]
    h = 10.0 ** (-(pl1 + pl2) / 20.0) * complex_normal(rng, cfg.n_elements)
    return Instance.from_complex(h0, h)


@dataclass(frozen=True)
class EstimationConfig:
    """How the optimizer sees the channels.

    ``noisy`` adds CN(0, s^2) to every channel (h0 included) with
    ``s = pilot_noise_scale * sqrt(sigma^2 / P)``.
    """

    mode: str = "perfect"
    pilot_noise_scale: float = 0.01

    def __post_init__(self):
        if self.mode not in ("perfect", "noisy"):
            raise ValueError("estimation mode must be 'perfect' or 'noisy'")
        if not self.pilot_noise_scale >= 0:
            raise ValueError("pilot_noise_scale must be >= 0")


def estimation_std(est: EstimationConfig, noise_dbm: float, power_dbm: float = 30.0) -> float:
    if est.mode == "perfect":
        return 0.0
    return est.pilot_noise_scale * math.sqrt(dbm_to_watts(noise_dbm) / dbm_to_watts(power_dbm))


def estimate_instance(
    true_inst: Instance, est: EstimationConfig, noise_dbm: float, rng: np.random.Generator, power_dbm: float = 30.0
) -> Instance:
    std = estimation_std(est, noise_dbm, power_dbm)
    if std == 0.0:
        return true_inst
    err = complex_normal(rng, true_inst.n + 1, std)
    h0 = true_inst.h0.to_complex() + err[0]
    if h0 == 0:
        h0 = true_inst.h0.to_complex()
    return Instance.from_complex(h0, true_inst.gains + err[1:])


def worst_case_cpp_instance(
    K: int, N: int, beta0: float, beta_n: float, eps: float = 1e-3, alpha0: float = 0.0
) -> Instance:
    """Instance on which closest-point projection loses about a ``cos^2(pi/K)`` factor.

    Two equal halves straddle a rounding boundary of CPP by ``+-eps``: CPP
    rounds them in opposite directions, leaving their rotated images at
    ``alpha0 +- (pi/K - eps)``, while one extra step of ``w`` puts both halves
    within ``2*eps`` of each other. With ``beta0`` small against the reflected
    sum the ratio CPP/optimal tends to ``cos^2(pi/K)``. For K=2 this is the
    instance with half the channels at ``alpha0 - eps + pi/2`` and half at
    ``alpha0 + eps - pi/2``, where CPP gains essentially nothing.
    """
    if N % 2 or N < 2:
        raise ValueError("N must be a positive even number")
    if beta0 <= 0:
        raise ValueError("beta0 must be positive")
    half = N // 2
    if K == 2:
        phases = [alpha0 - eps + math.pi / 2] * half + [alpha0 + eps - math.pi / 2] * half
    else:
        edge = alpha0 - math.pi / K
        phases = [edge + eps] * half + [edge - eps] * half
    return Instance(Channel(beta0, alpha0), tuple(Channel(beta_n, wrap_phase(p)) for p in phases))


def random_instance(rng: np.random.Generator, n: int, spread: tuple[float, float] = (0.02, 2.0)) -> Instance:
    """Test corpus instance: CN(0,1) channels, reflected scale log-uniform in ``spread``."""
    h0 = complex_normal(rng, 1)[0]
    while abs(h0) < 1e-3:
        h0 = complex_normal(rng, 1)[0]
    scale = math.exp(rng.uniform(math.log(spread[0]), math.log(spread[1])))
    return Instance.from_complex(h0, complex_normal(rng, n, scale))


# -- Monte Carlo ------------------------------------------------------------


def nearest_rank(sorted_values: np.ndarray, p: float) -> float:
    """Nearest-rank percentile of already sorted values."""
    n = len(sorted_values)
    rank = max(1, math.ceil(p / 100.0 * n))
    return float(sorted_values[rank - 1])


@dataclass
class MonteCarloReport:
    algorithms: tuple[str, ...]
    boosts_db: dict[str, np.ndarray]
    trials: int
    seed: int
    k_levels: int
    config: dict = field(default_factory=dict)

    def sorted_db(self, alg: str) -> np.ndarray:
        return np.sort(self.boosts_db[alg])

    def percentile(self, alg: str, p: float) -> float:
        return nearest_rank(self.sorted_db(alg), p)

    def percentiles(self, alg: str) -> dict[int, float]:
        return {p: self.percentile(alg, p) for p in PERCENTILES}

    def mean_db(self, alg: str) -> float:
        """Average of the per-trial boosts in dB."""
        return float(np.mean(self.boosts_db[alg]))

    def cdf(self, alg: str) -> tuple[np.ndarray, np.ndarray]:
        x = self.sorted_db(alg)
        return x, np.arange(1, len(x) + 1) / len(x)

    def csv_text(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["trial", "algorithm", "boost_db"])
        for t in range(self.trials):
            for alg in self.algorithms:
                w.writerow([t, alg, f"{self.boosts_db[alg][t]:.4f}"])
        return buf.getvalue()

    def write_csv(self, path) -> None:
        Path(path).write_text(self.csv_text(), encoding="utf-8")

    def summary(self) -> dict:
        return {
            "seed": self.seed,
            "trials": self.trials,
            "k_levels": self.k_levels,
            "config": self.config,
            "algorithms": {
                alg: {
                    "mean_db": round(self.mean_db(alg), 4),
                    "percentiles_db": {str(p): round(v, 4) for p, v in self.percentiles(alg).items()},
                }
                for alg in self.algorithms
            },
        }

    def write_json(self, path) -> None:
        Path(path).write_text(json.dumps(self.summary(), indent=2) + "\n", encoding="utf-8")


def run_trial(
    cfg: ChannelModelConfig,
    est: EstimationConfig,
    names: Sequence[str],
    alphabet: PhaseAlphabet,
    trial: int,
    budget: int = DEFAULT_BUDGET,
) -> dict[str, float]:
    """Boost in dB, evaluated on the true channels, for each algorithm on one trial."""
    rng = trial_rng(cfg.seed, trial)
    truth = generate_instance(cfg, rng)
    seen = estimate_instance(truth, est, cfg.noise_dbm, rng, cfg.power_dbm)
    return {name: float(db(snr_boost(truth, algorithms.run(name, seen, alphabet, budget)))) for name in names}


def _trial_block(args) -> list[dict[str, float]]:
    cfg, est, names, k_levels, budget, trials = args
    alphabet = PhaseAlphabet(k_levels)
    return [run_trial(cfg, est, names, alphabet, t, budget) for t in trials]


def run_monte_carlo(
    cfg: ChannelModelConfig,
    est: EstimationConfig,
    algorithm_names: Sequence[str],
    trials: int,
    k_levels: int = 2,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
) -> MonteCarloReport:
    """Independent channel draws, each solved by every algorithm; deterministic in ``cfg.seed``."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    names = tuple(algorithm_names)
    if not names:
        raise ValueError("no algorithms requested")
    for name in names:
        algorithms.validate(name, k_levels, cfg.n_elements, budget)

    idx = list(range(trials))
    if workers > 1 and trials > 1:
        blocks = [idx[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_trial_block, [(cfg, est, names, k_levels, budget, b) for b in blocks]))
        rows: list = [None] * trials
        for block, part in zip(blocks, parts):
            for t, r in zip(block, part):
                rows[t] = r
    else:
        rows = _trial_block((cfg, est, names, k_levels, budget, idx))

    boosts = {name: np.array([r[name] for r in rows]) for name in names}
    config = asdict(cfg) | {"estimation": asdict(est)}
    return MonteCarloReport(names, boosts, trials, cfg.seed, k_levels, config)
