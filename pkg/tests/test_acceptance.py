"""Acceptance gate: one test and one PASS/FAIL summary line per criterion."""

import math
import statistics
import time

import numpy as np
import pytest

from irsbeam.baselines import brute_force, cpp_ratio_bound, sdr_ratio_bound, solve_cpp
from irsbeam.binary import solve_binary_optimal
from irsbeam.cli import main
from irsbeam.core import BINARY, PhaseAlphabet, snr_boost
from irsbeam.kary import apx_ratio_bound, solve_apx, solve_restricted_exact
from irsbeam.sim import ChannelModelConfig, EstimationConfig, random_instance, run_monte_carlo, worst_case_cpp_instance

from conftest import record_acceptance

REL = 1e-9
BIG = 2**62
SEED = 0


def _report(name, ok, detail):
    print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    record_acceptance(name, ok, detail)
    assert ok, detail


def _rel(a, b):
    return abs(a - b) / b


def test_c1_binary_exactness():
    rng = np.random.default_rng(SEED + 1)
    worst, count = 0.0, 0
    t0 = time.perf_counter()
    for n in range(2, 17):
        for _ in range(1000):
            inst = random_instance(rng, n)
            got = snr_boost(inst, solve_binary_optimal(inst))
            want = snr_boost(inst, brute_force(inst, BINARY, BIG))
            worst = max(worst, _rel(got, want))
            count += 1
    dt = time.perf_counter() - t0
    _report("1 binary exactness", worst <= REL, f"{count} instances, N=2..16, max rel err {worst:.2e}, {dt:.1f}s")


@pytest.fixture(scope="module")
def ratio_corpus():
    """Criterion 2's corpus with APX, CPP and brute-force boosts attached."""
    rng = np.random.default_rng(SEED + 2)
    out = []
    for K in (2, 3, 4, 8):
        a = PhaseAlphabet(K)
        for n in range(1, 9):
            for _ in range(500):
                inst = random_instance(rng, n)
                opt = snr_boost(inst, brute_force(inst, a, BIG))
                out.append((K, snr_boost(inst, solve_apx(inst, a)) / opt, snr_boost(inst, solve_cpp(inst, a)) / opt))
    return out


def test_c2_apx_ratio(ratio_corpus):
    worst = {}
    for K, apx, _ in ratio_corpus:
        worst[K] = min(worst.get(K, 1.0), apx)
    ok = all(w >= apx_ratio_bound(K) - REL for K, w in worst.items())
    detail = ", ".join(f"K={K} min {w:.4f} >= {apx_ratio_bound(K):.4f}" for K, w in worst.items())
    _report("2 APX ratio", ok, f"{len(ratio_corpus)} instances; {detail}")


def test_c3_restricted_exact():
    rng = np.random.default_rng(SEED + 3)
    worst, count = 0.0, 0
    for K in (4, 8):
        a = PhaseAlphabet(K)
        for n in range(1, 11):
            for _ in range(200):
                inst = random_instance(rng, n)
                got = snr_boost(inst, solve_restricted_exact(inst, a, BIG))
                want = snr_boost(inst, brute_force(inst, a, BIG))
                worst = max(worst, _rel(got, want))
                count += 1
    _report("3 restricted exact", worst <= REL, f"{count} instances, K in {{4,8}}, N=1..10, max rel err {worst:.2e}")


def test_c4_cpp_bound(ratio_corpus):
    worst = {}
    for K, _, cpp in ratio_corpus:
        worst[K] = min(worst.get(K, 1.0), cpp)
    corpus_ok = all(w >= cpp_ratio_bound(K) - REL for K, w in worst.items())
    n = 8
    inst = worst_case_cpp_instance(4, n, 1e-4 * n * 1.0, 1.0)
    a = PhaseAlphabet(4)
    ratio = snr_boost(inst, solve_cpp(inst, a)) / snr_boost(inst, brute_force(inst, a, BIG))
    ok = corpus_ok and 0.49 <= ratio <= 0.51
    detail = ", ".join(f"K={K} min {w:.4f}" for K, w in worst.items())
    _report("4 CPP bound", ok, f"corpus {detail}; worst case K=4 ratio {ratio:.5f}")


def test_c5_binary_degenerate_instance():
    # beta_n/beta0 = 0.1; CPP's residual is about (1 + N*beta_n*eps/beta0)^2
    inst = worst_case_cpp_instance(2, 20, 1.0, 0.1, eps=1e-3)
    cpp = snr_boost(inst, solve_cpp(inst, BINARY))
    opt = snr_boost(inst, solve_binary_optimal(inst))
    oracle = snr_boost(inst, brute_force(inst, BINARY, BIG))
    ok = cpp <= 1.01 and opt >= 2 * cpp and _rel(opt, oracle) <= REL
    _report("5 K=2 degenerate instance", ok, f"CPP boost {cpp:.6f}, optimal {opt:.4f} (oracle {oracle:.4f})")


def test_c6_bound_table():
    vals_ok = (
        abs(apx_ratio_bound(4) - (1 + math.sqrt(2) / 2) / 2) <= 1e-12
        and abs(apx_ratio_bound(4) - 0.8535533905932737) <= 1e-12
        and abs(cpp_ratio_bound(4) - 0.5) <= 1e-12
        and abs(sdr_ratio_bound(4) - 2 / math.pi) <= 1e-12
    )
    dom = all(apx_ratio_bound(K) > cpp_ratio_bound(K) and apx_ratio_bound(K) > sdr_ratio_bound(K) for K in range(2, 65))
    _report(
        "6 bound table",
        vals_ok and dom,
        f"K=4: apx {apx_ratio_bound(4):.12f}, cpp {cpp_ratio_bound(4):.12f}, sdr {sdr_ratio_bound(4):.12f}; APX dominant on K=2..64: {dom}",
    )


def _median_time(fn, inst, runs=50):
    fn(inst)
    ts = []
    for _ in range(runs):
        t0 = time.perf_counter()
        fn(inst)
        ts.append(time.perf_counter() - t0)
    return statistics.median(ts)


def test_c7_linear_scaling():
    rng = np.random.default_rng(SEED + 7)
    small, large = random_instance(rng, 2**15), random_instance(rng, 2**16)
    solvers = {"binary": solve_binary_optimal, "apx": lambda i: solve_apx(i, PhaseAlphabet(4))}
    ratios = {name: _median_time(fn, large) / _median_time(fn, small) for name, fn in solvers.items()}
    ok = all(1.5 <= r <= 3.0 for r in ratios.values())
    _report("7 linear scaling", ok, ", ".join(f"{k} x{v:.2f}" for k, v in ratios.items()) + " for N 2^15 -> 2^16")


def test_c8a_low_percentile_gap():
    rep = run_monte_carlo(ChannelModelConfig(n_elements=100, seed=SEED), EstimationConfig(), ("binary-optimal", "apx", "cpp"), 1000, 2)
    gap = rep.percentile("binary-optimal", 5) - rep.percentile("cpp", 5)
    _report("8a 5th-percentile gap, K=2 N=100", gap >= 1.0, f"optimal - CPP = {gap:.3f} dB (need >= 1 dB)")


def test_c8b_k4_similar_means():
    rep = run_monte_carlo(ChannelModelConfig(n_elements=200, seed=SEED), EstimationConfig(), ("apx", "cpp"), 1000, 4)
    diff = rep.mean_db("apx") - rep.mean_db("cpp")
    _report("8b K=4 N=200 means", abs(diff) <= 1.0, f"APX - CPP = {diff:.3f} dB")


def test_c8c_noisy_estimates():
    cfg = ChannelModelConfig(n_elements=200, noise_dbm=-50.0, seed=SEED)
    rep = run_monte_carlo(cfg, EstimationConfig("noisy"), ("apx", "cpp"), 1000, 2)
    diff = rep.mean_db("apx") - rep.mean_db("cpp")
    _report("8c noisy estimates at -50 dBm", diff > 0, f"APX - CPP = {diff:.3f} dB (true-channel means)")


def test_c9_cli_determinism(tmp_path, capsys):
    outputs = []
    for run in ("a", "b"):
        mc = tmp_path / run / "mc"
        fig = tmp_path / run / "fig"
        assert main(["montecarlo", "--k", "4", "--n", "64", "--trials", "50", "--seed", "42", "--out", str(mc), "--no-plot"]) == 0
        assert main(["figures", "cdf-k2", "--trials", "20", "--seed", "42", "--n", "50", "--out", str(fig), "--no-plot"]) == 0
        outputs.append(((mc / "montecarlo.csv").read_bytes(), (fig / "cdf-k2.csv").read_bytes()))
    capsys.readouterr()
    _report("9 CLI determinism", outputs[0] == outputs[1], "montecarlo and figures CSVs byte-identical across reruns")
