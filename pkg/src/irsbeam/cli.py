"""Command line front end: ``irsbeam {solve,figures,verify,montecarlo}``.

Exit codes: 0 success, 1 property failure, 2 usage or parse error,
3 search budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import algorithms
from .baselines import DEFAULT_BUDGET
from .core import BudgetExceededError, Instance, PhaseAlphabet, db, snr_boost
from .figures import FIGURE_IDS, write_figure
from .sim import ChannelModelConfig, EstimationConfig, run_monte_carlo
from .suites import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

log = logging.getLogger("irsbeam")


def sig9(x: float) -> float:
    return float(f"{x:.9g}")


def _positive_int(text: str) -> int:
    v = int(text, 0)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _k_levels(text: str) -> int:
    v = int(text)
    if v < 2:
        raise argparse.ArgumentTypeError("K must be >= 2")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="irsbeam", description="Discrete IRS phase-shift optimization")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="optimize one instance read from a JSON file")
    p.add_argument("instance", type=Path, help="instance JSON file")
    p.add_argument("--k", type=_k_levels, default=2)
    p.add_argument("--algorithm", choices=list(algorithms.ALGORITHMS), default="apx")
    p.add_argument("--budget", type=_positive_int, default=DEFAULT_BUDGET)

    p = sub.add_parser("figures", help="write the data (and a PNG) for one figure")
    p.add_argument("figure_id", choices=FIGURE_IDS)
    p.add_argument("--out", type=Path, default=Path("figures"))
    p.add_argument("--seed", type=lambda s: int(s, 0), default=0)
    p.add_argument("--trials", type=_positive_int, default=1000)
    p.add_argument("--n", type=_positive_int, default=None, help="override the element count(s)")
    p.add_argument("--workers", type=_positive_int, default=1)
    p.add_argument("--no-plot", action="store_true", help="skip the PNG")

    p = sub.add_parser("verify", help="run a randomized property suite")
    p.add_argument("suite", choices=SUITES)
    p.add_argument("--seed", type=lambda s: int(s, 0), default=0)
    p.add_argument("--trials", type=_positive_int, default=None, help="instances per suite (or per K)")

    p = sub.add_parser("montecarlo", help="run a Monte Carlo campaign")
    p.add_argument("--k", type=_k_levels, default=2)
    p.add_argument("--n", type=_positive_int, default=200)
    p.add_argument("--seed", type=lambda s: int(s, 0), default=0)
    p.add_argument("--trials", type=_positive_int, default=1000)
    p.add_argument("--out", type=Path, default=Path("montecarlo"))
    p.add_argument("--algorithm", action="append", choices=list(algorithms.ALGORITHMS), help="repeatable; default apx and cpp")
    p.add_argument("--budget", type=_positive_int, default=DEFAULT_BUDGET)
    p.add_argument("--power-dbm", type=float, default=30.0)
    p.add_argument("--noise-dbm", type=float, default=-90.0)
    p.add_argument("--estimation", choices=("perfect", "noisy"), default="perfect")
    p.add_argument("--pilot-noise-scale", type=float, default=EstimationConfig.pilot_noise_scale)
    p.add_argument("--irs-pos", type=float, nargs=3, default=None, metavar=("X", "Y", "Z"))
    p.add_argument("--workers", type=_positive_int, default=1)
    p.add_argument("--no-plot", action="store_true")
    return parser


def cmd_solve(args) -> int:
    try:
        inst = Instance.load(args.instance)
    except (OSError, ValueError) as exc:
        print(f"error: cannot read instance: {exc}", file=sys.stderr)
        return EXIT_USAGE
    alphabet = PhaseAlphabet(args.k)
    try:
        algorithms.validate(args.algorithm, args.k, inst.n, args.budget)
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    beam = algorithms.run(args.algorithm, inst, alphabet, args.budget)
    boost = snr_boost(inst, beam)
    record = {
        "algorithm": args.algorithm,
        "k_levels": args.k,
        "n": inst.n,
        "indices": list(beam.k),
        "phases": [sig9(t) for t in beam.phases.tolist()],
        "boost": sig9(boost),
        "boost_db": sig9(float(db(boost))),
    }
    print(json.dumps(record))
    return EXIT_OK


def cmd_figures(args) -> int:
    paths = write_figure(args.figure_id, args.out, args.seed, args.trials, args.n, plot=not args.no_plot, workers=args.workers)
    for p in paths:
        print(p)
    return EXIT_OK


def cmd_verify(args) -> int:
    res = run_suite(args.suite, args.seed, args.trials)
    for note in res.notes:
        print(note)
    for f in res.failures:
        print(f"COUNTEREXAMPLE {f}")
    status = "PASS" if res.passed else "FAIL"
    print(f"{status} {res.name}: {res.checked} checks, {len(res.failures)} violations")
    return EXIT_OK if res.passed else EXIT_FAIL


def cmd_montecarlo(args) -> int:
    names = args.algorithm or ["apx", "cpp"]
    kwargs = dict(n_elements=args.n, power_dbm=args.power_dbm, noise_dbm=args.noise_dbm, seed=args.seed)
    if args.irs_pos is not None:
        kwargs["irs_pos"] = tuple(args.irs_pos)
    try:
        cfg = ChannelModelConfig(**kwargs)
        est = EstimationConfig(args.estimation, args.pilot_noise_scale)
        for name in names:
            algorithms.validate(name, args.k, args.n, args.budget)
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    rep = run_monte_carlo(cfg, est, names, args.trials, args.k, args.budget, args.workers)
    args.out.mkdir(parents=True, exist_ok=True)
    rep.write_csv(args.out / "montecarlo.csv")
    rep.write_json(args.out / "montecarlo.json")
    if not args.no_plot:
        from .plotting import plot_cdfs

        plot_cdfs(rep.boosts_db, args.out / "montecarlo_cdf.png", title=f"K={args.k}, N={args.n}")
    for alg in rep.algorithms:
        pct = ", ".join(f"p{p}={v:.4f}" for p, v in rep.percentiles(alg).items())
        print(f"{alg}: mean={rep.mean_db(alg):.4f} dB, {pct}")
    return EXIT_OK


COMMANDS = {"solve": cmd_solve, "figures": cmd_figures, "verify": cmd_verify, "montecarlo": cmd_montecarlo}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    return COMMANDS[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
