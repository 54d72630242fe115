"""Command line entry point: ``smpp gen|solve|oracle|bench``.

Exit codes: 0 success, 2 invalid arguments, 3 capacity exceeded, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

from . import bench
from .errors import CapacityError
from .instance import OrbitConfig, build_conflicts, generate_instance, load_instance, save_instance
from .noise import NoiseConfig, solve_noisy
from .optimizer import ALGORITHMS, OptimizerConfig, solve
from .oracle import NOISE_AWARE, NOISE_FREE, brute_force
from .qubo import build_qubo, to_ising

EXIT_OK, EXIT_USAGE, EXIT_CAPACITY, EXIT_IO = 0, 2, 3, 4


def _algos(text: str) -> tuple[str, ...]:
    algos = tuple(a.strip() for a in text.split(",") if a.strip())
    bad = [a for a in algos if a not in ALGORITHMS]
    if bad or not algos:
        raise argparse.ArgumentTypeError(f"choose algorithms from {','.join(ALGORITHMS)}")
    return algos


def _mode(text: str) -> str:
    modes = {"noise-free": NOISE_FREE, "noise-aware": NOISE_AWARE}
    if text not in modes:
        raise argparse.ArgumentTypeError("mode must be noise-free or noise-aware")
    return modes[text]


def _add_noise_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--p1", type=float, help="depolarising probability after 1-qubit gates")
    p.add_argument("--p2", type=float, help="depolarising probability after 2-qubit gates")
    p.add_argument("--p-readout", type=float, help="per-bit readout flip probability")
    p.add_argument("--shots", type=int, help="shots per circuit evaluation")
    p.add_argument("--noise-config", type=Path, help="JSON file with NoiseConfig fields")


def _noise_from_args(args) -> NoiseConfig:
    cfg = NoiseConfig.from_json(args.noise_config) if args.noise_config else NoiseConfig()
    overrides = {k: getattr(args, k) for k in ("p1", "p2", "p_readout", "shots") if getattr(args, k) is not None}
    return replace(cfg, **overrides)


def _orbit_from_args(args) -> OrbitConfig:
    kwargs = {}
    if args.vr is not None:
        kwargs["rotation_speed"] = args.vr
    if args.altitude is not None:
        kwargs["altitude"] = args.altitude
    return OrbitConfig(**kwargs)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="smpp", description="Satellite mission planning with variational quantum algorithms")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a random instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--vr", type=float, help="optics rotation speed [deg/s]")
    p.add_argument("--altitude", type=float, help="orbit altitude [km]")

    p = sub.add_parser("solve", help="solve one instance with a variational algorithm")
    p.add_argument("--instance", type=Path, required=True)
    p.add_argument("--algo", choices=ALGORITHMS, default="qaoa")
    p.add_argument("--reps", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-evals", type=int, default=100)
    p.add_argument("--epsilon", type=float, default=0.25)
    p.add_argument("--noise-aware", action="store_true")
    _add_noise_flags(p)

    p = sub.add_parser("oracle", help="exact optimum by exhaustive search")
    p.add_argument("--instance", type=Path, required=True)

    p = sub.add_parser("bench", help="benchmark sweep with CSV tables and SVG plots")
    p.add_argument("--mode", type=_mode, default="noise-free")
    p.add_argument("--n-min", type=int, default=3)
    p.add_argument("--n-max", type=int, default=8)
    p.add_argument("--algos", type=_algos, default=ALGORITHMS)
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--reps", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--instances-per-n", type=int, default=1)
    p.add_argument("--max-evals", type=int, default=100)
    p.add_argument("--epsilon", type=float, default=0.25)
    p.add_argument("--vr", type=float, help="optics rotation speed [deg/s]")
    p.add_argument("--altitude", type=float, help="orbit altitude [km]")
    p.add_argument("--no-timing", action="store_true", help="write zero wall times for reproducible files")
    _add_noise_flags(p)
    return parser


def _problem(path: Path):
    inst = load_instance(path)
    conf = build_conflicts(inst)
    qubo = build_qubo(conf, inst.values)
    return inst, conf, qubo


def cmd_gen(args) -> None:
    inst = generate_instance(args.n, args.seed, _orbit_from_args(args))
    save_instance(inst, args.out)


def cmd_oracle(args) -> None:
    _, conf, qubo = _problem(args.instance)
    sol = brute_force(qubo, conf)
    print(json.dumps({
        "selection": list(sol.best_x),
        "selected": [i for i, b in enumerate(sol.best_x) if b],
        "value": sol.best_value,
        "evaluations": sol.evaluations,
    }))


def cmd_solve(args) -> None:
    _, conf, qubo = _problem(args.instance)
    ham = to_ising(qubo)
    oracle = brute_force(qubo, conf)
    cfg = OptimizerConfig(max_iterations=args.max_evals, seed=args.seed)
    if args.noise_aware:
        noise = replace(_noise_from_args(args), seed=args.seed)
        rec = solve_noisy(args.algo, ham, qubo, conf, args.reps, cfg, noise, epsilon=args.epsilon, oracle=oracle)
    else:
        rec = solve(args.algo, ham, qubo, conf, args.reps, cfg, epsilon=args.epsilon, oracle=oracle)
    print(json.dumps({
        "algorithm": rec.algorithm,
        "mode": rec.mode,
        "selection": list(rec.selection),
        "selected": [i for i, b in enumerate(rec.selection) if b],
        "objective": rec.objective_value,
        "optimal": rec.optimal,
        "quality": rec.quality,
        "time_s": rec.wall_time,
        "iterations": rec.iterations,
    }))


def cmd_bench(args) -> None:
    plan = bench.BenchmarkPlan(
        n_min=args.n_min,
        n_max=args.n_max,
        algorithms=args.algos,
        repeats=args.repeats,
        reps=args.reps,
        mode=args.mode,
        seed=args.seed,
        output_dir=args.out,
        instances_per_n=args.instances_per_n,
        max_iterations=args.max_evals,
        epsilon=args.epsilon,
        orbit=_orbit_from_args(args),
        noise=_noise_from_args(args),
        record_time=not args.no_timing,
    )
    report = bench.run_benchmark(plan)
    for path in bench.write_report(report, args.out):
        print(path)


COMMANDS = {"gen": cmd_gen, "solve": cmd_solve, "oracle": cmd_oracle, "bench": cmd_bench}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        COMMANDS[args.command](args)
    except CapacityError as exc:
        print(f"smpp: capacity exceeded: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except OSError as exc:
        print(f"smpp: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"smpp: invalid argument: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
