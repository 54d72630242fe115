"""Benchmark sweeps over instance size, algorithm and optimiser seed."""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field
from pathlib import Path
from statistics import fmean

from .errors import CapacityError
from .instance import ConflictModel, OrbitConfig, build_conflicts, generate_instance
from .noise import MAX_NOISY_QUBITS, NoiseConfig, solve_noisy
from .optimizer import ALGORITHMS, OptimizerConfig, solve
from .oracle import NOISE_AWARE, NOISE_FREE, OracleSolution, RunRecord, attach_quality, brute_force
from .qubo import build_qubo, to_ising

logger = logging.getLogger(__name__)

MAX_NOISE_FREE_N = 21
MODES = (NOISE_FREE, NOISE_AWARE)

RECORD_HEADER = ["mode", "algorithm", "n", "seed", "quality", "objective", "optimal", "wall_time_s", "iterations"]
AGGREGATE_HEADER = ["mode", "algorithm", "n", "mean_quality", "mean_wall_time_s"]


@dataclass(frozen=True)
class BenchmarkPlan:
    """What to run.

    One instance per ``n`` (or ``instances_per_n``) is generated with seed
    ``seed + 1000 * k + n``; each algorithm then runs ``repeats`` times with
    optimiser seeds ``seed, seed + 1, ...``.  With ``record_time`` off every
    wall time is written as 0 so output files are byte-reproducible.
    """

    n_min: int = 3
    n_max: int = 8
    algorithms: tuple[str, ...] = ALGORITHMS
    repeats: int = 3
    reps: int = 3
    mode: str = NOISE_FREE
    seed: int = 0
    output_dir: Path | None = None
    instances_per_n: int = 1
    max_iterations: int = 100
    epsilon: float = 0.25
    orbit: OrbitConfig = field(default_factory=OrbitConfig)
    noise: NoiseConfig = field(default_factory=NoiseConfig)
    record_time: bool = True

    def __post_init__(self):
        object.__setattr__(self, "algorithms", tuple(self.algorithms))
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        for algo in self.algorithms:
            if algo not in ALGORITHMS:
                raise ValueError(f"unknown algorithm {algo!r}")
        if not self.algorithms:
            raise ValueError("at least one algorithm is required")
        if not 1 <= self.n_min <= self.n_max:
            raise ValueError(f"need 1 <= n_min <= n_max, got {self.n_min}..{self.n_max}")
        if self.repeats < 1 or self.reps < 1 or self.instances_per_n < 1:
            raise ValueError("repeats, reps and instances_per_n must be >= 1")
        limit = MAX_NOISE_FREE_N if self.mode == NOISE_FREE else MAX_NOISY_QUBITS
        if self.n_max > limit:
            raise CapacityError(f"{self.mode} benchmarks allow at most {limit} locations, got {self.n_max}")

    def instance_seed(self, n: int, k: int = 0) -> int:
        return self.seed + 1000 * k + n


@dataclass
class BenchmarkReport:
    records: list[RunRecord] = field(default_factory=list)
    oracle_calls: int = 0

    def aggregates(self) -> list[dict]:
        """Mean quality and wall time per (mode, algorithm, n), sorted by key."""
        groups: dict[tuple, list[RunRecord]] = {}
        for rec in self.records:
            groups.setdefault((rec.mode, rec.algorithm, rec.n), []).append(rec)
        return [
            {
                "mode": mode,
                "algorithm": algo,
                "n": n,
                "mean_quality": fmean(r.quality for r in recs),
                "mean_wall_time_s": fmean(r.wall_time for r in recs),
            }
            for (mode, algo, n), recs in sorted(groups.items())
        ]

    def modes(self) -> list[str]:
        return sorted({r.mode for r in self.records})


def _prepare(plan: BenchmarkPlan, n: int, k: int):
    inst = generate_instance(n, plan.instance_seed(n, k), plan.orbit)
    conf = build_conflicts(inst)
    qubo = build_qubo(conf, inst.values)
    return conf, qubo, to_ising(qubo)


def _run_one(plan: BenchmarkPlan, algo: str, seed: int, conf: ConflictModel, qubo, ham,
             oracle: OracleSolution) -> RunRecord:
    cfg = OptimizerConfig(max_iterations=plan.max_iterations, seed=seed)
    if plan.mode == NOISE_FREE:
        rec = solve(algo, ham, qubo, conf, plan.reps, cfg, epsilon=plan.epsilon)
    else:
        rec = solve_noisy(algo, ham, qubo, conf, plan.reps, cfg, plan.noise, epsilon=plan.epsilon)
    attach_quality(rec, qubo, conf, oracle)
    if not plan.record_time:
        rec.wall_time = 0.0
    return rec


def run_benchmark(plan: BenchmarkPlan) -> BenchmarkReport:
    report = BenchmarkReport()
    for n in range(plan.n_min, plan.n_max + 1):
        for k in range(plan.instances_per_n):
            conf, qubo, ham = _prepare(plan, n, k)
            oracle = brute_force(qubo, conf)
            report.oracle_calls += 1
            for algo in plan.algorithms:
                for rep in range(plan.repeats):
                    rec = _run_one(plan, algo, plan.seed + rep, conf, qubo, ham, oracle)
                    logger.info("%s %s n=%d seed=%d quality=%.3f time=%.3fs", rec.mode, algo, n,
                                rec.seed, rec.quality, rec.wall_time)
                    report.records.append(rec)
    # stable: instances of the same n keep generation order
    report.records.sort(key=lambda r: (r.mode, r.algorithm, r.n, r.seed))
    return report


def _fmt(x) -> str:
    return repr(float(x)) if isinstance(x, float) else str(x)


def aggregate_path(path: str | Path) -> Path:
    path = Path(path)
    return path.with_name(f"{path.stem}_agg{path.suffix or '.csv'}")


def write_csv(report: BenchmarkReport, path: str | Path) -> tuple[Path, Path]:
    """Write per-run rows to ``path`` and per-group means to ``<stem>_agg.csv``."""
    path = Path(path)
    agg = aggregate_path(path)
    try:
        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(RECORD_HEADER)
            for r in report.records:
                w.writerow([_fmt(v) for v in (r.mode, r.algorithm, r.n, r.seed, r.quality,
                                              r.objective_value, r.optimal, r.wall_time, r.iterations)])
        with agg.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(AGGREGATE_HEADER)
            for row in report.aggregates():
                w.writerow([_fmt(row[k]) for k in AGGREGATE_HEADER])
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write benchmark CSV: {exc.strerror}", str(exc.filename or path)) from exc
    return path, agg


def read_records(path: str | Path) -> list[dict]:
    with Path(path).open(newline="") as fh:
        return list(csv.DictReader(fh))


def write_report(report: BenchmarkReport, out_dir: str | Path) -> list[Path]:
    """CSV tables and SVG figures for every mode in ``report``."""
    from .plotting import write_plots

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    for mode in report.modes() or [NOISE_FREE]:
        sub = BenchmarkReport([r for r in report.records if r.mode == mode], report.oracle_calls)
        written += write_csv(sub, out_dir / f"{mode}.csv")
    if report.records:
        written += write_plots(report, out_dir)
    return written

