"""Classical half of the variational loop.

``minimize`` drives COBYLA (linear-model trust region, derivative free) and
records every cost evaluation; ``solve`` wires an ansatz, the simulator and
the decoder together for one run.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import minimize as scipy_minimize

from . import ansatz
from .instance import ConflictModel
from .oracle import NOISE_FREE, OracleSolution, RunRecord, attach_quality, decode_and_repair, selection_value
from .qubo import IsingModel, QuboModel
from .simulator import Circuit, expectation, probabilities, run

logger = logging.getLogger(__name__)

ALGORITHMS = ("vqe", "qaoa", "wqaoa")


@dataclass(frozen=True)
class OptimizerConfig:
    """Settings for one optimisation.

    ``max_iterations`` caps cost-function evaluations, not outer iterations.
    """

    max_iterations: int = 100
    initial_step: float = 0.5
    convergence_tol: float = 1e-6
    seed: int = 0

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if not self.initial_step > 0:
            raise ValueError("initial_step must be > 0")
        if not self.convergence_tol > 0:
            raise ValueError("convergence_tol must be > 0")


@dataclass
class OptimizationResult:
    best_params: np.ndarray
    best_cost: float
    iterations_used: int
    cost_history: list[float] = field(default_factory=list)


def initial_parameters(dim: int, seed: int) -> np.ndarray:
    return np.random.default_rng(seed).uniform(-math.pi, math.pi, size=dim)


def minimize(
    cost_fn: Callable[[np.ndarray], float],
    dim: int,
    cfg: OptimizerConfig | None = None,
    x0: np.ndarray | None = None,
) -> OptimizationResult:
    """Minimise ``cost_fn`` over ``R^dim`` with at most ``cfg.max_iterations`` calls.

    Starts from ``x0`` or, if omitted, from angles drawn uniformly in
    ``[-pi, pi]`` with ``cfg.seed``.
    """
    cfg = cfg or OptimizerConfig()
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    x0 = initial_parameters(dim, cfg.seed) if x0 is None else np.asarray(x0, dtype=float)
    if x0.shape != (dim,):
        raise ValueError(f"x0 has shape {x0.shape}, expected ({dim},)")

    history: list[float] = []
    points: list[np.ndarray] = []

    def tracked(x):
        if len(history) >= cfg.max_iterations:
            # COBYLA may ask for one more point than its budget on exit
            return history[-1]
        value = float(cost_fn(np.array(x, dtype=float)))
        history.append(value)
        points.append(np.array(x, dtype=float))
        return value

    scipy_minimize(
        tracked,
        x0,
        method="COBYLA",
        tol=cfg.convergence_tol,
        options={"maxiter": cfg.max_iterations, "rhobeg": cfg.initial_step},
    )
    if not history:
        tracked(x0)
    best = int(np.argmin(history))
    return OptimizationResult(points[best], history[best], len(history), history)


def build_circuit(
    algorithm: str,
    ham: IsingModel,
    q: QuboModel,
    r: int,
    epsilon: float = ansatz.DEFAULT_EPSILON,
    seed: int = 0,
) -> Circuit:
    if algorithm == "vqe":
        return ansatz.build_vqe(ham.n, r)
    if algorithm == "qaoa":
        return ansatz.build_qaoa(ham, r)
    if algorithm == "wqaoa":
        ws = ansatz.solve_relaxation(q, epsilon, seed)
        return ansatz.build_wqaoa(ham, ws, r)
    raise ValueError(f"unknown algorithm {algorithm!r}; choose from {', '.join(ALGORITHMS)}")


def solve(
    algorithm: str,
    ham: IsingModel,
    q: QuboModel,
    conf: ConflictModel,
    r: int = 3,
    cfg: OptimizerConfig | None = None,
    *,
    epsilon: float = ansatz.DEFAULT_EPSILON,
    oracle: OracleSolution | None = None,
) -> RunRecord:
    """One noise-free variational run with exact expectation values."""
    cfg = cfg or OptimizerConfig()
    if not (ham.n == q.n == conf.n):
        raise ValueError(f"size mismatch: ising {ham.n}, qubo {q.n}, conflicts {conf.n}")
    start = time.perf_counter()
    circ = build_circuit(algorithm, ham, q, r, epsilon, cfg.seed)
    energies = ham.diagonal()

    def cost(params):
        return float(probabilities(run(circ, params)) @ energies)

    result = minimize(cost, circ.n_params, cfg)
    final = run(circ, result.best_params)
    selection = decode_and_repair(probabilities(final), q, conf)
    elapsed = time.perf_counter() - start
    logger.debug("%s n=%d seed=%d: cost %.6g after %d evaluations", algorithm, q.n, cfg.seed,
                 result.best_cost, result.iterations_used)

    record = RunRecord(
        algorithm=algorithm,
        n=q.n,
        seed=cfg.seed,
        selection=selection,
        objective_value=selection_value(selection, q),
        wall_time=elapsed,
        iterations=result.iterations_used,
        mode=NOISE_FREE,
        cost_history=result.cost_history,
    )
    if oracle is not None:
        attach_quality(record, q, conf, oracle)
    return record


__all__ = [
    "ALGORITHMS",
    "OptimizationResult",
    "OptimizerConfig",
    "build_circuit",
    "expectation",
    "minimize",
    "solve",
]
