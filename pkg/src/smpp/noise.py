"""Noise-aware execution by stochastic Pauli trajectories.

After every gate a depolarising error hits the gate's qubits with
probability ``p1`` (one-qubit gates) or ``p2`` (two-qubit gates); the error
is a uniformly chosen non-identity Pauli.  Each shot then measures once and
every output bit flips with probability ``p_readout``.

Shots whose sampled error pattern is identical share one statevector, so a
run costs one simulation per distinct pattern rather than per shot.  The
error-free pattern, by far the most common at realistic rates, is always
simulated first.
"""

from __future__ import annotations

import json
import time
from collections import Counter
from dataclasses import asdict, dataclass, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import CapacityError
from .instance import ConflictModel
from .oracle import NOISE_AWARE, OracleSolution, RunRecord, attach_quality, decode_and_repair, selection_value
from .optimizer import OptimizerConfig, build_circuit, minimize
from .qubo import IsingModel, QuboModel
from .simulator import (
    Circuit,
    Gate,
    apply_kernel,
    apply_pauli,
    bitstring,
    multinomial_counts,
    probabilities,
)

MAX_NOISY_QUBITS = 14
_ROW_CHUNK = 64


@dataclass(frozen=True)
class NoiseConfig:
    p1: float = 0.001
    p2: float = 0.01
    p_readout: float = 0.02
    shots: int = 1024
    seed: int = 0

    def __post_init__(self):
        for name in ("p1", "p2", "p_readout"):
            p = getattr(self, name)
            if not 0.0 <= p < 1.0:
                raise ValueError(f"{name} must lie in [0, 1), got {p}")
        if self.shots < 1:
            raise ValueError(f"shots must be >= 1, got {self.shots}")

    @classmethod
    def from_dict(cls, data: dict) -> "NoiseConfig":
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown noise settings: {', '.join(sorted(unknown))}")
        return cls(**data)

    @classmethod
    def from_json(cls, path: str | Path) -> "NoiseConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def to_dict(self) -> dict:
        return asdict(self)


def _seed_key(seed) -> list[int]:
    return [int(s) for s in np.atleast_1d(seed)]


def _error_patterns(gates: Sequence[Gate], cfg: NoiseConfig, rng: np.random.Generator):
    """Group shots by the (gate index, Pauli) errors sampled for them."""
    two = np.array([len(g.qubits) == 2 for g in gates])
    prob = np.where(two, cfg.p2, cfg.p1)
    choices = np.where(two, 15, 3)
    hit = rng.random((cfg.shots, len(gates))) < prob
    pauli = 1 + (rng.random((cfg.shots, len(gates))) * choices).astype(np.int64)

    groups: dict[tuple, int] = {(): 0}
    for s in range(cfg.shots):
        where = np.flatnonzero(hit[s])
        key = tuple(zip(where.tolist(), pauli[s, where].tolist()))
        groups[key] = groups.get(key, 0) + 1
    return [(k, c) for k, c in groups.items() if c]


def _simulate_patterns(n: int, gates: Sequence[Gate], patterns) -> np.ndarray:
    """Final-state probabilities for each error pattern, one row per pattern."""
    out = np.empty((len(patterns), 1 << n))
    for lo in range(0, len(patterns), _ROW_CHUNK):
        chunk = patterns[lo:lo + _ROW_CHUNK]
        amps = np.zeros((len(chunk), 1 << n), dtype=np.complex128)
        amps[:, 0] = 1.0
        errors: dict[int, list[tuple[int, int]]] = {}
        for row, (key, _) in enumerate(chunk):
            for g, p in key:
                errors.setdefault(g, []).append((row, p))
        for g, gate in enumerate(gates):
            apply_kernel(amps, gate)
            for row, p in errors.get(g, ()):
                sub = amps[row:row + 1]
                if len(gate.qubits) == 1:
                    apply_pauli(sub, gate.qubits[0], p)
                else:
                    apply_pauli(sub, gate.qubits[0], p // 4)
                    apply_pauli(sub, gate.qubits[1], p % 4)
        out[lo:lo + len(chunk)] = amps.real**2 + amps.imag**2
    return out


def noisy_counts(circ: Circuit, params: Sequence[float], cfg: NoiseConfig, seed=None) -> np.ndarray:
    """Shot counts per basis index; ``seed`` (int or int sequence) overrides ``cfg.seed``."""
    n = circ.n_qubits
    if n > MAX_NOISY_QUBITS:
        raise CapacityError(f"noise-aware simulation limited to {MAX_NOISY_QUBITS} qubits, got {n}")
    gates = circ.bind(params)
    seed = cfg.seed if seed is None else seed
    key = _seed_key(seed)
    rng_meas = np.random.default_rng(seed)
    rng_err = np.random.default_rng(key + [1])
    rng_readout = np.random.default_rng(key + [2])

    patterns = _error_patterns(gates, cfg, rng_err)
    probs = _simulate_patterns(n, gates, patterns)
    counts = np.zeros(1 << n, dtype=np.int64)
    for row, (_, shots) in enumerate(patterns):
        counts += multinomial_counts(probs[row], shots, rng_meas)

    if cfg.p_readout > 0:
        outcomes = np.repeat(np.arange(1 << n), counts)
        flips = rng_readout.random((outcomes.size, n)) < cfg.p_readout
        outcomes ^= flips.astype(np.int64) @ (1 << np.arange(n))
        counts = np.bincount(outcomes, minlength=1 << n)
    return counts


def run_noisy(circ: Circuit, params: Sequence[float], cfg: NoiseConfig) -> Counter:
    """Measured bitstring frequencies (qubit 0 first) over ``cfg.shots`` shots."""
    counts = noisy_counts(circ, params, cfg)
    return Counter({bitstring(int(b), circ.n_qubits): int(counts[b]) for b in np.flatnonzero(counts)})


def solve_noisy(
    algorithm: str,
    ham: IsingModel,
    q: QuboModel,
    conf: ConflictModel,
    r: int = 3,
    opt_cfg: OptimizerConfig | None = None,
    noise_cfg: NoiseConfig | None = None,
    *,
    epsilon: float = 0.25,
    oracle: OracleSolution | None = None,
) -> RunRecord:
    """Variational run whose cost is the sampled energy under noise.

    Evaluation ``k`` of the optimiser uses the noise stream
    ``(noise seed, optimizer seed, k)``, so runs are reproducible.
    """
    opt_cfg = opt_cfg or OptimizerConfig()
    noise_cfg = noise_cfg or NoiseConfig()
    if ham.n > MAX_NOISY_QUBITS:
        raise CapacityError(f"noise-aware solve limited to {MAX_NOISY_QUBITS} locations, got {ham.n}")
    if not (ham.n == q.n == conf.n):
        raise ValueError(f"size mismatch: ising {ham.n}, qubo {q.n}, conflicts {conf.n}")

    start = time.perf_counter()
    circ = build_circuit(algorithm, ham, q, r, epsilon, opt_cfg.seed)
    energies = ham.diagonal()
    evaluations = 0

    def cost(params):
        nonlocal evaluations
        counts = noisy_counts(circ, params, noise_cfg, [noise_cfg.seed, opt_cfg.seed, evaluations])
        evaluations += 1
        return float(counts @ energies) / noise_cfg.shots

    result = minimize(cost, circ.n_params, opt_cfg)
    final = noisy_counts(circ, result.best_params, noise_cfg, [noise_cfg.seed, opt_cfg.seed, evaluations])
    selection = decode_and_repair(final, q, conf)
    elapsed = time.perf_counter() - start

    record = RunRecord(
        algorithm=algorithm,
        n=q.n,
        seed=opt_cfg.seed,
        selection=selection,
        objective_value=selection_value(selection, q),
        wall_time=elapsed,
        iterations=result.iterations_used,
        mode=NOISE_AWARE,
        cost_history=result.cost_history,
    )
    if oracle is not None:
        attach_quality(record, q, conf, oracle)
    return record


def noiseless(cfg: NoiseConfig) -> NoiseConfig:
    return replace(cfg, p1=0.0, p2=0.0, p_readout=0.0)


__all__ = ["MAX_NOISY_QUBITS", "NoiseConfig", "noiseless", "noisy_counts", "run_noisy", "solve_noisy",
           "probabilities"]
