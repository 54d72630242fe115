"""Exact reference solutions, feasibility, decoding and result quality."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import CapacityError, InfeasibleSelectionError
from .instance import ConflictModel
from .qubo import QuboModel

MAX_BRUTE_FORCE = 26
_CHUNK_BITS = 18

NOISE_FREE = "noise_free"
NOISE_AWARE = "noise_aware"


@dataclass(frozen=True)
class OracleSolution:
    best_x: tuple[int, ...]
    best_value: float
    evaluations: int


@dataclass
class RunRecord:
    """Outcome of one solve.

    ``quality`` is NaN until an oracle value is attached with
    :func:`attach_quality`.
    """

    algorithm: str
    n: int
    seed: int
    selection: tuple[int, ...]
    objective_value: float
    wall_time: float
    iterations: int
    mode: str = NOISE_FREE
    quality: float = float("nan")
    optimal: float = float("nan")
    cost_history: list[float] = field(default_factory=list, repr=False)


def _reverse_bits(idx: np.ndarray, n: int) -> np.ndarray:
    out = np.zeros_like(idx)
    for i in range(n):
        out |= ((idx >> i) & 1) << (n - 1 - i)
    return out


def brute_force(q: QuboModel, conf: ConflictModel) -> OracleSolution:
    """Scan all ``2**n`` selections for the best conflict-free one.

    Ties go to the lexicographically smallest bit vector ``(x_0, ..., x_{n-1})``.
    """
    n = q.n
    if conf.n != n:
        raise ValueError(f"QUBO has {n} variables, conflict model {conf.n}")
    if n > MAX_BRUTE_FORCE:
        raise CapacityError(f"brute force limited to {MAX_BRUTE_FORCE} locations, got {n}")
    values = np.asarray(q.linear, dtype=float)
    pairs = conf.pairs()
    total = 1 << n
    chunk = min(total, 1 << _CHUNK_BITS)

    best_val, best_key = -np.inf, None
    for start in range(0, total, chunk):
        idx = np.arange(start, start + chunk, dtype=np.int64)
        bits = [(idx >> i) & 1 for i in range(n)]
        val = np.zeros(chunk)
        for i in range(n):
            val += values[i] * bits[i]
        feasible = np.ones(chunk, dtype=bool)
        for i, j in pairs:
            feasible &= (bits[i] & bits[j]) == 0
        val[~feasible] = -np.inf
        top = val.max()
        if top < best_val:
            continue
        key = int(_reverse_bits(idx[val == top], n).min())
        if top > best_val or key < best_key:
            best_val, best_key = top, key
    best_x = tuple((best_key >> (n - 1 - i)) & 1 for i in range(n))
    return OracleSolution(best_x, float(best_val), total)


def violated_pairs(x: Sequence[int], conf: ConflictModel) -> list[tuple[int, int]]:
    return [(i, j) for i, j in conf.pairs() if x[i] and x[j]]


def is_feasible(x: Sequence[int], conf: ConflictModel) -> bool:
    if len(x) != conf.n:
        raise ValueError(f"selection has {len(x)} entries, instance has {conf.n}")
    return not violated_pairs(x, conf)


def most_probable(probs: Mapping[str, float] | np.ndarray, n: int) -> tuple[int, ...]:
    """Peak of a distribution; ties go to the lexicographically smallest bitstring."""
    if isinstance(probs, Mapping):
        if not probs:
            raise ValueError("empty distribution")
        top = max(probs.values())
        best = min(b for b, p in probs.items() if p == top)
        return tuple(int(c) for c in best)
    probs = np.asarray(probs)
    if probs.size == 0:
        raise ValueError("empty distribution")
    tied = np.flatnonzero(probs == probs.max())
    key = int(_reverse_bits(tied, n).min())
    return tuple((key >> (n - 1 - i)) & 1 for i in range(n))


def repair(x: Sequence[int], q: QuboModel, conf: ConflictModel) -> tuple[int, ...]:
    """Greedily drop locations until no conflicting pair remains selected.

    Each step takes the violated pair with the largest rotation-time excess
    ``R - T`` (first in pair order on ties) and drops its lower-valued
    endpoint, or the higher index when values are equal.
    """
    x = list(x)
    excess = conf.rotation_time - conf.transition_time
    while True:
        bad = violated_pairs(x, conf)
        if not bad:
            return tuple(x)
        i, j = max(bad, key=lambda p: excess[p])
        drop = i if q.linear[i] < q.linear[j] else j
        x[drop] = 0


def decode_and_repair(
    probs: Mapping[str, float] | np.ndarray, q: QuboModel, conf: ConflictModel
) -> tuple[int, ...]:
    """Most probable outcome, made conflict-free by :func:`repair`.

    ``probs`` is either a bitstring map (qubit 0 first) or an array indexed by
    basis state.
    """
    return repair(most_probable(probs, q.n), q, conf)


def selection_value(selection: Sequence[int], q: QuboModel) -> float:
    return float(np.asarray(q.linear) @ np.asarray(selection))


def quality(
    selection: Sequence[int], q: QuboModel, conf: ConflictModel, oracle: OracleSolution
) -> float:
    if not is_feasible(selection, conf):
        raise InfeasibleSelectionError(f"selection {tuple(selection)} violates a conflict")
    return selection_value(selection, q) / oracle.best_value


def attach_quality(
    record: RunRecord, q: QuboModel, conf: ConflictModel, oracle: OracleSolution
) -> RunRecord:
    record.quality = quality(record.selection, q, conf, oracle)
    record.optimal = oracle.best_value
    return record
