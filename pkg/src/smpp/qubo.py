"""Penalised QUBO for location selection and its Ising form.

Sense conventions: a :class:`QuboModel` is *maximised* over bits
``x in {0,1}^n``; an :class:`IsingModel` is *minimised* over spins
``z in {-1,+1}^n`` with ``x_i = (1 - z_i) / 2`` (``z = -1`` means selected),
so that ``energy(z(x)) == -objective(x)``.
"""

from __future__ import annotations

import functools
import json
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .instance import ConflictModel


@dataclass(frozen=True)
class QuboModel:
    linear: np.ndarray
    quadratic: Mapping[tuple[int, int], float]
    penalty: float

    @property
    def n(self) -> int:
        return len(self.linear)

    @property
    def values(self) -> np.ndarray:
        return self.linear

    def to_dict(self) -> dict:
        return {
            "linear": [float(v) for v in self.linear],
            "quadratic": [[i, j, float(w)] for (i, j), w in sorted(self.quadratic.items())],
            "offset": 0.0,
            "penalty": float(self.penalty),
            "sense": "maximize",
        }


@dataclass(frozen=True)
class IsingModel:
    linear_terms: np.ndarray
    couplings: Mapping[tuple[int, int], float]
    offset: float

    @property
    def n(self) -> int:
        return len(self.linear_terms)

    def energy(self, z: Sequence[int]) -> float:
        z = np.asarray(z, dtype=float)
        if z.shape != (self.n,):
            raise ValueError(f"expected {self.n} spins, got shape {z.shape}")
        e = self.offset + float(self.linear_terms @ z)
        for (i, j), g in self.couplings.items():
            e += g * z[i] * z[j]
        return e

    def diagonal(self) -> np.ndarray:
        """Energy of every computational basis state.

        Entry ``b`` holds the energy of basis index ``b``, where bit ``i`` of
        ``b`` is qubit ``i`` and a set bit means ``z_i = -1``.  Computed once
        and cached; the returned array is read-only.
        """
        return self._diagonal

    @functools.cached_property
    def _diagonal(self) -> np.ndarray:
        n = self.n
        idx = np.arange(1 << n, dtype=np.int64)
        spins = [1.0 - 2.0 * ((idx >> i) & 1) for i in range(n)]
        out = np.full(1 << n, float(self.offset))
        for i, theta in enumerate(self.linear_terms):
            if theta:
                out += theta * spins[i]
        for (i, j), g in self.couplings.items():
            out += g * (spins[i] * spins[j])
        out.setflags(write=False)
        return out

    def to_dict(self) -> dict:
        return {
            "linear": [float(v) for v in self.linear_terms],
            "quadratic": [[i, j, float(g)] for (i, j), g in sorted(self.couplings.items())],
            "offset": float(self.offset),
            "sense": "minimize",
        }


def default_penalty(values: Sequence[float]) -> float:
    return 1.0 + float(np.max(values))


def build_qubo(conf: ConflictModel, values: Sequence[float], penalty: float | None = None) -> QuboModel:
    values = np.asarray(values, dtype=float)
    if values.shape != (conf.n,):
        raise ValueError(f"got {values.size} values for {conf.n} locations")
    if np.any(values < 1):
        raise ValueError("location values must be >= 1")
    p = default_penalty(values) if penalty is None else float(penalty)
    quadratic = {pair: -p for pair in conf.pairs()}
    values.setflags(write=False)
    return QuboModel(values, quadratic, p)


def objective(q: QuboModel, x: Sequence[int]) -> float:
    x = np.asarray(x)
    if x.shape != (q.n,):
        raise ValueError(f"expected {q.n} bits, got shape {x.shape}")
    total = float(q.linear @ x)
    for (i, j), w in q.quadratic.items():
        if x[i] and x[j]:
            total += w
    return total


def to_ising(q: QuboModel) -> IsingModel:
    """Substitute ``x = (1 - z) / 2`` into ``-objective`` and collect terms."""
    theta = np.zeros(q.n)
    offset = 0.0
    couplings: dict[tuple[int, int], float] = {}
    for i, v in enumerate(q.linear):
        # -v x = -v/2 + (v/2) z
        theta[i] += v / 2.0
        offset -= v / 2.0
    for (i, j), w in sorted(q.quadratic.items()):
        # -w x_i x_j = -w/4 (1 - z_i - z_j + z_i z_j)
        offset -= w / 4.0
        theta[i] += w / 4.0
        theta[j] += w / 4.0
        couplings[(i, j)] = couplings.get((i, j), 0.0) - w / 4.0
    theta.setflags(write=False)
    return IsingModel(theta, couplings, offset)


def bits_to_spins(x: Sequence[int]) -> np.ndarray:
    return 1 - 2 * np.asarray(x, dtype=int)


def dumps(model: QuboModel | IsingModel) -> str:
    return json.dumps(model.to_dict())
