"""Parameterised circuits for VQE, QAOA and warm-start QAOA.

Parameter layouts:

* VQE: ``n * (r + 1)`` angles; entry ``k * n + q`` drives the RY on qubit
  ``q`` in rotation layer ``k`` (layer 0 is the initial layer).
* QAOA and W-QAOA: ``2 * r`` angles ``(alpha_1, beta_1, ..., alpha_r, beta_r)``;
  ``alpha`` scales the cost layer, ``beta`` the mixer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qubo import IsingModel, QuboModel
from .simulator import Circuit, Gate

DEFAULT_EPSILON = 0.25


def vqe_param_count(n: int, r: int) -> int:
    return n * (r + 1)


def qaoa_param_count(r: int) -> int:
    return 2 * r


def build_vqe(n: int, r: int) -> Circuit:
    """RealAmplitudes-style ansatz with a reverse linear CNOT ladder."""
    if n < 1 or r < 1:
        raise ValueError(f"need n >= 1 and r >= 1, got n={n}, r={r}")
    gates = [Gate("ry", (q,), param=q) for q in range(n)]
    for k in range(1, r + 1):
        gates += [Gate("cx", (c, c + 1)) for c in range(n - 2, -1, -1)]
        gates += [Gate("ry", (q,), param=k * n + q) for q in range(n)]
    return Circuit(n, gates, vqe_param_count(n, r))


def _cost_layer(ham: IsingModel, alpha: int) -> list[Gate]:
    gates = [
        Gate("rz", (i,), param=alpha, coeff=2.0 * float(theta))
        for i, theta in enumerate(ham.linear_terms)
    ]
    gates += [
        Gate("rzz", pair, param=alpha, coeff=2.0 * float(g))
        for pair, g in sorted(ham.couplings.items())
    ]
    return gates


def build_qaoa(ham: IsingModel, r: int) -> Circuit:
    """Hadamard layer, then ``r`` rounds of cost layer and RX mixer.

    The cost layer realises ``exp(-i alpha H)`` for the Ising Hamiltonian
    without its constant offset.
    """
    if r < 1:
        raise ValueError(f"need r >= 1, got {r}")
    n = ham.n
    gates = [Gate("h", (q,)) for q in range(n)]
    for k in range(r):
        gates += _cost_layer(ham, 2 * k)
        gates += [Gate("rx", (q,), param=2 * k + 1, coeff=2.0) for q in range(n)]
    return Circuit(n, gates, qaoa_param_count(r))


@dataclass(frozen=True)
class WarmStart:
    relaxed: np.ndarray
    epsilon: float

    def __post_init__(self):
        if not 0.0 < self.epsilon < 0.5:
            raise ValueError(f"epsilon must lie in (0, 0.5), got {self.epsilon}")
        c = np.asarray(self.relaxed, dtype=float)
        if np.any(c < self.epsilon - 1e-12) or np.any(c > 1.0 - self.epsilon + 1e-12):
            raise ValueError("relaxed values must lie in [epsilon, 1 - epsilon]")
        c.setflags(write=False)
        object.__setattr__(self, "relaxed", c)

    @property
    def n(self) -> int:
        return len(self.relaxed)

    @property
    def init_angles(self) -> np.ndarray:
        """RY angles whose product state has ``P(x_i = 1) = relaxed[i]``."""
        return 2.0 * np.arcsin(np.sqrt(self.relaxed))

    def rounded(self) -> np.ndarray:
        return (self.relaxed > 0.5).astype(int)


def _relaxed_value(q: QuboModel, x: np.ndarray) -> float:
    total = float(q.linear @ x)
    for (i, j), w in q.quadratic.items():
        total += w * x[i] * x[j]
    return total


def solve_relaxation(
    q: QuboModel,
    epsilon: float = DEFAULT_EPSILON,
    seed: int = 0,
    starts: int = 20,
    steps: int = 200,
) -> WarmStart:
    """Maximise the QUBO objective over the box ``[0, 1]^n``.

    The box problem is non-convex (conflict terms are negative), so this runs
    projected gradient ascent from ``starts`` random points with a constant
    step ``1 / L`` (``L`` bounds the gradient's Lipschitz constant) and keeps
    the best end point.  The result is clamped into ``[epsilon, 1 - epsilon]``.
    """
    if not 0.0 < epsilon < 0.5:
        raise ValueError(f"epsilon must lie in (0, 0.5), got {epsilon}")
    n = q.n
    coupling = np.zeros((n, n))
    for (i, j), w in q.quadratic.items():
        coupling[i, j] = coupling[j, i] = w
    lipschitz = float(np.abs(coupling).sum(axis=1).max()) if n else 0.0
    step = 1.0 / max(lipschitz, 1.0)

    rng = np.random.default_rng(seed)
    best_x, best_val = None, -math.inf
    for x in rng.uniform(0.0, 1.0, size=(starts, n)):
        for _ in range(steps):
            x = np.clip(x + step * (q.linear + coupling @ x), 0.0, 1.0)
        val = _relaxed_value(q, x)
        if val > best_val:
            best_x, best_val = x, val
    return WarmStart(np.clip(best_x, epsilon, 1.0 - epsilon), epsilon)


def build_wqaoa(ham: IsingModel, ws: WarmStart, r: int) -> Circuit:
    """Warm-start QAOA: RY product-state preparation and a rotated mixer.

    For each qubit the mixer applies ``RY(-t)``, ``RZ(-2 beta)``, ``RY(t)``
    with ``t`` the warm-start angle, so the prepared product state is an
    eigenstate of the mixer.
    """
    if r < 1:
        raise ValueError(f"need r >= 1, got {r}")
    if ws.n != ham.n:
        raise ValueError(f"warm start has {ws.n} entries for {ham.n} qubits")
    n = ham.n
    angles = [float(t) for t in ws.init_angles]
    gates = [Gate("ry", (q,), angle=angles[q]) for q in range(n)]
    for k in range(r):
        gates += _cost_layer(ham, 2 * k)
        for q in range(n):
            gates += [
                Gate("ry", (q,), angle=-angles[q]),
                Gate("rz", (q,), param=2 * k + 1, coeff=-2.0),
                Gate("ry", (q,), angle=angles[q]),
            ]
    return Circuit(n, gates, qaoa_param_count(r))
