"""Dense statevector simulation for the H/RX/RY/RZ/RZZ/CNOT gate set.

Basis index convention: bit ``i`` of a basis index is the value of qubit
``i`` (qubit 0 is the least significant bit).  Bitstrings produced by this
module list qubit 0 first, so ``"10"`` on two qubits is basis index 1 and
reads directly as the selection ``x = (1, 0)``.

Gate kernels are numba loops that update amplitude pairs in place on
arrays of shape ``(batch, 2**n)``: the partner of index ``i`` for a gate on
qubit ``q`` is ``i | 1 << q``, so no matrix is ever materialised and one
call updates every trajectory of a batch.
Rotation conventions are the half-angle exponentials
``RX(t) = exp(-i t X / 2)``, ``RY``, ``RZ`` likewise and
``RZZ(t) = exp(-i t Z(x)Z / 2)``.
"""

from __future__ import annotations

import cmath
import functools
import math
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numba
import numpy as np

from .errors import CapacityError
from .qubo import IsingModel

MAX_QUBITS = 24

ONE_QUBIT = frozenset({"h", "rx", "ry", "rz"})
TWO_QUBIT = frozenset({"rzz", "cx"})
ROTATIONS = frozenset({"rx", "ry", "rz", "rzz"})


@dataclass(frozen=True)
class Gate:
    """One gate, possibly with a parameterised angle.

    The angle is ``angle + coeff * params[param]`` when ``param`` is set,
    otherwise just ``angle``.
    """

    kind: str
    qubits: tuple[int, ...]
    angle: float = 0.0
    param: int | None = None
    coeff: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        if self.kind in ONE_QUBIT:
            arity = 1
        elif self.kind in TWO_QUBIT:
            arity = 2
        else:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if len(self.qubits) != arity:
            raise ValueError(f"{self.kind} acts on {arity} qubit(s), got {self.qubits}")
        if len(set(self.qubits)) != arity or min(self.qubits) < 0:
            raise ValueError(f"invalid targets {self.qubits} for {self.kind}")

    def bind(self, params: Sequence[float]) -> "Gate":
        if self.param is None:
            return self
        return Gate(self.kind, self.qubits, self.angle + self.coeff * float(params[self.param]))

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "q": list(self.qubits)}
        if self.param is not None:
            out["param"] = self.param
            out["coeff"] = self.coeff
        if self.angle or (self.kind in ROTATIONS and self.param is None):
            out["angle"] = self.angle
        return out


@dataclass(frozen=True)
class Circuit:
    n_qubits: int
    gates: tuple[Gate, ...]
    n_params: int = 0

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            if max(g.qubits) >= self.n_qubits:
                raise ValueError(f"gate {g} exceeds {self.n_qubits} qubits")
            if g.param is not None and not 0 <= g.param < self.n_params:
                raise ValueError(f"gate {g} references a missing parameter")

    def bind(self, params: Sequence[float]) -> list[Gate]:
        params = np.asarray(params, dtype=float)
        if params.shape != (self.n_params,):
            raise ValueError(f"circuit takes {self.n_params} parameters, got {params.size}")
        return [g.bind(params) for g in self.gates]

    def count(self, kind: str) -> int:
        return sum(1 for g in self.gates if g.kind == kind)

    def to_dict(self) -> dict:
        return {
            "n_qubits": self.n_qubits,
            "n_params": self.n_params,
            "gates": [g.to_dict() for g in self.gates],
        }


class StateVector:
    """Amplitudes of an ``n_qubits`` register, owned by a single run."""

    def __init__(self, n_qubits: int, amplitudes: np.ndarray | None = None):
        check_size(n_qubits)
        self.n_qubits = n_qubits
        if amplitudes is None:
            amplitudes = np.zeros(1 << n_qubits, dtype=np.complex128)
            amplitudes[0] = 1.0
        else:
            amplitudes = np.ascontiguousarray(amplitudes, dtype=np.complex128)
            if amplitudes.shape != (1 << n_qubits,):
                raise ValueError(f"expected {1 << n_qubits} amplitudes, got {amplitudes.shape}")
        self.amplitudes = amplitudes

    def copy(self) -> "StateVector":
        return StateVector(self.n_qubits, self.amplitudes.copy())

    def norm_squared(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def __repr__(self):
        return f"StateVector(n_qubits={self.n_qubits})"


def check_size(n_qubits: int) -> None:
    if n_qubits < 1:
        raise ValueError(f"need at least one qubit, got {n_qubits}")
    if n_qubits > MAX_QUBITS:
        raise CapacityError(f"{n_qubits} qubits exceeds the simulator limit of {MAX_QUBITS}")


# ---------------------------------------------------------------------------
# kernels on (batch, 2**n) arrays
# ---------------------------------------------------------------------------


@numba.njit(cache=True, inline="always")
def _insert_zero(k, q):
    return ((k >> q) << (q + 1)) | (k & ((1 << q) - 1))


@numba.njit(cache=True)
def _k_unitary1(amps, q, m00, m01, m10, m11):
    rows, n_states = amps.shape
    bit = 1 << q
    for r in range(rows):
        for k in range(n_states >> 1):
            i0 = _insert_zero(k, q)
            i1 = i0 | bit
            a0 = amps[r, i0]
            a1 = amps[r, i1]
            amps[r, i0] = m00 * a0 + m01 * a1
            amps[r, i1] = m10 * a0 + m11 * a1


@numba.njit(cache=True)
def _k_diag1(amps, q, p0, p1):
    rows, n_states = amps.shape
    bit = 1 << q
    for r in range(rows):
        for k in range(n_states >> 1):
            i0 = _insert_zero(k, q)
            amps[r, i0] *= p0
            amps[r, i0 | bit] *= p1


@numba.njit(cache=True)
def _k_rzz(amps, q1, q2, even, odd):
    rows, n_states = amps.shape
    for r in range(rows):
        for b in range(n_states):
            if ((b >> q1) ^ (b >> q2)) & 1:
                amps[r, b] *= odd
            else:
                amps[r, b] *= even


@numba.njit(cache=True)
def _k_cx(amps, control, target):
    rows, n_states = amps.shape
    lo = min(control, target)
    hi = max(control, target)
    cbit = 1 << control
    tbit = 1 << target
    for r in range(rows):
        for k in range(n_states >> 2):
            i0 = _insert_zero(_insert_zero(k, lo), hi) | cbit
            i1 = i0 | tbit
            t = amps[r, i0]
            amps[r, i0] = amps[r, i1]
            amps[r, i1] = t


@numba.njit(cache=True)
def _k_phase(amps, scale, diag):
    rows, n_states = amps.shape
    for b in range(n_states):
        phi = -scale * diag[b]
        ph = complex(math.cos(phi), math.sin(phi))
        for r in range(rows):
            amps[r, b] *= ph


_INV_SQRT2 = 1.0 / math.sqrt(2.0)
_PAULI = {
    1: (0.0, 1.0, 1.0, 0.0),
    2: (0.0, -1j, 1j, 0.0),
}


def _as_rows(amps: np.ndarray) -> np.ndarray:
    return amps.reshape(-1, amps.shape[-1])


def apply_kernel(amps: np.ndarray, gate: Gate) -> None:
    """Apply a bound gate in place to every row of ``amps``."""
    rows = _as_rows(amps)
    kind, qs = gate.kind, gate.qubits
    if kind == "h":
        s = _INV_SQRT2
        _k_unitary1(rows, qs[0], s + 0j, s + 0j, s + 0j, -s + 0j)
    elif kind == "rx":
        c, s = math.cos(gate.angle / 2), math.sin(gate.angle / 2)
        _k_unitary1(rows, qs[0], c + 0j, -1j * s, -1j * s, c + 0j)
    elif kind == "ry":
        c, s = math.cos(gate.angle / 2), math.sin(gate.angle / 2)
        _k_unitary1(rows, qs[0], c + 0j, -s + 0j, s + 0j, c + 0j)
    elif kind == "rz":
        p0 = cmath.exp(-0.5j * gate.angle)
        _k_diag1(rows, qs[0], p0, p0.conjugate())
    elif kind == "rzz":
        even = cmath.exp(-0.5j * gate.angle)
        _k_rzz(rows, qs[0], qs[1], even, even.conjugate())
    elif kind == "cx":
        _k_cx(rows, qs[0], qs[1])
    else:  # pragma: no cover - Gate validates kinds
        raise ValueError(kind)


def apply_pauli(amps: np.ndarray, q: int, pauli: int) -> None:
    """Apply I (0), X (1), Y (2) or Z (3) on qubit ``q`` in place."""
    rows = _as_rows(amps)
    if pauli == 0:
        return
    if pauli == 3:
        _k_diag1(rows, q, 1.0 + 0j, -1.0 + 0j)
    elif pauli in _PAULI:
        _k_unitary1(rows, q, *(complex(m) for m in _PAULI[pauli]))
    else:
        raise ValueError(f"pauli index must be 0..3, got {pauli}")


def apply_phase(amps: np.ndarray, scale: float, diag: np.ndarray) -> None:
    """Multiply amplitude ``b`` by ``exp(-i * scale * diag[b])`` in place."""
    _k_phase(_as_rows(amps), float(scale), diag)


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------


def apply_gate(state: StateVector, gate: Gate) -> StateVector:
    if gate.param is not None:
        raise ValueError("gate has an unbound parameter; bind it first")
    if max(gate.qubits) >= state.n_qubits:
        raise ValueError(f"gate targets {gate.qubits} out of range for {state.n_qubits} qubits")
    apply_kernel(state.amplitudes, gate)
    return state


@dataclass(frozen=True)
class _FusedPhase:
    param: int
    diag: np.ndarray


def _z_product(qubits: tuple[int, ...], n: int) -> np.ndarray:
    idx = np.arange(1 << n, dtype=np.int64)
    parity = np.zeros(1 << n, dtype=np.int64)
    for q in qubits:
        parity ^= (idx >> q) & 1
    return 1.0 - 2.0 * parity


@functools.lru_cache(maxsize=4)
def compile_circuit(circ: Circuit) -> tuple:
    """Gate list with runs of same-parameter diagonal gates merged.

    A run of two or more ``rz``/``rzz`` gates whose angles are all
    ``coeff * params[p]`` acts as ``exp(-i params[p] D)`` with
    ``D = sum(coeff * Z...Z) / 2``; ``D`` is built once per circuit.
    """
    ops: list = []
    run_gates: list[Gate] = []

    def flush():
        if len(run_gates) >= 2:
            diag = np.zeros(1 << circ.n_qubits)
            for g in run_gates:
                diag += 0.5 * g.coeff * _z_product(g.qubits, circ.n_qubits)
            ops.append(_FusedPhase(run_gates[0].param, diag))
        else:
            ops.extend(run_gates)
        run_gates.clear()

    for g in circ.gates:
        fusable = g.kind in ("rz", "rzz") and g.param is not None and g.angle == 0.0
        if fusable and run_gates and run_gates[0].param == g.param:
            run_gates.append(g)
            continue
        flush()
        if fusable:
            run_gates.append(g)
        else:
            ops.append(g)
    flush()
    return tuple(ops)


def run(circ: Circuit, params: Sequence[float] = ()) -> StateVector:
    """Execute ``circ`` on ``|0...0>`` with the given parameter values."""
    params = np.asarray(params, dtype=float)
    if params.shape != (circ.n_params,):
        raise ValueError(f"circuit takes {circ.n_params} parameters, got {params.size}")
    state = StateVector(circ.n_qubits)
    for op in compile_circuit(circ):
        if isinstance(op, _FusedPhase):
            apply_phase(state.amplitudes, params[op.param], op.diag)
        else:
            apply_kernel(state.amplitudes, op.bind(params))
    return state


def run_gates(circ: Circuit, params: Sequence[float] = ()) -> StateVector:
    """Gate-by-gate execution without any fusion."""
    state = StateVector(circ.n_qubits)
    for g in circ.bind(params):
        apply_kernel(state.amplitudes, g)
    return state


def probabilities(state: StateVector) -> np.ndarray:
    """Probability of each basis index (see the module docstring for ordering)."""
    amps = state.amplitudes
    return amps.real**2 + amps.imag**2


def bitstring(index: int, n: int) -> str:
    return "".join("1" if (index >> i) & 1 else "0" for i in range(n))


def index_of(bits: str | Sequence[int]) -> int:
    return sum(1 << i for i, b in enumerate(bits) if int(b))


def bits_of(index: int, n: int) -> np.ndarray:
    return (index >> np.arange(n)) & 1


def histogram(probs: np.ndarray, n: int, cutoff: float = 0.0) -> dict[str, float]:
    """Map bitstring -> probability for entries above ``cutoff``."""
    return {bitstring(int(b), n): float(probs[b]) for b in np.flatnonzero(probs > cutoff)}


def expectation(state: StateVector, ham: IsingModel) -> float:
    if ham.n != state.n_qubits:
        raise ValueError(f"Hamiltonian on {ham.n} spins, state on {state.n_qubits} qubits")
    return float(probabilities(state) @ ham.diagonal())


def sample(state: StateVector, shots: int, seed: int) -> Counter:
    """Draw ``shots`` i.i.d. measurement outcomes as a Counter of bitstrings."""
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    counts = multinomial_counts(probabilities(state), shots, np.random.default_rng(seed))
    return Counter({bitstring(int(b), state.n_qubits): int(counts[b]) for b in np.flatnonzero(counts)})


def multinomial_counts(probs: np.ndarray, shots: int, rng: np.random.Generator) -> np.ndarray:
    p = np.clip(probs, 0.0, None)
    return rng.multinomial(shots, p / p.sum())
