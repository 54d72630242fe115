import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import make_problem
from oracles import basis_energies, dense_gate, dense_run
from smpp.errors import CapacityError
from smpp.simulator import (
    Circuit,
    Gate,
    StateVector,
    apply_gate,
    bitstring,
    expectation,
    histogram,
    index_of,
    probabilities,
    run,
    run_gates,
    sample,
)

KINDS = ("h", "rx", "ry", "rz", "rzz", "cx")


def random_gate(rng, n):
    kind = KINDS[rng.integers(len(KINDS))] if n > 1 else KINDS[rng.integers(4)]
    arity = 2 if kind in ("rzz", "cx") else 1
    qubits = tuple(int(q) for q in rng.choice(n, size=arity, replace=False))
    angle = float(rng.uniform(-2 * math.pi, 2 * math.pi)) if kind not in ("h", "cx") else 0.0
    return Gate(kind, qubits, angle)


def random_state(rng, n):
    amps = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return StateVector(n, amps / np.linalg.norm(amps))


def test_hadamard_on_zero():
    s = apply_gate(StateVector(1), Gate("h", (0,)))
    assert np.allclose(s.amplitudes, [1 / math.sqrt(2)] * 2, atol=1e-15)


def test_ry_pi_flips():
    s = apply_gate(StateVector(1), Gate("ry", (0,), math.pi))
    assert abs(s.amplitudes[1]) ** 2 == pytest.approx(1.0, abs=1e-15)


def test_ry_prepares_probability():
    s = apply_gate(StateVector(1), Gate("ry", (0,), 2 * math.asin(math.sqrt(0.3))))
    assert histogram(probabilities(s), 1) == pytest.approx({"0": 0.7, "1": 0.3}, abs=1e-10)


def test_rz_keeps_probabilities_of_basis_states():
    for b in range(8):
        amps = np.zeros(8, dtype=complex)
        amps[b] = 1
        s = apply_gate(StateVector(3, amps), Gate("rz", (1,), 0.7))
        assert probabilities(s)[b] == pytest.approx(1.0, abs=1e-15)


def test_empty_circuit_is_zero_state():
    s = run(Circuit(3, []))
    assert histogram(probabilities(s), 3) == {"000": 1.0}


def test_hh_uniform():
    s = run(Circuit(2, [Gate("h", (0,)), Gate("h", (1,))]))
    assert histogram(probabilities(s), 2) == pytest.approx({k: 0.25 for k in ("00", "10", "01", "11")}, abs=1e-15)


def test_bit_order_convention():
    # X on qubit 0 of 3 -> basis index 1 -> bitstring with qubit 0 first
    s = run(Circuit(3, [Gate("rx", (0,), math.pi)]))
    assert int(np.argmax(probabilities(s))) == 1
    assert bitstring(1, 3) == "100"
    assert index_of("100") == 1 and index_of([0, 0, 1]) == 4


def test_parameter_count_mismatch():
    circ = Circuit(1, [Gate("ry", (0,), param=0)], n_params=1)
    with pytest.raises(ValueError):
        run(circ, [])
    with pytest.raises(ValueError):
        run(circ, [1.0, 2.0])


def test_gate_validation():
    with pytest.raises(ValueError):
        Gate("rzz", (1, 1))
    with pytest.raises(ValueError):
        Gate("foo", (0,))
    with pytest.raises(ValueError):
        apply_gate(StateVector(2), Gate("h", (2,)))
    with pytest.raises(ValueError):
        apply_gate(StateVector(2), Gate("ry", (0,), param=0))
    with pytest.raises(ValueError):
        Circuit(2, [Gate("cx", (0, 3))])


def test_capacity_limit():
    with pytest.raises(CapacityError):
        StateVector(25)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_kernels_match_dense_oracle(n):
    rng = np.random.default_rng(100 + n)
    worst = 0.0
    for _ in range(1000 // 6 + 1):
        g = random_gate(rng, n)
        s = random_state(rng, n)
        expected = dense_gate(g.kind, g.qubits, g.angle, n) @ s.amplitudes
        worst = max(worst, float(np.abs(apply_gate(s, g).amplitudes - expected).max()))
    assert worst < 1e-12


@settings(max_examples=30, deadline=None)
@given(n=st.integers(1, 6), seed=st.integers(0, 2**31))
def test_random_sequences_match_dense_and_keep_norm(n, seed):
    rng = np.random.default_rng(seed)
    gates = [random_gate(rng, n) for _ in range(100)]
    s = run(Circuit(n, gates))
    assert abs(s.norm_squared() - 1) < 1e-10
    expected = dense_run([(g.kind, g.qubits, g.angle) for g in gates], n)
    assert np.abs(s.amplitudes - expected).max() < 1e-10


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**31))
def test_inverse_property(seed):
    rng = np.random.default_rng(seed)
    n = 4
    s0 = random_state(rng, n)
    g = random_gate(rng, n)
    s = apply_gate(s0.copy(), g)
    inverse = g if g.kind in ("h", "cx") else Gate(g.kind, g.qubits, -g.angle)
    s = apply_gate(s, inverse)
    assert abs(np.vdot(s0.amplitudes, s.amplitudes)) ** 2 == pytest.approx(1.0, abs=1e-10)


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**31), kind=st.sampled_from(["rz", "rzz"]))
def test_diagonal_gates_keep_probabilities(seed, kind):
    rng = np.random.default_rng(seed)
    s = random_state(rng, 5)
    before = probabilities(s).copy()
    qubits = tuple(int(q) for q in rng.choice(5, size=1 if kind == "rz" else 2, replace=False))
    apply_gate(s, Gate(kind, qubits, float(rng.uniform(-7, 7))))
    assert np.allclose(probabilities(s), before, atol=1e-14)


def test_probabilities_sum_to_one():
    rng = np.random.default_rng(5)
    s = run(Circuit(6, [random_gate(rng, 6) for _ in range(60)]))
    assert probabilities(s).sum() == pytest.approx(1.0, abs=1e-10)


def test_expectation_examples(ex1):
    assert expectation(StateVector(5), ex1.ham) == 0.0
    amps = np.zeros(32, dtype=complex)
    amps[index_of([0, 1, 0, 1, 1])] = 1
    assert expectation(StateVector(5, amps), ex1.ham) == pytest.approx(-15.0, abs=1e-12)
    uniform = run(Circuit(5, [Gate("h", (q,)) for q in range(5)]))
    energies = basis_energies(ex1.ham.linear_terms, ex1.ham.couplings, ex1.ham.offset, 5)
    assert expectation(uniform, ex1.ham) == pytest.approx(energies.mean(), abs=1e-12)
    with pytest.raises(ValueError):
        expectation(StateVector(4), ex1.ham)


@settings(max_examples=30, deadline=None)
@given(n=st.integers(1, 10), seed=st.integers(0, 10_000))
def test_expectation_within_energy_range(n, seed):
    p = make_problem(n, seed)
    rng = np.random.default_rng(seed)
    s = random_state(rng, n)
    energies = basis_energies(p.ham.linear_terms, p.ham.couplings, p.ham.offset, n)
    e = expectation(s, p.ham)
    assert energies.min() - 1e-9 <= e <= energies.max() + 1e-9


def test_fused_run_matches_gate_by_gate():
    from smpp.ansatz import build_qaoa

    p = make_problem(7, 3)
    circ = build_qaoa(p.ham, 3)
    params = np.random.default_rng(0).uniform(-3, 3, circ.n_params)
    assert np.abs(run(circ, params).amplitudes - run_gates(circ, params).amplitudes).max() < 1e-12


def test_sample_basis_state():
    amps = np.zeros(4, dtype=complex)
    amps[2] = 1
    assert sample(StateVector(2, amps), 50, seed=1) == {"01": 50}


def test_sample_uniform_frequencies():
    s = run(Circuit(2, [Gate("h", (0,)), Gate("h", (1,))]))
    counts = sample(s, 100_000, seed=11)
    assert sum(counts.values()) == 100_000
    for k in ("00", "01", "10", "11"):
        assert counts[k] / 100_000 == pytest.approx(0.25, abs=0.01)


def test_sample_deterministic():
    s = run(Circuit(3, [Gate("h", (q,)) for q in range(3)]))
    assert sample(s, 1000, seed=4) == sample(s, 1000, seed=4)
    with pytest.raises(ValueError):
        sample(s, 0, seed=4)


def test_circuit_dump():
    circ = Circuit(2, [Gate("ry", (0,), param=0), Gate("cx", (0, 1)), Gate("rz", (1,), 0.5)], n_params=1)
    d = circ.to_dict()
    assert d["gates"][0] == {"kind": "ry", "q": [0], "param": 0, "coeff": 1.0}
    assert d["gates"][1] == {"kind": "cx", "q": [0, 1]}
    assert d["gates"][2] == {"kind": "rz", "q": [1], "angle": 0.5}
