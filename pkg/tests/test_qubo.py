import itertools
import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import make_problem
from oracles import all_bits, branch_and_prune, energy_by_spins
from smpp.instance import ConflictModel, build_conflicts, generate_instance
from smpp.qubo import bits_to_spins, build_qubo, default_penalty, dumps, objective, to_ising


def _conflicts(n, pairs):
    c = np.zeros((n, n), dtype=bool)
    for i, j in pairs:
        c[i, j] = c[j, i] = True
    zeros = np.zeros((n, n))
    return ConflictModel(zeros, zeros, c)


def test_no_conflicts_sum():
    q = build_qubo(_conflicts(2, []), [1, 2])
    best = max(all_bits(2), key=lambda x: objective(q, x))
    assert best == (1, 1) and objective(q, best) == 3


def test_example_one_objective(ex1):
    q = ex1.qubo
    assert q.penalty == 8
    assert q.quadratic == {(0, 1): -8.0, (1, 2): -8.0}
    assert objective(q, [0, 0, 0, 0, 0]) == 0
    assert objective(q, [0, 1, 0, 1, 1]) == 15
    assert objective(q, [1, 1, 0, 1, 1]) == 9
    best = max(all_bits(5), key=lambda x: objective(q, x))
    assert best == (0, 1, 0, 1, 1)


def test_build_qubo_validation():
    conf = _conflicts(2, [])
    with pytest.raises(ValueError):
        build_qubo(conf, [1, 2, 3])
    with pytest.raises(ValueError):
        build_qubo(conf, [0, 2])
    with pytest.raises(ValueError):
        objective(build_qubo(conf, [1, 2]), [1])


def test_single_variable_ising():
    for v in (1.0, 2.0, 7.5):
        ham = to_ising(build_qubo(_conflicts(1, []), [v]))
        assert ham.linear_terms.tolist() == [v / 2]
        assert ham.offset == -v / 2
        assert ham.energy([-1]) == -v
        assert ham.energy([1]) == 0


def test_two_variable_conflict_ising():
    q = build_qubo(_conflicts(2, [(0, 1)]), [1, 1], penalty=2)
    ham = to_ising(q)
    for x in all_bits(2):
        assert ham.energy(bits_to_spins(x)) == -objective(q, x)
    # (1,1) costs 1 + 1 - 2 = 0
    assert ham.energy([-1, -1]) == 0


def test_example_one_ising_argmin(ex1):
    ham = ex1.ham
    best = min(all_bits(5), key=lambda x: ham.energy(bits_to_spins(x)))
    assert best == (0, 1, 0, 1, 1)
    assert ham.energy(bits_to_spins(best)) == -15


def test_diagonal_matches_enumeration(ex1):
    ham = ex1.ham
    diag = ham.diagonal()
    for b in range(32):
        x = [(b >> i) & 1 for i in range(5)]
        assert diag[b] == energy_by_spins(ham.linear_terms, ham.couplings, ham.offset, x)
    assert not diag.flags.writeable


def test_json_dump(ex1):
    data = json.loads(dumps(ex1.ham))
    assert set(data) >= {"linear", "quadratic", "offset"}
    assert data["quadratic"] == [[0, 1, 2.0], [1, 2, 2.0]]
    q = json.loads(dumps(ex1.qubo))
    assert q["linear"] == [2.0, 7.0, 3.0, 2.0, 6.0]
    assert q["quadratic"] == [[0, 1, -8.0], [1, 2, -8.0]]


@settings(max_examples=40, deadline=None)
@given(n=st.integers(1, 10), seed=st.integers(0, 10_000))
def test_roundtrip_all_assignments(n, seed):
    p = make_problem(n, seed)
    diag = p.ham.diagonal()
    for b, x in enumerate(itertools.product((0, 1), repeat=n)):
        x = x[::-1]  # product varies the last entry fastest; reverse so bit i is x[i]
        assert diag[b] == pytest.approx(-objective(p.qubo, x), abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(n=st.integers(1, 10), seed=st.integers(0, 10_000))
def test_penalty_sufficiency(n, seed):
    p = make_problem(n, seed)
    assert p.qubo.penalty > p.qubo.values.max()
    diag = p.ham.diagonal()
    b = int(np.argmin(diag))
    x = [(b >> i) & 1 for i in range(n)]
    best, _ = branch_and_prune(p.inst.values.tolist(), p.conf.conflict.tolist())
    assert all(not (x[i] and x[j]) for i, j in p.conf.pairs())
    assert -diag[b] == best


@settings(max_examples=20, deadline=None)
@given(n=st.integers(2, 12), seed=st.integers(0, 10_000), rot=st.floats(0.02, 0.3))
def test_quadratic_entries_match_conflicts(n, seed, rot):
    from smpp.instance import OrbitConfig

    inst = generate_instance(n, seed, OrbitConfig(rotation_speed=rot))
    conf = build_conflicts(inst)
    q = build_qubo(conf, inst.values)
    assert set(q.quadratic) == set(conf.pairs())
    assert q.penalty == default_penalty(inst.values)
