import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from smpp.instance import Instance, Location, OrbitConfig, build_conflicts, example_one, generate_instance  # noqa: E402
from smpp.qubo import build_qubo, to_ising  # noqa: E402


class Problem:
    def __init__(self, inst, conf):
        self.inst = inst
        self.conf = conf
        self.qubo = build_qubo(conf, inst.values)
        self.ham = to_ising(self.qubo)

    @property
    def n(self):
        return self.inst.n


def make_problem(n, seed):
    inst = generate_instance(n, seed)
    return Problem(inst, build_conflicts(inst))


def conflict_free(values):
    # same latitude, so no rotation is ever needed
    inst = Instance(OrbitConfig(), [Location(40.0 * i, 0.0, v) for i, v in enumerate(values)])
    return Problem(inst, build_conflicts(inst))


@pytest.fixture
def ex1():
    return Problem(*example_one())


ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
