"""Satellite mission planning as a QUBO solved with variational quantum algorithms."""

from .errors import CapacityError, InfeasibleSelectionError
from .instance import (
    ConflictModel,
    Instance,
    Location,
    OrbitConfig,
    build_conflicts,
    example_one,
    generate_instance,
    load_instance,
    save_instance,
)
from .qubo import IsingModel, QuboModel, build_qubo, objective, to_ising
from .oracle import OracleSolution, RunRecord, brute_force, decode_and_repair, is_feasible, quality
from .optimizer import OptimizerConfig, minimize, solve
from .noise import NoiseConfig, run_noisy, solve_noisy

__version__ = "0.1.0"
