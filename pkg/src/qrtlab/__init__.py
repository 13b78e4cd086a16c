"""qrtlab: free-state sampling and cross-witness analysis for eight quantum
resource theories (multipartite entanglement, fermionic non-Gaussianity,
imaginarity, realness, spin coherence, Clifford non-stabilizerness,
permutation equivariance, and non-uniform entanglement)."""

from .oracle import expected_value, second_moment_expectation, uniform_product_witness
from .pauli import PauliString, majorana, spin_operators, witness_operator_set
from .sample import FamilySpec, generate_dataset, rng_stream, sample_state
from .tensor import StateVector, apply_unitary, matrix_exp, so_matrix_log
from .witness import WITNESS_IDS, evaluate, evaluate_fast, witness_vector

__version__ = "0.1.0"

__all__ = [
    "FamilySpec",
    "PauliString",
    "StateVector",
    "WITNESS_IDS",
    "apply_unitary",
    "evaluate",
    "evaluate_fast",
    "expected_value",
    "generate_dataset",
    "majorana",
    "matrix_exp",
    "rng_stream",
    "sample_state",
    "second_moment_expectation",
    "so_matrix_log",
    "spin_operators",
    "uniform_product_witness",
    "witness_operator_set",
    "witness_vector",
]
