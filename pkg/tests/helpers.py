"""Dense reference constructions shared across the test modules.

Everything here is deliberately independent of the package's fast paths:
operators are built by explicit Kronecker products so they can serve as
oracles for the bit-kernel implementations.
"""

import numpy as np

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI_1Q = {"I": I2, "X": SX, "Y": SY, "Z": SZ}


def dense_string(label: str) -> np.ndarray:
    """Tensor string with qubit 0 = leftmost letter = least significant bit."""
    out = np.array([[1.0 + 0j]])
    for c in label:
        out = np.kron(PAULI_1Q[c], out)
    return out


def random_state(d: int, rng) -> np.ndarray:
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def dense_expectation(label: str, amps: np.ndarray) -> float:
    val = np.conj(amps) @ (dense_string(label) @ amps)
    assert abs(val.imag) < 1e-10
    return float(val.real)


def all_labels(n: int):
    from itertools import product

    for letters in product("IXYZ", repeat=n):
        yield "".join(letters)
