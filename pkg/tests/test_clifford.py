import numpy as np
import pytest
from scipy.stats import chi2

from qrtlab.clifford import (
    StabilizerTableau,
    apply_circuit,
    count_stabilizer_states,
    is_symplectic,
    random_stabilizer_state,
    random_symplectic,
    synthesize_circuit,
)
from qrtlab.tensor import StateVector

rng = np.random.default_rng(31337)


def test_symplectic_validity():
    for n in (1, 2, 3, 4):
        for _ in range(20):
            assert is_symplectic(random_symplectic(n, rng))


def test_symplectic_group_coverage_n1():
    # |Sp(2, F_2)| = 6; all elements should appear
    seen = set()
    for _ in range(400):
        seen.add(random_symplectic(1, rng).tobytes())
    assert len(seen) == 6


def test_symplectic_group_coverage_n2():
    # |Sp(4, F_2)| = 720
    seen = set()
    for _ in range(25000):
        seen.add(random_symplectic(2, rng).tobytes())
    assert len(seen) == 720


def test_generators_stabilize_synthesized_state():
    for n in (1, 2, 3, 4):
        for _ in range(40):
            tab = StabilizerTableau.random(n, rng)
            amps = apply_circuit(synthesize_circuit(tab), n)
            psi = StateVector(amps, n)
            for g in tab.generators():
                assert g.expectation(psi) == pytest.approx(1.0, abs=1e-10)


def test_state_count_formula():
    assert count_stabilizer_states(1) == 6
    assert count_stabilizer_states(2) == 60
    assert count_stabilizer_states(3) == 1080


def _state_key(amps):
    k = np.argmax(np.abs(amps) > 1e-9)
    canon = amps / amps[k]
    return tuple(np.round(canon, 6))


def test_all_six_single_qubit_states():
    seen = set()
    for _ in range(600):
        amps, _ = random_stabilizer_state(1, rng)
        seen.add(_state_key(amps))
    assert len(seen) == 6


def test_uniformity_chi2_n2():
    """6000 samples over the 60 two-qubit stabilizer states, chi^2 p > 0.01."""
    counts: dict = {}
    n_samples = 6000
    for _ in range(n_samples):
        amps, _ = random_stabilizer_state(2, rng)
        counts[_state_key(amps)] = counts.get(_state_key(amps), 0) + 1
    assert len(counts) == 60
    expected = n_samples / 60
    stat = sum((c - expected) ** 2 / expected for c in counts.values())
    p = chi2.sf(stat, df=59)
    assert p > 0.01, f"chi2 stat {stat:.1f}, p = {p:.4f}"


def test_circuit_gate_set():
    tab = StabilizerTableau.random(4, rng)
    gates = {g for g, _ in synthesize_circuit(tab)}
    assert gates <= {"H", "S", "CNOT"}
