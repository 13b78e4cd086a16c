import numpy as np
import pytest

from qrtlab.equivariant import apply_equivariant_layers, spin_sectors, twirl_block_reps
from qrtlab.pauli import sn_orbit_assignments, sn_twirl_element, tetrahedral

from helpers import random_state

rng = np.random.default_rng(123)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_sector_dimensions(n):
    sectors = spin_sectors(n)
    total = sum(b.shape[1] * b.shape[2] for _, b in sectors)
    assert total == 2**n
    # commutant dimension = sum of squared block sizes = Te_{n+1}
    assert sum(b.shape[1] ** 2 for _, b in sectors) == tetrahedral(n + 1)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_block_layers_equal_dense_exponential(n):
    d = 2**n
    assigns = sn_orbit_assignments(n)
    theta = rng.standard_normal((2, len(assigns)))
    psi = random_state(d, rng)

    out_blocks = apply_equivariant_layers(n, psi.copy(), theta)

    out_dense = psi.copy()
    for layer in theta:
        h = np.zeros((d, d), dtype=complex)
        for t, a in zip(layer, assigns):
            h += t * sn_twirl_element(n, *a).to_dense()
        lam, v = np.linalg.eigh(h)
        out_dense = v @ (np.exp(1j * lam) * (v.conj().T @ out_dense))

    np.testing.assert_allclose(out_blocks, out_dense, atol=1e-12)


def test_block_reps_are_copy_consistent():
    """Twirl operators must act identically on every multiplicity copy."""
    n = 3
    sectors, stacked = twirl_block_reps(n)
    assigns = sn_orbit_assignments(n)
    k = int(rng.integers(0, len(assigns)))
    op = sn_twirl_element(n, *assigns[k]).to_dense()
    for si, (s, b) in enumerate(sectors):
        dim, mult = b.shape[1], b.shape[2]
        for copy in range(mult):
            bc = b[:, :, copy]
            blk = bc.conj().T @ op @ bc
            np.testing.assert_allclose(blk, stacked[si][k], atol=1e-10)
