"""Spin-sector decomposition of the qubit-permutation-equivariant algebra.

Any operator commuting with all qubit permutations acts as ``H_s (x) I_{m_s}``
on the total-spin sectors of (C^2)^n, so a layer exponential exp(iH) factors
into exponentials of blocks of size at most 2*s_max+1 = n+1. The sampled
distribution is identical to exponentiating the dense 2^n x 2^n matrix; this
is purely a change of basis, and is cross-checked against the dense route in
the tests.
"""

from __future__ import annotations

import numpy as np

from .pauli import _popcount_arr, sn_orbit_assignments, sn_twirl_element

_sector_cache: dict = {}
_blockrep_cache: dict = {}


def collective_spin(n: int):
    """Dense collective operators sum_k sigma_a^{(k)} / 2."""
    d = 1 << n
    idx = np.arange(d)
    sz = np.diag((n - 2 * _popcount_arr(idx)) / 2.0).astype(complex)
    sx = np.zeros((d, d), dtype=complex)
    sy = np.zeros((d, d), dtype=complex)
    for k in range(n):
        flip = idx ^ (1 << k)
        bit = (idx >> k) & 1
        sx[flip, idx] += 0.5
        sy[flip, idx] += 0.5j * np.where(bit == 0, 1.0, -1.0)
    return sx, sy, sz


def spin_sectors(n: int):
    """Symmetry-adapted basis: list of (s, B) with B of shape (d, 2s+1, m_s).

    B[:, mi, a] is the state |s, m = s - mi, copy a>; copies are aligned across
    m by construction (lowering operator), giving the block structure above.
    """
    if n in _sector_cache:
        return _sector_cache[n]
    d = 1 << n
    sx, sy, sz = collective_spin(n)
    s2 = sx @ sx + sy @ sy + sz @ sz
    evals, vecs = np.linalg.eigh(s2)
    svals = np.round(np.sqrt(evals + 0.25) - 0.5, 6)
    lowering = sx - 1j * sy
    sectors = []
    for s in sorted(set(svals.tolist()), reverse=True):
        cols = vecs[:, np.isclose(svals, s)]
        dim = int(round(2 * s + 1))
        mult = cols.shape[1] // dim
        sub = cols.conj().T @ sz @ cols
        ev2, rot = np.linalg.eigh(sub)
        cols = cols @ rot
        top = cols[:, np.isclose(np.round(ev2, 6), s)]
        assert top.shape[1] == mult
        b = np.zeros((d, dim, mult), dtype=complex)
        b[:, 0, :] = top
        cur = top
        for k in range(dim - 1):
            m = s - k
            cur = (lowering @ cur) / np.sqrt(s * (s + 1) - m * (m - 1))
            b[:, k + 1, :] = cur
        sectors.append((s, b))
    flat = np.concatenate([b.reshape(d, -1) for _, b in sectors], axis=1)
    err = np.abs(flat.conj().T @ flat - np.eye(d)).max()
    assert err < 1e-9, f"adapted basis not orthonormal: {err:.2e}"
    _sector_cache[n] = sectors
    return sectors


def twirl_block_reps(n: int):
    """Per-sector single-copy blocks of every normalized S_n twirl operator.

    Returns (sectors, stacked) where stacked[si] has shape (K, dim_s, dim_s)
    over the K = Te_{n+1} - 1 twirl basis elements.
    """
    if n in _blockrep_cache:
        return _blockrep_cache[n]
    sectors = spin_sectors(n)
    firsts = [b[:, :, 0] for _, b in sectors]
    splits = np.cumsum([f.shape[1] for f in firsts])[:-1]
    first_all = np.concatenate(firsts, axis=1)
    assigns = sn_orbit_assignments(n)
    blocks = [[] for _ in sectors]
    for a in assigns:
        op = sn_twirl_element(n, *a)
        img = np.zeros_like(first_all)
        for c, p in op.terms:
            img += c * _apply_pauli_columns(p, first_all)
        for si, (b0, part) in enumerate(zip(firsts, np.split(img, splits, axis=1))):
            blocks[si].append(b0.conj().T @ part)
    stacked = [np.stack(bl) for bl in blocks]
    _blockrep_cache[n] = (sectors, stacked)
    return sectors, stacked


def _apply_pauli_columns(p, mat: np.ndarray) -> np.ndarray:
    """Left-multiply a (d, c) array by the Pauli string."""
    d = mat.shape[0]
    idx = np.arange(d)
    signs = 1.0 - 2.0 * (_popcount_arr(idx & p.z) & 1)
    phase = (1j**p.phase_pow)
    out = np.empty_like(mat)
    out[idx ^ p.x, :] = (phase * signs)[:, None] * mat
    return out


def apply_equivariant_layers(n: int, psi: np.ndarray, thetas: np.ndarray) -> np.ndarray:
    """Apply prod_l exp(i sum_k theta[l, k] T_k) to psi, layer l = 0 first."""
    sectors, stacked = twirl_block_reps(n)
    d = 1 << n
    flat_bases = [b.reshape(d, -1) for _, b in sectors]
    comps = [fb.conj().T @ psi for fb in flat_bases]
    shapes = [(b.shape[1], b.shape[2]) for _, b in sectors]
    for theta in thetas:
        for si, (dim, mult) in enumerate(shapes):
            h = np.tensordot(theta, stacked[si], axes=1)
            lam, v = np.linalg.eigh(h)
            u = (v * np.exp(1j * lam)) @ v.conj().T
            comps[si] = (u @ comps[si].reshape(dim, mult)).ravel()
    out = flat_bases[0] @ comps[0]
    for fb, c in zip(flat_bases[1:], comps[1:]):
        out += fb @ c
    return out
