"""Evaluation of the eight resource witnesses on statevectors.

Three routes are provided:

* ``evaluate`` — literal sum over the witness's operator set (reference path),
* ``evaluate_fast`` — the O(2^n)-ish shortcuts (ent via marginal purities,
  real via conjugate overlap, imag via the exact real/imag complement),
* ``witness_vector`` — all eight values from one shared Pauli expectation
  table (the direct 4^n x 2^n sum arranged as a single matrix product) plus
  the dense spin matrices for the coherence witness.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pauli import (
    WITNESS_IDS,
    PauliString,
    _popcount_arr,
    sn_orbit_assignments,
    sn_orbit_weight,
    spin_operators,
    witness_operator_set,
)
from .tensor import DimensionMismatchError, StateVector

VALUE_TOL = 1e-9
IMAG_RESIDUE_TOL = 1e-10

_table_cache: dict = {}
_sn_cache: dict = {}
_spin_cache: dict = {}
_opset_cache: dict = {}


class UnsupportedFastPath(ValueError):
    pass


def _table_aux(n: int):
    if n not in _table_cache:
        d = 1 << n
        idx = np.arange(d)
        xor = idx[:, None] ^ idx[None, :]
        overlap = _popcount_arr(idx[:, None] & idx[None, :])
        walsh = (1.0 - 2.0 * (overlap & 1)).astype(float)
        phase = (1j ** (overlap % 4)).astype(complex)
        _table_cache[n] = (xor, walsh, phase)
    return _table_cache[n]


def expectation_table(psi: StateVector) -> np.ndarray:
    """tab[x, z] = <psi| i^{y(x,z)} X^x Z^z |psi> for every Pauli string at once.

    One d x d matrix product realizes the full 4^n * 2^n bit-kernel sum.
    """
    n = psi.n_qubits
    if n < 1:
        raise DimensionMismatchError("expectation_table needs qubit-shaped states")
    xor, walsh, phase = _table_aux(n)
    amps = psi.amps
    g = np.conj(amps)[xor] * amps[:, None]  # g[i, x] = conj(psi[i^x]) psi[i]
    raw = walsh @ g                          # raw[z, x] = <X^x Z^z>
    tab = phase * raw.T
    resid = np.abs(tab.imag).max()
    if resid > IMAG_RESIDUE_TOL:
        raise AssertionError(f"imaginary residue {resid:.3e} in Pauli expectations")
    return tab.real


def _sn_aux(n: int):
    if n not in _sn_cache:
        d = 1 << n
        idx = np.arange(d)
        xs = np.broadcast_to(idx[:, None], (d, d))
        zs = np.broadcast_to(idx[None, :], (d, d))
        ny = _popcount_arr(xs & zs)
        nx = _popcount_arr(xs & ~zs)
        nz = _popcount_arr(zs & ~xs)
        key = (nx * (n + 1) + ny) * (n + 1) + nz
        assigns = [(0, 0, 0)] + sn_orbit_assignments(n)
        key_of = {(a * (n + 1) + b) * (n + 1) + c: i for i, (a, b, c) in enumerate(assigns)}
        orbit_id = np.vectorize(key_of.__getitem__)(key)
        sqrt_w = np.array(
            [float(np.sqrt(float(sn_orbit_weight(n, *a)))) for a in assigns]
        )
        _sn_cache[n] = (orbit_id, sqrt_w)
    return _sn_cache[n]


def _spin_ops(n: int):
    if n not in _spin_cache:
        _spin_cache[n] = spin_operators((2**n - 1) / 2.0)
    return _spin_cache[n]


def _opset(witness_id: str, n: int):
    if (witness_id, n) not in _opset_cache:
        _opset_cache[(witness_id, n)] = witness_operator_set(witness_id, n)
    return _opset_cache[(witness_id, n)]


def normalization(witness_id: str, n: int) -> float:
    s = (2**n - 1) / 2.0
    return {
        "ent": 1.0 / n,
        "ferm": 1.0 / n,
        "imag": 1.0 / (2**n - 1),
        "real": 1.0 / 2 ** (n - 1),
        "coh": 1.0 / s**2,
        "stab": 1.0 / (2**n - 1),
        "sn": 1.0 / (2**n - 1),
        "uent": 1.0 / n**2,
    }[witness_id]


def _clamp(value: float) -> float:
    if value < -VALUE_TOL or value > 1.0 + VALUE_TOL:
        raise AssertionError(f"witness value {value!r} outside [0, 1] tolerance")
    return float(min(max(value, 0.0), 1.0))


def _coh_value(psi: StateVector) -> float:
    ops = _spin_ops(psi.n_qubits)
    if psi.dim != ops.d:
        raise DimensionMismatchError("state dim != spin dimension")
    amps = psi.amps
    tot = 0.0
    for m in (ops.sx, ops.sy, ops.sz):
        v = np.conj(amps) @ (m @ amps)
        assert abs(v.imag) < IMAG_RESIDUE_TOL * ops.d
        tot += v.real**2
    return tot / ops.s**2


def evaluate(witness_id: str, psi: StateVector) -> float:
    """Brute-force witness value: C * sum over the operator set of <P>^(2k)."""
    if witness_id not in WITNESS_IDS:
        raise ValueError(f"unknown witness id {witness_id!r}")
    if psi.n_qubits < 1:
        raise DimensionMismatchError("witnesses are defined on qubit states")
    if witness_id == "coh":
        return _clamp(_coh_value(psi))
    power = 4 if witness_id == "stab" else 2
    tot = 0.0
    for op in _opset(witness_id, psi.n_qubits):
        tot += op.expectation(psi) ** power
    return _clamp(normalization(witness_id, psi.n_qubits) * tot)


def evaluate_fast(witness_id: str, psi: StateVector) -> float:
    """O(n 2^n) shortcut paths; raises UnsupportedFastPath otherwise."""
    n = psi.n_qubits
    if witness_id == "ent":
        amps = psi.amps
        tot = 0.0
        for q in range(n):
            rho = _marginal(amps, n, q)
            tot += 2.0 * (np.trace(rho @ rho).real - 0.5)
        return _clamp(tot / n)
    if witness_id == "real":
        overlap = np.sum(psi.amps**2)
        return _clamp(1.0 - float(np.abs(overlap) ** 2))
    if witness_id == "imag":
        lam_real = evaluate_fast("real", psi)
        return _clamp(1.0 + lam_real / (2.0 ** (1 - n) - 2.0))
    raise UnsupportedFastPath(f"no fast path for {witness_id!r}")


def _marginal(amps: np.ndarray, n: int, qubit: int) -> np.ndarray:
    """Single-qubit reduced density matrix (qubit k = index bit k)."""
    # move target bit to axis 0 of a (2, d/2) view
    t = amps.reshape([2] * n)          # axes ordered qubit n-1 .. qubit 0
    t = np.moveaxis(t, n - 1 - qubit, 0).reshape(2, -1)
    return t @ t.conj().T


@dataclass(frozen=True)
class WitnessVector:
    n: int
    values: dict

    def __post_init__(self):
        assert set(self.values) == set(WITNESS_IDS)

    def as_array(self) -> np.ndarray:
        return np.array([self.values[w] for w in WITNESS_IDS])


def witness_vector(psi: StateVector) -> WitnessVector:
    """All eight witness values of a state from one shared expectation table."""
    n = psi.n_qubits
    if not 1 <= n <= 8:
        raise DimensionMismatchError("witness_vector supports n in 1..8")
    d = psi.dim
    tab = expectation_table(psi)
    sq = tab * tab

    idx = np.arange(d)
    ycnt = _popcount_arr(idx[:, None] & idx[None, :])
    ysym = (ycnt & 1) == 0

    values = {}
    # single-qubit rows: x/z masks of weight <= 1
    ent = 0.0
    sx = np.zeros(3)  # collective <sum X>, <sum Y>, <sum Z>
    for q in range(n):
        b = 1 << q
        ex, ey, ez = tab[b, 0], tab[b, b], tab[0, b]
        ent += ex * ex + ey * ey + ez * ez
        sx += (ex, ey, ez)
    values["ent"] = ent / n
    values["uent"] = float(np.sum(sx**2)) / n**2

    ferm = 0.0
    for j in range(1, 2 * n + 1):
        for k in range(j + 1, 2 * n + 1):
            p = _majorana_pair_masks(n, j, k)
            ferm += sq[p]
    values["ferm"] = ferm / n

    total_sq = float(np.sum(sq)) - 1.0  # drop identity (tab[0,0] = 1)
    sym_sq = float(np.sum(sq[ysym])) - 1.0
    values["imag"] = sym_sq / (2**n - 1)
    values["real"] = (total_sq - sym_sq) / 2 ** (n - 1)
    values["stab"] = (float(np.sum(sq * sq)) - 1.0) / (2**n - 1)

    orbit_id, sqrt_w = _sn_aux(n)
    acc = np.bincount(orbit_id.ravel(), weights=tab.ravel(), minlength=len(sqrt_w))
    vals = sqrt_w * acc
    values["sn"] = (float(np.sum(vals**2)) - vals[0] ** 2) / (2**n - 1)

    values["coh"] = _coh_value(psi)

    return WitnessVector(n=n, values={w: _clamp(v) for w, v in values.items()})


_majorana_mask_cache: dict = {}


def _majorana_pair_masks(n: int, j: int, k: int):
    if (n, j, k) not in _majorana_mask_cache:
        from .pauli import majorana_pair

        p = majorana_pair(n, j, k)
        _majorana_mask_cache[(n, j, k)] = (p.x, p.z)
    return _majorana_mask_cache[(n, j, k)]
