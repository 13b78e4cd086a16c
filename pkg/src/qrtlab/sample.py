"""Seed-deterministic sampling of the nine state families.

Every state gets its own counter-based RNG stream keyed by
(seed, family, state_id), so datasets are reproducible independently of
thread count or generation order.
"""

from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass, field

import numpy as np

from . import clifford as _clifford
from .equivariant import apply_equivariant_layers
from .pauli import majorana_pair, spin_operators
from .tensor import LogBranchError, StateVector, matrix_exp, so_matrix_log
from .witness import WITNESS_IDS, witness_vector

FAMILY_IDS = ("haar", "ent", "ferm", "imag", "real", "coh", "stab", "sn", "uent")

_coh_rot_cache: dict = {}
_majorana_dense_cache: dict = {}


@dataclass(frozen=True)
class FamilySpec:
    family_id: str
    n: int
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.family_id not in FAMILY_IDS:
            raise ValueError(f"unknown family {self.family_id!r}")
        if not 1 <= self.n <= 8:
            raise ValueError("n must be in 1..8")


def rng_stream(seed: int, family_id: str, state_id: int) -> np.random.Generator:
    """Counter-based splittable stream; identical inputs give identical samples."""
    fam_idx = FAMILY_IDS.index(family_id)
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(fam_idx, int(state_id)))
    return np.random.Generator(np.random.Philox(ss))


def haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """QR of a complex Ginibre matrix with R-diagonal phase correction."""
    if d > 256:
        raise ValueError("dimension exceeds 256")
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    diag = np.diag(r)
    return q * (diag / np.abs(diag))


def haar_orthogonal(d: int, rng: np.random.Generator, special: bool = False) -> np.ndarray:
    """QR of a real Ginibre matrix with R-diagonal sign correction.

    With special=True the det = -1 case is projected to SO(d) by a row flip.
    """
    if d > 256:
        raise ValueError("dimension exceeds 256")
    a = rng.standard_normal((d, d))
    q, r = np.linalg.qr(a)
    q = q * np.sign(np.diag(r))
    if special and np.linalg.det(q) < 0:
        q[0, :] = -q[0, :]
    return q


def _su2_state(rng: np.random.Generator) -> np.ndarray:
    """R_z(alpha) R_y(beta) |0> with Haar-measure Euler angles (phase dropped)."""
    alpha = rng.uniform(0.0, 2.0 * np.pi)
    beta = np.arccos(rng.uniform(-1.0, 1.0))
    return np.array(
        [
            np.exp(-0.5j * alpha) * np.cos(beta / 2.0),
            np.exp(0.5j * alpha) * np.sin(beta / 2.0),
        ]
    )


def _coh_rotation(n: int):
    """Cached eigendecomposition of collective-spin S_y for d = 2^n."""
    if n not in _coh_rot_cache:
        ops = spin_operators((2**n - 1) / 2.0)
        lam, v = np.linalg.eigh(ops.sy)
        diag_z = np.diag(ops.sz).real.copy()
        _coh_rot_cache[n] = (lam, v, diag_z)
    return _coh_rot_cache[n]


def _majorana_dense(n: int):
    if n not in _majorana_dense_cache:
        _majorana_dense_cache[n] = [
            [majorana_pair(n, j, k) for k in range(j + 1, 2 * n + 1)]
            for j in range(1, 2 * n + 1)
        ]
    return _majorana_dense_cache[n]


def gaussian_unitary(a: np.ndarray, n: int) -> np.ndarray:
    """Spinor-representation unitary of A in SO(2n).

    U(A) = exp((1/4) sum_{mu,nu} Q_{mu nu} gamma_mu gamma_nu) with Q = log(A);
    the normalization and sign are frozen so that U^dag gamma_mu U =
    sum_nu A_{mu nu} gamma_nu holds exactly (checked at n = 1 and in tests).
    """
    q = so_matrix_log(a)
    d = 1 << n
    k = np.zeros((d, d), dtype=complex)
    pairs = _majorana_dense(n)
    idx = np.arange(d)
    from .pauli import _popcount_arr

    for j in range(1, 2 * n + 1):
        for kk in range(j + 1, 2 * n + 1):
            # gamma_j gamma_k = -i * (hermitian pair operator)
            coeff = 0.5 * q[j - 1, kk - 1] * (-1j)
            if coeff == 0:
                continue
            p = pairs[j - 1][kk - j - 1]
            signs = 1.0 - 2.0 * (_popcount_arr(idx & p.z) & 1)
            k[idx ^ p.x, idx] += coeff * (1j**p.phase_pow) * signs
    # k is anti-Hermitian; exponentiate through the Hermitian generator i*k
    return matrix_exp(1j * k, scale=-1j)


def verify_gaussian_adjoint(a: np.ndarray, u: np.ndarray, n: int) -> float:
    """max_mu || U^dag gamma_mu U - sum_nu A_{mu nu} gamma_nu ||_max."""
    from .pauli import majorana

    gammas = [majorana(n, i).to_dense() for i in range(1, 2 * n + 1)]
    right = np.stack([u @ g for g in gammas])          # U gamma_nu
    target = np.tensordot(a, right, axes=(1, 0))       # sum_nu A_{mu nu} U gamma_nu
    err = 0.0
    for mu in range(2 * n):
        lhs = gammas[mu] @ u                           # gamma_mu U
        err = max(err, float(np.abs(lhs - target[mu]).max()))
    return err


GAUSSIAN_ADJOINT_TOL = 1e-7


def sample_state(spec: FamilySpec, rng: np.random.Generator) -> StateVector:
    """One state of the family, normalized, maximal on its own witness."""
    n, d = spec.n, 1 << spec.n
    fam = spec.family_id
    if fam == "haar":
        u = haar_unitary(d, rng)
        return StateVector(u[:, 0], n)
    if fam == "ent":
        return StateVector.from_product([_su2_state(rng) for _ in range(n)])
    if fam == "uent":
        q = _su2_state(rng)
        return StateVector.from_product([q] * n)
    if fam == "imag":
        o = haar_orthogonal(d, rng)
        return StateVector(o[:, 0].astype(complex), n)
    if fam == "real":
        o = haar_orthogonal(d, rng)
        return StateVector(o @ StateVector.plus_y_product(n).amps, n)
    if fam == "coh":
        lam, v, diag_z = _coh_rotation(n)
        alpha = rng.uniform(0.0, 2.0 * np.pi)
        beta = np.arccos(rng.uniform(-1.0, 1.0))
        amps = v @ (np.exp(-1j * beta * lam) * np.conj(v[0, :]))  # exp(-i b Sy)|s,s>
        amps = np.exp(-1j * alpha * diag_z) * amps
        return StateVector(amps, n)
    if fam == "ferm":
        for _ in range(64):
            a = haar_orthogonal(2 * n, rng, special=True)
            try:
                u = gaussian_unitary(a, n)
            except LogBranchError:
                continue
            err = verify_gaussian_adjoint(a, u, n)
            if err >= GAUSSIAN_ADJOINT_TOL:
                raise AssertionError(f"gaussian adjoint error {err:.3e}")
            return StateVector(u[:, 0], n)
        raise RuntimeError("so_matrix_log kept hitting the branch cut")
    if fam == "stab":
        amps, _ = _clifford.random_stabilizer_state(n, rng)
        return StateVector(amps, n)
    if fam == "sn":
        depth = int(spec.params.get("sn_depth", n**3))
        from .pauli import tetrahedral

        n_basis = tetrahedral(n + 1) - 1
        thetas = rng.standard_normal((depth, n_basis))
        amps = np.zeros(d, dtype=complex)
        amps[0] = 1.0
        amps = apply_equivariant_layers(n, amps, thetas)
        return StateVector(amps, n)
    raise ValueError(f"unknown family {fam!r}")


@dataclass(frozen=True)
class WitnessRecord:
    family: str
    n: int
    state_id: int
    seed: int
    values: dict

    def row(self):
        return [self.family, self.n, self.state_id, self.seed] + [
            self.values[w] for w in WITNESS_IDS
        ]


def _make_record(family, n, state_id, seed, params, keep_state=False):
    rng = rng_stream(seed, family, state_id)
    psi = sample_state(FamilySpec(family, n, params or {}), rng)
    wv = witness_vector(psi)
    rec = WitnessRecord(family=family, n=n, state_id=state_id, seed=seed, values=wv.values)
    return (rec, psi) if keep_state else (rec, None)


def generate_dataset(
    n: int,
    per_family: int,
    seed: int,
    families=FAMILY_IDS,
    params: dict | None = None,
    threads: int = 1,
    keep_states: bool = False,
):
    """Deterministic dataset: per_family records per family, sorted by (family, id).

    Returns (records, states) where states is None unless keep_states is set.
    """
    if per_family < 1:
        raise ValueError("per_family must be >= 1")
    jobs = [(fam, sid) for fam in families for sid in range(per_family)]
    results = {}
    if threads > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as pool:
            futs = {
                pool.submit(_make_record, fam, n, sid, seed, params, keep_states): (fam, sid)
                for fam, sid in jobs
            }
            for fut in concurrent.futures.as_completed(futs):
                results[futs[fut]] = fut.result()
    else:
        for fam, sid in jobs:
            results[(fam, sid)] = _make_record(fam, n, sid, seed, params, keep_states)
    ordered = [results[(fam, sid)] for fam in families for sid in range(per_family)]
    records = [r for r, _ in ordered]
    states = [s for _, s in ordered] if keep_states else None
    return records, states
