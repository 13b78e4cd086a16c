"""Symplectic-bitmask Pauli strings, Majorana operators, witness operator sets,
and spin angular-momentum matrices.

A ``PauliString`` stores the operator ``i^phase_pow * X^x Z^z`` where ``x`` and
``z`` are n-bit masks and qubit ``k`` is bit ``k``. With ``phase_pow`` equal to
the number of Y sites (mod 4) this is exactly the tensor string over
``{1, X, Y, Z}``; an extra 2 in ``phase_pow`` flips the overall sign.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Iterator

import numpy as np

from .tensor import DimensionMismatchError, StateVector

WITNESS_IDS = ("ent", "ferm", "imag", "real", "coh", "stab", "sn", "uent")

# witness ids served by witness_operator_set (coh uses spin matrices instead)
PAULI_WITNESS_IDS = ("ent", "ferm", "imag", "real", "stab", "sn", "uent")

_PHASE = (1.0 + 0j, 1j, -1.0 + 0j, -1j)
_PHASE_STR = ("", "i", "-", "-i")


def popcount(v: int) -> int:
    return bin(v).count("1")


@dataclass(frozen=True)
class PauliString:
    n: int
    x: int
    z: int
    phase_pow: int = 0

    def __post_init__(self):
        mask = (1 << self.n) - 1
        if self.x & ~mask or self.z & ~mask:
            raise ValueError("mask exceeds qubit count")
        object.__setattr__(self, "phase_pow", self.phase_pow % 4)

    @staticmethod
    def from_label(label: str, sign: int = 1) -> "PauliString":
        """Parse e.g. 'XZIY' (qubit 0 leftmost); 'I', '1' and the double-struck one all mean identity."""
        x = z = 0
        for k, c in enumerate(label):
            if c not in "IXYZ1\U0001d7d9":
                raise ValueError(f"bad Pauli letter {c!r}")
            if c in "XY":
                x |= 1 << k
            if c in "ZY":
                z |= 1 << k
        p = PauliString(len(label), x, z, popcount(x & z))
        return p if sign == 1 else p.with_sign_flipped()

    def with_sign_flipped(self) -> "PauliString":
        return PauliString(self.n, self.x, self.z, self.phase_pow + 2)

    @property
    def y_count(self) -> int:
        return popcount(self.x & self.z)

    @property
    def weight(self) -> int:
        return popcount(self.x | self.z)

    def is_hermitian(self) -> bool:
        return (self.phase_pow - self.y_count) % 2 == 0

    def is_symmetric(self) -> bool:
        """P == P^T, i.e. even number of Y factors."""
        return self.y_count % 2 == 0

    def sign(self) -> int:
        """+1 or -1 relative to the bare tensor string (Hermitian strings only)."""
        d = (self.phase_pow - self.y_count) % 4
        if d == 0:
            return 1
        if d == 2:
            return -1
        raise ValueError("sign undefined for non-Hermitian phase")

    def __mul__(self, other: "PauliString") -> "PauliString":
        if self.n != other.n:
            raise DimensionMismatchError("qubit counts differ")
        # X^x1 Z^z1 X^x2 Z^z2 = (-1)^{z1.x2} X^{x1^x2} Z^{z1^z2}
        phase = self.phase_pow + other.phase_pow + 2 * popcount(self.z & other.x)
        return PauliString(self.n, self.x ^ other.x, self.z ^ other.z, phase)

    def commutes(self, other: "PauliString") -> bool:
        return (popcount(self.x & other.z) + popcount(self.z & other.x)) % 2 == 0

    def transpose_sign(self) -> int:
        """P^T = transpose_sign() * P."""
        return -1 if self.y_count % 2 else 1

    def expectation(self, psi: StateVector) -> float:
        """<psi| P |psi> for Hermitian P, via the bit-indexed kernel."""
        if psi.dim != 1 << self.n:
            raise DimensionMismatchError("state dimension mismatch")
        if not self.is_hermitian():
            raise ValueError("expectation of a non-Hermitian Pauli")
        amps = psi.amps
        idx = np.arange(psi.dim)
        signs = 1.0 - 2.0 * (_popcount_arr(idx & self.z) & 1)
        val = _PHASE[self.phase_pow] * np.sum(np.conj(amps[idx ^ self.x]) * signs * amps)
        assert abs(val.imag) < 1e-10
        return float(val.real)

    def to_dense(self) -> np.ndarray:
        d = 1 << self.n
        m = np.zeros((d, d), dtype=complex)
        idx = np.arange(d)
        signs = 1.0 - 2.0 * (_popcount_arr(idx & self.z) & 1)
        m[idx ^ self.x, idx] = _PHASE[self.phase_pow] * signs
        return m

    def label(self) -> str:
        chars = []
        for k in range(self.n):
            xb, zb = (self.x >> k) & 1, (self.z >> k) & 1
            chars.append("\U0001d7d9XZY"[xb + 2 * zb])
        return "".join(chars)

    def __str__(self) -> str:
        lead = _PHASE_STR[(self.phase_pow - self.y_count) % 4]
        return lead + self.label()


def _popcount_arr(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a).copy()
    out = np.zeros_like(a)
    while a.any():
        out += a & 1
        a >>= 1
    return out


def identity_pauli(n: int) -> PauliString:
    return PauliString(n, 0, 0, 0)


def single_qubit_pauli(n: int, qubit: int, letter: str) -> PauliString:
    return PauliString(
        n,
        (1 << qubit) if letter in "XY" else 0,
        (1 << qubit) if letter in "ZY" else 0,
        1 if letter == "Y" else 0,
    )


def majorana(n: int, i: int) -> PauliString:
    """Jordan-Wigner Majorana: odd i=2j-1 -> Z^{j-1} X, even i=2j -> Z^{j-1} Y (1-indexed)."""
    if not 1 <= i <= 2 * n:
        raise ValueError(f"majorana index {i} out of range 1..{2*n}")
    j = (i + 1) // 2
    letter = "X" if i % 2 == 1 else "Y"
    p = single_qubit_pauli(n, j - 1, letter)
    for k in range(j - 1):
        p = p * single_qubit_pauli(n, k, "Z")
    return p


def majorana_pair(n: int, j: int, k: int) -> PauliString:
    """Hermitian quadratic i*gamma_j*gamma_k for 1 <= j < k <= 2n."""
    if not 1 <= j < k <= 2 * n:
        raise ValueError("need 1 <= j < k <= 2n")
    p = majorana(n, j) * majorana(n, k)
    return PauliString(p.n, p.x, p.z, p.phase_pow + 1)


@dataclass(frozen=True)
class WeightedPauliSum:
    """Real-weighted sum of distinct Pauli strings (all Hermitian)."""

    terms: tuple

    def __post_init__(self):
        seen = set()
        for c, p in self.terms:
            if (p.x, p.z) in seen:
                raise ValueError("duplicate Pauli in weighted sum")
            seen.add((p.x, p.z))

    @staticmethod
    def single(p: PauliString) -> "WeightedPauliSum":
        return WeightedPauliSum(((1.0, p),))

    @property
    def n(self) -> int:
        return self.terms[0][1].n

    def expectation(self, psi: StateVector) -> float:
        return float(sum(c * p.expectation(psi) for c, p in self.terms))

    def to_dense(self) -> np.ndarray:
        return sum(c * p.to_dense() for c, p in self.terms)

    def trace_square(self) -> float:
        """Tr[P^2] using orthogonality of distinct strings."""
        d = 1 << self.n
        return float(sum((c * p.sign()) ** 2 for c, p in self.terms)) * d


def sn_orbit_assignments(n: int) -> list:
    """Lexicographic (n_x, n_y, n_z) assignments with n_x+n_y+n_z >= 1."""
    out = []
    for nx in range(n + 1):
        for ny in range(n + 1 - nx):
            for nz in range(n + 1 - nx - ny):
                if nx + ny + nz:
                    out.append((nx, ny, nz))
    return out


def sn_orbit_weight(n: int, nx: int, ny: int, nz: int) -> Fraction:
    q = nx + ny + nz
    return Fraction(
        factorial(nx) * factorial(ny) * factorial(nz) * factorial(n - q), factorial(n)
    )


def _orbit_strings(n: int, nx: int, ny: int, nz: int) -> Iterator[PauliString]:
    """All strings with the given letter counts."""
    from itertools import combinations

    sites = range(n)
    for xs in combinations(sites, nx):
        rest1 = [s for s in sites if s not in xs]
        for ys in combinations(rest1, ny):
            rest2 = [s for s in rest1 if s not in ys]
            for zs in combinations(rest2, nz):
                x = z = 0
                for s in xs:
                    x |= 1 << s
                for s in ys:
                    x |= 1 << s
                    z |= 1 << s
                for s in zs:
                    z |= 1 << s
                yield PauliString(n, x, z, ny)


def sn_twirl_element(n: int, nx: int, ny: int, nz: int) -> WeightedPauliSum:
    """Normalized S_n twirl of the orbit representative: Tr[P^2] = 2^n."""
    w = float(np.sqrt(float(sn_orbit_weight(n, nx, ny, nz))))
    return WeightedPauliSum(tuple((w, p) for p in _orbit_strings(n, nx, ny, nz)))


def symmetric_pauli_count(n: int) -> int:
    """Non-identity strings with an even number of Y's."""
    return (4**n + 2**n - 2) // 2


def antisymmetric_pauli_count(n: int) -> int:
    return 2 ** (n - 1) * (2**n - 1)


def sn_symmetric_orbit_count(n: int) -> int:
    """Non-identity S_n orbits with even n_y (valid for all n, floor form)."""
    h1 = (n - 1) // 2
    h2 = n // 2
    return (
        3 * n * (3 + n)
        + 3 * h1**2
        + 2 * h1**3
        + 4 * h2
        + 2 * h2**3
        + h1 * (1 + 6 * h2)
    ) // 6


def tetrahedral(m: int) -> int:
    return m * (m + 1) * (m + 2) // 6


def witness_operator_set(witness_id: str, n: int) -> list:
    """The operator set defining each Pauli-based witness, as WeightedPauliSums."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if witness_id == "ent":
        return [
            WeightedPauliSum.single(single_qubit_pauli(n, q, c))
            for q in range(n)
            for c in "XYZ"
        ]
    if witness_id == "ferm":
        return [
            WeightedPauliSum.single(majorana_pair(n, j, k))
            for j in range(1, 2 * n + 1)
            for k in range(j + 1, 2 * n + 1)
        ]
    if witness_id in ("imag", "real", "stab"):
        want_parity = {"imag": 0, "real": 1}.get(witness_id)
        out = []
        for x in range(1 << n):
            for z in range(1 << n):
                if x == 0 and z == 0:
                    continue
                y = popcount(x & z)
                if want_parity is not None and y % 2 != want_parity:
                    continue
                out.append(WeightedPauliSum.single(PauliString(n, x, z, y)))
        return out
    if witness_id == "sn":
        return [sn_twirl_element(n, *a) for a in sn_orbit_assignments(n)]
    if witness_id == "uent":
        return [
            WeightedPauliSum(
                tuple((1.0, single_qubit_pauli(n, q, c)) for q in range(n))
            )
            for c in "XYZ"
        ]
    raise ValueError(f"unknown witness id {witness_id!r}")


def witness_set_size(witness_id: str, n: int) -> int:
    """Cardinalities in closed form (cross-checked against enumeration in tests)."""
    return {
        "ent": 3 * n,
        "ferm": n * (2 * n - 1),
        "imag": symmetric_pauli_count(n),
        "real": antisymmetric_pauli_count(n),
        "stab": 4**n - 1,
        "sn": tetrahedral(n + 1) - 1,
        "uent": 3,
    }[witness_id]


@dataclass(frozen=True)
class SpinOperators:
    s: float
    d: int
    sx: np.ndarray
    sy: np.ndarray
    sz: np.ndarray


def spin_operators(s) -> SpinOperators:
    """Spin-s angular momentum matrices in the |s, m> basis with m = s first."""
    two_s = int(round(2 * float(s)))
    if abs(2 * float(s) - two_s) > 1e-12 or two_s < 0:
        raise ValueError("s must be a non-negative half-integer")
    d = two_s + 1
    if d > 256:
        raise ValueError("spin dimension exceeds 256")
    s = two_s / 2.0
    m = s - np.arange(d)
    sz = np.diag(m).astype(complex)
    raise_op = np.zeros((d, d), dtype=complex)
    for k in range(d - 1):
        mm = m[k + 1]
        raise_op[k, k + 1] = np.sqrt(s * (s + 1) - mm * (mm + 1))
    sx = (raise_op + raise_op.conj().T) / 2.0
    sy = (raise_op - raise_op.conj().T) / 2.0j
    return SpinOperators(s=s, d=d, sx=sx, sy=sy, sz=sz)
