"""Uniform stabilizer-state sampling via random symplectic tableaus.

The symplectic matrix is drawn uniformly with the transvection construction of
Koenig and Smolin; together with uniform sign bits for the Z-row images this
gives the uniformly random stabilizer group of a Clifford applied to |0...0>.
The state itself is produced by reducing the stabilizer tableau to <Z_1..Z_n>
with H/S/CNOT conjugations (CZ and Pauli fixes are emitted as H/S/CNOT
composites) and replaying the inverse circuit on the statevector.

Tableau rows are (x_mask, z_mask, sign) for the Hermitian string
(-1)^sign * i^{y} X^x Z^z; the update rules are the standard CHP ones.
"""

from __future__ import annotations

import numpy as np

from .pauli import PauliString, popcount

# ---------------------------------------------------------------------------
# Koenig–Smolin uniform symplectic sampling (direct sum form: coords
# x_1 z_1 x_2 z_2 ...; inner product pairs (2i, 2i+1)).


def _symp_inner(v: np.ndarray, w: np.ndarray) -> int:
    t = 0
    for i in range(0, v.size, 2):
        t ^= (v[i] & w[i + 1]) ^ (v[i + 1] & w[i])
    return t


def _transvection(k: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Z_k(v) = v + <k, v> k over F_2."""
    return (v + _symp_inner(k, v) * k) % 2


def _find_transvection(x: np.ndarray, y: np.ndarray):
    """Pair (h0, h1) with y = Z_{h0} Z_{h1} x (Lemma 2 of the construction)."""
    nn = x.size
    out = np.zeros((2, nn), dtype=np.int64)
    if np.array_equal(x, y):
        return out
    if _symp_inner(x, y) == 1:
        out[0] = (x + y) % 2
        return out
    z = np.zeros(nn, dtype=np.int64)
    for i in range(nn // 2):
        ii = 2 * i
        if (x[ii] | x[ii + 1]) and (y[ii] | y[ii + 1]):
            z[ii] = (x[ii] + y[ii]) % 2
            z[ii + 1] = (x[ii + 1] + y[ii + 1]) % 2
            if z[ii] + z[ii + 1] == 0:
                z[ii + 1] = 1
                if x[ii] != x[ii + 1]:
                    z[ii] = 1
            out[0] = (x + z) % 2
            out[1] = (y + z) % 2
            return out
    for i in range(nn // 2):
        ii = 2 * i
        if (x[ii] | x[ii + 1]) and not (y[ii] | y[ii + 1]):
            if x[ii] == x[ii + 1]:
                z[ii + 1] = 1
            else:
                z[ii + 1] = x[ii]
                z[ii] = x[ii + 1]
            break
    for i in range(nn // 2):
        ii = 2 * i
        if not (x[ii] | x[ii + 1]) and (y[ii] | y[ii + 1]):
            if y[ii] == y[ii + 1]:
                z[ii + 1] = 1
            else:
                z[ii + 1] = y[ii]
                z[ii] = y[ii + 1]
            break
    out[0] = (x + z) % 2
    out[1] = (y + z) % 2
    return out


def _random_symplectic_directsum(n: int, rng) -> np.ndarray:
    """Uniform element of Sp(2n, F_2), rows = images of the basis."""
    nn = 2 * n
    # first basis-vector image: uniform nonzero
    k = int(rng.integers(1, 1 << nn))
    f1 = np.array([(k >> b) & 1 for b in range(nn)], dtype=np.int64)
    e1 = np.zeros(nn, dtype=np.int64)
    e1[0] = 1
    t = _find_transvection(e1, f1)
    bits = rng.integers(0, 2, size=nn - 1).astype(np.int64)
    eprime = e1.copy()
    eprime[2:nn] = bits[1:]
    h0 = _transvection(t[0], eprime)
    h0 = _transvection(t[1], h0)
    if bits[0] == 1:
        f1 = f1 * 0
    g = np.eye(nn, dtype=np.int64)
    if n > 1:
        g[2:, 2:] = _random_symplectic_directsum(n - 1, rng)
    for j in range(nn):
        g[j] = _transvection(t[0], g[j])
        g[j] = _transvection(t[1], g[j])
        g[j] = _transvection(h0, g[j])
        g[j] = _transvection(f1, g[j])
    return g


def random_symplectic(n: int, rng) -> np.ndarray:
    """Uniform symplectic matrix in standard (x-block | z-block) coordinates."""
    g = _random_symplectic_directsum(n, rng)
    perm = [2 * i for i in range(n)] + [2 * i + 1 for i in range(n)]
    return g[np.ix_(perm, perm)]


def is_symplectic(m: np.ndarray) -> bool:
    nn = m.shape[0]
    n = nn // 2
    form = np.zeros((nn, nn), dtype=np.int64)
    form[:n, n:] = np.eye(n, dtype=np.int64)
    form[n:, :n] = np.eye(n, dtype=np.int64)
    return bool(np.array_equal((m @ form @ m.T) % 2, form))


# ---------------------------------------------------------------------------
# Stabilizer tableau -> state.


class StabilizerTableau:
    """n stabilizer generators as parallel bit arrays plus sign bits."""

    def __init__(self, xs, zs, signs):
        self.xs = np.array(xs, dtype=np.int64)
        self.zs = np.array(zs, dtype=np.int64)
        self.signs = np.array(signs, dtype=np.int64)
        self.n = len(self.xs)

    @staticmethod
    def random(n: int, rng) -> "StabilizerTableau":
        g = random_symplectic(n, rng)
        xs, zs = [], []
        for j in range(n):
            row = g[n + j]  # image of Z_j
            x = z = 0
            for q in range(n):
                x |= int(row[q]) << q
                z |= int(row[n + q]) << q
            xs.append(x)
            zs.append(z)
        signs = rng.integers(0, 2, size=n)
        return StabilizerTableau(xs, zs, signs)

    def generators(self):
        """Hermitian PauliStrings including signs."""
        out = []
        for x, z, s in zip(self.xs, self.zs, self.signs):
            y = popcount(int(x) & int(z))
            out.append(PauliString(self.n, int(x), int(z), (y + 2 * int(s)) % 4))
        return out

    # -- gate conjugations (CHP rules) --

    def h(self, q):
        b = 1 << q
        xb, zb = (self.xs >> q) & 1, (self.zs >> q) & 1
        self.signs ^= xb & zb
        swap = (xb ^ zb) << q
        self.xs ^= np.where(xb != zb, swap, 0)
        self.zs ^= np.where(xb != zb, swap, 0)

    def s_gate(self, q):
        xb, zb = (self.xs >> q) & 1, (self.zs >> q) & 1
        self.signs ^= xb & zb
        self.zs ^= xb << q

    def cnot(self, a, b):
        xa, za = (self.xs >> a) & 1, (self.zs >> a) & 1
        xb, zb = (self.xs >> b) & 1, (self.zs >> b) & 1
        self.signs ^= xa & zb & (xb ^ za ^ 1)
        self.xs ^= xa << b
        self.zs ^= zb << a

    def x_gate(self, q):
        self.signs ^= (self.zs >> q) & 1

    def z_gate(self, q):
        self.signs ^= (self.xs >> q) & 1

    def apply(self, gate, *qs):
        getattr(self, _GATE_METHOD[gate])(*qs)

    def row_mult(self, i, j):
        """generator_i <- generator_j * generator_i (both commute)."""
        gi = self.generators()[i]
        gj = self.generators()[j]
        prod = gj * gi
        y = prod.y_count
        assert (prod.phase_pow - y) % 2 == 0
        self.xs[i] = prod.x
        self.zs[i] = prod.z
        self.signs[i] = ((prod.phase_pow - y) % 4) // 2

    def swap_rows(self, i, j):
        for arr in (self.xs, self.zs, self.signs):
            arr[[i, j]] = arr[[j, i]]


_GATE_METHOD = {"H": "h", "S": "s_gate", "CNOT": "cnot", "X": "x_gate", "Z": "z_gate"}

# Pauli fixes in terms of the primitive gate set.
_COMPOSITES = {"X": (("H",), ("S",), ("S",), ("H",)), "Z": (("S",), ("S",))}


def synthesize_circuit(tab: StabilizerTableau):
    """H/S/CNOT circuit (list of (gate, qubits)) with circuit|0...0> stabilized by tab.

    Works by conjugating the tableau to <+Z_1, ..., +Z_n> while recording gates,
    then returning the inverse sequence. After step q the pivot row is exactly
    +Z_q; commutation then forces x_q = 0 in all later rows, so the sweep never
    revisits earlier columns.
    """
    work = StabilizerTableau(tab.xs.copy(), tab.zs.copy(), tab.signs.copy())
    n = work.n
    recorded = []

    def emit(gate, *qs):
        for sub in _COMPOSITES.get(gate, ((gate,),)):
            recorded.append((sub[0], qs))
        work.apply(gate, *qs)

    def swap_qubits(a, b):
        emit("CNOT", a, b)
        emit("CNOT", b, a)
        emit("CNOT", a, b)

    for q in range(n):
        rows = range(q, n)
        x_pivot = next((r for r in rows if work.xs[r] >> q), None)
        if x_pivot is not None:
            col = q + _lowest_bit(int(work.xs[x_pivot]) >> q)
            if col != q:
                swap_qubits(col, q)
            work.swap_rows(q, x_pivot)
            if (work.zs[q] >> q) & 1:
                emit("S", q)
            for p in range(n):
                if p != q and (work.xs[q] >> p) & 1:
                    emit("CNOT", q, p)
            if (work.zs[q] >> q) & 1:  # CNOTs may have toggled z_q on the pivot row
                emit("S", q)
            for p in range(n):
                if p != q and (work.zs[q] >> p) & 1:
                    emit("H", p)
                    emit("CNOT", q, p)
                    emit("H", p)  # CZ(q, p)
            emit("H", q)
        else:
            z_pivot = next((r for r in rows if (work.zs[r] >> q) & 1), None)
            if z_pivot is None:
                raise RuntimeError("tableau reduction failed: no usable pivot")
            work.swap_rows(q, z_pivot)
            for p in range(n):
                if p != q and (work.zs[q] >> p) & 1:
                    emit("CNOT", p, q)
        if work.signs[q]:
            emit("X", q)
        assert work.xs[q] == 0 and work.zs[q] == 1 << q and work.signs[q] == 0
        for r in range(n):
            if r != q and (work.zs[r] >> q) & 1:
                work.row_mult(r, q)

    assert np.all(work.xs == 0) and np.all(work.signs == 0)
    assert sorted(int(z) for z in work.zs) == [1 << q for q in range(n)]

    inverse = []
    for gate, qs in reversed(recorded):
        if gate == "S":
            inverse.extend([("S", qs)] * 3)  # S^-1 = S^3
        else:
            inverse.append((gate, qs))
    return inverse


def _lowest_bit(v: int) -> int:
    return (v & -v).bit_length() - 1


def apply_circuit(circuit, n: int) -> np.ndarray:
    """Apply an H/S/CNOT circuit to |0...0>, returning the amplitude vector."""
    d = 1 << n
    amps = np.zeros(d, dtype=complex)
    amps[0] = 1.0
    idx = np.arange(d)
    for gate, qs in circuit:
        if gate == "H":
            q = qs[0]
            lo = idx[(idx >> q) & 1 == 0]
            hi = lo ^ (1 << q)
            a, b = amps[lo].copy(), amps[hi].copy()
            amps[lo] = (a + b) / np.sqrt(2.0)
            amps[hi] = (a - b) / np.sqrt(2.0)
        elif gate == "S":
            q = qs[0]
            amps[(idx >> q) & 1 == 1] *= 1j
        elif gate == "CNOT":
            a, b = qs
            sel = idx[((idx >> a) & 1 == 1) & ((idx >> b) & 1 == 0)]
            amps[sel], amps[sel ^ (1 << b)] = amps[sel ^ (1 << b)].copy(), amps[sel].copy()
        else:
            raise ValueError(f"unknown gate {gate}")
    return amps


def random_stabilizer_state(n: int, rng):
    """Uniform stabilizer state; returns (amps, tableau)."""
    tab = StabilizerTableau.random(n, rng)
    circuit = synthesize_circuit(tab)
    return apply_circuit(circuit, n), tab


def count_stabilizer_states(n: int) -> int:
    out = 1 << n
    for k in range(1, n + 1):
        out *= 2**k + 1
    return out
