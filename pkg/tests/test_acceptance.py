"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Seeds are frozen so the Monte-Carlo 4-standard-error gates are reproducible;
the soft, sampler-dependent comparison targets are printed as report lines
rather than asserted, as specified.
"""

import os
import time
from fractions import Fraction

import numpy as np
import pytest

from qrtlab.oracle import (
    FAMILY_TO_GROUP,
    expected_value,
    expected_value_exact,
    has_closed_form,
    minimize_product_ferm,
    most_magic_uniform_state,
    second_moment_exact,
    uniform_product_witness,
)
from qrtlab.sample import (
    FamilySpec,
    gaussian_unitary,
    generate_dataset,
    haar_orthogonal,
    rng_stream,
    sample_state,
    verify_gaussian_adjoint,
)
from qrtlab.tensor import LogBranchError, StateVector
from qrtlab.witness import WITNESS_IDS, evaluate, evaluate_fast, witness_vector
from qrtlab import stats

SEED = 20240811
THREADS = os.cpu_count() or 1

_timings = {}


def _report(name, ok, detail=""):
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    assert ok, f"{name}: {detail}"


def _mc_means(records, family):
    arr = np.array(
        [[r.values[w] for w in WITNESS_IDS] for r in records if r.family == family]
    )
    means = arr.mean(axis=0)
    ses = arr.std(axis=0, ddof=1) / np.sqrt(arr.shape[0])
    return arr, means, ses


@pytest.fixture(scope="module")
def ds_n4():
    records, _ = generate_dataset(4, 200, SEED, threads=THREADS)
    return records


@pytest.fixture(scope="module")
def ds_n8():
    t0 = time.perf_counter()
    records, _ = generate_dataset(8, 200, SEED, threads=THREADS)
    _timings["n8_dataset"] = time.perf_counter() - t0
    return records


def test_table1_monte_carlo():
    """Criterion 1: haar/imag/real means within 4 SE of Table values, n=3..6."""
    t0 = time.perf_counter()
    worst = ("", 0.0)
    for n in (3, 4, 5, 6):
        records, _ = generate_dataset(
            n, 1000, SEED, families=("haar", "imag", "real"), threads=THREADS
        )
        for fam in ("haar", "imag", "real"):
            _, means, ses = _mc_means(records, fam)
            for wi, w in enumerate(WITNESS_IDS):
                exp = expected_value(fam, w, n)
                dev = abs(means[wi] - exp)
                tol = 4.0 * ses[wi] + 1e-12
                if dev > 0 and dev / max(tol, 1e-300) > worst[1]:
                    worst = (f"n={n} {fam}/{w}", dev / tol)
                assert dev <= tol, (
                    f"n={n} {fam}/{w}: mean {means[wi]:.6f} vs {exp:.6f}, "
                    f"|dev| {dev:.2e} > {tol:.2e}"
                )
    elapsed = time.perf_counter() - t0
    _report(
        "table1-monte-carlo",
        elapsed <= 600.0,
        f"96 cells within 4 SE; worst rel dev {worst[1]:.2f} at {worst[0]}; "
        f"{elapsed:.0f}s (budget 600s)",
    )


def test_oracle_self_consistency():
    """Criterion 2: structural twirl engine == closed forms, exactly."""
    checked = 0
    for n in range(3, 9):
        for fam in ("haar", "imag", "real", "ferm"):
            group, ref = FAMILY_TO_GROUP[fam]
            for w in WITNESS_IDS:
                if w == "stab" or not has_closed_form(fam, w, n):
                    continue
                closed = expected_value_exact(fam, w, n)
                struct = second_moment_exact(group, ref, w, n)
                rel = abs(float(closed) - float(struct)) / max(abs(float(closed)), 1e-300)
                assert closed == struct and rel < 1e-12, (fam, w, n)
                checked += 1
    _report("oracle-self-consistency", checked >= 150,
            f"{checked} (group, witness, n) cells identical as exact rationals")


def test_proposition_tensor_product_means():
    """Criterion 3: ent-family means match the six closed forms at n=4."""
    n = 4
    records, _ = generate_dataset(n, 2000, SEED, families=("ent",), threads=THREADS)
    _, means, ses = _mc_means(records, "ent")
    details = []
    for w in ("ferm", "imag", "real", "stab", "sn", "uent"):
        wi = WITNESS_IDS.index(w)
        exp = expected_value("ent", w, n)
        dev = abs(means[wi] - exp)
        assert dev <= 4 * ses[wi] + 1e-12, (w, means[wi], exp, ses[wi])
        details.append(f"{w}={means[wi]:.4f}~{exp:.4f}")
    assert expected_value("ent", "uent", n) == pytest.approx(1 / n)
    assert expected_value_exact("ent", "stab", n) == Fraction(8**n - 5**n, 5**n * (2**n - 1))
    _report("tensor-product-means", True, "; ".join(details))


def test_uniform_product_curves():
    """Criterion 4: formula curves == direct evaluation on a 20x20 grid (n=3);
    the most magic uniform state at n=1 scores 1/3."""
    n = 3
    worst = 0.0
    for alpha in np.linspace(0.0, 2 * np.pi, 20):
        for beta in np.linspace(0.0, np.pi, 20):
            q = np.array(
                [
                    np.exp(-0.5j * alpha) * np.cos(beta / 2),
                    np.exp(0.5j * alpha) * np.sin(beta / 2),
                ]
            )
            psi = StateVector.from_product([q] * n)
            for wid in ("ferm", "stab"):
                dev = abs(
                    uniform_product_witness(wid, alpha, beta, n) - evaluate(wid, psi)
                )
                worst = max(worst, dev)
    assert worst <= 1e-9, worst
    _, _, val = most_magic_uniform_state(1)
    assert abs(val - 1 / 3) <= 1e-9, val
    _report("uniform-product-curves",
            True, f"grid max dev {worst:.2e}; magic optimum {val:.12f}")


def test_product_ferm_minimum():
    """Criterion 5: product-state minimum of the fermionic witness is (n-1)/n."""
    details = []
    for n in (3, 4):
        val, _ = minimize_product_ferm(n, starts=12, seed=SEED)
        target = (n - 1) / n
        assert val >= target - 1e-9, (n, val)
        assert abs(val - target) <= 1e-6, (n, val)
        details.append(f"n={n}: {val:.8f} vs {target:.8f}")
    _report("product-ferm-minimum", True, "; ".join(details))


def test_gaussian_family():
    """Criterion 6: ferm-family means match closed forms; every state passes
    the adjoint check at 1e-7 and is exactly Gaussian-free."""
    n = 4
    samples = 2000
    vals = np.zeros((samples, len(WITNESS_IDS)))
    max_adj = 0.0
    max_ferm_dev = 0.0
    for i in range(samples):
        rng = rng_stream(SEED, "ferm", i)
        while True:
            a = haar_orthogonal(2 * n, rng, special=True)
            try:
                u = gaussian_unitary(a, n)
                break
            except LogBranchError:
                continue
        max_adj = max(max_adj, verify_gaussian_adjoint(a, u, n))
        wv = witness_vector(StateVector(u[:, 0], n))
        vals[i] = wv.as_array()
        max_ferm_dev = max(max_ferm_dev, abs(wv.values["ferm"] - 1.0))
    assert max_adj < 1e-7, max_adj
    assert max_ferm_dev <= 1e-8, max_ferm_dev
    means = vals.mean(axis=0)
    ses = vals.std(axis=0, ddof=1) / np.sqrt(samples)
    for w in ("ent", "imag", "real", "uent"):
        wi = WITNESS_IDS.index(w)
        exp = expected_value("ferm", w, n)
        assert abs(means[wi] - exp) <= 4 * ses[wi] + 1e-12, (w, means[wi], exp)
    _report("gaussian-family", True,
            f"adjoint max {max_adj:.2e}; |ferm-1| max {max_ferm_dev:.2e}; 4 means OK")


def _assert_discrete(vals, allowed, forbidden, tol=1e-9):
    for v in vals:
        near = [a for a in allowed if abs(v - a) <= tol]
        assert near, f"value {v} not in allowed set"
        assert all(abs(v - f) > tol for f in forbidden), f"forbidden value {v}"


def test_stabilizer_discrete_values():
    """Criterion 7: stabilizer-state witnesses take only the allowed values."""
    for n, samples in ((4, 2000), (6, 500)):
        vals = np.zeros((samples, len(WITNESS_IDS)))
        for i in range(samples):
            rng = rng_stream(SEED, "stab", i)
            psi = sample_state(FamilySpec("stab", n), rng)
            vals[i] = witness_vector(psi).as_array()
        grid = [j / n for j in range(n + 1)]
        ient = WITNESS_IDS.index("ent")
        iferm = WITNESS_IDS.index("ferm")
        ireal = WITNESS_IDS.index("real")
        _assert_discrete(vals[:, ient],
                         [g for g in grid if g != (n - 1) / n], [(n - 1) / n])
        _assert_discrete(vals[:, iferm],
                         [g for g in grid if g != (n - 2) / n], [(n - 2) / n])
        _assert_discrete(vals[:, ireal], [0.0, 1.0], [])
    _report("stabilizer-discrete-values", True,
            "ent in {j/n}\\{(n-1)/n}; ferm in {j/n}\\{(n-2)/n}; real in {0,1}")


def test_uniformity_bound_on_datasets(ds_n4, ds_n8):
    """Criterion 8: ent >= uent on every state; equality on the sn family."""
    for records, n in ((ds_n4, 4), (ds_n8, 8)):
        for rec in records:
            assert rec.values["ent"] >= rec.values["uent"] - 1e-12, rec
            if rec.family == "sn":
                assert abs(rec.values["ent"] - rec.values["uent"]) <= 1e-10, rec
    _report("uniformity-bound", True,
            "ent >= uent - 1e-12 on 3600 states; sn equality within 1e-10")


def test_exact_identities(ds_n4, ds_n8):
    """Criterion 9: complement identity everywhere; fast == brute on 100
    states per n <= 6."""
    worst = 0.0
    for records in (ds_n4, ds_n8):
        n = records[0].n
        for rec in records:
            lhs = rec.values["imag"] - rec.values["real"] / (2 ** (1 - n) - 2)
            worst = max(worst, abs(lhs - 1.0))
    assert worst <= 1e-9, worst
    rng = np.random.default_rng(SEED)
    worst_fast = 0.0
    for n in range(1, 7):
        for _ in range(100):
            amps = rng.standard_normal(2**n) + 1j * rng.standard_normal(2**n)
            psi = StateVector(amps / np.linalg.norm(amps), n)
            for wid in ("ent", "real", "imag"):
                dev = abs(evaluate_fast(wid, psi) - evaluate(wid, psi))
                worst_fast = max(worst_fast, dev)
    assert worst_fast <= 1e-9, worst_fast
    _report("exact-identities", True,
            f"complement max dev {worst:.2e}; fast-vs-brute max dev {worst_fast:.2e}")


def test_statistics_pipeline(ds_n4, ds_n8):
    """Criterion 10: hard statistical identities, plus soft report-only targets."""
    fams4 = np.array([r.family for r in ds_n4])
    vals4 = np.array([[r.values[w] for w in WITNESS_IDS] for r in ds_n4])
    rep = stats.correlation_report(vals4)
    i, j = WITNESS_IDS.index("imag"), WITNESS_IDS.index("real")
    assert abs(rep.r[i, j] + 1.0) <= 1e-9

    table = stats.pairwise_table(fams4, vals4)
    for w in WITNESS_IDS:
        num = sum(table.win_pct[k] * table.comparisons[k] for k in table.win_pct if k[1] == w)
        den = sum(table.comparisons[k] for k in table.comparisons if k[1] == w)
        assert abs(num / den - 50.0) <= 1e-9

    res4 = stats.pca(vals4)
    assert abs(res4.explained_variance_ratio.sum() - 1.0) <= 1e-10

    vals8 = np.array([[r.values[w] for w in WITNESS_IDS] for r in ds_n8])
    res8 = stats.pca(vals8)
    assert abs(res8.explained_variance_ratio.sum() - 1.0) <= 1e-10

    # soft, sampler-dependent reproduction targets (report only)
    coh_win = table.win_pct[("coh", "ent")]
    first2_4 = res4.explained_variance_ratio[:2].sum()
    first2_8 = res8.explained_variance_ratio[:2].sum()
    print(f"[SOFT] pairwise coh win under ent (n=4): {coh_win:.1f} (target ~98.0 +- 3)")
    print(f"[SOFT] PCA first-two variance: n=4 {first2_4:.3f} (target ~0.56 +- 0.08), "
          f"n=8 {first2_8:.3f} (target ~0.61 +- 0.08)")
    _report("statistics-pipeline", True,
            f"r(imag,real) = {rep.r[i, j]:.12f}; pairwise zero-sum OK; PCA ratios sum to 1")


def test_performance(ds_n8):
    """Criterion 11: n=8 dataset within budget; stab witness <= 2 s/state."""
    t = _timings["n8_dataset"]
    budget = 1800.0  # stated for 8 cores; met here even single-threaded
    t0 = time.perf_counter()
    reps = 10
    rng = rng_stream(SEED, "haar", 12345)
    psi = sample_state(FamilySpec("haar", 8), rng)
    for _ in range(reps):
        witness_vector(psi)
    per_state = (time.perf_counter() - t0) / reps
    assert t <= budget, f"n=8 dataset took {t:.0f}s"
    assert per_state <= 2.0, f"stab evaluation {per_state:.3f}s/state"
    _report("performance", True,
            f"n=8 9x200 dataset in {t:.0f}s on {THREADS} thread(s) "
            f"(budget {budget:.0f}s); all-witness evaluation {per_state*1e3:.1f} ms/state")
