from fractions import Fraction

import numpy as np
import pytest

from qrtlab.oracle import (
    FAMILY_TO_GROUP,
    NoClosedFormError,
    UnsupportedMomentError,
    expected_value,
    expected_value_exact,
    has_closed_form,
    majorana_weight_table,
    minimize_product_ferm,
    most_magic_uniform_state,
    second_moment_exact,
    second_moment_expectation,
    uniform_product_witness,
)
from qrtlab.pauli import WITNESS_IDS
from qrtlab.tensor import StateVector
from qrtlab.witness import evaluate


class TestClosedForms:
    def test_spec_examples(self):
        assert expected_value("haar", "ent", 3) == pytest.approx(3 / 9)
        assert expected_value("imag", "real", 3) == 0.0
        assert expected_value("imag", "real", 6) == 0.0
        assert expected_value("ent", "uent", 5) == pytest.approx(1 / 5)
        assert expected_value("ferm", "ent", 4) == pytest.approx(1 / 7)
        assert expected_value("haar", "stab", 4) == pytest.approx(3 / 19)
        assert expected_value("imag", "ferm", 3) == pytest.approx(6 / 10)
        assert expected_value("ferm", "uent", 4) == pytest.approx(1 / 28)
        assert expected_value("uent", "ferm", 3) == pytest.approx(1 - 2 / 7)

    def test_exact_rationals(self):
        assert expected_value_exact("haar", "stab", 3) == Fraction(3, 11)
        assert expected_value_exact("ent", "stab", 2) == Fraction(8**2 - 5**2, 5**2 * 3)

    def test_no_closed_form(self):
        with pytest.raises(NoClosedFormError):
            expected_value("ent", "coh", 3)
        with pytest.raises(NoClosedFormError):
            expected_value("ferm", "stab", 3)
        with pytest.raises(NoClosedFormError):
            expected_value("coh", "ent", 3)
        assert not has_closed_form("ferm", "sn", 4)

    def test_complement_identity_in_expectation(self):
        # E[imag] - E[real]/(2^{1-n} - 2) = 1 for every family carrying both
        for fam in ("haar", "imag", "real", "ent", "ferm"):
            for n in range(2, 9):
                ei = expected_value_exact(fam, "imag", n)
                er = expected_value_exact(fam, "real", n)
                assert ei - er / (Fraction(2, 2**n) - 2) == 1

    def test_limit_ratios(self):
        # E_imag / E_haar for ent tends to 4/3 (within 1% by n = 12, formula level)
        n = 12
        d = 2**n
        ratio = Fraction(4, d + 2) / Fraction(3, d + 1)
        assert abs(float(ratio) - 4 / 3) < 0.01 * 4 / 3
        for n in (20, 30):
            d = 2**n
            r = expected_value_exact_big("real", "ent", n) / Fraction(3, d + 1)
            assert abs(float(r) - 1.0) < 1e-4

    def test_haar_ent_monotone(self):
        vals = [expected_value("haar", "ent", n) for n in range(1, 9)]
        assert all(a > b for a, b in zip(vals, vals[1:]))


def expected_value_exact_big(family, witness, n):
    # closed forms remain valid beyond the simulation range of n <= 8
    from qrtlab import oracle

    return oracle._FAMILY_TABLE[family](witness, n)


class TestSelfConsistency:
    @pytest.mark.parametrize("family", ["haar", "imag", "real"])
    @pytest.mark.parametrize("n", list(range(3, 9)))
    def test_quadratic_witnesses_match(self, family, n):
        group, ref = FAMILY_TO_GROUP[family]
        for wid in WITNESS_IDS:
            if wid == "stab":
                continue
            exact_closed = expected_value_exact(family, wid, n)
            exact_struct = second_moment_exact(group, ref, wid, n)
            assert exact_closed == exact_struct, (family, wid, n)

    @pytest.mark.parametrize("n", list(range(3, 9)))
    def test_matchgate_matches(self, n):
        for wid in ("ent", "ferm", "imag", "real", "uent"):
            exact_closed = expected_value_exact("ferm", wid, n)
            exact_struct = second_moment_exact("matchgate", "zero", wid, n)
            assert exact_closed == exact_struct, (wid, n)

    def test_unitary_reference_independent(self):
        for wid in ("ent", "coh", "sn"):
            a = second_moment_expectation("unitary", "zero", wid, 4)
            b = second_moment_expectation("unitary", "plus_y", wid, 4)
            assert a == b

    def test_stab_unsupported(self):
        with pytest.raises(UnsupportedMomentError):
            second_moment_expectation("unitary", "zero", "stab", 4)

    def test_matchgate_small_n_guard(self):
        with pytest.raises(UnsupportedMomentError):
            second_moment_expectation("matchgate", "zero", "uent", 2)


class TestMajoranaWeights:
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_weight_classes(self, n):
        from math import comb

        kt = majorana_weight_table(n)
        counts = np.bincount(kt.ravel(), minlength=2 * n + 1)
        for k in range(2 * n + 1):
            assert counts[k] == comb(2 * n, k)
        # Z_i has weight 2, X_i weight odd
        for q in range(n):
            assert kt[0, 1 << q] == 2
            assert kt[1 << q, 0] % 2 == 1


def product_state(alpha, beta, n):
    q = np.array(
        [
            np.exp(-0.5j * alpha) * np.cos(beta / 2),
            np.exp(0.5j * alpha) * np.sin(beta / 2),
        ]
    )
    return StateVector.from_product([q] * n)


class TestUniformProductCurves:
    def test_grid_against_direct_evaluation(self):
        """The documented angle-convention resolution: formulas match the
        direct witness on R_z(alpha) R_y(beta) product states."""
        n = 2
        for alpha in np.linspace(0, 2 * np.pi, 8):
            for beta in np.linspace(0, np.pi, 8):
                psi = product_state(alpha, beta, n)
                assert uniform_product_witness("ferm", alpha, beta, n) == pytest.approx(
                    evaluate("ferm", psi), abs=1e-10
                )
                assert uniform_product_witness("stab", alpha, beta, n) == pytest.approx(
                    evaluate("stab", psi), abs=1e-10
                )

    def test_stab_at_beta_zero(self):
        for n in (1, 3, 5):
            assert uniform_product_witness("stab", 1.234, 0.0, n) == pytest.approx(1.0)

    def test_ferm_minimum(self):
        for n in (2, 4):
            assert uniform_product_witness("ferm", 0.0, np.pi / 2, n) == pytest.approx(
                (n - 1) / n
            )

    def test_most_magic_is_one_third_single_qubit(self):
        alpha, beta, val = most_magic_uniform_state(1)
        assert val == pytest.approx(1 / 3, abs=1e-9)
        # the optimum is the T-type state: direct evaluation agrees
        assert evaluate("stab", product_state(alpha, beta, 1)) == pytest.approx(
            1 / 3, abs=1e-9
        )

    def test_minimize_product_ferm_small(self):
        val, betas = minimize_product_ferm(2, starts=6, seed=1)
        assert val == pytest.approx(1 / 2, abs=1e-6)
        assert val >= 1 / 2 - 1e-9
