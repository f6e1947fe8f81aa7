import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cdjet.geometry import GridSpec
from cdjet.kernels import PolyFactor
from cdjet.multipliers import (NOT_SUMMABLE, SUMMABLE, ConvergenceError, MonomialSymbol, column_operator_norm,
                               fifth_power_family, frame_summability_check, harmonic_family, monomial_mult_norm,
                               mult_norm_bruteforce, poly_mult_norm_upper, row_operator_norm)


def dense_matrix(coeffs, alpha, N):
    """Independent oracle: the truncated matrix built entry by entry."""
    M = np.zeros((N + 1, N + 1), dtype=complex)
    for m in range(N + 1):
        for n in range(m + 1):
            if m - n < len(coeffs):
                M[m, n] = coeffs[m - n] * ((m + 1) / (n + 1)) ** (alpha / 2)
    return M


class TestMonomial:
    def test_constant(self):
        assert monomial_mult_norm(MonomialSymbol(-3, 0), 1) == 3

    def test_z(self):
        assert monomial_mult_norm(MonomialSymbol(1, 1), 1) == pytest.approx(math.sqrt(2))

    @pytest.mark.parametrize("k", range(0, 21))
    def test_fifth_power_bound(self, k):
        phi = MonomialSymbol(Fraction(1, (k + 1) ** 4), k ** 5)
        sq = phi.norm_squared_exact()
        assert sq == Fraction(k ** 5 + 1, (k + 1) ** 8)
        assert sq <= Fraction(1, (k + 1) ** 8) + Fraction(1, (k + 1) ** 3)
        assert monomial_mult_norm(phi, 1) ** 2 == pytest.approx(float(sq), rel=1e-14)

    @pytest.mark.parametrize("alpha", [0, 1.5, -1])
    def test_alpha_domain(self, alpha):
        with pytest.raises(ValueError):
            monomial_mult_norm(MonomialSymbol(1, 1), alpha)

    def test_negative_degree(self):
        with pytest.raises(ValueError):
            MonomialSymbol(1, -1)

    @given(st.integers(0, 40), st.floats(0.05, 1), st.floats(-5, 5).filter(lambda c: c != 0))
    @settings(max_examples=50, deadline=None)
    def test_dominates_sup_norm(self, m, alpha, c):
        assert monomial_mult_norm(MonomialSymbol(c, m), alpha) >= abs(c)


class TestBruteForce:
    def test_one(self):
        assert mult_norm_bruteforce([1], 1, 100) == pytest.approx(1.0)

    def test_z(self):
        assert mult_norm_bruteforce([0, 1], 1, 2000) == pytest.approx(math.sqrt(2), rel=1e-3)

    def test_fifth_power_k2(self):
        phi = MonomialSymbol(Fraction(1, 81), 32)
        assert mult_norm_bruteforce(phi, 1, 2000) == pytest.approx(math.sqrt(33) / 81, rel=1e-3)

    @pytest.mark.parametrize("coeffs", [[1, 1], [1, -0.5, 0.25], [0.3, 0, 2j, 1]])
    @pytest.mark.parametrize("alpha", [0.5, 1.0])
    def test_dense_svd_oracle(self, coeffs, alpha):
        N = 60
        expected = np.linalg.norm(dense_matrix(coeffs, alpha, N), 2)
        assert mult_norm_bruteforce(coeffs, alpha, N, tol=1e-12) == pytest.approx(expected, rel=1e-6)

    def test_monotone_in_truncation(self):
        values = [mult_norm_bruteforce([1, 1], 1, N, tol=1e-12) for N in (5, 20, 80, 320)]
        assert all(b >= a - 1e-9 for a, b in zip(values, values[1:]))

    def test_non_convergence(self):
        with pytest.raises(ConvergenceError) as info:
            mult_norm_bruteforce([1, 1], 1, 50, max_iter=1)
        assert info.value.iterations == 1

    def test_poly_factor_input(self):
        p = PolyFactor.of([1, 1, 1])
        assert mult_norm_bruteforce(p, 1, 40) == pytest.approx(mult_norm_bruteforce([1, 1, 1], 1, 40))

    @given(st.lists(st.floats(-2, 2), min_size=1, max_size=17), st.sampled_from([0.5, 1.0]))
    @settings(max_examples=25, deadline=None)
    def test_upper_bound_dominates(self, coeffs, alpha):
        brute = mult_norm_bruteforce(coeffs, alpha, 80, tol=1e-10, max_iter=100_000)
        assert poly_mult_norm_upper(coeffs, alpha) >= brute - 1e-7


class TestUpper:
    def test_monomial(self):
        phi = MonomialSymbol(Fraction(1, 16), 1)
        assert poly_mult_norm_upper(phi, 0.5) == pytest.approx(monomial_mult_norm(phi, 0.5))

    def test_one_plus_z(self):
        assert poly_mult_norm_upper([1, 1], 1) == pytest.approx(1 + math.sqrt(2))
        assert mult_norm_bruteforce([1, 1], 1, 500) <= 1 + math.sqrt(2)

    def test_quadratic(self):
        assert poly_mult_norm_upper([1, 1, 1], 1) == pytest.approx(1 + math.sqrt(2) + math.sqrt(3))


class TestRowColumn:
    def test_row_bounded_by_column(self):
        comps = fifth_power_family(4).components
        col = column_operator_norm(comps, 1, 200)
        row = row_operator_norm(comps, 1, 200)
        assert row <= math.sqrt(10) * col

    def test_single_component_agrees(self):
        phi = [MonomialSymbol(1, 1)]
        assert row_operator_norm(phi, 1, 100) == pytest.approx(column_operator_norm(phi, 1, 100), rel=1e-6)


class TestFrameSummability:
    grid = GridSpec.polar(12, 0.999, 16)

    def test_constant(self):
        rep = frame_summability_check([MonomialSymbol(1, 0)], 1, self.grid, 1.0)
        assert rep.lower == pytest.approx(1.0) and rep.upper == pytest.approx(1.0)
        assert rep.verdict == SUMMABLE

    def test_fifth_powers(self):
        rep = frame_summability_check(fifth_power_family(64), 1, self.grid, 1.0)
        assert rep.lower >= 1
        assert rep.upper <= math.pi ** 2 / 3 + 1e-6
        assert rep.verdict == SUMMABLE
        assert rep.tail_bound == pytest.approx(2 / 65)

    def test_harmonic(self):
        rep = frame_summability_check(harmonic_family(64), 1, self.grid, 0.5)
        assert rep.verdict == NOT_SUMMABLE
        assert rep.to_dict()["upper"] == "inf"

    def test_polynomial_component(self):
        rep = frame_summability_check([[1], PolyFactor.of([1, 1, 1])], 1, self.grid, 1.0)
        assert rep.lower >= 1 - 1e-12
        assert rep.upper == pytest.approx(1 + (1 + math.sqrt(2) + math.sqrt(3)) ** 2)

    def test_empty(self):
        with pytest.raises(ValueError):
            frame_summability_check([], 1, self.grid, 1.0)

    def test_report_keys(self):
        d = frame_summability_check([MonomialSymbol(1, 0)], 1, self.grid, 1.0).to_dict()
        assert {"lower", "upper", "delta_target", "components", "tail_bound", "verdict"} <= d.keys()
