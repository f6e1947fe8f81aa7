import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cdjet.series import (CoeffSeq, Mode, ModeError, cauchy_product, eval_radial, format_scalar,
                          jet_entry_eval, series_reciprocal, to_exact)

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=50)
nonneg = st.fractions(min_value=0, max_value=5, max_denominator=50)


def seqs(elements=rationals, min_size=1, max_size=12):
    return st.lists(elements, min_size=min_size, max_size=max_size).map(CoeffSeq.exact)


def dirichlet(N, mode="exact"):
    return CoeffSeq([Fraction(1, n + 1) for n in range(N + 1)], mode) if mode == "exact" else \
        CoeffSeq.float(1.0 / np.arange(1, N + 2))


class TestScalars:
    def test_exact_values_are_reduced(self):
        assert to_exact("6/8") == Fraction(3, 4)
        assert to_exact(Fraction(6, 8)).denominator == 4

    def test_floats_are_refused_in_exact_mode(self):
        with pytest.raises(TypeError):
            to_exact(0.1)
        with pytest.raises(TypeError):
            CoeffSeq.exact([1, 0.5])

    def test_zero_denominator(self):
        with pytest.raises(ZeroDivisionError):
            to_exact("1/0")

    def test_format(self):
        assert format_scalar(Fraction(-1, 4)) == "-1/4"
        assert format_scalar(0.5) == 0.5
        assert format_scalar(1 + 2j) == [1.0, 2.0]


class TestCoeffSeq:
    def test_float_storage_is_read_only(self):
        s = CoeffSeq.float([1.0, 2.0])
        with pytest.raises(ValueError):
            s.coeffs[0] = 3.0

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            CoeffSeq.exact([])

    def test_to_float_explicit(self):
        s = CoeffSeq.exact(["1/2", 3])
        assert s.to_float().mode is Mode.FLOAT
        np.testing.assert_array_equal(s.to_float().coeffs, [0.5, 3.0])

    def test_padded_and_truncated(self):
        s = CoeffSeq.exact([1, 2])
        assert list(s.padded(3)) == [1, 2, 0, 0]
        assert list(s.truncated(0)) == [1]
        with pytest.raises(ValueError):
            s.truncated(5)


class TestCauchyProduct:
    def test_dirichlet_times_inverse_squares(self):
        b = CoeffSeq.exact(Fraction(1, (n + 1) ** 2) for n in range(3))
        c = cauchy_product(dirichlet(2), b)
        assert c[2] == Fraction(1, 9) + Fraction(1, 8) + Fraction(1, 3) == Fraction(41, 72)

    def test_delta_is_identity(self):
        a = CoeffSeq.exact([3, "1/7", -2, 5])
        assert cauchy_product(a, CoeffSeq.delta(3)) == a

    def test_fifth_power_support(self):
        b = CoeffSeq.exact([1, Fraction(1, 256), 0])
        assert cauchy_product(dirichlet(2), b)[1] == Fraction(129, 256)

    def test_mode_mismatch(self):
        with pytest.raises(ModeError):
            cauchy_product(dirichlet(3), dirichlet(3, "float"))

    def test_order_overflow(self):
        with pytest.raises(ValueError):
            cauchy_product(dirichlet(3), dirichlet(5), N=4)

    def test_float_matches_exact(self):
        a, b = dirichlet(20), CoeffSeq.exact(Fraction(1, (n + 1) ** 2) for n in range(21))
        np.testing.assert_allclose(cauchy_product(a.to_float(), b.to_float()).coeffs,
                                   cauchy_product(a, b).as_array(), rtol=1e-14)

    @given(seqs(max_size=64), seqs(max_size=64))
    @settings(max_examples=40, deadline=None)
    def test_commutative(self, a, b):
        assert cauchy_product(a, b) == cauchy_product(b, a)

    @given(seqs(), seqs(), seqs())
    @settings(max_examples=40, deadline=None)
    def test_associative(self, a, b, c):
        N = min(a.order, b.order, c.order)
        left = cauchy_product(cauchy_product(a, b, N), c, N)
        right = cauchy_product(a, cauchy_product(b, c, N), N)
        assert left == right


class TestReciprocal:
    def test_delta(self):
        assert series_reciprocal(CoeffSeq.delta(5)) == CoeffSeq.delta(5)

    def test_dirichlet_first_terms(self):
        r = series_reciprocal(dirichlet(2))
        assert list(r) == [1, Fraction(-1, 2), Fraction(-1, 12)]

    def test_zero_constant_term(self):
        with pytest.raises(ZeroDivisionError):
            series_reciprocal(CoeffSeq.exact([0, 1]))

    @pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75, 1.0])
    def test_float_dirichlet_inverse(self, alpha):
        b = CoeffSeq.float(np.arange(1, 202) ** -alpha)
        conv = cauchy_product(b, series_reciprocal(b)).coeffs
        assert abs(conv[0] - 1) < 1e-12
        assert np.max(np.abs(conv[1:])) < 1e-12

    @given(st.fractions(min_value="1/10", max_value=3, max_denominator=20), seqs(max_size=14))
    @settings(max_examples=40, deadline=None)
    def test_two_sided_inverse_exact(self, b0, tail):
        b = CoeffSeq.exact([b0, *tail])
        r = series_reciprocal(b)
        delta = CoeffSeq.delta(b.order)
        assert cauchy_product(b, r) == delta
        assert cauchy_product(r, b) == delta


class TestEvalRadial:
    def test_geometric_series(self):
        a = CoeffSeq.float(np.ones(61))
        value, tail = eval_radial(a, 0.5, tail_coeff_bound=1.0)
        assert value <= 2 <= value + tail

    def test_dirichlet_log(self):
        value, tail = eval_radial(dirichlet(60, "float"), 0.5, tail_coeff_bound=1.0)
        assert abs(value - 2 * math.log(2)) < 1e-10
        assert tail < 1e-10

    def test_constant_term(self):
        assert eval_radial(CoeffSeq.float([2.0, 2.0, 2 / 3]), 0.0).value == 2.0

    def test_no_tail_requested(self):
        assert eval_radial(dirichlet(5), 0.3).tail_bound == 0.0

    @pytest.mark.parametrize("x", [-0.1, 1.0, 1.5])
    def test_outside_unit_interval(self, x):
        with pytest.raises(ValueError):
            eval_radial(dirichlet(5), x)

    def test_vectorized(self):
        xs = np.array([0.0, 0.25, 0.5])
        vals = eval_radial(dirichlet(30, "float"), xs).value
        assert vals.shape == (3,)

    @given(st.lists(nonneg, min_size=2, max_size=30), st.floats(0, 0.99))
    @settings(max_examples=50, deadline=None)
    def test_partial_sums_monotone(self, coeffs, x):
        a = CoeffSeq.exact(coeffs)
        sums = [eval_radial(a.truncated(N), x).value for N in range(a.order + 1)]
        assert all(s2 >= s1 - 1e-12 * max(1.0, abs(s1)) for s1, s2 in zip(sums, sums[1:]))


def _h(a):
    return lambda w: eval_radial(a, np.abs(w) ** 2).value


class TestJetEntries:
    def test_zeroth_derivative(self):
        a = dirichlet(40, "float")
        w = 0.3 - 0.4j
        assert jet_entry_eval(a, 0, 0, w) == pytest.approx(eval_radial(a, abs(w) ** 2).value, rel=1e-14)

    def test_szego_mixed_at_origin(self):
        assert jet_entry_eval(CoeffSeq.float(np.ones(10)), 1, 1, 0) == 1

    def test_dirichlet_at_origin(self):
        # radial h: the pure first derivative vanishes at 0, the mixed one is a_1
        assert jet_entry_eval(dirichlet(10), 1, 0, 0) == 0
        assert jet_entry_eval(dirichlet(10), 1, 1, 0) == 0.5

    def test_outside_disk(self):
        with pytest.raises(ValueError):
            jet_entry_eval(dirichlet(10), 1, 0, 1.0)

    def test_order_too_high(self):
        with pytest.raises(ValueError):
            jet_entry_eval(dirichlet(2), 3, 0, 0.1)

    @given(st.integers(0, 4), st.integers(0, 4), st.floats(0, 0.9), st.floats(0, 2 * math.pi))
    @settings(max_examples=60, deadline=None)
    def test_conjugate_symmetry(self, i, j, r, t):
        a = dirichlet(30, "float")
        w = r * np.exp(1j * t)
        assert jet_entry_eval(a, i, j, w) == pytest.approx(np.conj(jet_entry_eval(a, j, i, w)), abs=1e-12)

    @pytest.mark.parametrize("w", [0.2 + 0.1j, -0.5j, 0.6 - 0.3j, 0.9 + 0j])
    def test_against_finite_differences(self, w):
        a = dirichlet(400, "float")
        h = _h(a)
        s = 1e-4
        du = (h(w + s) - h(w - s)) / (2 * s)
        dv = (h(w + 1j * s) - h(w - 1j * s)) / (2 * s)
        d_w = 0.5 * (du - 1j * dv)
        lap = (h(w + s) + h(w - s) + h(w + 1j * s) + h(w - 1j * s) - 4 * h(w)) / s ** 2
        assert abs(jet_entry_eval(a, 1, 0, w) - d_w) < 1e-4 * abs(d_w)
        exact = jet_entry_eval(a, 1, 1, w)
        assert abs(exact - lap / 4) < 1e-4 * abs(exact)
