import math

import mpmath
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from pqgamma import (
    ConvergenceError,
    DomainError,
    LogValue,
    PQBase,
    PrecisionPolicy,
    pq_factorial,
    q_exp_big,
    q_exp_small,
    q_pochhammer_finite,
    q_pochhammer_infinite,
)

# mpmath at 40 digits, frozen
POCH_HALF_HALF = 0.2887880950866024212788997219292307800889
EQ_ONE_HALF = 2.384231029031371724149899288678397238772

# a few ulps of rounding on top of the truncation tolerance
ROUNDING = 64 * 2.0**-52

z_values = st.floats(-1.0, 1.0)
q_values = st.floats(-0.9, 0.9).filter(lambda q: abs(q) > 1e-3)


def _near_zero_factor(z, q, n=200):
    return any(abs(1 - z * q**k) < 1e-6 for k in range(n))


class TestFinite:
    def test_examples(self):
        assert q_pochhammer_finite(0.3, 0.7, 0) == 1
        assert q_pochhammer_finite(1, 0.7, 3) == 0
        assert q_pochhammer_finite(0.5, 0.5, 2) == 0.375

    def test_negative_length(self):
        with pytest.raises(DomainError):
            q_pochhammer_finite(0.5, 0.5, -1)


class TestInfinite:
    def test_zero_argument(self):
        v = q_pochhammer_infinite(0.0, 0.5)
        assert (v.value, v.terms_used) == (1.0, 0)

    def test_first_factor_vanishes(self):
        assert q_pochhammer_infinite(1.0, 0.5).value == 0

    def test_reference_value(self):
        v = q_pochhammer_infinite(0.5, 0.5)
        assert v.value == pytest.approx(POCH_HALF_HALF, rel=1e-14)
        assert v.tail_bound < 1e-14

    @pytest.mark.parametrize("z", [-3.0, -0.7, 0.2, 0.9, 2.5, 7.0])
    @pytest.mark.parametrize("q", [-0.6, 0.3, 0.5, 0.9])
    def test_against_mpmath(self, z, q):
        expected = float(mpmath.qp(z, q))
        assert q_pochhammer_infinite(z, q).value == pytest.approx(expected, rel=1e-12)

    def test_long_products_use_vector_path(self):
        v = q_pochhammer_infinite(0.5, 0.9)
        assert v.terms_used > 64
        assert v.value == pytest.approx(float(mpmath.qp(0.5, 0.9)), rel=1e-11)

    @pytest.mark.parametrize("q", [1.0, -1.0, 1.5])
    def test_rejects_q_outside_disc(self, q):
        with pytest.raises(DomainError):
            q_pochhammer_infinite(0.5, q)

    def test_max_terms(self):
        with pytest.raises(ConvergenceError):
            q_pochhammer_infinite(0.5, 0.99, PrecisionPolicy(max_terms=100))

    @pytest.mark.parametrize("kwargs", [{"rel_tol": 0}, {"rel_tol": 1.5}, {"max_terms": 0}, {"max_terms": 2.5}])
    def test_policy_validation(self, kwargs):
        with pytest.raises(DomainError):
            PrecisionPolicy(**kwargs)

    @settings(max_examples=300)
    @given(z=z_values, q=q_values)
    def test_shift_identity(self, z, q):
        assume(not _near_zero_factor(z, q))
        policy = PrecisionPolicy(rel_tol=1e-14)
        lhs = q_pochhammer_infinite(z, q, policy).value
        rhs = (1 - z) * q_pochhammer_infinite(z * q, q, policy).value
        assert lhs == pytest.approx(rhs, rel=policy.rel_tol + ROUNDING)

    @settings(max_examples=300)
    @given(z=z_values, q=q_values, n=st.integers(0, 30))
    def test_finite_infinite_splitting(self, z, q, n):
        assume(not _near_zero_factor(z, q))
        policy = PrecisionPolicy(rel_tol=1e-14)
        whole = q_pochhammer_infinite(z, q, policy).value
        split = q_pochhammer_finite(z, q, n) * q_pochhammer_infinite(z * q**n, q, policy).value
        assert split == pytest.approx(whole, rel=policy.rel_tol + ROUNDING)

    @pytest.mark.parametrize("q", [0.3, 0.5, 0.9])
    def test_tail_bound_doubling(self, q):
        for i in range(21):
            z = -1 + 0.1 * i
            v = q_pochhammer_infinite(z, q)
            n = v.terms_used
            once = q_pochhammer_finite(z, q, n)
            twice = q_pochhammer_finite(z, q, 2 * n)
            if once == 0:
                continue
            assert abs(twice - once) / abs(once) <= 2 * v.tail_bound


class TestExponentials:
    def test_examples(self):
        assert q_exp_big(0.0, 0.5).value == 1
        assert q_exp_big(-1 / (1 - 0.5), 0.5).value == 0
        assert q_exp_big(1.0, 0.5).value == pytest.approx(EQ_ONE_HALF, rel=1e-14)

    @pytest.mark.parametrize("z", [-2.0, -1.3, -0.5, 0.25, 1.0, 1.7, 2.0])
    def test_series_form(self, z):
        q = 0.5
        base = PQBase(1, q)
        series = math.fsum(q ** (k * (k - 1) / 2) * z**k / pq_factorial(k, base) for k in range(60))
        assert q_exp_big(z, q).value == pytest.approx(series, rel=1e-10)

    def test_small_exponential_inverts_big(self):
        # e_q(z) E_q(-z) = 1
        for z in (-1.5, 0.3, 1.2):
            assert q_exp_small(z, 0.6).value * q_exp_big(-z, 0.6).value == pytest.approx(1, rel=1e-13)

    def test_small_exponential_pole(self):
        with pytest.raises(DomainError):
            q_exp_small(1 / (1 - 0.5), 0.5)

    @pytest.mark.parametrize("q", [0.0, 1.0, -0.5])
    def test_base_range(self, q):
        with pytest.raises(DomainError):
            q_exp_big(1.0, q)


class TestLogValue:
    @given(x=st.floats(-1e300, 1e300, allow_nan=False), y=st.floats(-1e300, 1e300, allow_nan=False))
    def test_product_matches_float(self, x, y):
        assume(x != 0 and y != 0)
        prod = (LogValue.from_float(x) * LogValue.from_float(y)).to_float()
        expected = x * y
        if math.isfinite(expected) and expected != 0 and abs(expected) > 1e-300:
            assert prod == pytest.approx(expected, rel=1e-12)

    def test_zero_behaviour(self):
        z = LogValue.zero()
        assert z.to_float() == 0
        assert (z * LogValue.from_float(3.0)).sign == 0
        with pytest.raises(ZeroDivisionError):
            LogValue.from_float(1.0) / z

    def test_overflow_to_inf(self):
        assert LogValue(-1, 1000.0).to_float() == -math.inf

    def test_powers(self):
        assert (LogValue.from_float(-2.0) ** 3).to_float() == pytest.approx(-8.0)
        with pytest.raises(DomainError):
            LogValue.from_float(-2.0) ** 0.5

    def test_invariant_enforced(self):
        with pytest.raises(ValueError):
            LogValue(0, 1.0)
        with pytest.raises(ValueError):
            LogValue(2, 1.0)
