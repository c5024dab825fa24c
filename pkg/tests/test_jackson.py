import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pqgamma import (
    ConvergenceError,
    DomainError,
    IntegrandError,
    PQBase,
    PrecisionPolicy,
    gamma_q,
    gamma_q_integral_representation,
    pq_number,
    q_exp_big,
    q_integral,
    q_integral_a_to_inf,
    q_integral_a_to_zero,
    q_integral_neg_inf_to_a,
    q_integral_zero_to_a,
)
from pqgamma.jackson import QLattice


def one(t):
    return 1.0


def ident(t):
    return t


def zero(t):
    return 0.0


def inv_sq(t):
    return 1 / (t * t)


class TestPrimitives:
    def test_zero_to_a(self):
        assert q_integral_zero_to_a(one, 1, 0.5).value == pytest.approx(1, rel=1e-14)
        assert q_integral_zero_to_a(ident, 1, 0.5).value == pytest.approx(2 / 3, rel=1e-14)
        for k in range(4):
            for q in (0.3, 0.5, 0.9):
                got = q_integral_zero_to_a(lambda t: t**k, 1, q).value
                assert got == pytest.approx((1 - q) / (1 - q ** (k + 1)), rel=1e-13)

    def test_a_to_zero(self):
        assert q_integral_a_to_zero(one, -1, 0.5).value == pytest.approx(1, rel=1e-14)
        assert q_integral_a_to_zero(ident, -1, 0.5).value == pytest.approx(-2 / 3, rel=1e-14)
        assert q_integral_a_to_zero(zero, -1, 0.5).value == 0

    def test_a_to_inf(self):
        assert q_integral_a_to_inf(zero, 1, 0.5).value == 0
        assert q_integral_a_to_inf(inv_sq, 1, 0.5).value == pytest.approx(0.5, rel=1e-14)

    def test_neg_inf_to_a(self):
        assert q_integral_neg_inf_to_a(zero, -1, 0.5).value == 0
        assert q_integral_neg_inf_to_a(inv_sq, -1, 0.5).value == pytest.approx(0.5, rel=1e-14)

    def test_mirror_of_odd_integrand(self):
        f = lambda t: t**-3
        mirrored = q_integral_a_to_inf(lambda t: -f(t), 2.0, 0.5).value
        down = q_integral_neg_inf_to_a(f, -2.0, 0.5).value
        assert down == mirrored
        assert down == pytest.approx(-q_integral_a_to_inf(f, 2.0, 0.5).value, rel=1e-15)

    def test_big_exponential_tail(self):
        # E_q(-q t) on the lattice anchored at 1 stays finite and small
        q = 0.5
        v = q_integral_a_to_inf(lambda t: q_exp_big(-q * t, q).value, 1.0, q)
        assert math.isfinite(v.value)
        full = gamma_q_integral_representation(1.0, q, anchor=1.0)
        head = q_integral_zero_to_a(lambda t: q_exp_big(-q * t, q).value, 1.0, q)
        assert head.value + v.value == pytest.approx(full.value, rel=1e-14)

    @pytest.mark.parametrize(
        "fn,a", [(q_integral_zero_to_a, -1), (q_integral_a_to_zero, 1), (q_integral_a_to_inf, 0), (q_integral_neg_inf_to_a, 1)]
    )
    def test_wrong_sign_anchor(self, fn, a):
        with pytest.raises(DomainError):
            fn(one, a, 0.5)

    @pytest.mark.parametrize("q", [0.0, 1.0, 1.5, -0.5])
    def test_lattice_base(self, q):
        with pytest.raises(DomainError):
            QLattice(q, 1.0)

    def test_lattice_nodes(self):
        down = QLattice(0.5, 2.0)
        up = QLattice(0.5, 2.0, "toward-infinity")
        assert [down.node(n) for n in range(3)] == [2.0, 1.0, 0.5]
        assert [up.node(n) for n in range(3)] == [4.0, 8.0, 16.0]
        with pytest.raises(DomainError):
            QLattice(0.5, 1.0, "sideways")


class TestLaws:
    @pytest.mark.parametrize("q", [0.3, 0.5, 0.9])
    def test_monomial_law(self, q):
        base = PQBase(1, q)
        for k in range(7):
            for a in (0.5, 1.0, 2.0):
                got = q_integral_zero_to_a(lambda t: t**k, a, q).value
                assert got == pytest.approx(a ** (k + 1) / pq_number(k + 1, base), rel=1e-12)

    @pytest.mark.parametrize("q", [0.3, 0.5, 0.9])
    def test_additivity_on_lattice(self, q):
        f = lambda t: 1 + 3 * t - t**4
        whole = q_integral(f, 0, 1, q).value
        for m in (1, 2, 5):
            c = q**m
            inner = q_integral(f, 0, c, q).value
            # the nodes 1, q, ..., q^(m-1) not shared with [0, c]
            head = (1 - q) * math.fsum(q**n * f(q**n) for n in range(m))
            assert inner + head == pytest.approx(whole, rel=1e-12)
            assert q_integral(f, c, 1, q).value == pytest.approx(head, rel=1e-12)

    def test_composition_additive(self):
        q = 0.5
        parts = q_integral_a_to_zero(ident, -1, q).value + q_integral_zero_to_a(ident, 1, q).value
        whole = q_integral(ident, -1, 1, q).value
        assert parts == pytest.approx(-2 / 3 + 2 / 3, abs=1e-15)
        assert whole == pytest.approx(parts, abs=1e-15)
        assert q_integral(ident, -1, 0, q).value == pytest.approx(-2 / 3, rel=1e-14)
        # a finite interval not touching zero is the difference of two shapes
        assert q_integral(ident, 0.5, 1, q).value == pytest.approx(2 / 3 - 2 / 3 * 0.25, rel=1e-14)

    def test_improper_composition(self):
        q = 0.5
        f = lambda t: 1 / (1 + t) ** 3
        split = q_integral_zero_to_a(f, 1, q).value + q_integral_a_to_inf(f, 1, q).value
        assert q_integral(f, 0, math.inf, q).value == pytest.approx(split, rel=1e-12)
        assert q_integral(inv_sq, 1, math.inf, q).value == pytest.approx(0.5, rel=1e-14)
        assert q_integral(inv_sq, -math.inf, -1, q).value == pytest.approx(0.5, rel=1e-14)

    def test_improper_with_finite_end_across_zero(self):
        q = 0.5
        f = lambda t: 1 / (1 + t * t) ** 2
        lhs = q_integral(f, -2.0, math.inf, q).value
        rhs = q_integral(f, -2.0, 0, q).value + q_integral(f, 0, 1, q).value + q_integral(f, 1, math.inf, q).value
        assert lhs == pytest.approx(rhs, rel=1e-12)
        both = q_integral(f, -math.inf, math.inf, q).value
        assert both == pytest.approx(2 * q_integral(f, 0, math.inf, q).value, rel=1e-12)

    def test_interval_reversal_is_rejected(self):
        with pytest.raises(DomainError):
            q_integral(one, 1, 0, 0.5)
        with pytest.raises(DomainError):
            q_integral(one, math.inf, math.inf, 0.5)
        with pytest.raises(DomainError):
            q_integral(one, 0, 1, 0.5, anchor=0)

    @settings(max_examples=60)
    @given(
        alpha=st.floats(-5, 5),
        beta=st.floats(-5, 5),
        cf=st.lists(st.floats(-3, 3), min_size=1, max_size=4),
        cg=st.lists(st.floats(-3, 3), min_size=1, max_size=4),
        shape=st.sampled_from(["zero_to_a", "a_to_zero"]),
        q=st.sampled_from([0.3, 0.5, 0.9]),
    )
    def test_linearity_finite(self, alpha, beta, cf, cg, shape, q):
        f = lambda t: math.fsum(c * t**i for i, c in enumerate(cf))
        g = lambda t: math.fsum(c * t**i for i, c in enumerate(cg))
        h = lambda t: alpha * f(t) + beta * g(t)
        fn, a = (q_integral_zero_to_a, 1.5) if shape == "zero_to_a" else (q_integral_a_to_zero, -1.5)
        combined = fn(h, a, q).value
        separate = alpha * fn(f, a, q).value + beta * fn(g, a, q).value
        scale = abs(alpha * fn(lambda t: abs(f(t)), a, q).value) + abs(beta * fn(lambda t: abs(g(t)), a, q).value)
        assert abs(combined - separate) <= 1e-12 * max(scale, 1e-300)

    @settings(max_examples=60)
    @given(
        alpha=st.floats(-5, 5),
        beta=st.floats(-5, 5),
        k=st.integers(2, 5),
        m=st.integers(2, 5),
        shape=st.sampled_from(["a_to_inf", "neg_inf_to_a"]),
    )
    def test_linearity_improper(self, alpha, beta, k, m, shape):
        q = 0.5
        f = lambda t: t ** (-k)
        g = lambda t: 1 / (1 + t * t) ** (m / 2)
        h = lambda t: alpha * f(t) + beta * g(t)
        fn, a = (q_integral_a_to_inf, 1.0) if shape == "a_to_inf" else (q_integral_neg_inf_to_a, -1.0)
        combined = fn(h, a, q).value
        separate = alpha * fn(f, a, q).value + beta * fn(g, a, q).value
        scale = abs(alpha * fn(lambda t: abs(f(t)), a, q).value) + abs(beta * fn(g, a, q).value)
        assert abs(combined - separate) <= 1e-12 * max(scale, 1e-300)

    def test_classical_limit(self):
        policy = PrecisionPolicy(max_terms=100_000)
        assert q_integral(ident, 0, 1, 0.999, policy).value == pytest.approx(0.5, abs=1e-3)


class TestFailures:
    def test_integrand_error_reports_node(self):
        def bad(t):
            if t < 0.2:
                raise ValueError("boom")
            return t

        with pytest.raises(IntegrandError) as info:
            q_integral_zero_to_a(bad, 1, 0.5)
        assert info.value.node == 0.125

    def test_non_finite_integrand(self):
        with pytest.raises(IntegrandError):
            q_integral_zero_to_a(lambda t: math.inf, 1, 0.5)

    def test_math_domain_error(self):
        with pytest.raises(IntegrandError):
            q_integral_a_to_zero(lambda t: math.sqrt(t), -1, 0.5)

    def test_divergent_sum(self):
        with pytest.raises(ConvergenceError):
            q_integral_a_to_inf(one, 1, 0.5)

    def test_slow_sum_hits_cap(self):
        with pytest.raises(ConvergenceError):
            q_integral_zero_to_a(one, 1, 0.999, PrecisionPolicy(max_terms=100))

    def test_component_label(self):
        with pytest.raises(ConvergenceError) as info:
            q_integral(one, 0, math.inf, 0.5)
        assert info.value.component == "int_1.0^inf"
        assert "[int_1.0^inf]" in str(info.value)


class TestRepresentation:
    def test_examples(self):
        assert gamma_q_integral_representation(1, 0.5).value == pytest.approx(1, rel=1e-12)
        assert gamma_q_integral_representation(3, 0.5).value == pytest.approx(1.5, rel=1e-12)
        assert gamma_q_integral_representation(2.5, 0.5).value == pytest.approx(gamma_q(2.5, 0.5).value, rel=1e-8)

    @pytest.mark.parametrize("q", [0.3, 0.5, 0.7])
    def test_agrees_with_product(self, q):
        for x in (0.5, 1, 1.5, 2, 2.5, 3):
            rep = gamma_q_integral_representation(x, q).value
            assert rep == pytest.approx(gamma_q(x, q).value, rel=1e-8)

    def test_upward_sum_terminates_at_default_anchor(self):
        q = 0.5
        anchor = 1 / (1 - q)
        assert q_exp_big(-q * anchor / q, q).value == 0
        v = gamma_q_integral_representation(2.0, q)
        assert v.terms_used < 200

    def test_other_anchor_diverges(self):
        with pytest.raises(ConvergenceError):
            gamma_q_integral_representation(2.0, 0.3, anchor=1.0)

    @pytest.mark.parametrize("x,q", [(0, 0.5), (-1, 0.5), (1, 1.0), (1, 0.0)])
    def test_domain(self, x, q):
        with pytest.raises(DomainError):
            gamma_q_integral_representation(x, q)
