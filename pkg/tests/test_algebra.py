from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import semident.algebra as algebra
from semident import (Poly, RatFn, SingularMatrixError, TermCapError,
                      canonicalize_constraint, divexact, gauss_solve_ratfn,
                      htc_identify, lambda_var, recover_lambda_numeric,
                      sigma_poly, sigma_var)
from semident.simulate import off_model_sigma

from graph_fixtures import complete_dag

_VARS = [sigma_var(1, 1), sigma_var(1, 2), sigma_var(2, 2), lambda_var(1, 2)]


def _monomials():
    return st.lists(
        st.tuples(st.sampled_from(_VARS), st.integers(1, 3)),
        max_size=3).map(lambda pairs: {v: e for v, e in pairs})


def _polys():
    return st.lists(
        st.tuples(st.fractions(min_value=-5, max_value=5), _monomials()),
        max_size=4,
    ).map(lambda entries: Poly.from_terms(
        [(c, list(m.items())) for c, m in entries]))


class TestPolyBasics:
    def test_cancellation(self):
        s11, s12 = sigma_poly(1, 1), sigma_poly(1, 2)
        assert (s11 + s12) + (-s12) == s11

    def test_square(self):
        s12 = sigma_poly(1, 2)
        assert s12 * s12 == Poly.from_terms([(1, [(sigma_var(1, 2), 2)])])

    def test_mul_identity(self):
        p = sigma_poly(1, 1) * sigma_poly(2, 2) - sigma_poly(1, 2) * sigma_poly(1, 2)
        assert p * Poly.one() == p

    def test_eval_single_var(self):
        assert sigma_poly(1, 1).evaluate({sigma_var(1, 1): 2.5}) == 2.5

    def test_eval_missing_assignment_names_variable(self):
        with pytest.raises(ValueError, match="s_1_2"):
            sigma_poly(1, 2).evaluate({sigma_var(1, 1): 1.0})

    @given(a=_polys(), b=_polys(), c=_polys())
    @settings(max_examples=200, deadline=None)
    def test_ring_axioms(self, a, b, c):
        assert (a + b) + c == a + (b + c)
        assert a + b == b + a
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + Poly.zero() == a
        assert a * Poly.one() == a

    @given(a=_polys())
    @settings(max_examples=100, deadline=None)
    def test_additive_inverse(self, a):
        assert a + (-a) == Poly.zero()


class TestDivexact:
    @given(a=_polys(), b=_polys())
    @settings(max_examples=150, deadline=None)
    def test_product_roundtrip(self, a, b):
        if b.is_zero:
            return
        assert divexact(a * b, b) == a

    def test_inexact_raises(self):
        with pytest.raises(ArithmeticError):
            divexact(sigma_poly(1, 1) + Poly.one(), sigma_poly(1, 2))

    def test_zero_dividend(self):
        assert divexact(Poly.zero(), sigma_poly(1, 1)) == Poly.zero()


class TestRatFn:
    def test_common_factor_equality(self):
        s11, s12, s13 = sigma_poly(1, 1), sigma_poly(1, 2), sigma_poly(1, 3)
        assert RatFn(s13, s12) == RatFn(s11 * s13, s11 * s12)

    def test_add_zero(self):
        f = RatFn(sigma_poly(1, 2), sigma_poly(1, 1))
        assert f + RatFn.zero() == f

    def test_divide_by_zero(self):
        f = RatFn(sigma_poly(1, 2), sigma_poly(1, 1))
        with pytest.raises(ZeroDivisionError):
            f / RatFn.zero()

    def test_zero_denominator_rejected(self):
        with pytest.raises(ZeroDivisionError):
            RatFn(sigma_poly(1, 1), Poly.zero())

    @given(a=_polys(), b=_polys(), scale=_polys())
    @settings(max_examples=150, deadline=None)
    def test_eq_invariant_under_common_factor(self, a, b, scale):
        if b.is_zero or scale.is_zero:
            return
        f = RatFn(a, b)
        assert f == RatFn(a * scale, b * scale)

    @given(a=_polys(), b=_polys(), c=_polys(), d=_polys())
    @settings(max_examples=100, deadline=None)
    def test_field_identities(self, a, b, c, d):
        if b.is_zero or d.is_zero:
            return
        f, g = RatFn(a, b), RatFn(c, d)
        assert f + g == g + f
        assert f * g == g * f
        assert (f + g) - g == f


class TestCanonicalize:
    def test_scaling_removed(self):
        base = sigma_poly(1, 1) * sigma_poly(2, 2) - sigma_poly(1, 2) * sigma_poly(1, 2)
        assert canonicalize_constraint(base.scale(Fraction(-7, 3))) == \
            canonicalize_constraint(base)

    def test_content_and_sign(self):
        p = sigma_poly(1, 2).scale(4) - sigma_poly(1, 1).scale(2)
        got = canonicalize_constraint(p)
        assert got == sigma_poly(1, 1) - sigma_poly(1, 2).scale(2)

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            canonicalize_constraint(Poly.zero())

    def test_lambda_variables_rejected(self):
        with pytest.raises(ValueError):
            canonicalize_constraint(Poly.variable(lambda_var(1, 2)))

    @given(p=_polys(), c=st.fractions(min_value=-9, max_value=9))
    @settings(max_examples=150, deadline=None)
    def test_scale_invariance(self, p, c):
        sigma_only = Poly.from_terms(
            [(coeff, [(v, e) for v, e in mono if v.kind == "s"])
             for mono, coeff in p.terms.items()])
        if sigma_only.is_zero or c == 0:
            return
        assert canonicalize_constraint(sigma_only.scale(c)) == \
            canonicalize_constraint(sigma_only)


class TestGaussSolve:
    def test_one_by_one(self):
        sol = gauss_solve_ratfn([[RatFn(sigma_poly(1, 2))]],
                                [RatFn(sigma_poly(1, 3))])
        assert sol[0] == RatFn(sigma_poly(1, 3), sigma_poly(1, 2))

    def test_identity_matrix(self):
        one, zero = RatFn.one(), RatFn.zero()
        b = [RatFn(sigma_poly(1, 2)), RatFn(sigma_poly(1, 3))]
        sol = gauss_solve_ratfn([[one, zero], [zero, one]], b)
        assert sol == b

    def test_singular_raises(self):
        row = [RatFn(sigma_poly(1, 1)), RatFn(sigma_poly(1, 1))]
        with pytest.raises(SingularMatrixError):
            gauss_solve_ratfn([row, row], [RatFn.one(), RatFn.zero()])

    def test_empty_system(self):
        assert gauss_solve_ratfn([], []) == []

    def test_matches_numeric_recovery(self):
        # symbolic solve for the top vertex of the saturated 3-vertex DAG
        g = complete_dag(3)
        cert = htc_identify(g)
        rows = [[RatFn(sigma_poly(s, p)) for p in (1, 2)] for s in (1, 2)]
        rhs = [RatFn(sigma_poly(s, 3)) for s in (1, 2)]
        sol = gauss_solve_ratfn(rows, rhs)
        rng = np.random.default_rng(5)
        for trial in range(20):
            sigma = off_model_sigma(3, int(rng.integers(1 << 30)))
            lam = recover_lambda_numeric(g, cert, sigma)
            assignment = {sigma_var(i, j): sigma[i - 1, j - 1]
                          for i in range(1, 4) for j in range(i, 4)}
            assert abs(sol[0].evaluate(assignment) - lam[0, 2]) < 1e-9
            assert abs(sol[1].evaluate(assignment) - lam[1, 2]) < 1e-9


class TestTermCap:
    def test_cap_trips(self, monkeypatch):
        monkeypatch.setattr(algebra, "TERM_CAP", 8)
        a = Poly.from_terms([(1, [(sigma_var(1, i), 1)]) for i in range(1, 5)])
        b = Poly.from_terms([(1, [(sigma_var(2, i), 1)]) for i in range(2, 6)])
        with pytest.raises(TermCapError):
            a * b
