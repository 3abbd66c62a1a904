from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from rodescent.exactpoly import (
    QC,
    CenterIsPole,
    ExactPoly,
    ExactRatFun,
    TruncatedSeries,
    derivative,
    parse_poly,
    poly_pow,
    ratfun_descendant,
    rodrigues_descendant,
    series_descendant,
)

Z2M1 = ExactPoly([-1, 0, 1])  # z^2 - 1


def naive_pow(P, n):
    # independent oracle: plain repeated convolution
    acc = ExactPoly([1])
    for _ in range(n):
        out = [Fraction(0)] * (len(acc.coeffs) + len(P.coeffs) - 1 or 1)
        for i, a in enumerate(acc.coeffs):
            for j, b in enumerate(P.coeffs):
                out[i + j] += a * b
        acc = ExactPoly(out)
    return acc


def termwise_deriv(P, k):
    # independent oracle: power rule per term
    coeffs = list(P.coeffs)
    for _ in range(k):
        coeffs = [coeffs[i] * i for i in range(1, len(coeffs))]
    return ExactPoly(coeffs)


class TestPolyPow:
    def test_zero_power_is_one(self):
        assert poly_pow(Z2M1, 0) == ExactPoly([1])

    def test_square_matches_naive_convolution(self):
        assert poly_pow(Z2M1, 2) == naive_pow(Z2M1, 2)
        assert poly_pow(Z2M1, 2) == ExactPoly([1, 0, -2, 0, 1])

    def test_binomial_cube(self):
        assert poly_pow(ExactPoly([1, 1]), 3) == ExactPoly([1, 3, 3, 1])

    def test_degree_law(self):
        assert poly_pow(Z2M1, 7).degree == 14

    def test_zero_base(self):
        assert poly_pow(ExactPoly(()), 3).is_zero


class TestDerivative:
    def test_second_derivative_of_quartic(self):
        p = ExactPoly([1, 0, -2, 0, 1])  # z^4 - 2z^2 + 1
        assert derivative(p, 2) == termwise_deriv(p, 2)
        assert derivative(p, 2) == ExactPoly([-4, 0, 12])

    def test_identity(self):
        assert derivative(Z2M1, 0) == Z2M1

    def test_over_differentiation(self):
        assert derivative(ExactPoly([0, 0, 0, 1]), 4).is_zero


class TestRodriguesDescendant:
    def test_small_case_composes_pow_and_deriv(self):
        r = rodrigues_descendant(Z2M1, 2, 2)
        assert r == termwise_deriv(naive_pow(Z2M1, 2), 2)
        assert r == ExactPoly([-4, 0, 12])

    def test_legendre_p2(self):
        # scaled by 1/(2^2 * 2!) this is the degree-2 Legendre polynomial
        r = rodrigues_descendant(Z2M1, 2, 2).scale(Fraction(1, 8))
        assert r == ExactPoly([Fraction(-1, 2), 0, Fraction(3, 2)])

    def test_zeroth_derivative_is_power(self):
        assert rodrigues_descendant(Z2M1, 3, 0) == poly_pow(Z2M1, 3)

    def test_over_differentiation_gives_zero(self):
        assert rodrigues_descendant(Z2M1, 2, 5).is_zero

    def test_degree_formula(self):
        for n in range(1, 5):
            for m in range(0, 2 * n):
                r = rodrigues_descendant(Z2M1, n, m)
                assert r.degree == 2 * n - m


small_rats = st.fractions(min_value=-4, max_value=4, max_denominator=6)
small_polys = st.lists(small_rats, min_size=0, max_size=13).map(ExactPoly)


class TestProperties:
    @settings(max_examples=60, deadline=None)
    @given(small_polys, small_polys)
    def test_leibniz(self, a, b):
        lhs = derivative(a * b, 1)
        rhs = derivative(a, 1) * b + a * derivative(b, 1)
        assert lhs == rhs

    @settings(max_examples=20, deadline=None)
    @given(st.integers(1, 3), st.integers(1, 5))
    def test_descendant_derivative_chain(self, n, m):
        P = ExactPoly([2, -1, 0, 1])  # z^3 - z + 2
        m = min(m, n * 3)
        assert rodrigues_descendant(P, n, m) == derivative(
            rodrigues_descendant(P, n, m - 1), 1)


class TestRatFun:
    def test_quotient_rule_one_over_z(self):
        f = ExactRatFun(ExactPoly([1]), ExactPoly([0, 1]))  # 1/z
        g = ratfun_descendant(f, 1, 1)
        assert g == ExactRatFun(ExactPoly([-1]), ExactPoly([0, 0, 1]))

    def test_quotient_rule_mobius(self):
        f = ExactRatFun(ExactPoly([0, 1]), ExactPoly([-1, 1]))  # z/(z-1)
        g = ratfun_descendant(f, 1, 1)
        # oracle: (num' den - num den')/den^2, reduced by hand
        assert g == ExactRatFun(ExactPoly([-1]), ExactPoly([1, -2, 1]))

    def test_power_with_zero_derivatives(self):
        f = ExactRatFun(ExactPoly([0, 1]), ExactPoly([-1, 1]))
        assert ratfun_descendant(f, 3, 0) == f.pow(3)

    def test_normalization_is_canonical(self):
        a = ExactRatFun(ExactPoly([0, 2]), ExactPoly([0, 0, 4]))
        b = ExactRatFun(ExactPoly([1]), ExactPoly([0, 2]))
        assert a == b
        assert a.den.lc == 1


class TestSeries:
    def test_exponential(self):
        s = series_descendant(ExactPoly([1]), ExactPoly([1]), ExactPoly([0, 1]),
                              n=1, m=1, center=0, order=4)
        assert list(s.coeffs) == [QC(1), QC(1), QC(Fraction(1, 2)), QC(Fraction(1, 6))]

    def test_matches_exact_descendant(self):
        s = series_descendant(Z2M1, ExactPoly([1]), ExactPoly(()),
                              n=2, m=2, center=0, order=3)
        assert [c.re for c in s.coeffs] == [-4, 0, 12]
        assert all(c.im == 0 for c in s.coeffs)

    def test_geometric_derivative(self):
        s = series_descendant(ExactPoly([1]), ExactPoly([1, -1]), ExactPoly(()),
                              n=1, m=1, center=0, order=3)
        assert [c.re for c in s.coeffs] == [1, 2, 3]

    def test_center_at_pole_raises(self):
        with pytest.raises(CenterIsPole):
            series_descendant(ExactPoly([1]), ExactPoly([0, 1]), ExactPoly(()),
                              n=1, m=1, center=0, order=5)

    @pytest.mark.parametrize("n,m", [(1, 1), (2, 2), (3, 1)])
    def test_polynomial_series_cross_check(self, n, m):
        # with T = 0, Q = 1 the series must agree with the exact descendant
        order = 6
        s = series_descendant(Z2M1, ExactPoly([1]), ExactPoly(()),
                              n=n, m=m, center=0, order=order)
        r = rodrigues_descendant(Z2M1, n, m)
        for k in range(order):
            want = r.coeffs[k] if k <= r.degree else Fraction(0)
            assert s.coeffs[k] == QC(want)

    def test_complex_rational_center(self):
        s = series_descendant(Z2M1, ExactPoly([1]), ExactPoly(()),
                              n=2, m=1, center=QC(Fraction(1, 2), Fraction(1, 3)),
                              order=4)
        r = rodrigues_descendant(Z2M1, 2, 1)
        c = QC(Fraction(1, 2), Fraction(1, 3))
        # compare series constant term with exact evaluation at the center
        acc = QC(0)
        for coeff in reversed(r.coeffs):
            acc = acc * c + QC(coeff)
        assert s.coeffs[0] == acc


class TestTruncatedSeriesOps:
    def test_recip_roundtrip(self):
        s = TruncatedSeries.from_poly(ExactPoly([1, 2, 3]), 0, 6)
        prod = s * s.recip()
        assert prod.coeffs[0] == QC(1)
        assert all(c.is_zero for c in prod.coeffs[1:])

    def test_exp_of_zero_constant(self):
        t = TruncatedSeries(0, [QC(0), QC(1), QC(0), QC(0)])
        e = t.exp()
        assert [c.re for c in e.coeffs] == [1, 1, Fraction(1, 2), Fraction(1, 6)]


class TestParsing:
    @pytest.mark.parametrize("text,poly", [
        ("[-1, 0, 1]", Z2M1),
        ("z^2 - 1", Z2M1),
        ("z^2-1", Z2M1),
        ("-1 + z^2", Z2M1),
        ("z^3-z", ExactPoly([0, -1, 0, 1])),
        ("3/2*z^4 - z + 7", ExactPoly([7, -1, 0, 0, Fraction(3, 2)])),
        ("x^2 - 1", Z2M1),
        ("[1/2, -2/3]", ExactPoly([Fraction(1, 2), Fraction(-2, 3)])),
        ("5", ExactPoly([5])),
        ("-z", ExactPoly([0, -1])),
    ])
    def test_accepts(self, text, poly):
        assert parse_poly(text) == poly

    @pytest.mark.parametrize("bad", ["", "[1, 2", "z**2", "q^2", "1 1"])
    def test_rejects(self, bad):
        with pytest.raises(ValueError):
            parse_poly(bad)

    def test_json_round_trip(self):
        p = ExactPoly([Fraction(-1, 3), 0, 1])
        assert ExactPoly.from_json(p.to_json()) == p
        assert p.to_json() == {"coeffs": ["-1/3", "0", "1"]}
