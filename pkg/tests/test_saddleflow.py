import math
from fractions import Fraction

import numpy as np
import pytest

from rodescent.exactpoly import ExactPoly
from rodescent.saddleflow import (
    INFINITY,
    MAX_RELEVANT,
    POLE_PLUS,
    RELEVANT,
    AmbiguousClassification,
    BranchPoint,
    G_value,
    H_value,
    PoleHit,
    classify_fiber,
    solve_fiber,
    trace_ascent,
)

Z2M1 = ExactPoly([-1, 0, 1])
SQ3 = math.sqrt(3)


def u_plus(z, alpha):
    """Closed-form saddle branch that escapes to infinity (quadratic case)."""
    b2 = alpha * (2 - alpha)
    s = z * np.sqrt(1 - b2 / (z * z))  # ~ +z at infinity, cut on [-b,b]
    return (z + s) / (2 - alpha)


def u_minus(z, alpha):
    b2 = alpha * (2 - alpha)
    s = z * np.sqrt(1 - b2 / (z * z))
    return (z - s) / (2 - alpha)


class TestValues:
    def test_direct_evaluation_oracle(self):
        # G = log|u^2-1| - log|u-z| at z=2, u=2+sqrt(3)
        u = 2 + SQ3
        want = math.log(6 + 4 * SQ3) - math.log(SQ3)
        assert G_value(Z2M1, 1, 2.0, u) == pytest.approx(want, abs=1e-14)
        # beta = 1 at alpha = 1, so H = G
        assert H_value(Z2M1, 1, 2.0, u) == pytest.approx(want, abs=1e-14)

    def test_h_is_scaled_g(self):
        a = Fraction(1, 2)
        beta = (2 - 0.5) / 0.5
        for u in (2.5, 1 + 2j, -3.3 + 0.2j):
            g = G_value(Z2M1, a, 2.0, u)
            h = H_value(Z2M1, a, 2.0, u)
            assert h == pytest.approx(g / beta, rel=1e-13)

    def test_pole_behavior(self):
        with pytest.raises(PoleHit):
            G_value(Z2M1, 1, 2.0, 2.0)
        with pytest.raises(PoleHit):
            G_value(Z2M1, 1, 2.0, 1.0)
        # approaching u = z from outside blows up to +infinity
        assert G_value(Z2M1, 1, 2.0, 2.0 + 1e-9) > 15
        # approaching a root of P sinks to -infinity
        assert G_value(Z2M1, 1, 2.0, 1.0 + 1e-9) < -15


class TestSolveFiber:
    def test_quadratic_formula(self):
        fib = solve_fiber(Z2M1, 1, 2.0)
        got = sorted(s.u.real for s in fib.saddles)
        assert got == pytest.approx([2 - SQ3, 2 + SQ3], abs=1e-12)
        assert len(fib.saddles) == 2

    def test_saddle_residuals(self):
        P = ExactPoly([1, -2, 0, 1])
        rng = np.random.default_rng(0)
        dP = P.deriv()
        for _ in range(50):
            z = complex(rng.normal(), rng.normal()) * 2
            fib = solve_fiber(P, Fraction(4, 3), z)
            for s in fib.saddles:
                res = dP(s.u) * (s.u - z) - 4 / 3 * P(s.u)
                scale = max(1.0, abs(s.u)) ** 3
                assert abs(res) <= 1e-10 * scale

    def test_all_simple_for_strongly_generic(self):
        P = ExactPoly([1, -2, 0, 1])
        rng = np.random.default_rng(1)
        for _ in range(200):
            z = complex(rng.normal(), rng.normal()) * 3
            fib = solve_fiber(P, Fraction(1, 2), z)
            assert all(s.simple for s in fib.saddles)

    def test_branch_point_detected(self):
        # alpha=1 puts the quadratic branch points at z = +-1
        with pytest.raises(BranchPoint):
            solve_fiber(Z2M1, 1, 1.0)


class TestTraceAscent:
    def test_max_relevant_saddle_endpoints(self):
        u0 = 2 + SQ3
        classes = set()
        for direction in (+1, -1):
            path = trace_ascent(Z2M1, 1, 2.0, u0, direction)
            classes.add(path.endpoint_class)
        assert classes == {POLE_PLUS, INFINITY}

    def test_secondary_saddle_shares_endpoint(self):
        u0 = 2 - SQ3
        classes = [trace_ascent(Z2M1, 1, 2.0, u0, d).endpoint_class
                   for d in (+1, -1)]
        assert classes[0] == classes[1]

    def test_monotone_increase_along_path(self):
        path = trace_ascent(Z2M1, 1, 2.0, 2 + SQ3, +1)
        gs = [G_value(Z2M1, 1, 2.0, u) for u in path.points[1:-1]]
        assert all(b > a for a, b in zip(gs, gs[1:]))

    def test_arc_length_positive(self):
        path = trace_ascent(Z2M1, 1, 2.0, 2 + SQ3, +1)
        assert path.arc_length > 0


class TestClassifyFiber:
    @pytest.mark.parametrize("alpha", [Fraction(1, 4), Fraction(1, 2), Fraction(1),
                                       Fraction(3, 2), Fraction(7, 4)])
    def test_quadratic_oracle_picks_u_plus(self, alpha):
        rng = np.random.default_rng(int(alpha * 8))
        b = math.sqrt(float(alpha) * (2 - float(alpha)))
        done = 0
        while done < 12:
            z = complex(rng.uniform(-2.4, 2.4), rng.uniform(-1.8, 1.8))
            if abs(z.imag) < 0.08 and abs(z.real) < b + 0.08:
                continue
            fib = classify_fiber(solve_fiber(Z2M1, alpha, z))
            want = complex(u_plus(z, float(alpha)))
            assert abs(fib.max_saddle.u - want) < 1e-8 * max(1, abs(want))
            done += 1

    def test_real_axis_ordering_small_alpha(self):
        # inside the right oval with 0 < alpha < 1: u_- < u_+ < z < 1
        a = 0.5
        z = 0.95
        um, up = float(u_minus(z, a).real), float(u_plus(z, a).real)
        assert um < up < z < 1
        fib = classify_fiber(solve_fiber(Z2M1, Fraction(1, 2), z))
        assert fib.max_saddle.u == pytest.approx(up, abs=1e-9)

    def test_symmetry_under_negation(self):
        a = Fraction(1, 2)
        for z in (1.7 + 0.4j, 0.3 + 1.1j):
            f1 = classify_fiber(solve_fiber(Z2M1, a, z))
            f2 = classify_fiber(solve_fiber(Z2M1, a, -z))
            assert f2.max_saddle.u == pytest.approx(-f1.max_saddle.u, abs=1e-9)
            assert f2.max_saddle.H == pytest.approx(f1.max_saddle.H, abs=1e-10)

    def test_relevance_labels(self):
        fib = classify_fiber(solve_fiber(Z2M1, 1, 2.0))
        labels = sorted(s.relevance for s in fib.saddles)
        assert labels == [MAX_RELEVANT, RELEVANT]
        assert fib.max_saddle.G >= max(s.G for s in fib.saddles
                                       if s.relevance == RELEVANT)

    def test_tie_locus_rejected(self):
        # on [-1, 1] at alpha=1 the two saddles are complex conjugates: G ties
        with pytest.raises(AmbiguousClassification):
            classify_fiber(solve_fiber(Z2M1, 1, 0.5))

    def test_branch_constancy_along_component(self):
        # crossing nothing: the max branch follows u_+ continuously
        a = Fraction(3, 2)
        for z in np.linspace(1.4, 3.0, 9):
            fib = classify_fiber(solve_fiber(Z2M1, a, complex(z)))
            assert fib.max_saddle.u == pytest.approx(
                complex(u_plus(complex(z), 1.5)), abs=1e-8)

    def test_early_exit_matches_full(self):
        rng = np.random.default_rng(9)
        P = ExactPoly([1, -2, 0, 1])
        done = 0
        while done < 8:
            z = complex(rng.normal(), rng.normal()) * 2
            try:
                full = classify_fiber(solve_fiber(P, Fraction(1, 2), z))
                fast = classify_fiber(solve_fiber(P, Fraction(1, 2), z),
                                      early_exit=True)
            except (AmbiguousClassification, BranchPoint):
                continue
            assert full.max_saddle.u == fast.max_saddle.u
            done += 1

    def test_fiber_json_dump(self):
        fib = classify_fiber(solve_fiber(Z2M1, 1, 2.0))
        obj = fib.to_json()
        assert obj["z"] == [2.0, 0.0]
        assert len(obj["saddles"]) == 2
        assert {s["relevance"] for s in obj["saddles"]} == {MAX_RELEVANT, RELEVANT}
