"""Linear ODEs annihilating descendants, and the formal limit to the symbol.

``build_ode_general`` constructs the order-d operator (d = deg P + deg Q +
deg T) annihilating d^m/dz^m (P e^T / Q)^n:

    sum_{i,j,k} [(m+d-i+n(2j-i)) delta_{k,0} - n k T^(k)]
                / ((m+d-i)! (i-j)! (j-k)! k!) * P^(i-j) Q^(j-k) y^(d-i) = 0,

with the polynomial and rational specializations exposed separately.  All
factorial denominators are cleared so the stored coefficients are primitive
integer polynomials, which keeps verification an exact zero test and makes
the symbolic-n limit bookkeeping polynomial.

``limit_symbol`` runs the formal large-n procedure on the polynomial
operator: restore the (m+d-1)! normalization, substitute m = alpha n,
replace y^(d-i)/y by (n (d-alpha) C)^(d-i), divide by n^d and extract the
surviving top coefficient in n.  The output must coincide exactly with the
symbol curve; the cross-module equality is asserted in tests and in the
acceptance suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Union

import numpy as np

from .curves import AlphaOutOfRange, BivariateCurve
from .exactpoly import (
    ExactPoly,
    ExactRatFun,
    QC,
    TruncatedSeries,
    rat,
    rodrigues_descendant,
)
from .rootfind import find_roots

__all__ = [
    "LinearODE",
    "OdeResidual",
    "InsufficientOrder",
    "RepeatedRoots",
    "build_ode_general",
    "build_ode_rational",
    "build_ode_poly",
    "verify_ode",
    "limit_symbol",
    "verify_multiple_orthogonality",
]


class InsufficientOrder(ValueError):
    """Series input too short to produce any checkable residual coefficients."""


class RepeatedRoots(ValueError):
    """Operation requires a squarefree polynomial."""


@dataclass(frozen=True)
class LinearODE:
    """Operator sum_i coeffs[i] * y^(order - i) with exact integer coeffs."""

    order: int
    coeffs: tuple[ExactPoly, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.order + 1:
            raise ValueError("need exactly order + 1 coefficient polynomials")
        if all(c.is_zero for c in self.coeffs):
            raise ValueError("operator is identically zero")

    def apply_poly(self, y: ExactPoly) -> ExactPoly:
        acc = ExactPoly.zero()
        for i, c in enumerate(self.coeffs):
            if not c.is_zero:
                acc = acc + c * y.deriv(self.order - i)
        return acc

    def apply_ratfun(self, y: ExactRatFun) -> ExactRatFun:
        acc = ExactRatFun(ExactPoly.zero())
        for i, c in enumerate(self.coeffs):
            if not c.is_zero:
                acc = acc + y.deriv(self.order - i) * c
        return acc

    def apply_series(self, y: TruncatedSeries) -> TruncatedSeries:
        usable = y.order - self.order
        if usable < 1:
            raise InsufficientOrder(
                f"series order {y.order} cannot check an order-{self.order} operator")
        acc = TruncatedSeries(y.center, [QC(0)] * usable)
        for i, c in enumerate(self.coeffs):
            if c.is_zero:
                continue
            cs = TruncatedSeries.from_poly(c, y.center, usable)
            acc = acc + cs * y.deriv(self.order - i)
        return acc


class OdeResidual(NamedTuple):
    exact: bool
    residual: float


def _safe_float(x: Fraction) -> float:
    try:
        return abs(float(x))
    except OverflowError:
        return math.inf


def _clear_denominators(coeffs: list[ExactPoly]) -> tuple[ExactPoly, ...]:
    """Scale a coefficient list to primitive integer polynomials."""
    dens = [c.denominator for p in coeffs for c in p.coeffs]
    if not dens:
        raise ValueError("operator is identically zero")
    lcm = 1
    for q in dens:
        lcm = lcm * q // math.gcd(lcm, q)
    scaled = [p.scale(lcm) for p in coeffs]
    g = 0
    for p in scaled:
        for c in p.coeffs:
            g = math.gcd(g, abs(c.numerator))
    if g > 1:
        scaled = [p.scale(Fraction(1, g)) for p in scaled]
    return tuple(scaled)


def build_ode_general(P: ExactPoly, Q: ExactPoly, T: ExactPoly,
                      n: int, m: int) -> LinearODE:
    """Order-d operator annihilating d^m (P e^T / Q)^n, d = degP+degQ+degT."""
    if P.is_zero or Q.is_zero:
        raise ValueError("P and Q must be nonzero")
    if P.gcd(Q).degree > 0:
        raise ValueError("P and Q must be coprime")
    d = P.degree + Q.degree + max(T.degree, 0)
    coeffs = [ExactPoly.zero() for _ in range(d + 1)]
    for i in range(d + 1):
        fi = Fraction(1, math.factorial(m + d - i))
        for j in range(i + 1):
            pij = P.deriv(i - j)
            if pij.is_zero:
                continue
            base = fi / math.factorial(i - j)
            for k in range(j + 1):
                qjk = Q.deriv(j - k)
                if qjk.is_zero:
                    continue
                w = base / (math.factorial(j - k) * math.factorial(k))
                if k == 0:
                    scalar = ExactPoly([(m + d - i + n * (2 * j - i)) * w])
                else:
                    tk = T.deriv(k)
                    if tk.is_zero:
                        continue
                    scalar = tk.scale(-n * k * w)
                coeffs[i] = coeffs[i] + scalar * pij * qjk
    return LinearODE(d, _clear_denominators(coeffs))


def build_ode_rational(P: ExactPoly, Q: ExactPoly, n: int, m: int) -> LinearODE:
    """Operator for descendants of P/Q (the T = 0 reduction)."""
    if P.is_zero or Q.is_zero:
        raise ValueError("P and Q must be nonzero")
    if P.gcd(Q).degree > 0:
        raise ValueError("P and Q must be coprime")
    d = P.degree + Q.degree
    coeffs = [ExactPoly.zero() for _ in range(d + 1)]
    for i in range(d + 1):
        fi = Fraction(1, math.factorial(m + d - i))
        for j in range(i + 1):
            pj = P.deriv(j)
            qij = Q.deriv(i - j)
            if pj.is_zero or qij.is_zero:
                continue
            w = fi * (m + d + (n - 1) * i - 2 * n * j)
            w /= math.factorial(i - j) * math.factorial(j)
            coeffs[i] = coeffs[i] + (pj * qij).scale(w)
    return LinearODE(d, _clear_denominators(coeffs))


def build_ode_poly(P: ExactPoly, n: int, m: int) -> LinearODE:
    """Operator for polynomial descendants d^m (P^n)."""
    d = P.degree
    if d < 1:
        raise ValueError("deg P >= 1 required")
    coeffs = []
    for i in range(d + 1):
        w = Fraction((m - n * d) - (i - d) * (n + 1),
                     math.factorial(d + m - i) * math.factorial(i))
        coeffs.append(P.deriv(i).scale(w))
    return LinearODE(d, _clear_denominators(coeffs))


def verify_ode(ode: LinearODE,
               y: Union[ExactPoly, ExactRatFun, TruncatedSeries],
               margin: int = 4) -> OdeResidual:
    """Exact-zero test of the operator applied to a candidate solution.

    Polynomial and rational inputs are checked identically; series inputs
    must carry at least ``margin`` checkable coefficients beyond the
    operator order, and every computable residual coefficient must vanish.
    """
    if isinstance(y, ExactPoly):
        r = ode.apply_poly(y)
        res = max((_safe_float(c) for c in r.coeffs), default=0.0)
        return OdeResidual(r.is_zero, res)
    if isinstance(y, ExactRatFun):
        r = ode.apply_ratfun(y)
        res = max((_safe_float(c) for c in r.num.coeffs), default=0.0)
        return OdeResidual(r.is_zero, res)
    if isinstance(y, TruncatedSeries):
        if y.order - ode.order < margin:
            raise InsufficientOrder(
                f"need order >= {ode.order + margin}, got {y.order}")
        r = ode.apply_series(y)
        res = 0.0
        exact = True
        for c in r.coeffs:
            if not c.is_zero:
                exact = False
                res = max(res, _safe_float(c.re), _safe_float(c.im))
        return OdeResidual(exact, res)
    raise TypeError(f"cannot verify {type(y).__name__}")


def limit_symbol(P: ExactPoly, alpha) -> BivariateCurve:
    """Formal n -> infinity of the polynomial operator, down to the symbol.

    With n a formal symbol the step-1 renormalization turns every
    coefficient into a polynomial in n (the factorial ratio is the finite
    product prod_{t<i} (alpha n + d - t)); after the C substitution the
    whole equation has n-degree d, and the limit is the exact n^d
    coefficient, term by term.
    """
    d = P.degree
    alpha = rat(alpha)
    if not (0 < alpha < d):
        raise AlphaOutOfRange(f"need 0 < alpha < {d}, got {alpha}")
    curve_coeffs = [ExactPoly.zero()] * (d + 1)
    for i in range(d + 1):
        if i == 0:
            a_i = ExactPoly([1])  # (m+d) * (m+d-1)! / (m+d)! = 1
        else:
            a_i = ExactPoly([d - i, alpha - i])
            for t in range(1, i):
                a_i = a_i * ExactPoly([d - t, alpha])
            a_i = a_i.scale(Fraction(1, math.factorial(i)))
        shifted = a_i.shift_up(d - i)
        top = shifted.coeffs[d] if shifted.degree >= d else Fraction(0)
        curve_coeffs[d - i] = P.deriv(i).scale(top * (d - alpha) ** (d - i))
    return BivariateCurve(tuple(curve_coeffs), "C", alpha, d)


def verify_multiple_orthogonality(P: ExactPoly, n: int, k: int,
                                  i: int, j: int,
                                  rel_tol: float = 1e-12,
                                  max_nodes: int = 1024) -> float:
    """Relative size of int z^k d^n(P^n) dz between two roots of P.

    The integrand is entire so the straight segment between the roots is as
    good as any path; Gauss-Legendre node counts double until two successive
    estimates agree to ``rel_tol``.  Returns |integral| / max |integrand|.
    """
    if P.gcd(P.deriv()).degree > 0:
        raise RepeatedRoots("P must have simple roots")
    if not (0 <= k <= n - 1):
        raise ValueError("need 0 <= k <= n-1")
    roots = sorted(find_roots(P).roots, key=lambda z: (z.real, z.imag))
    zi, zj = roots[i], roots[j]
    R = rodrigues_descendant(P, n, n)
    rc = np.array(R.float_coeffs())
    span = zj - zi

    def estimate(nodes: int) -> tuple[complex, float]:
        x, w = np.polynomial.legendre.leggauss(nodes)
        t = 0.5 * (x + 1.0)
        z = zi + t * span
        vals = np.polynomial.polynomial.polyval(z, rc) * z ** k
        integral = 0.5 * span * np.sum(w * vals)
        return integral, float(np.max(np.abs(vals)))

    nodes = 64
    prev, top = estimate(nodes)
    while nodes < max_nodes:
        nodes *= 2
        cur, top = estimate(nodes)
        if abs(cur - prev) <= rel_tol * max(abs(cur), top):
            prev = cur
            break
        prev = cur
    peak = max(top, 1e-300)
    return abs(prev) / peak
