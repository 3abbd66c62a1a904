"""The plane algebraic curves governing the root asymptotics.

Three exact curves are built from a degree-d polynomial P and a rational
0 < alpha < d:

* the symbol curve (variable C):
      sum_k  alpha^(k-1) (alpha-k) (d-alpha)^(d-k) / k! * P^(k)(z) C^(d-k) = 0,
  the algebraic equation satisfied by the limiting Cauchy transform;
* the scaled symbol curve (variable W = ((d-alpha)/alpha) C):
      sum_k  (alpha-k)/k! * P^(k)(z) W^(d-k) = 0;
* the saddle-point curve (variable u):
      P'(u)(u-z) - alpha P(u) = 0,
  whose fiber over z consists of the saddle points of the phase function.

The change of variables C = alpha / ((d-alpha)(u-z)) identifies the saddle
curve with the symbol curve off the excluded loci, which is what lets the
numeric saddle machinery certify the exact curves.

All coefficients stay exact rationals; only ``branch_points`` hands its
final univariate discriminant to the floating root finder.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .exactpoly import ExactPoly, Rat, rat
from .rootfind import find_roots

__all__ = [
    "BivariateCurve",
    "SlopeData",
    "AlphaOutOfRange",
    "DegenerateInput",
    "symbol_curve",
    "scaled_symbol_curve",
    "saddle_curve",
    "to_symbol_coords",
    "from_symbol_coords",
    "branch_points",
    "slopes_at_infinity",
    "strongly_generic",
    "u_resultant",
]


class AlphaOutOfRange(ValueError):
    """alpha must satisfy 0 < alpha < deg P."""


class DegenerateInput(ValueError):
    """Coordinate change evaluated on its excluded locus (u = z or C = 0)."""


def _check_alpha(alpha: Fraction, d: int) -> Fraction:
    alpha = rat(alpha)
    if not (0 < alpha < d):
        raise AlphaOutOfRange(f"need 0 < alpha < {d}, got {alpha}")
    return alpha


@dataclass(frozen=True)
class BivariateCurve:
    """Algebraic relation sum_j c_j(z) V^j with c_j exact polynomials in z.

    ``variable_tag`` records which fiber variable V means: "C" for the
    Cauchy-transform symbol curve, "W" for its rescaling, "U" for the
    saddle-point curve.
    """

    coeffs_by_power: tuple[ExactPoly, ...]
    variable_tag: str
    alpha: Fraction
    base_poly_degree: int

    def __post_init__(self):
        if not self.coeffs_by_power or self.coeffs_by_power[-1].is_zero:
            raise ValueError("leading fiber coefficient must be nonzero")
        if len(self.coeffs_by_power) - 1 != self.base_poly_degree:
            raise ValueError("fiber degree must equal deg P")

    @property
    def fiber_degree(self) -> int:
        return len(self.coeffs_by_power) - 1

    def eval_complex(self, z: complex, v: complex) -> complex:
        acc = 0j
        for c in reversed(self.coeffs_by_power):
            acc = acc * v + c(z)
        return acc

    def eval_scale(self, z: complex, v: complex) -> float:
        """Magnitude scale of the defining sum at (z, v), for residual tests."""
        acc = 0.0
        av = abs(v)
        for c in reversed(self.coeffs_by_power):
            acc = acc * av + abs(c(z))
        return acc

    def fiber_poly_at(self, z: complex) -> list[complex]:
        """Coefficients (low to high in V) of the fiber polynomial at z."""
        return [c(z) for c in self.coeffs_by_power]

    def to_json(self) -> dict:
        num, den = self.alpha.numerator, self.alpha.denominator
        return {
            "alpha": f"{num}/{den}" if den != 1 else str(num),
            "variable": self.variable_tag,
            "coeffs": [c.to_json()["coeffs"] for c in self.coeffs_by_power],
        }

    @classmethod
    def from_json(cls, obj) -> "BivariateCurve":
        coeffs = tuple(ExactPoly(c) for c in obj["coeffs"])
        return cls(coeffs, obj["variable"], rat(obj["alpha"]), len(coeffs) - 1)


@dataclass(frozen=True)
class SlopeData:
    """Branch slopes of the scaled curve at z = infinity.

    The slope equation (s+1)^(d-1) (alpha (s+1) - d) = 0 has the essential
    slope d/alpha - 1 once and slope -1 with multiplicity d - 1.
    """

    essential_slope: Fraction
    other_slope: int
    other_multiplicity: int


def symbol_curve(P: ExactPoly, alpha) -> BivariateCurve:
    """Exact symbol curve, stored with no overall normalization removed."""
    d = P.degree
    alpha = _check_alpha(alpha, d)
    coeffs = [ExactPoly.zero()] * (d + 1)
    for k in range(d + 1):
        c = alpha ** (k - 1) * (alpha - k) * (d - alpha) ** (d - k) / Rat(math.factorial(k))
        coeffs[d - k] = P.deriv(k).scale(c)
    return BivariateCurve(tuple(coeffs), "C", alpha, d)


def scaled_symbol_curve(P: ExactPoly, alpha) -> BivariateCurve:
    """Scaled symbol curve in W = ((d-alpha)/alpha) C."""
    d = P.degree
    alpha = _check_alpha(alpha, d)
    coeffs = [ExactPoly.zero()] * (d + 1)
    for k in range(d + 1):
        coeffs[d - k] = P.deriv(k).scale((alpha - k) / Rat(math.factorial(k)))
    return BivariateCurve(tuple(coeffs), "W", alpha, d)


def saddle_curve(P: ExactPoly, alpha) -> BivariateCurve:
    """Saddle-point curve F(z, u) = P'(u)(u - z) - alpha P(u) as a u-polynomial.

    The coefficient of u^k is (k - alpha) p_k - (k+1) p_{k+1} z, affine in z;
    the leading coefficient (d - alpha) lc(P) never vanishes for admissible
    alpha.
    """
    d = P.degree
    alpha = _check_alpha(alpha, d)
    p = list(P.coeffs) + [Fraction(0)]
    coeffs = []
    for k in range(d + 1):
        const = (k - alpha) * p[k]
        lin = -(k + 1) * p[k + 1]
        coeffs.append(ExactPoly([const, lin]))
    return BivariateCurve(tuple(coeffs), "U", alpha, d)


def to_symbol_coords(z: complex, u: complex, alpha, d: int) -> tuple[complex, complex]:
    """(z, u) on the saddle curve -> (z, C) on the symbol curve."""
    if u == z:
        raise DegenerateInput("u = z is excluded from the coordinate change")
    a = float(rat(alpha))
    return z, a / ((d - a) * (u - z))


def from_symbol_coords(z: complex, C: complex, alpha, d: int) -> tuple[complex, complex]:
    """Inverse map: u = z + alpha / ((d - alpha) C)."""
    if C == 0:
        raise DegenerateInput("C = 0 is excluded from the coordinate change")
    a = float(rat(alpha))
    return z, z + a / ((d - a) * C)


def strongly_generic(P: ExactPoly) -> bool:
    """True when both P and P' have simple roots (exact gcd checks)."""
    if P.degree < 2:
        return False
    dP = P.deriv()
    return P.gcd(dP).degree == 0 and dP.gcd(dP.deriv()).degree == 0


# -- exact elimination -------------------------------------------------------

def _sylvester_matrix(A: list[ExactPoly], B: list[ExactPoly]):
    m = len(A) - 1
    n = len(B) - 1
    size = m + n
    rows = []
    for i in range(n):
        row = [ExactPoly.zero()] * size
        for j, c in enumerate(reversed(A)):
            row[i + j] = c
        rows.append(row)
    for i in range(m):
        row = [ExactPoly.zero()] * size
        for j, c in enumerate(reversed(B)):
            row[i + j] = c
        rows.append(row)
    return rows


def u_resultant(A: list[ExactPoly], B: list[ExactPoly]) -> ExactPoly:
    """Resultant in u of two u-polynomials with ExactPoly(z) coefficients.

    Computed as the Sylvester determinant by Bareiss fraction-free
    elimination, so every division is exact in Q[z]; the result is the
    resultant up to sign, which is all the root set needs.
    """

    def deg(c):
        n = len(c)
        while n and c[n - 1].is_zero:
            n -= 1
        return n - 1

    da, db = deg(A), deg(B)
    if da < 0 or db < 0:
        return ExactPoly.zero()
    A = A[:da + 1]
    B = B[:db + 1]
    M = _sylvester_matrix(A, B)
    n = len(M)
    if n == 0:
        return ExactPoly.one()
    prev = ExactPoly.one()
    sign = 1
    for k in range(n - 1):
        if M[k][k].is_zero:
            swap = next((i for i in range(k + 1, n) if not M[i][k].is_zero), None)
            if swap is None:
                return ExactPoly.zero()
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = M[i][j] * M[k][k] - M[i][k] * M[k][j]
                M[i][j] = num.exact_div(prev)
            M[i][k] = ExactPoly.zero()
        prev = M[k][k]
    res = M[n - 1][n - 1]
    return res if sign == 1 else -res


def branch_points(P: ExactPoly, alpha) -> tuple[complex, ...]:
    """z-locations where the saddle fiber degenerates.

    The u-discriminant of F(z, u) is eliminated exactly (resultant of F and
    dF/du); only the final univariate polynomial in z is root-found.
    """
    d = P.degree
    alpha = _check_alpha(alpha, d)
    F = list(saddle_curve(P, alpha).coeffs_by_power)
    dF = [F[k].scale(k) for k in range(1, len(F))]
    disc = u_resultant(F, dF)
    if disc.is_zero:
        raise ArithmeticError("identically degenerate fiber; P is not squarefree")
    if disc.degree < 1:
        return ()
    return tuple(find_roots(disc).roots)


def slopes_at_infinity(d: int, alpha) -> SlopeData:
    """Solve (s+1)^(d-1) (alpha (s+1) - d) = 0 for the branch slopes."""
    alpha = _check_alpha(alpha, d)
    return SlopeData(essential_slope=Rat(d) / alpha - 1,
                     other_slope=-1,
                     other_multiplicity=d - 1)
