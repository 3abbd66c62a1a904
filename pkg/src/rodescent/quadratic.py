"""Closed-form limit law for P = z^2 - 1, the oracle for everything numeric.

For 0 < alpha < 2 the limiting root measure of the descendants of z^2 - 1
is known explicitly:

    density  (1 / ((2-alpha) pi)) sqrt(b^2 - x^2) / (1 - x^2)   on [-b, b],
    b = sqrt(alpha (2 - alpha)),
    plus point masses (1-alpha)/(2-alpha) at +-1 when alpha < 1.

Its Cauchy transform is the solution branch of

    (2-alpha)(z^2-1) C^2 + 2(alpha-1) z C - alpha = 0

with C ~ 1/z at infinity, i.e.

    C(z) = ((1-alpha) z + sqrt(z^2 - b^2)) / ((2-alpha)(z^2 - 1)),

the square root continued off the support so that sqrt(z^2-b^2) ~ z.  (A
printed form of this transform circulates with an extra factor 2; matching
the curve root with unit total mass fixes the normalization used here, and
``quadratic_cauchy`` exposes the measured ratio against the doubled form.)

The distribution function of the continuous part is elementary, with
t = arcsin(x/b) and g = |1 - alpha|:

    F0(x) = (t - g * arctan(g tan t)) / ((2-alpha) pi),

which integrates the density exactly; the total continuous mass is
(1 - g)/(2 - alpha).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .curves import AlphaOutOfRange
from .rootfind import ComplexRootSet

__all__ = [
    "QuadraticLaw",
    "ComparisonReport",
    "OnSupport",
    "quadratic_law",
    "quadratic_cauchy",
    "compare_empirical",
    "saddle_branch_plus",
    "saddle_branch_minus",
]


class OnSupport(ValueError):
    """Cauchy transform evaluated on the support segment."""


def _as_float_alpha(alpha) -> float:
    a = float(Fraction(alpha)) if isinstance(alpha, str) else float(alpha)
    if not (0 < a < 2):
        raise AlphaOutOfRange(f"need 0 < alpha < 2, got {alpha}")
    return a


def _sqrt_to_identity(z: complex, b: float) -> complex:
    """Branch of sqrt(z^2 - b^2) that behaves like +z at infinity.

    Written as z * sqrt(1 - (b/z)^2) with the principal square root, which
    is analytic exactly off the segment [-b, b].
    """
    return z * np.sqrt(1.0 - (b / z) ** 2)


def saddle_branch_plus(z: complex, alpha: float) -> complex:
    """The saddle branch of (2-a)u^2 - 2uz + a = 0 escaping to infinity."""
    b2 = alpha * (2.0 - alpha)
    return (z + z * np.sqrt(1.0 - b2 / (z * z))) / (2.0 - alpha)


def saddle_branch_minus(z: complex, alpha: float) -> complex:
    """The other saddle branch, converging to the critical point u = 0."""
    b2 = alpha * (2.0 - alpha)
    return (z - z * np.sqrt(1.0 - b2 / (z * z))) / (2.0 - alpha)


@dataclass(frozen=True)
class QuadraticLaw:
    """The limit measure for P = z^2 - 1 at a given alpha."""

    alpha: float
    b_plus: float
    atom_mass: float
    density: Callable[[float], float]

    @property
    def continuous_mass(self) -> float:
        return 1.0 - 2.0 * self.atom_mass

    def cdf(self, x) -> np.ndarray:
        """Normalized distribution function of the continuous part."""
        a, b = self.alpha, self.b_plus
        g = abs(1.0 - a)
        t = np.arcsin(np.clip(np.asarray(x, dtype=float) / b, -1.0, 1.0))
        with np.errstate(divide="ignore", invalid="ignore"):
            inner = np.where(np.abs(np.cos(t)) < 1e-15,
                             np.sign(t) * np.pi / 2,
                             np.arctan(g * np.tan(t)))
        f0 = (t - g * inner) / ((2.0 - a) * math.pi)
        half = 0.5 * (1.0 - g) / (2.0 - a)
        return np.clip((f0 + half) / (2.0 * half), 0.0, 1.0)


def quadratic_law(alpha) -> QuadraticLaw:
    """Closed-form law; atoms at +-1 appear exactly when alpha < 1."""
    a = _as_float_alpha(alpha)
    b = math.sqrt(a * (2.0 - a))
    atom = max(0.0, (1.0 - a) / (2.0 - a))

    def density(x: float) -> float:
        if abs(x) >= b or abs(abs(x) - 1.0) < 1e-300:
            return 0.0
        return math.sqrt(b * b - x * x) / ((2.0 - a) * math.pi * (1.0 - x * x))

    return QuadraticLaw(a, b, atom, density)


def quadratic_cauchy(alpha, z: complex) -> complex:
    """The Cauchy transform branch with C ~ 1/z at infinity.

    Raises ``OnSupport`` on the segment [-b, b] (and at the atoms +-1,
    where the transform has simple poles for alpha < 1).
    """
    a = _as_float_alpha(alpha)
    b = math.sqrt(a * (2.0 - a))
    z = complex(z)
    if abs(z.imag) < 1e-13 and abs(z.real) <= b + 1e-13:
        raise OnSupport(f"z={z} lies on the support segment")
    if z * z == 1.0:
        raise OnSupport(f"z={z} sits on an atom location")
    s = _sqrt_to_identity(z, b)
    return ((1.0 - a) * z + s) / ((2.0 - a) * (z * z - 1.0))


@dataclass(frozen=True)
class ComparisonReport:
    """Empirical roots vs the closed-form law."""

    ks_distance: float
    atom_fractions: tuple[float, float]  # near +1, near -1
    max_imag: float
    support_min: float
    support_max: float
    n_continuous: int

    def to_json(self) -> dict:
        return {
            "ks_distance": self.ks_distance,
            "atom_fraction_plus": self.atom_fractions[0],
            "atom_fraction_minus": self.atom_fractions[1],
            "max_imag": self.max_imag,
            "support": [self.support_min, self.support_max],
            "n_continuous": self.n_continuous,
        }


def compare_empirical(roots: ComplexRootSet, alpha,
                      atom_eps: float = 0.05) -> ComparisonReport:
    """Project roots to the real axis and compare with the law.

    Mass within ``atom_eps`` of +-1 counts toward the atoms and, when the
    law has atoms (alpha < 1), is excluded from the Kolmogorov-Smirnov
    comparison of the continuous part.
    """
    law = quadratic_law(alpha)
    pts = np.asarray(roots.roots, dtype=complex)
    n = len(pts)
    max_imag = float(np.max(np.abs(pts.imag))) if n else 0.0
    near_p = np.abs(pts - 1.0) <= atom_eps
    near_m = np.abs(pts + 1.0) <= atom_eps
    frac_p = float(np.sum(near_p)) / n
    frac_m = float(np.sum(near_m)) / n
    if law.atom_mass > 0:
        cont = pts[~(near_p | near_m)].real
    else:
        cont = pts.real
    cont = np.sort(cont)
    m = len(cont)
    if m == 0:
        ks = math.inf
    else:
        f = law.cdf(cont)
        i = np.arange(1, m + 1)
        ks = float(np.max(np.maximum(np.abs(i / m - f), np.abs((i - 1) / m - f))))
    return ComparisonReport(
        ks_distance=ks,
        atom_fractions=(frac_p, frac_m),
        max_imag=max_imag,
        support_min=float(cont[0]) if m else math.nan,
        support_max=float(cont[-1]) if m else math.nan,
        n_continuous=m,
    )
