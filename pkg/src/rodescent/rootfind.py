"""High-degree polynomial root finding and empirical root measures.

Descendants reach degrees in the several hundreds with enormous integer
coefficients, so roots are located by simultaneous Aberth-Ehrlich iteration
with exact-coefficient Horner evaluation in MPFR/MPC floats (gmpy2).  The
working precision escalates until every Newton correction |p/p'| certifies
below the requested threshold; in the monomial basis the root condition
number of such polynomials grows like 2^degree, so the ladder starts near
one bit per degree rather than at hardware doubles.

``descendant_roots`` additionally peels off the exactly known factor
P^(n-m) of d^m(P^n) when m < n and P is squarefree (each root of P keeps
multiplicity exactly n - m under differentiation); the division remainder
being identically zero certifies the factorization, and the remaining
cofactor has only the nontrivial roots.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

import gmpy2
from shapely.geometry import MultiPoint, Point

from .exactpoly import ExactPoly, rodrigues_descendant

__all__ = [
    "ComplexRootSet",
    "EmpiricalMeasure",
    "NoConvergence",
    "EvaluationAtRoot",
    "find_roots",
    "descendant_roots",
    "empirical_measure",
    "empirical_cauchy",
    "hull_containment",
    "fujiwara_bound",
]


class NoConvergence(RuntimeError):
    """Iteration budget exhausted at the highest allowed working precision."""


class EvaluationAtRoot(ZeroDivisionError):
    """Cauchy-transform evaluation requested at (numerically) a root."""


@dataclass(frozen=True)
class ComplexRootSet:
    """All roots of a polynomial, with the solver's certificate.

    ``residual_bound`` is the largest Newton correction |p(r)/p'(r)| observed
    at the working precision (for roots injected from an exact factorization
    it covers the factors actually iterated on).
    """

    roots: tuple[complex, ...]
    residual_bound: float
    source_degree: int

    def __post_init__(self):
        if len(self.roots) != self.source_degree:
            raise ValueError("root count must equal the source degree")

    def to_csv(self) -> str:
        lines = ["re,im"]
        for r in self.roots:
            lines.append(f"{r.real:.17g},{r.imag:.17g}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class EmpiricalMeasure:
    """Root-counting measure: uniform mass 1/deg on every root."""

    atoms: tuple[tuple[complex, float], ...]
    total_mass: float

    def to_json(self) -> dict:
        return {"atoms": [{"re": z.real, "im": z.imag, "mass": m}
                          for z, m in self.atoms]}

    def cauchy(self, z: complex) -> complex:
        return sum(m / (z - loc) for loc, m in self.atoms)


def fujiwara_bound(P: ExactPoly) -> float:
    """Upper bound on the modulus of every root of P."""
    d = P.degree
    if d < 1:
        return 0.0
    lc = abs(P.coeffs[-1])
    best = 0.0
    for k in range(1, d + 1):
        c = abs(P.coeffs[d - k])
        if c:
            best = max(best, float(Fraction(c, lc)) ** (1.0 / k))
    return 2.0 * best


def _mpc_coeffs(P: ExactPoly, ctx) -> list:
    out = []
    for c in P.coeffs:
        out.append(ctx.mpc(c.numerator) / ctx.mpc(c.denominator))
    return out


def _horner_pair(coeffs, x):
    """Evaluate p and p' at x with one pass."""
    p = coeffs[-1]
    dp = p * 0
    for c in reversed(coeffs[:-1]):
        dp = dp * x + p
        p = p * x + c
    return p, dp


def _initial_points(d: int, radius: float, seed: int, ctx) -> list:
    rng = random.Random(seed)
    pts = []
    # slightly irrational angular offset keeps the start away from root symmetry axes
    off = 0.5 / d + 0.25
    for k in range(d):
        ang = 2 * math.pi * (k + off) / d
        r = radius * (1.0 + 0.05 * (rng.random() - 0.5))
        a = ang + 0.02 * (rng.random() - 0.5)
        pts.append(ctx.mpc(r * math.cos(a), r * math.sin(a)))
    return pts


def _aberth_at_precision(P: ExactPoly, bits: int, seed: int,
                         target: float, start=None, max_sweeps: int = 400):
    """One precision rung of the ladder.

    Iterates until the largest relative correction drops below the rounding
    floor of this precision, the corrections stall (evaluation noise floor
    reached: the certificate cannot improve at these bits), or the sweep
    budget runs out.  Stalled-but-approached runs hand their roots up the
    ladder, where a couple of quadratic sweeps finish the job.
    """
    with gmpy2.context(precision=bits):
        coeffs = _mpc_coeffs(P, gmpy2)
        lc = coeffs[-1]
        coeffs = [c / lc for c in coeffs]
        d = len(coeffs) - 1
        if start is None:
            radius = max(fujiwara_bound(P) * 0.7, 1e-3)
            u = _initial_points(d, radius, seed, gmpy2)
        else:
            u = [gmpy2.mpc(*x) for x in start]
        eps_stop = max(2.0 ** (-(bits - 8)), target * 1e-3)
        converged = False
        best = math.inf
        since_gain = 0
        for _ in range(max_sweeps):
            max_step = 0.0
            for i in range(d):
                p, dp = _horner_pair(coeffs, u[i])
                if dp == 0:
                    u[i] = u[i] * gmpy2.mpc(1 + 1e-6, 1e-6)
                    max_step = math.inf
                    continue
                newton = p / dp
                s = gmpy2.mpc(0)
                ui = u[i]
                for j in range(d):
                    if j != i:
                        s += 1 / (ui - u[j])
                denom = 1 - newton * s
                w = newton if denom == 0 else newton / denom
                u[i] = ui - w
                rel = abs(w) / max(1.0, abs(u[i]))
                if rel > max_step:
                    max_step = float(rel)
            if max_step <= eps_stop:
                converged = True
                break
            if max_step < best * 0.25:
                best = max_step
                since_gain = 0
            else:
                since_gain += 1
                if since_gain >= 12 and best < 1e-4:
                    break  # noise floor; escalate with these roots
        residual = 0.0
        for i in range(d):
            p, dp = _horner_pair(coeffs, u[i])
            if dp == 0:
                residual = math.inf
                break
            r = abs(p / dp) / max(1.0, abs(u[i]))
            residual = max(residual, float(r))
        roots = [complex(x.real, x.imag) for x in u]
        carried = [(x.real, x.imag) for x in u]
        approached = converged or best < 1e-4
    return roots, residual, converged, approached, carried


def find_roots(P: ExactPoly, target_precision: float = 1e-10,
               seed: int = 0, max_bits: int = 8192) -> ComplexRootSet:
    """All deg(P) roots, each certified by a Newton correction <= target.

    Deterministic for a fixed seed.  Raises ``NoConvergence`` if the
    certificate is still not met at ``max_bits`` of working precision.
    """
    d = P.degree
    if d < 1:
        raise ValueError("find_roots requires degree >= 1")
    # exact zero roots come off for free and improve conditioning
    nz = 0
    while P.coeffs[nz] == 0:
        nz += 1
    zero_roots = [0j] * nz
    Q = ExactPoly(P.coeffs[nz:]) if nz else P
    dq = Q.degree
    if dq == 0:
        return ComplexRootSet(tuple(zero_roots), 0.0, d)

    bits = max(64, 24 + int(1.2 * dq))
    start = None
    while True:
        roots, residual, converged, approached, carried = _aberth_at_precision(
            Q, bits, seed, target_precision, start=start)
        if converged and residual <= target_precision:
            allr = tuple(zero_roots) + tuple(roots)
            return ComplexRootSet(allr, residual, d)
        if bits >= max_bits:
            raise NoConvergence(
                f"residual {residual:.3g} > {target_precision:.3g} at {bits} bits")
        start = carried if approached else None
        bits *= 2


def descendant_roots(P: ExactPoly, n: int, m: int,
                     target_precision: float = 1e-10, seed: int = 0,
                     max_bits: int = 8192) -> ComplexRootSet:
    """Roots of d^m(P^n) with the known P^(n-m) factor peeled off exactly.

    When m < n and P is squarefree, d^m(P^n) = P^(n-m) * S with the division
    remainder identically zero; the roots of P are then reported with exact
    multiplicity n - m and only S (and P itself) go to the iterative solver.
    """
    R = rodrigues_descendant(P, n, m)
    if R.is_zero:
        raise ValueError("descendant is the zero polynomial (m > n deg P)")
    if R.degree == 0:
        return ComplexRootSet((), 0.0, 0)
    squarefree = P.gcd(P.deriv()).degree == 0
    if m < n and squarefree and P.degree >= 1:
        from .exactpoly import poly_pow

        S, rem = divmod(R, poly_pow(P, n - m))
        assert rem.is_zero, "P^(n-m) must divide the descendant exactly"
        base = find_roots(P, target_precision, seed, max_bits)
        residual = base.residual_bound
        roots = list(base.roots) * (n - m)
        if S.degree >= 1:
            extra = find_roots(S, target_precision, seed, max_bits)
            residual = max(residual, extra.residual_bound)
            roots.extend(extra.roots)
        return ComplexRootSet(tuple(roots), residual, R.degree)
    return find_roots(R, target_precision, seed, max_bits)


def empirical_measure(r: ComplexRootSet) -> EmpiricalMeasure:
    """Uniform probability measure on the root set."""
    if r.source_degree < 1:
        raise ValueError("empirical measure requires at least one root")
    mass = 1.0 / r.source_degree
    return EmpiricalMeasure(tuple((z, mass) for z in r.roots), 1.0)


def empirical_cauchy(P: ExactPoly, z: complex, bits: int = 256) -> complex:
    """P'(z) / (deg P * P(z)) from the exact coefficients.

    Evaluated at ``bits`` of precision because descendant coefficients span
    hundreds of orders of magnitude; the final ratio is well scaled.
    """
    d = P.degree
    if d < 1:
        raise ValueError("degree >= 1 required")
    with gmpy2.context(precision=bits):
        coeffs = _mpc_coeffs(P, gmpy2)
        zz = gmpy2.mpc(z.real, z.imag)
        p, dp = _horner_pair(coeffs, zz)
        if p == 0:
            raise EvaluationAtRoot(f"P({z}) = 0")
        val = dp / (d * p)
        out = complex(val.real, val.imag)
    if not (math.isfinite(out.real) and math.isfinite(out.imag)):
        raise EvaluationAtRoot(f"P({z}) underflowed")
    return out


def hull_containment(roots: ComplexRootSet, P: ExactPoly,
                     tol: float = 1e-6,
                     base_roots: ComplexRootSet | None = None) -> bool:
    """Gauss-Lucas check: every root within ``tol`` of conv(roots of P)."""
    if base_roots is None:
        base_roots = find_roots(P)
    hull = MultiPoint([(z.real, z.imag) for z in base_roots.roots]).convex_hull
    return all(Point(z.real, z.imag).distance(hull) <= tol for z in roots.roots)
