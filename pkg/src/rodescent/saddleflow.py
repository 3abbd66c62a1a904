"""Saddle fibers of the phase function and their relevance classification.

For fixed z the phase is k(z, u) = (1/alpha) log P(u) - log(u - z), with

    G(z, u) = Re k  =  (1/alpha) log|P(u)| - log|u - z|,
    H(z, u) = G / beta,   beta = (d - alpha) / alpha.

G has poles with positive blow-up at u = z and u = infinity and sinks at
the roots of P.  Its saddle points over z are the d roots of
P'(u)(u - z) - alpha P(u); exactly one of them, for z off the tie locus,
has its two steepest-ascent separatrices ending at *different* positive
poles (one at u = z, one at infinity).  That saddle is the maximally
relevant one and carries the asymptotic potential; every other saddle with
a smaller G value is relevant, larger non-relevant.  The classification
here follows the ascent-path endpoints: a gradient ascent of G started
along the two rising eigendirections of the local quadratic model, with
adaptive steps that must increase G monotonically.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from .curves import AlphaOutOfRange
from .exactpoly import ExactPoly, rat
from .rootfind import fujiwara_bound

__all__ = [
    "Saddle",
    "SaddleFiber",
    "AscentPath",
    "PoleHit",
    "BranchPoint",
    "StepFailure",
    "AmbiguousClassification",
    "G_value",
    "H_value",
    "solve_fiber",
    "trace_ascent",
    "classify_fiber",
]

NON_RELEVANT = "non_relevant"
RELEVANT = "relevant"
MAX_RELEVANT = "maximally_relevant"
UNASSIGNED = "unassigned"

POLE_PLUS = "pole_plus"
INFINITY = "infinity"
UNRESOLVED = "unresolved"

G_TIE_TOL = 1e-9  # two saddles closer than this in G flag a near-tie fiber


class PoleHit(ZeroDivisionError):
    """G/H evaluated at u = z or at a root of P."""


class BranchPoint(ValueError):
    """Two fiber roots coincide: z sits on the branch locus."""


class StepFailure(RuntimeError):
    """Monotone ascent impossible at the minimum step size."""


class AmbiguousClassification(RuntimeError):
    """Zero or several saddles pass the endpoint test (z too close to the
    tie locus or branch locus)."""


@dataclass(frozen=True)
class Saddle:
    u: complex
    G: float
    H: float
    second_deriv: complex
    simple: bool
    relevance: str = UNASSIGNED
    endpoints: tuple[str, str] | None = None


@dataclass(frozen=True)
class SaddleFiber:
    P: ExactPoly
    alpha: Fraction
    z: complex
    saddles: tuple[Saddle, ...]
    max_index: int | None = None

    @property
    def max_saddle(self) -> Saddle:
        if self.max_index is None:
            raise AmbiguousClassification("fiber has not been classified")
        return self.saddles[self.max_index]

    def to_json(self) -> dict:
        return {
            "z": [self.z.real, self.z.imag],
            "saddles": [
                {
                    "u": [s.u.real, s.u.imag],
                    "G": s.G,
                    "H": s.H,
                    "relevance": s.relevance,
                    "endpoints": list(s.endpoints) if s.endpoints else None,
                }
                for s in self.saddles
            ],
        }


@dataclass(frozen=True)
class AscentPath:
    points: tuple[complex, ...]
    endpoint_class: str
    arc_length: float


def _eval_pair(coeffs: list[complex], u: complex) -> tuple[complex, complex]:
    p = coeffs[-1]
    dp = 0j
    for c in reversed(coeffs[:-1]):
        dp = dp * u + p
        p = p * u + c
    return p, dp


def G_value(P: ExactPoly, alpha, z: complex, u: complex) -> float:
    """(1/alpha) log|P(u)| - log|u - z|."""
    a = float(rat(alpha))
    pu = P(u)
    if pu == 0 or u == z:
        raise PoleHit(f"G undefined at u={u}")
    return math.log(abs(pu)) / a - math.log(abs(u - z))


def H_value(P: ExactPoly, alpha, z: complex, u: complex) -> float:
    """G rescaled by beta: (log|P(u)| - alpha log|u - z|) / (d - alpha)."""
    a = float(rat(alpha))
    d = P.degree
    pu = P(u)
    if pu == 0 or u == z:
        raise PoleHit(f"H undefined at u={u}")
    return (math.log(abs(pu)) - a * math.log(abs(u - z))) / (d - a)


def _kprime(P: ExactPoly, alpha: float, z: complex, u: complex) -> complex:
    pu = P(u)
    dpu = P.deriv()(u)
    return dpu / (alpha * pu) - 1.0 / (u - z)


def _ksecond(P: ExactPoly, alpha: float, z: complex, u: complex) -> complex:
    pu = P(u)
    dpu = P.deriv()(u)
    ddpu = P.deriv(2)(u)
    return (ddpu * pu - dpu * dpu) / (alpha * pu * pu) + 1.0 / (u - z) ** 2


def solve_fiber(P: ExactPoly, alpha, z: complex,
                branch_tol: float = 1e-7) -> SaddleFiber:
    """All d saddle points over z, with G, H and simplicity data.

    Roots of P'(u)(u-z) - alpha P(u) come from the companion matrix and are
    polished by Newton; coincident roots (within ``branch_tol`` of the local
    scale) raise ``BranchPoint``.  A collided double root computed in
    doubles splits by about sqrt(eps), so the tolerance sits above that.
    """
    d = P.degree
    alpha = rat(alpha)
    if not (0 < alpha < d):
        raise AlphaOutOfRange(f"need 0 < alpha < {d}")
    a = float(alpha)
    p = [complex(c) for c in P.coeffs] + [0j]
    coeffs = [(k - a) * p[k] - (k + 1) * p[k + 1] * z for k in range(d + 1)]
    roots = np.roots(list(reversed(coeffs)))
    # Newton polish on the fiber polynomial
    for _ in range(4):
        vals = np.polynomial.polynomial.polyval(roots, np.array(coeffs))
        ders = np.polynomial.polynomial.polyval(
            roots, np.array([(k + 1) * coeffs[k + 1] for k in range(d)]))
        step = np.where(ders != 0, vals / ders, 0.0)
        roots = roots - step
    scale = max(1.0, abs(z), float(np.max(np.abs(roots))))
    rr = sorted((complex(r) for r in roots), key=lambda w: (w.real, w.imag))
    for i in range(len(rr)):
        for j in range(i + 1, len(rr)):
            if abs(rr[i] - rr[j]) < branch_tol * scale:
                raise BranchPoint(f"fiber roots collide near u={rr[i]}")
    saddles = []
    for u in rr:
        g = G_value(P, alpha, z, u)
        h = H_value(P, alpha, z, u)
        k2 = _ksecond(P, a, z, u)
        saddles.append(Saddle(u, g, h, k2, simple=abs(k2) > 1e-9 / scale ** 2))
    return SaddleFiber(P, alpha, z, tuple(saddles))


def _g_raw(P: ExactPoly, a: float, z: complex, u: complex) -> float:
    """G extended by the pole signs: +inf at u=z, -inf at roots of P."""
    if u == z:
        return math.inf
    apu = abs(P(u))
    if apu == 0.0:
        return -math.inf
    return math.log(apu) / a - math.log(abs(u - z))


def _rising_ray(k2: complex) -> complex:
    """An ascent eigendirection of the local model h0 (u-u0)^2."""
    return cmath.exp(-0.5j * cmath.phase(k2))


def trace_ascent(P: ExactPoly, alpha, z: complex, u0: complex,
                 direction: int = +1,
                 budget: int = 20000,
                 record_every: int = 8,
                 other_saddles: tuple[complex, ...] = ()) -> AscentPath:
    """Gradient ascent of G from a simple saddle along one eigendirection.

    The start direction is an ascent eigendirection of the quadratic model
    h0 (u - u0)^2 (``direction`` picks one of the two opposite rays); the
    path then follows conj(k') with adaptive steps accepted only when G
    strictly increases.  Ends at PolePlus (|u - z| small), Infinity
    (|u| large) or Unresolved (budget).

    Ascent paths can terminate exactly on another saddle (separatrix
    connections, routine on symmetry axes); when the step stalls within
    jumping distance of a saddle from ``other_saddles`` the path relaunches
    from it along its own rising ray and keeps climbing.  A stall anywhere
    else raises ``StepFailure``.
    """
    a = float(rat(alpha))
    eps_pole = 1e-6 * (1.0 + abs(z))
    r_escape = 10.0 * (1.0 + fujiwara_bound(P) + abs(z))
    scale = max(1.0, abs(u0), abs(z))
    h_min = 1e-9 * scale
    h_max = 0.05 * r_escape
    step0 = 10.0 * math.sqrt(np.finfo(float).eps) * scale

    k2 = _ksecond(P, a, z, u0)
    if k2 == 0:
        raise StepFailure("degenerate saddle: zero second derivative")
    last_dir = direction * _rising_ray(k2)
    u = u0 + step0 * last_dir
    g_cur = _g_raw(P, a, z, u)
    if g_cur == math.inf:
        return AscentPath((u0, u), POLE_PLUS, abs(u - u0))

    pts = [u0, u]
    arc = abs(u - u0)
    h = 4.0 * step0
    visited = [u0]
    endpoint = UNRESOLVED
    for it in range(budget):
        adu = abs(u - z)
        if adu < eps_pole:
            endpoint = POLE_PLUS
            break
        if abs(u) > r_escape:
            endpoint = INFINITY
            break
        kp = _kprime(P, a, z, u)
        akp = abs(kp)
        dirn = last_dir if akp == 0 else kp.conjugate() / akp
        step = min(h, 0.5 * adu)
        trial = u + step * dirn
        if _g_raw(P, a, z, trial) > g_cur:
            u = trial
            g_cur = _g_raw(P, a, z, u)
            arc += step
            last_dir = dirn
            h = min(h * 1.9, h_max)
            if it % record_every == 0:
                pts.append(u)
            continue
        h *= 0.35
        if h >= h_min:
            continue
        # stalled: either a saddle connection or a genuine failure
        hop = next((s for s in other_saddles
                    if abs(u - s) < 1e-5 * scale
                    and all(abs(s - v) > 1e-7 * scale for v in visited)), None)
        if hop is None:
            raise StepFailure(f"stalled at u={u} with step {h:.2e}")
        visited.append(hop)
        k2 = _ksecond(P, a, z, hop)
        if k2 == 0:
            raise StepFailure("relaunch at degenerate saddle")
        ray = _rising_ray(k2)
        # continue along whichever rising ray agrees best with the approach
        if (ray * last_dir.conjugate()).real < 0:
            ray = -ray
        pts.append(hop)
        last_dir = ray
        u = hop + step0 * ray
        g_cur = _g_raw(P, a, z, u)
        h = 4.0 * step0
    pts.append(u)
    return AscentPath(tuple(pts), endpoint, arc)


def classify_fiber(fiber: SaddleFiber, budget: int = 20000,
                   early_exit: bool = False) -> SaddleFiber:
    """Assign relevance by ascent-endpoint topology.

    The sets {G >= t} merge from two components (one around each positive
    pole) into one at exactly one level, and the merge happens at the
    maximally relevant saddle.  Consequently, scanning saddles downward in
    G, every saddle above the merge level has both ascent paths ending at
    the same pole class, and the first saddle whose paths split into
    {PolePlus, Infinity} is the maximally relevant one.  Saddles below the
    merge level live inside a single connected ascent region and their
    endpoints carry no classification weight (they are traced for
    diagnostics unless ``early_exit``).

    Raises ``AmbiguousClassification`` when no saddle passes, when a saddle
    above the winner cannot be resolved, or when two saddle values nearly
    tie (z too close to the tie locus or branch locus).
    """
    sads = list(fiber.saddles)
    for s in sads:
        if not s.simple:
            raise AmbiguousClassification(f"non-simple saddle at u={s.u}")
    gs = sorted(s.G for s in sads)
    for a, b in zip(gs, gs[1:]):
        if b - a < G_TIE_TOL:
            raise AmbiguousClassification(
                f"near-tie in G ({b - a:.2e}): z is too close to the tie locus")

    order = sorted(range(len(sads)), key=lambda i: -sads[i].G)
    all_u = tuple(s.u for s in sads)
    endpoints: dict[int, tuple[str, str]] = {}

    def run(i: int) -> tuple[str, str]:
        eps = []
        for direction in (+1, -1):
            try:
                path = trace_ascent(fiber.P, fiber.alpha, fiber.z,
                                    sads[i].u, direction, budget=budget,
                                    other_saddles=all_u)
                eps.append(path.endpoint_class)
            except StepFailure:
                eps.append(UNRESOLVED)
        endpoints[i] = (eps[0], eps[1])
        return endpoints[i]

    imax = None
    for rank, i in enumerate(order):
        eps = run(i)
        if set(eps) == {POLE_PLUS, INFINITY}:
            imax = i
            break
        if UNRESOLVED in eps:
            raise AmbiguousClassification(
                f"unresolved ascent path from saddle u={sads[i].u}")
    if imax is None:
        raise AmbiguousClassification("no saddle reaches both positive poles")
    if not early_exit:
        for i in order:
            if i not in endpoints:
                run(i)

    gmax = sads[imax].G
    out = []
    for i, s in enumerate(sads):
        if i == imax:
            rel = MAX_RELEVANT
        elif s.G < gmax:
            rel = RELEVANT
        else:
            rel = NON_RELEVANT
        out.append(replace(s, relevance=rel, endpoints=endpoints.get(i)))
    return SaddleFiber(fiber.P, fiber.alpha, fiber.z, tuple(out), imax)
