"""Exact rational polynomial arithmetic.

Everything downstream (differential operators, symbol curves, the formal
n-limit) is verified at the level of identities, so this module keeps
coefficients as exact rationals end to end.  Floating point never enters
here; numeric modules convert at their own boundaries.

The central objects:

* ``ExactPoly``      dense univariate polynomial over Q, low-to-high coeffs,
* ``ExactRatFun``    reduced quotient of two ``ExactPoly``,
* ``QC``             exact complex rational (pair of ``Fraction``),
* ``TruncatedSeries``truncated Taylor series with ``QC`` coefficients.

``rodrigues_descendant(P, n, m)`` is d^m/dz^m (P^n), the polynomial family
whose root asymptotics the rest of the package studies.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Sequence, Union

__all__ = [
    "Rat",
    "rat",
    "ExactPoly",
    "ExactRatFun",
    "QC",
    "TruncatedSeries",
    "CenterIsPole",
    "poly_pow",
    "derivative",
    "rodrigues_descendant",
    "ratfun_descendant",
    "series_descendant",
    "parse_poly",
]

Rat = Fraction

RatLike = Union[int, str, Fraction]


class CenterIsPole(ValueError):
    """Raised when a series expansion is requested at a zero of Q."""


def rat(x: RatLike) -> Fraction:
    """Coerce ints, ``Fraction`` and 'p/q' strings to ``Fraction``."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def _rat_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _trim(coeffs: list[Fraction]) -> tuple[Fraction, ...]:
    n = len(coeffs)
    while n and coeffs[n - 1] == 0:
        n -= 1
    return tuple(coeffs[:n])


class ExactPoly:
    """Univariate polynomial with exact rational coefficients.

    Coefficients are stored low to high with no trailing zeros; the zero
    polynomial is the empty tuple and reports degree -1.  Instances are
    immutable and hashable, and all arithmetic is exact.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[RatLike] = ()):
        object.__setattr__(self, "coeffs", _trim([rat(c) for c in coeffs]))

    def __setattr__(self, *a):  # pragma: no cover - immutability guard
        raise AttributeError("ExactPoly is immutable")

    # -- construction -----------------------------------------------------

    @classmethod
    def zero(cls) -> "ExactPoly":
        return cls(())

    @classmethod
    def one(cls) -> "ExactPoly":
        return cls((1,))

    @classmethod
    def monomial(cls, power: int, coeff: RatLike = 1) -> "ExactPoly":
        c = rat(coeff)
        if c == 0:
            return cls(())
        return cls([0] * power + [c])

    @classmethod
    def from_json(cls, obj) -> "ExactPoly":
        return cls(obj["coeffs"])

    # -- basic queries -----------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> Fraction:
        if not self.coeffs:
            return Fraction(0)
        return self.coeffs[-1]

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, ExactPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == ExactPoly((other,))
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other) -> "ExactPoly":
        other = _coerce(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return ExactPoly(out)

    __radd__ = __add__

    def __neg__(self) -> "ExactPoly":
        return ExactPoly([-c for c in self.coeffs])

    def __sub__(self, other) -> "ExactPoly":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "ExactPoly":
        return _coerce(other) + (-self)

    def __mul__(self, other) -> "ExactPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = _coerce(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return ExactPoly(())
        # Integer fast path: huge powers like P^n stay over Z, where plain
        # int convolution avoids per-op Fraction gcd normalization.
        if all(c.denominator == 1 for c in a) and all(c.denominator == 1 for c in b):
            ai = [c.numerator for c in a]
            bi = [c.numerator for c in b]
            out = [0] * (len(ai) + len(bi) - 1)
            for i, ca in enumerate(ai):
                if ca:
                    for j, cb in enumerate(bi):
                        out[i + j] += ca * cb
            return ExactPoly(out)
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    out[i + j] += ca * cb
        return ExactPoly(out)

    __rmul__ = __mul__

    def scale(self, c: RatLike) -> "ExactPoly":
        c = rat(c)
        if c == 0:
            return ExactPoly(())
        return ExactPoly([c * x for x in self.coeffs])

    def __pow__(self, n: int) -> "ExactPoly":
        return poly_pow(self, n)

    def shift_up(self, k: int) -> "ExactPoly":
        """Multiply by z^k."""
        if self.is_zero:
            return self
        return ExactPoly((Fraction(0),) * k + self.coeffs)

    def __divmod__(self, other) -> tuple["ExactPoly", "ExactPoly"]:
        den = _coerce(other)
        if den.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        q = [Fraction(0)] * max(0, self.degree - den.degree + 1)
        rem = list(self.coeffs)
        dlc = den.lc
        dd = den.degree
        while len(rem) - 1 >= dd and any(rem):
            while rem and rem[-1] == 0:
                rem.pop()
            if len(rem) - 1 < dd:
                break
            k = len(rem) - 1 - dd
            f = rem[-1] / dlc
            q[k] = f
            for i, c in enumerate(den.coeffs):
                rem[k + i] -= f * c
            rem.pop()
        return ExactPoly(q), ExactPoly(rem)

    def exact_div(self, other) -> "ExactPoly":
        q, r = divmod(self, other)
        if not r.is_zero:
            raise ArithmeticError("division is not exact")
        return q

    def deriv(self, k: int = 1) -> "ExactPoly":
        return derivative(self, k)

    def monic(self) -> "ExactPoly":
        if self.is_zero:
            return self
        return self.scale(1 / self.lc)

    # -- evaluation ---------------------------------------------------------

    def eval_rat(self, x: RatLike) -> Fraction:
        x = rat(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __call__(self, x):
        if isinstance(x, (int, Fraction)):
            return self.eval_rat(x)
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * x + complex(c)
        return acc

    def float_coeffs(self) -> list[float]:
        return [float(c) for c in self.coeffs]

    # -- gcd ----------------------------------------------------------------

    def gcd(self, other: "ExactPoly") -> "ExactPoly":
        """Monic gcd over Q via the Euclidean algorithm."""
        a, b = self, _coerce(other)
        while not b.is_zero:
            a, b = b, divmod(a, b)[1]
        if a.is_zero:
            return a
        return a.monic()

    # -- serialization -------------------------------------------------------

    def to_json(self) -> dict:
        return {"coeffs": [_rat_str(c) for c in self.coeffs]}

    def __repr__(self) -> str:
        return f"ExactPoly({self})"

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mag = _rat_str(abs(c))
            if k == 0:
                body = mag
            else:
                zk = "z" if k == 1 else f"z^{k}"
                body = zk if abs(c) == 1 else f"{mag}*{zk}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)


def _coerce(x) -> ExactPoly:
    if isinstance(x, ExactPoly):
        return x
    if isinstance(x, (int, Fraction)):
        return ExactPoly((x,))
    raise TypeError(f"cannot coerce {x!r} to ExactPoly")


def poly_pow(P: ExactPoly, n: int) -> ExactPoly:
    """P^n by repeated squaring; n = 0 gives the constant 1."""
    if n < 0:
        raise ValueError("negative power")
    if n == 0:
        return ExactPoly.one()
    if P.is_zero:
        return ExactPoly.zero()
    acc = None
    base = P
    while n:
        if n & 1:
            acc = base if acc is None else acc * base
        n >>= 1
        if n:
            base = base * base
    return acc


def derivative(P: ExactPoly, k: int = 1) -> ExactPoly:
    """k-th derivative; differentiating past the degree yields 0."""
    if k < 0:
        raise ValueError("negative derivative order")
    coeffs = P.coeffs
    for _ in range(k):
        if len(coeffs) <= 1:
            return ExactPoly.zero()
        coeffs = tuple(coeffs[i] * i for i in range(1, len(coeffs)))
    return ExactPoly(coeffs)


def rodrigues_descendant(P: ExactPoly, n: int, m: int) -> ExactPoly:
    """d^m/dz^m (P^n), exactly.

    Degree is n*deg(P) - m when that is nonnegative; over-differentiation
    returns the zero polynomial.  P^n is computed once by repeated squaring
    and then differentiated term-wise.
    """
    return derivative(poly_pow(P, n), m)


class ExactRatFun:
    """Reduced rational function num/den over Q.

    Normalized so that gcd(num, den) = 1 and den is monic; this runs after
    every arithmetic step to keep coefficient growth in check.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: ExactPoly, den: ExactPoly = ExactPoly((1,))):
        num = _coerce(num)
        den = _coerce(den)
        if den.is_zero:
            raise ZeroDivisionError("rational function with zero denominator")
        g = num.gcd(den)
        if not g.is_zero and g.degree > 0:
            num = num.exact_div(g)
            den = den.exact_div(g)
        if num.is_zero:
            den = ExactPoly.one()
        else:
            s = den.lc
            num = num.scale(1 / s)
            den = den.scale(1 / s)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("ExactRatFun is immutable")

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactRatFun):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    def __add__(self, other: "ExactRatFun") -> "ExactRatFun":
        return ExactRatFun(self.num * other.den + other.num * self.den,
                           self.den * other.den)

    def __sub__(self, other: "ExactRatFun") -> "ExactRatFun":
        return ExactRatFun(self.num * other.den - other.num * self.den,
                           self.den * other.den)

    def __mul__(self, other) -> "ExactRatFun":
        if isinstance(other, (int, Fraction, ExactPoly)):
            other = ExactRatFun(_coerce(other))
        return ExactRatFun(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def deriv(self, k: int = 1) -> "ExactRatFun":
        f = self
        for _ in range(k):
            f = ExactRatFun(f.num.deriv() * f.den - f.num * f.den.deriv(),
                            f.den * f.den)
        return f

    def pow(self, n: int) -> "ExactRatFun":
        if n < 0:
            raise ValueError("negative power")
        return ExactRatFun(poly_pow(self.num, n), poly_pow(self.den, n))

    def __call__(self, x):
        return self.num(x) / self.den(x)

    def __repr__(self) -> str:
        return f"ExactRatFun(({self.num}) / ({self.den}))"


def ratfun_descendant(f: ExactRatFun, n: int, m: int) -> ExactRatFun:
    """Exact m-th derivative of f^n, renormalized after every step."""
    return f.pow(n).deriv(m)


class QC:
    """Exact complex rational: re + im*i with Fraction parts."""

    __slots__ = ("re", "im")

    def __init__(self, re: RatLike = 0, im: RatLike = 0):
        object.__setattr__(self, "re", rat(re))
        object.__setattr__(self, "im", rat(im))

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("QC is immutable")

    @classmethod
    def coerce(cls, x) -> "QC":
        if isinstance(x, QC):
            return x
        if isinstance(x, (int, Fraction, str)):
            return cls(rat(x))
        if isinstance(x, tuple) and len(x) == 2:
            return cls(rat(x[0]), rat(x[1]))
        raise TypeError(f"cannot coerce {x!r} to QC")

    @property
    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __eq__(self, other) -> bool:
        other = QC.coerce(other)
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __add__(self, other):
        other = QC.coerce(other)
        return QC(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return QC(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-QC.coerce(other))

    def __rsub__(self, other):
        return QC.coerce(other) + (-self)

    def __mul__(self, other):
        other = QC.coerce(other)
        return QC(self.re * other.re - self.im * other.im,
                  self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = QC.coerce(other)
        d = other.re * other.re + other.im * other.im
        if d == 0:
            raise ZeroDivisionError("division by zero QC")
        return QC((self.re * other.re + self.im * other.im) / d,
                  (self.im * other.re - self.re * other.im) / d)

    def to_complex(self) -> complex:
        return complex(self.re) + 1j * float(self.im)

    def __repr__(self) -> str:
        if self.im == 0:
            return _rat_str(self.re)
        return f"({_rat_str(self.re)}{'+' if self.im >= 0 else ''}{_rat_str(self.im)}i)"


_QC_ZERO = QC(0)
_QC_ONE = QC(1)


class TruncatedSeries:
    """Truncated Taylor series sum_k c_k (z - center)^k with exact QC coeffs.

    ``order`` is the number of stored coefficients; arithmetic truncates to
    the shorter operand so only trustworthy coefficients survive.
    """

    __slots__ = ("center", "coeffs", "order")

    def __init__(self, center, coeffs: Sequence, order: int | None = None):
        center = QC.coerce(center)
        coeffs = tuple(QC.coerce(c) for c in coeffs)
        if order is None:
            order = len(coeffs)
        if order != len(coeffs):
            raise ValueError("order must equal len(coeffs)")
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "order", order)

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("TruncatedSeries is immutable")

    @classmethod
    def from_poly(cls, P: ExactPoly, center, order: int) -> "TruncatedSeries":
        """Expand an exact polynomial around ``center`` (Taylor shift)."""
        center = QC.coerce(center)
        acc = [_QC_ZERO] * order
        for c in reversed(P.coeffs):
            # acc <- acc*(center + t) + c, truncated at `order`
            new = [_QC_ZERO] * order
            for k in range(order):
                v = acc[k] * center
                if k > 0:
                    v = v + acc[k - 1]
                new[k] = v
            new[0] = new[0] + QC(c)
            acc = new
        return cls(center, acc)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.center == other.center and self.coeffs == other.coeffs

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        n = min(self.order, other.order)
        return TruncatedSeries(self.center,
                               [self.coeffs[k] + other.coeffs[k] for k in range(n)])

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        n = min(self.order, other.order)
        return TruncatedSeries(self.center,
                               [self.coeffs[k] - other.coeffs[k] for k in range(n)])

    def __mul__(self, other) -> "TruncatedSeries":
        if isinstance(other, (int, Fraction, QC)):
            c = QC.coerce(other)
            return TruncatedSeries(self.center, [x * c for x in self.coeffs])
        n = min(self.order, other.order)
        out = [_QC_ZERO] * n
        for i, a in enumerate(self.coeffs[:n]):
            if a.is_zero:
                continue
            for j in range(n - i):
                b = other.coeffs[j]
                if not b.is_zero:
                    out[i + j] = out[i + j] + a * b
        return TruncatedSeries(self.center, out)

    __rmul__ = __mul__

    def pow(self, n: int) -> "TruncatedSeries":
        if n < 0:
            raise ValueError("negative power")
        acc = TruncatedSeries(self.center, [_QC_ONE] + [_QC_ZERO] * (self.order - 1))
        base = self
        while n:
            if n & 1:
                acc = acc * base
            n >>= 1
            if n:
                base = base * base
        return acc

    def recip(self) -> "TruncatedSeries":
        a0 = self.coeffs[0]
        if a0.is_zero:
            raise ZeroDivisionError("series reciprocal of a series with zero constant term")
        inv0 = _QC_ONE / a0
        out = [inv0] + [_QC_ZERO] * (self.order - 1)
        for k in range(1, self.order):
            s = _QC_ZERO
            for j in range(1, k + 1):
                s = s + self.coeffs[j] * out[k - j]
            out[k] = -(inv0 * s)
        return TruncatedSeries(self.center, out)

    def exp(self) -> "TruncatedSeries":
        """exp of a series with zero constant term (keeps coefficients rational)."""
        if not self.coeffs[0].is_zero:
            raise ValueError("series exp requires zero constant term")
        out = [_QC_ONE] + [_QC_ZERO] * (self.order - 1)
        for k in range(1, self.order):
            s = _QC_ZERO
            for j in range(1, k + 1):
                s = s + QC(j) * self.coeffs[j] * out[k - j]
            out[k] = s * QC(Fraction(1, k))
        return TruncatedSeries(self.center, out)

    def deriv(self, k: int = 1) -> "TruncatedSeries":
        coeffs = self.coeffs
        for _ in range(k):
            if len(coeffs) <= 1:
                coeffs = (_QC_ZERO,)
                break
            coeffs = tuple(QC(i) * coeffs[i] for i in range(1, len(coeffs)))
        return TruncatedSeries(self.center, coeffs)

    def __repr__(self) -> str:
        return f"TruncatedSeries(center={self.center!r}, coeffs={list(self.coeffs)!r})"


def series_descendant(P: ExactPoly, Q: ExactPoly, T: ExactPoly,
                      n: int, m: int, center, order: int) -> TruncatedSeries:
    """Taylor coefficients of d^m/dz^m (P e^T / Q)^n at ``center``.

    The overall transcendental factor e^{n T(center)} is omitted so that the
    coefficients stay exact rationals; every consumer (the linear ODE
    residual check) is insensitive to a global scalar.  With T(center) = 0
    the result is the plain Taylor expansion.
    """
    if order <= m:
        raise ValueError("order must exceed m")
    center = QC.coerce(center)
    work = order + m
    sq = TruncatedSeries.from_poly(Q, center, work)
    if sq.coeffs[0].is_zero:
        raise CenterIsPole(f"Q({center!r}) = 0")
    sp = TruncatedSeries.from_poly(P, center, work)
    st = TruncatedSeries.from_poly(T, center, work)
    # n*(T - T(center)) has zero constant term, so its exp stays rational.
    st0 = st.coeffs[0]
    st_shift = TruncatedSeries(center, [(c - st0 if k == 0 else c) * QC(n)
                                        for k, c in enumerate(st.coeffs)])
    f = sp.pow(n) * st_shift.exp() * sq.pow(n).recip()
    g = f.deriv(m)
    return TruncatedSeries(center, g.coeffs[:order])


# -- text format ------------------------------------------------------------

_TERM_RE = re.compile(
    r"""\s*(?P<sign>[+-])?\s*
        (?:
            (?P<coeff>\d+(?:/\d+)?)\s*(?:\*\s*)?(?P<var1>[xz])?(?:\^(?P<pow1>\d+))?
          | (?P<var2>[xz])(?:\^(?P<pow2>\d+))?
        )\s*""",
    re.VERBOSE,
)


def parse_poly(text: str) -> ExactPoly:
    """Parse '[-1, 0, 1]' (low-to-high list) or 'z^2 - 1' style input.

    Accepts integer and 'p/q' literals, the variable letter z (or x), '^'
    powers and an optional '*' between coefficient and variable.
    """
    text = text.strip()
    if not text:
        raise ValueError("empty polynomial text")
    if text.startswith("["):
        if not text.endswith("]"):
            raise ValueError("unterminated coefficient list")
        inner = text[1:-1].strip()
        if not inner:
            return ExactPoly(())
        return ExactPoly([rat(tok.strip()) for tok in inner.split(",")])
    coeffs: dict[int, Fraction] = {}
    pos = 0
    first = True
    while pos < len(text):
        mo = _TERM_RE.match(text, pos)
        if not mo or mo.end() == pos:
            raise ValueError(f"cannot parse polynomial near {text[pos:]!r}")
        sign = mo.group("sign")
        if sign is None and not first:
            raise ValueError(f"missing +/- between terms near {text[pos:]!r}")
        s = -1 if sign == "-" else 1
        if mo.group("coeff") is not None:
            c = rat(mo.group("coeff"))
            var = mo.group("var1")
            p = mo.group("pow1")
        else:
            c = Fraction(1)
            var = mo.group("var2")
            p = mo.group("pow2")
        if var is None:
            k = 0
        else:
            k = int(p) if p is not None else 1
        coeffs[k] = coeffs.get(k, Fraction(0)) + s * c
        pos = mo.end()
        first = False
    out = [Fraction(0)] * (max(coeffs) + 1)
    for k, c in coeffs.items():
        out[k] = c
    return ExactPoly(out)
