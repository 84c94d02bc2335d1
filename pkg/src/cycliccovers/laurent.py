"""Exact Laurent polynomial arithmetic over Z and over finite field extensions.

Elements of Z[t, t^-1] are stored as a coefficient window: ``min_exp`` is the
exponent of the first stored coefficient and ``coeffs`` runs in increasing
exponent order with nonzero endpoints (the zero polynomial stores an empty
window).  Two Laurent polynomials are unit multiples of each other exactly
when they agree after ``canonical_rep``: no negative exponents, nonzero
constant term, positive leading coefficient.

>>> p = LaurentPolyZ((-1, 3, -1), min_exp=-1)   # -t^-1 + 3 - t
>>> canonical_rep(p)
LaurentPolyZ((1, -3, 1), min_exp=0)
>>> cyclotomic_poly(6)
LaurentPolyZ((1, -1, 1), min_exp=0)
"""

from __future__ import annotations

import dataclasses
import functools
import math
from fractions import Fraction

import mpmath


class ZeroPolynomial(ValueError):
    """Raised when an operation needs a nonzero polynomial."""


class ToleranceNotReached(RuntimeError):
    """Raised when the numeric Mahler path cannot certify the requested tolerance."""


class BothZero(ValueError):
    """Raised by gcd routines when both arguments vanish."""


class FieldMismatch(ValueError):
    """Raised when two field-coefficient polynomials live over different fields."""


_INT64_MAX = 2**63


@dataclasses.dataclass(init=False, eq=True, unsafe_hash=True)
class LaurentPolyZ:
    """An element of Z[t, t^-1]."""

    min_exp: int
    coeffs: tuple[int, ...]

    def __init__(self, coeffs=(), min_exp: int = 0):
        coeffs = tuple(int(c) for c in coeffs)
        lo, hi = 0, len(coeffs)
        while lo < hi and coeffs[lo] == 0:
            lo += 1
        while hi > lo and coeffs[hi - 1] == 0:
            hi -= 1
        if lo == hi:
            self.min_exp = 0
            self.coeffs = ()
        else:
            self.min_exp = min_exp + lo
            self.coeffs = coeffs[lo:hi]

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls) -> "LaurentPolyZ":
        return cls()

    @classmethod
    def one(cls) -> "LaurentPolyZ":
        return cls((1,))

    @classmethod
    def const(cls, c: int) -> "LaurentPolyZ":
        return cls((c,))

    @classmethod
    def t_power(cls, e: int, c: int = 1) -> "LaurentPolyZ":
        """c * t^e; e may be negative."""
        return cls((c,), min_exp=e)

    # -- basic structure ----------------------------------------------

    @property
    def max_exp(self) -> int:
        if not self.coeffs:
            return 0
        return self.min_exp + len(self.coeffs) - 1

    @property
    def degree_span(self) -> int:
        """max_exp - min_exp for nonzero polynomials, -1 for zero."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def coeff(self, e: int) -> int:
        i = e - self.min_exp
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return 0

    def terms(self):
        """Iterate (exponent, coefficient) pairs with nonzero coefficient."""
        for i, c in enumerate(self.coeffs):
            if c:
                yield self.min_exp + i, c

    def content(self) -> int:
        """gcd of the coefficients, nonnegative; 0 for the zero polynomial."""
        g = 0
        for c in self.coeffs:
            g = math.gcd(g, c)
        return g

    # -- arithmetic ----------------------------------------------------

    def __neg__(self) -> "LaurentPolyZ":
        return LaurentPolyZ(tuple(-c for c in self.coeffs), self.min_exp)

    def __add__(self, other) -> "LaurentPolyZ":
        other = _coerce_z(other)
        if not self.coeffs:
            return other
        if not other.coeffs:
            return self
        lo = min(self.min_exp, other.min_exp)
        hi = max(self.max_exp, other.max_exp)
        out = [0] * (hi - lo + 1)
        for e, c in self.terms():
            out[e - lo] += c
        for e, c in other.terms():
            out[e - lo] += c
        return LaurentPolyZ(out, lo)

    __radd__ = __add__

    def __sub__(self, other) -> "LaurentPolyZ":
        return self + (-_coerce_z(other))

    def __rsub__(self, other) -> "LaurentPolyZ":
        return _coerce_z(other) + (-self)

    def __mul__(self, other) -> "LaurentPolyZ":
        other = _coerce_z(other)
        if not self.coeffs or not other.coeffs:
            return LaurentPolyZ()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    out[i + j] += a * b
        return LaurentPolyZ(out, self.min_exp + other.min_exp)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "LaurentPolyZ":
        if k < 0:
            raise ValueError("negative power of a Laurent polynomial is not defined here")
        result = LaurentPolyZ.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def shift(self, e: int) -> "LaurentPolyZ":
        """Multiply by t^e."""
        return LaurentPolyZ(self.coeffs, self.min_exp + e)

    def poly_part(self) -> "LaurentPolyZ":
        """The unit multiple with min_exp = 0 (zero stays zero)."""
        return LaurentPolyZ(self.coeffs, 0)

    def evaluate_at_one(self) -> int:
        return sum(self.coeffs)

    def evaluate_int(self, x: int) -> Fraction:
        """Evaluate at a nonzero rational point (t^-1 = 1/x)."""
        acc = Fraction(0)
        xf = Fraction(x)
        for e, c in self.terms():
            acc += c * xf**e
        return acc

    def exact_div(self, other: "LaurentPolyZ") -> "LaurentPolyZ":
        """Exact quotient in Z[t, t^-1]; raises ValueError if not divisible."""
        other = _coerce_z(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return LaurentPolyZ()
        rem = list(self.coeffs)
        div = other.coeffs
        dn = len(div)
        lead = div[-1]
        if len(rem) < dn:
            raise ValueError("not an exact divisor")
        q = [0] * (len(rem) - dn + 1)
        for k in range(len(q) - 1, -1, -1):
            c = rem[k + dn - 1]
            if c % lead:
                raise ValueError("not an exact divisor")
            qc = c // lead
            q[k] = qc
            if qc:
                for j in range(dn):
                    rem[k + j] -= qc * div[j]
        if any(rem[:dn - 1]):
            raise ValueError("not an exact divisor")
        return LaurentPolyZ(q, self.min_exp - other.min_exp)

    def divides(self, other: "LaurentPolyZ") -> bool:
        """True when self divides other in Z[t, t^-1]."""
        other = _coerce_z(other)
        if self.is_zero():
            return other.is_zero()
        try:
            other.exact_div(self)
        except ValueError:
            return False
        return True

    def derivative(self) -> "LaurentPolyZ":
        out = {}
        for e, c in self.terms():
            if e:
                out[e - 1] = out.get(e - 1, 0) + e * c
        if not out:
            return LaurentPolyZ()
        lo = min(out)
        hi = max(out)
        return LaurentPolyZ([out.get(e, 0) for e in range(lo, hi + 1)], lo)

    def __repr__(self) -> str:
        return f"LaurentPolyZ({self.coeffs!r}, min_exp={self.min_exp})"


def _coerce_z(x) -> LaurentPolyZ:
    if isinstance(x, LaurentPolyZ):
        return x
    if isinstance(x, int):
        return LaurentPolyZ((x,))
    raise TypeError(f"cannot coerce {type(x).__name__} to LaurentPolyZ")


T = LaurentPolyZ((1,), min_exp=1)
ONE = LaurentPolyZ((1,))
ZERO = LaurentPolyZ()


# -- JSON ---------------------------------------------------------------


def _encode_int(c: int):
    # Decimal strings keep coefficients beyond 64 bits exact in JSON.
    if -_INT64_MAX < c < _INT64_MAX:
        return c
    return str(c)


def laurent_to_json(p: LaurentPolyZ) -> dict:
    return {"min_exp": p.min_exp, "coeffs": [_encode_int(c) for c in p.coeffs]}


def laurent_from_json(obj) -> LaurentPolyZ:
    if not isinstance(obj, dict) or "coeffs" not in obj:
        raise ValueError("Laurent polynomial JSON needs 'min_exp' and 'coeffs'")
    coeffs = [int(c) for c in obj["coeffs"]]
    return LaurentPolyZ(coeffs, int(obj.get("min_exp", 0)))


# -- canonical representative -------------------------------------------


def canonical_rep(p: LaurentPolyZ) -> LaurentPolyZ:
    """The unit-normal form: min_exp 0, nonzero constant term, positive lead.

    Raises ZeroPolynomial on the zero polynomial (units act freely there, no
    canonical choice exists).
    """
    if p.is_zero():
        raise ZeroPolynomial("the zero polynomial has no canonical representative")
    q = p.poly_part()
    if q.coeffs[-1] < 0:
        q = -q
    return q


def is_unit(p: LaurentPolyZ) -> bool:
    return len(p.coeffs) == 1 and abs(p.coeffs[0]) == 1


# -- cyclotomic machinery ------------------------------------------------


def _divisors(k: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= k:
        if k % d == 0:
            small.append(d)
            if d != k // d:
                large.append(k // d)
        d += 1
    return small + large[::-1]


def euler_phi(k: int) -> int:
    if k < 1:
        raise ValueError("euler_phi needs a positive integer")
    result = k
    n = k
    p = 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            result -= result // p
        p += 1
    if n > 1:
        result -= result // n
    return result


@functools.lru_cache(maxsize=None)
def cyclotomic_poly(k: int) -> LaurentPolyZ:
    """The k-th cyclotomic polynomial, monic in Z[t]."""
    if k < 1:
        raise ValueError("cyclotomic index must be >= 1")
    num = LaurentPolyZ([-1] + [0] * (k - 1) + [1])  # t^k - 1
    for d in _divisors(k):
        if d < k:
            num = num.exact_div(cyclotomic_poly(d))
    return num


def _cyclotomic_candidates(deg: int):
    """All k with euler_phi(k) <= deg.

    phi(k) >= sqrt(k/2) for every k >= 1, so k <= 2*deg^2 + 6 is a superset
    (+6 soaks up the tiny-degree corner cases like deg = 1, k = 2).
    """
    bound = 2 * deg * deg + 6
    return [k for k in range(1, bound + 1) if euler_phi(k) <= deg]


def is_cyclotomic_type(p: LaurentPolyZ) -> bool:
    """True when every root of p is a root of unity (constants count as yes)."""
    if p.is_zero():
        raise ZeroPolynomial("the zero polynomial has no root type")
    q = canonical_rep(p)
    c = q.content()
    q = LaurentPolyZ([x // c for x in q.coeffs])
    while q.degree_span > 0:
        deg = q.degree_span
        for k in _cyclotomic_candidates(deg):
            phi = cyclotomic_poly(k)
            try:
                q = q.exact_div(phi)
            except ValueError:
                continue
            break
        else:
            return False
    return True


# -- Mahler measure ------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class MahlerMeasure:
    """log Mahler measure; exp_exact is set when exp(M) is a certified integer."""

    exp_exact: int | None
    log_value: float

    def to_json(self) -> dict:
        return {"exp_exact": self.exp_exact, "log_value": self.log_value}


def _fraction_coeffs(p: LaurentPolyZ) -> list[Fraction]:
    return [Fraction(c) for c in p.poly_part().coeffs]


def _frac_poly_trim(c: list[Fraction]) -> list[Fraction]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _frac_poly_divmod(a: list[Fraction], b: list[Fraction]):
    a = a[:]
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    lead = b[-1]
    for k in range(len(a) - len(b), -1, -1):
        coef = a[k + len(b) - 1] / lead
        q[k] = coef
        if coef:
            for j, bj in enumerate(b):
                a[k + j] -= coef * bj
    return q, _frac_poly_trim(a[: len(b) - 1])


def _frac_poly_gcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a, b = _frac_poly_trim(a[:]), _frac_poly_trim(b[:])
    while b:
        _, r = _frac_poly_divmod(a, b)
        a, b = b, r
    return a


def _from_fraction_coeffs(c: list[Fraction]) -> LaurentPolyZ:
    """Primitive integer polynomial proportional to c, positive lead."""
    c = _frac_poly_trim(c[:])
    if not c:
        return LaurentPolyZ()
    den = 1
    for x in c:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in c]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    ints = [x // g for x in ints]
    if ints[-1] < 0:
        ints = [-x for x in ints]
    return LaurentPolyZ(ints)


def laurent_gcd_z(a: LaurentPolyZ, b: LaurentPolyZ) -> LaurentPolyZ:
    """gcd in Z[t, t^-1], returned as a canonical representative.

    Gauss: gcd = gcd(contents) * primitive gcd of the primitive parts.
    """
    if a.is_zero() and b.is_zero():
        raise BothZero("gcd(0, 0) is undefined")
    if a.is_zero():
        return canonical_rep(b)
    if b.is_zero():
        return canonical_rep(a)
    cont = math.gcd(a.content(), b.content())
    prim = _from_fraction_coeffs(_frac_poly_gcd(_fraction_coeffs(a), _fraction_coeffs(b)))
    return canonical_rep(prim * cont)


def mahler_measure(p: LaurentPolyZ, tol: float = 1e-9) -> MahlerMeasure:
    """log Mahler measure M(p) = log(|lead| * prod max(1, |root|)).

    Cyclotomic-type inputs take the exact path (exp(M) = |leading coefficient|,
    an integer).  Otherwise roots come from mpmath with escalating precision;
    the total error bound deg * err must drop below tol, since
    x -> log max(1, x) is 1-Lipschitz, else ToleranceNotReached.  Inputs with
    repeated factors split as f = (f/g) * g, g = gcd(f, f'), so the root
    finder only ever sees squarefree polynomials.
    """
    if p.is_zero():
        raise ZeroPolynomial("Mahler measure of 0 is undefined")
    if tol <= 0:
        raise ValueError("tol must be positive")
    q = canonical_rep(p)
    lead = abs(q.coeffs[-1])
    if is_cyclotomic_type(q):
        return MahlerMeasure(exp_exact=lead, log_value=math.log(lead))
    g = _from_fraction_coeffs(_frac_poly_gcd(_fraction_coeffs(q), _fraction_coeffs(q.derivative())))
    if g.degree_span > 0:
        # M is additive over products and both factors have lower degree
        a = mahler_measure(q.exact_div(g), tol / 2)
        b = mahler_measure(g, tol / 2)
        exact = a.exp_exact * b.exp_exact if (a.exp_exact and b.exp_exact) else None
        return MahlerMeasure(exp_exact=exact, log_value=a.log_value + b.log_value)
    coeffs_desc = [int(c) for c in reversed(q.coeffs)]
    deg = q.degree_span
    for dps in (40, 80, 160, 320):
        with mpmath.workdps(dps):
            try:
                roots, err = mpmath.polyroots(coeffs_desc, maxsteps=200, error=True)
            except mpmath.libmp.NoConvergence:
                continue
            total_err = deg * float(err)
            if total_err >= tol / 2:
                continue
            acc = mpmath.log(lead)
            for r in roots:
                m = abs(r)
                if m > 1:
                    acc += mpmath.log(m)
            return MahlerMeasure(exp_exact=None, log_value=float(acc))
    raise ToleranceNotReached(f"could not certify Mahler measure to tol={tol}")


def strip_unit_roots_at_one(p: LaurentPolyZ) -> tuple[LaurentPolyZ, int]:
    """Divide out the full (t - 1)^v factor; returns (quotient, v)."""
    if p.is_zero():
        raise ZeroPolynomial("cannot strip factors from 0")
    t_minus_1 = LaurentPolyZ((-1, 1))
    v = 0
    while p.evaluate_at_one() == 0:
        p = p.exact_div(t_minus_1)
        v += 1
    return p, v


# -- Laurent polynomials over a field ------------------------------------


@dataclasses.dataclass(init=False, eq=True)
class LaurentPolyK:
    """An element of K[t, t^-1] for a FieldSpec-backed field K.

    Coefficients are field elements (see fields.FieldElem); the same trimmed
    window representation as LaurentPolyZ.
    """

    field: object
    min_exp: int
    coeffs: tuple

    def __init__(self, field, coeffs=(), min_exp: int = 0):
        coeffs = tuple(coeffs)
        lo, hi = 0, len(coeffs)
        while lo < hi and coeffs[lo].is_zero():
            lo += 1
        while hi > lo and coeffs[hi - 1].is_zero():
            hi -= 1
        self.field = field
        if lo == hi:
            self.min_exp = 0
            self.coeffs = ()
        else:
            self.min_exp = min_exp + lo
            self.coeffs = coeffs[lo:hi]

    @property
    def max_exp(self) -> int:
        if not self.coeffs:
            return 0
        return self.min_exp + len(self.coeffs) - 1

    @property
    def degree_span(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def _check(self, other: "LaurentPolyK"):
        if self.field != other.field:
            raise FieldMismatch("operands live over different fields")

    def __neg__(self) -> "LaurentPolyK":
        return LaurentPolyK(self.field, tuple(-c for c in self.coeffs), self.min_exp)

    def __add__(self, other: "LaurentPolyK") -> "LaurentPolyK":
        self._check(other)
        if not self.coeffs:
            return other
        if not other.coeffs:
            return self
        lo = min(self.min_exp, other.min_exp)
        hi = max(self.max_exp, other.max_exp)
        zero = self.field.zero()
        out = [zero] * (hi - lo + 1)
        for i, c in enumerate(self.coeffs):
            out[self.min_exp + i - lo] = out[self.min_exp + i - lo] + c
        for i, c in enumerate(other.coeffs):
            out[other.min_exp + i - lo] = out[other.min_exp + i - lo] + c
        return LaurentPolyK(self.field, out, lo)

    def __sub__(self, other: "LaurentPolyK") -> "LaurentPolyK":
        return self + (-other)

    def __mul__(self, other: "LaurentPolyK") -> "LaurentPolyK":
        self._check(other)
        if not self.coeffs or not other.coeffs:
            return LaurentPolyK(self.field)
        zero = self.field.zero()
        out = [zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return LaurentPolyK(self.field, out, self.min_exp + other.min_exp)

    def scale(self, c) -> "LaurentPolyK":
        return LaurentPolyK(self.field, tuple(c * x for x in self.coeffs), self.min_exp)

    def shift(self, e: int) -> "LaurentPolyK":
        return LaurentPolyK(self.field, self.coeffs, self.min_exp + e)

    def monic(self) -> "LaurentPolyK":
        """Monic lowest-degree representative of the unit class (min_exp 0)."""
        if self.is_zero():
            raise ZeroPolynomial("the zero polynomial has no monic representative")
        inv = self.coeffs[-1].inverse()
        return LaurentPolyK(self.field, tuple(inv * c for c in self.coeffs), 0)

    def divmod(self, other: "LaurentPolyK"):
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(self.poly_coeffs())
        div = list(other.poly_coeffs())
        zero = self.field.zero()
        if len(rem) < len(div):
            return LaurentPolyK(self.field), LaurentPolyK(self.field, rem, 0)
        lead_inv = div[-1].inverse()
        q = [zero] * (len(rem) - len(div) + 1)
        for k in range(len(q) - 1, -1, -1):
            c = rem[k + len(div) - 1] * lead_inv
            q[k] = c
            if not c.is_zero():
                for j, dj in enumerate(div):
                    rem[k + j] = rem[k + j] - c * dj
        return (
            LaurentPolyK(self.field, q, self.min_exp - other.min_exp),
            LaurentPolyK(self.field, rem[: len(div) - 1], 0),
        )

    def exact_div(self, other: "LaurentPolyK") -> "LaurentPolyK":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ValueError("not an exact divisor")
        return q

    def poly_coeffs(self) -> tuple:
        return self.coeffs

    def evaluate(self, x):
        """Evaluate at an invertible field element."""
        acc = self.field.zero()
        # Horner on the window, then one power-of-x correction for min_exp.
        for c in reversed(self.coeffs):
            acc = acc * x + c
        if self.min_exp > 0:
            acc = acc * x**self.min_exp
        elif self.min_exp < 0:
            acc = acc * x.inverse() ** (-self.min_exp)
        return acc

    def __repr__(self) -> str:
        return f"LaurentPolyK({self.coeffs!r}, min_exp={self.min_exp})"


def laurent_over_field(p: LaurentPolyZ, field) -> LaurentPolyK:
    """Coefficientwise image of p in K[t, t^-1], any characteristic."""
    return LaurentPolyK(field, tuple(field.from_int(c) for c in p.coeffs), p.min_exp)


def reduce_mod_p(p: LaurentPolyZ, field) -> LaurentPolyK:
    """Image of p in K[t, t^-1] for a positive-characteristic K."""
    if field.characteristic == 0:
        raise ValueError("reduce_mod_p needs positive characteristic; use laurent_over_field")
    return laurent_over_field(p, field)


def gcd_over_field(a: LaurentPolyK, b: LaurentPolyK) -> LaurentPolyK:
    """Monic gcd in K[t, t^-1] (min_exp 0)."""
    if a.is_zero() and b.is_zero():
        raise BothZero("gcd(0, 0) is undefined")
    if a.field != b.field:
        raise FieldMismatch("operands live over different fields")
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    x, y = a, b
    while not y.is_zero():
        _, r = x.divmod(y)
        x, y = y, r
    return x.monic()
