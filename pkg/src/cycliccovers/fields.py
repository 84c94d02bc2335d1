"""Exact coefficient fields with enough roots of unity.

A FieldSpec names one of two kinds of field:

* characteristic 0: the cyclotomic field Q[x]/Phi_n (n = unity_order); the
  prime field Q itself appears as n = 1 with modulus x - 1,
* characteristic p: F_p[x]/f where f is an irreducible factor of
  Phi_{n'} mod p for n' the prime-to-p part of unity_order; deg f is then the
  multiplicative order of p mod n'.

Either way the class of x is a primitive n'-th root of unity, which makes
root lookups deterministic: every requested root of unity is a fixed power of
that one generator.  Element coefficients are Fractions in characteristic 0
and integers in [0, p) otherwise.
"""

from __future__ import annotations

import dataclasses
import random
from fractions import Fraction

from ._numutil import factorint, is_prime, multiplicative_order
from .laurent import cyclotomic_poly


class OrderUnavailable(ValueError):
    """Raised when a field lacks the requested root of unity."""


def coprime_part(n: int, p: int) -> int:
    """Largest divisor of n coprime to p (p = 0 leaves n unchanged)."""
    if n < 1:
        raise ValueError("coprime_part needs n >= 1")
    if p == 0:
        return n
    if not is_prime(p):
        raise ValueError("characteristic must be 0 or prime")
    while n % p == 0:
        n //= p
    return n


# -- polynomial helpers over F_p (coefficient tuples, ascending) ---------


def _gf_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _gf_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _gf_trim(out)


def _gf_divmod(a, b, p):
    a = a[:]
    if not b:
        raise ZeroDivisionError
    inv = pow(b[-1], p - 2, p)
    if len(a) < len(b):
        return [], _gf_trim(a)
    q = [0] * (len(a) - len(b) + 1)
    for k in range(len(q) - 1, -1, -1):
        c = a[k + len(b) - 1] * inv % p
        q[k] = c
        if c:
            for j, bj in enumerate(b):
                a[k + j] = (a[k + j] - c * bj) % p
    return _gf_trim(q), _gf_trim(a[: len(b) - 1])


def _gf_mod(a, f, p):
    return _gf_divmod(a, f, p)[1]


def _gf_gcd(a, b, p):
    a, b = _gf_trim(a[:]), _gf_trim(b[:])
    while b:
        a, b = b, _gf_mod(a, b, p)
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [x * inv % p for x in a]
    return a


def _gf_powmod(a, e, f, p):
    result = [1]
    base = _gf_mod(a, f, p)
    while e:
        if e & 1:
            result = _gf_mod(_gf_mul(result, base, p), f, p)
        base = _gf_mod(_gf_mul(base, base, p), f, p)
        e >>= 1
    return result


def _gf_is_irreducible(f, p) -> bool:
    d = len(f) - 1
    if d < 1:
        return False
    x = _gf_mod([0, 1], f, p)
    # x^(p^d) == x mod f, and no earlier collapse at d/q for prime q | d
    if _gf_trim([(a - b) % p for a, b in _pad(_gf_powmod(x, p**d, f, p), x)]):
        return False
    for q in factorint(d):
        h = _gf_powmod(x, p ** (d // q), f, p)
        diff = _gf_trim([(a - b) % p for a, b in _pad(h, x)])
        if len(_gf_gcd(diff, f, p)) != 1:
            return False
    return True


def _pad(a, b):
    n = max(len(a), len(b))
    return zip(a + [0] * (n - len(a)), b + [0] * (n - len(b)))


def _gf_equal_degree_factors(f, p, d) -> list[tuple[int, ...]]:
    """All monic irreducible factors of f, each known to have degree d."""
    rng = random.Random(0x5EED)
    out = []
    stack = [f]
    while stack:
        g = stack.pop()
        if len(g) - 1 == d:
            inv = pow(g[-1], p - 2, p)
            out.append(tuple(x * inv % p for x in g))
            continue
        while True:
            r = [rng.randrange(p) for _ in range(len(g) - 1)]
            r = _gf_trim(r)
            if not r:
                continue
            if p == 2:
                # trace splitting: sum of r^(2^i) for i < d
                acc = [0]
                term = _gf_mod(r, g, p)
                for _ in range(d):
                    acc = _gf_trim([(a + b) % p for a, b in _pad(acc, term)])
                    term = _gf_mod(_gf_mul(term, term, p), g, p)
                h = _gf_gcd(acc, g, p)
            else:
                e = (p**d - 1) // 2
                w = _gf_powmod(r, e, g, p)
                w = _gf_trim([(a - b) % p for a, b in _pad(w, [1])])
                h = _gf_gcd(w, g, p)
            if 0 < len(h) - 1 < len(g) - 1:
                stack.append(h)
                stack.append(_gf_divmod(g, h, p)[0])
                break
    return out


# -- the field types ------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class FieldSpec:
    """A field Q[x]/Phi_n or F_p[x]/f carrying a distinguished root of unity."""

    characteristic: int
    modulus: tuple[int, ...]
    unity_order: int

    def __post_init__(self):
        p = self.characteristic
        if p != 0 and not is_prime(p):
            raise ValueError("characteristic must be 0 or prime")
        if self.unity_order < 1:
            raise ValueError("unity_order must be >= 1")
        mod = self.modulus
        if len(mod) < 2:
            raise ValueError("modulus must have degree >= 1")
        if p == 0:
            phi = tuple(cyclotomic_poly(self.unity_order).coeffs)
            if tuple(mod) != phi:
                raise ValueError("characteristic-0 modulus must be the cyclotomic polynomial of unity_order")
        else:
            if any(not (0 <= c < p) for c in mod):
                raise ValueError("modulus coefficients must lie in [0, p)")
            if mod[-1] != 1:
                raise ValueError("modulus must be monic")
            if not _gf_is_irreducible(list(mod), p):
                raise ValueError("modulus is not irreducible over the prime field")
            cap = coprime_part(self.unity_order, p)
            if (p ** self.degree - 1) % cap != 0:
                raise ValueError("field cannot contain the declared roots of unity")
            # the class of x must have exact multiplicative order cap
            x = [0, 1]
            if _gf_trim([(a - b) % p for a, b in _pad(_gf_powmod(x, cap, list(mod), p), [1])]):
                raise ValueError("generator is not a root of unity of the declared order")
            for q in factorint(cap):
                h = _gf_powmod(x, cap // q, list(mod), p)
                if not _gf_trim([(a - b) % p for a, b in _pad(h, [1])]):
                    raise ValueError("generator order is smaller than declared")

    @property
    def degree(self) -> int:
        return len(self.modulus) - 1

    @property
    def size(self) -> int | None:
        """Number of elements, None when infinite."""
        if self.characteristic == 0:
            return None
        return self.characteristic**self.degree

    def _reduce(self, rep: list) -> tuple:
        """Reduce a coefficient list mod the modulus, fixed length = degree."""
        p = self.characteristic
        d = self.degree
        mod = self.modulus
        rep = list(rep)
        for k in range(len(rep) - 1, d - 1, -1):
            c = rep[k]
            if c:
                for j in range(len(mod)):
                    rep[k - d + j] -= c * mod[j] if j < d else 0
                # subtract c * (modulus without its monic head) shifted
                rep[k] = 0
        rep = rep[:d] + [0] * max(0, d - len(rep))
        if p == 0:
            return tuple(Fraction(c) for c in rep[:d])
        return tuple(int(c) % p for c in rep[:d])

    def element(self, rep) -> "FieldElem":
        return FieldElem(self, self._reduce(list(rep)))

    def zero(self) -> "FieldElem":
        return self.element([])

    def one(self) -> "FieldElem":
        return self.element([1])

    def from_int(self, n: int) -> "FieldElem":
        return self.element([n])

    def generator(self) -> "FieldElem":
        """The class of x: a primitive coprime_part(unity_order, char)-th root of unity."""
        return self.element([0, 1])

    def sample(self, rng: random.Random) -> "FieldElem":
        if self.characteristic == 0:
            rep = [Fraction(rng.randrange(-9, 10), rng.randrange(1, 5)) for _ in range(self.degree)]
        else:
            rep = [rng.randrange(self.characteristic) for _ in range(self.degree)]
        return self.element(rep)

    def to_json(self) -> dict:
        return {
            "char": self.characteristic,
            "modulus": list(self.modulus),
            "unity_order": self.unity_order,
        }

    @classmethod
    def from_json(cls, obj) -> "FieldSpec":
        return cls(int(obj["char"]), tuple(int(c) for c in obj["modulus"]), int(obj["unity_order"]))


@dataclasses.dataclass(frozen=True)
class FieldElem:
    """An element of a FieldSpec field; rep has fixed length = field degree."""

    field: FieldSpec
    rep: tuple

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.rep)

    def is_one(self) -> bool:
        return self.rep[0] == 1 and all(c == 0 for c in self.rep[1:])

    def _check(self, other: "FieldElem"):
        if self.field != other.field:
            raise ValueError("elements of different fields")

    def __add__(self, other: "FieldElem") -> "FieldElem":
        self._check(other)
        p = self.field.characteristic
        if p:
            return FieldElem(self.field, tuple((a + b) % p for a, b in zip(self.rep, other.rep)))
        return FieldElem(self.field, tuple(a + b for a, b in zip(self.rep, other.rep)))

    def __neg__(self) -> "FieldElem":
        p = self.field.characteristic
        if p:
            return FieldElem(self.field, tuple((-a) % p for a in self.rep))
        return FieldElem(self.field, tuple(-a for a in self.rep))

    def __sub__(self, other: "FieldElem") -> "FieldElem":
        return self + (-other)

    def __mul__(self, other: "FieldElem") -> "FieldElem":
        self._check(other)
        a, b = self.rep, other.rep
        out = [0] * (2 * len(a) - 1) if a else []
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] += x * y
        return self.field.element(out)

    def inverse(self) -> "FieldElem":
        if self.is_zero():
            raise ZeroDivisionError("no inverse of zero")
        # extended Euclid in (prime field)[x] against the modulus
        p = self.field.characteristic
        if p:
            a = list(self.rep)
            mod = list(self.field.modulus)

            def inv_scalar(c):
                return pow(c, p - 2, p)

            def mul(u, v):
                return _gf_mul(u, v, p)

            def divmod_(u, v):
                return _gf_divmod(u, v, p)

            zero_t, one_t = [], [1]
            sub = lambda u, v: _gf_trim([(x - y) % p for x, y in _pad(u, v)])
        else:
            a = [Fraction(c) for c in self.rep]
            mod = [Fraction(c) for c in self.field.modulus]

            def mul(u, v):
                if not u or not v:
                    return []
                out = [Fraction(0)] * (len(u) + len(v) - 1)
                for i, x in enumerate(u):
                    if x:
                        for j, y in enumerate(v):
                            out[i + j] += x * y
                while out and out[-1] == 0:
                    out.pop()
                return out

            def divmod_(u, v):
                u = u[:]
                q = [Fraction(0)] * max(0, len(u) - len(v) + 1)
                for k in range(len(u) - len(v), -1, -1):
                    c = u[k + len(v) - 1] / v[-1]
                    q[k] = c
                    if c:
                        for j, vj in enumerate(v):
                            u[k + j] -= c * vj
                while q and q[-1] == 0:
                    q.pop()
                r = u[: len(v) - 1]
                while r and r[-1] == 0:
                    r.pop()
                return q, r

            zero_t, one_t = [], [Fraction(1)]

            def sub(u, v):
                n = max(len(u), len(v))
                out = [(u[i] if i < len(u) else Fraction(0)) - (v[i] if i < len(v) else Fraction(0)) for i in range(n)]
                while out and out[-1] == 0:
                    out.pop()
                return out

        while a and a[-1] == 0:
            a.pop()
        r0, r1 = mod, a
        s0, s1 = zero_t, one_t
        while r1:
            q, r = divmod_(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, sub(s0, mul(q, s1))
        # r0 is a unit (modulus irreducible); scale s0 by its inverse
        lead = r0[-1] if len(r0) == 1 else None
        if lead is None:
            raise ZeroDivisionError("element not invertible (modulus not irreducible?)")
        if p:
            li = pow(lead, p - 2, p)
            s0 = [c * li % p for c in s0]
        else:
            s0 = [c / lead for c in s0]
        return self.field.element(s0)

    def __truediv__(self, other: "FieldElem") -> "FieldElem":
        return self * other.inverse()

    def __pow__(self, e: int) -> "FieldElem":
        if e < 0:
            return self.inverse() ** (-e)
        result = self.field.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def to_json(self):
        if self.field.characteristic == 0:
            return [f"{c.numerator}/{c.denominator}" if c.denominator != 1 else int(c) for c in self.rep]
        return [int(c) for c in self.rep]

    def __repr__(self) -> str:
        return f"FieldElem({list(self.rep)!r} over char {self.field.characteristic})"


def field_elem_from_json(field: FieldSpec, obj) -> FieldElem:
    rep = []
    for c in obj:
        if isinstance(c, str):
            num, _, den = c.partition("/")
            rep.append(Fraction(int(num), int(den or 1)))
        else:
            rep.append(c)
    return field.element(rep)


def make_splitting_field(characteristic: int, n: int) -> FieldSpec:
    """The canonical field of the given characteristic containing primitive
    coprime_part(n, characteristic)-th roots of unity.

    char 0 gives Q[x]/Phi_n; char p gives F_p[x]/f with f the lexicographically
    smallest monic irreducible factor of Phi_{n'} mod p.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if characteristic == 0:
        return FieldSpec(0, tuple(cyclotomic_poly(n).coeffs), n)
    p = characteristic
    if not is_prime(p):
        raise ValueError("characteristic must be 0 or prime")
    np = coprime_part(n, p)
    phi = [c % p for c in cyclotomic_poly(np).coeffs]
    d = multiplicative_order(p % np if np > 1 else 1, np) if np > 1 else 1
    if np == 1:
        # Phi_1 = x - 1; already irreducible of degree 1
        factors = [tuple(_gf_trim([(-1) % p, 1]))]
    else:
        factors = _gf_equal_degree_factors(_gf_trim(phi), p, d)
    factors.sort()
    return FieldSpec(p, factors[0], n)


def root_of_unity(field: FieldSpec, n: int) -> FieldElem:
    """A primitive coprime_part(n, char)-th root of unity, deterministically.

    The fixed generator is the class of x (order n' = coprime part of the
    field's unity_order); in characteristic 0 with odd unity_order the
    generator is -x, of order 2 * unity_order, so that -1 is always available.
    The result is the smallest power of that generator with the right order.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    p = field.characteristic
    want = coprime_part(n, p) if p else n
    if p:
        cap = coprime_part(field.unity_order, p)
        gen = field.generator()
    else:
        u = field.unity_order
        if u % 2 == 0:
            cap = u
            gen = field.generator()
        else:
            cap = 2 * u
            gen = -field.generator()
    if cap % want != 0:
        raise OrderUnavailable(f"field has no primitive root of unity of order {want}")
    return gen ** (cap // want)
