"""Exact linear algebra over Z and Laurent polynomial rings.

Everything here is integer or polynomial arithmetic; no floats.  Matrices are
immutable tuple-of-tuples dataclasses.  A matrix of a map keeps rows = target,
columns = source throughout the package, so composability reads as usual
matrix products.
"""

from __future__ import annotations

import dataclasses
import itertools

from ._numutil import factorint
from .laurent import (
    LaurentPolyZ,
    LaurentPolyK,
    canonical_rep,
    laurent_from_json,
    laurent_gcd_z,
    laurent_to_json,
    ONE,
)


class IllegalOp(ValueError):
    """Raised when an elementary operation would change the module isomorphism type."""


@dataclasses.dataclass(frozen=True)
class IntMatrix:
    """Integer matrix with explicit shape (so 0 x n and n x 0 stay distinct)."""

    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative dimensions")
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError("entries do not match declared shape")

    @classmethod
    def from_rows(cls, rows, cols: int | None = None) -> "IntMatrix":
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        if rows:
            width = len(rows[0])
        elif cols is not None:
            width = cols
        else:
            width = 0
        return cls(len(rows), width, rows)

    @classmethod
    def zero(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, tuple(tuple(0 for _ in range(cols)) for _ in range(rows)))

    def to_json(self) -> dict:
        return {"rows": self.rows, "cols": self.cols,
                "entries": [[_int_json(x) for x in r] for r in self.entries]}


def _int_json(x: int):
    return x if -(2**63) < x < 2**63 else str(x)


@dataclasses.dataclass(frozen=True)
class LaurentMatrixZ:
    """Matrix over Z[t, t^-1] with explicit shape."""

    rows: int
    cols: int
    entries: tuple[tuple[LaurentPolyZ, ...], ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative dimensions")
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError("entries do not match declared shape")

    @classmethod
    def from_rows(cls, rows, cols: int | None = None) -> "LaurentMatrixZ":
        out = []
        width = cols
        for r in rows:
            row = tuple(x if isinstance(x, LaurentPolyZ) else LaurentPolyZ((int(x),)) for x in r)
            if width is None:
                width = len(row)
            elif len(row) != width:
                raise ValueError("ragged matrix")
            out.append(row)
        return cls(len(out), width if width is not None else 0, tuple(out))

    @classmethod
    def zero(cls, rows: int, cols: int) -> "LaurentMatrixZ":
        z = LaurentPolyZ()
        return cls(rows, cols, tuple(tuple(z for _ in range(cols)) for _ in range(rows)))

    def matmul(self, other: "LaurentMatrixZ") -> "LaurentMatrixZ":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        rows = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = LaurentPolyZ()
                for k in range(self.cols):
                    a = self.entries[i][k]
                    b = other.entries[k][j]
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            rows.append(tuple(row))
        return LaurentMatrixZ(self.rows, other.cols, tuple(rows))

    def is_zero(self) -> bool:
        return all(not e for r in self.entries for e in r)

    def transpose(self) -> "LaurentMatrixZ":
        return LaurentMatrixZ(self.cols, self.rows, tuple(zip(*self.entries)) if self.entries else ())

    def max_degree_span(self) -> int:
        spans = [e.degree_span for r in self.entries for e in r if e]
        return max(spans) if spans else 0

    def to_json(self) -> dict:
        return {"rows": self.rows, "cols": self.cols,
                "entries": [[laurent_to_json(e) for e in r] for r in self.entries]}

    @classmethod
    def from_json(cls, obj) -> "LaurentMatrixZ":
        rows = int(obj["rows"])
        cols = int(obj["cols"])
        entries = obj["entries"]
        if len(entries) != rows or any(len(r) != cols for r in entries):
            raise ValueError("matrix JSON dimensions do not match entries")
        return cls(rows, cols, tuple(tuple(laurent_from_json(e) for e in r) for r in entries))


# -- Smith normal form over Z --------------------------------------------


@dataclasses.dataclass(frozen=True)
class SnfResult:
    """Nonzero elementary divisors d_1 | d_2 | ... and the rank they imply."""

    divisors: tuple[int, ...]
    rank: int

    def __post_init__(self):
        if self.rank != len(self.divisors):
            raise ValueError("rank must equal the number of nonzero divisors")
        for d in self.divisors:
            if d < 1:
                raise ValueError("divisors must be positive")
        for a, b in zip(self.divisors, self.divisors[1:]):
            if b % a:
                raise ValueError("divisors must form a divisibility chain")


def snf_int(m) -> SnfResult:
    """Smith normal form divisors of an integer matrix."""
    if isinstance(m, IntMatrix):
        a = [list(r) for r in m.entries]
    else:
        a = [list(r) for r in m]
    R = len(a)
    C = len(a[0]) if R else 0
    divisors: list[int] = []
    t = 0
    while t < min(R, C):
        piv = None
        for i in range(t, R):
            row = a[i]
            for j in range(t, C):
                v = row[j]
                if v and (piv is None or abs(v) < piv[0]):
                    piv = (abs(v), i, j)
                    if piv[0] == 1:
                        break
            if piv is not None and piv[0] == 1:
                break
        if piv is None:
            break
        _, pi, pj = piv
        a[t], a[pi] = a[pi], a[t]
        if pj != t:
            for row in a:
                row[t], row[pj] = row[pj], row[t]
        while True:
            p = a[t][t]
            restart = False
            for i in range(t + 1, R):
                v = a[i][t]
                if v:
                    q = v // p
                    if q:
                        ai, at = a[i], a[t]
                        for j in range(t, C):
                            ai[j] -= q * at[j]
                    if a[i][t]:
                        a[t], a[i] = a[i], a[t]
                        restart = True
                        break
            if restart:
                continue
            for j in range(t + 1, C):
                v = a[t][j]
                if v:
                    q = v // p
                    if q:
                        for i in range(t, R):
                            a[i][j] -= q * a[i][t]
                    if a[t][j]:
                        for i in range(t, R):
                            a[i][t], a[i][j] = a[i][j], a[i][t]
                        restart = True
                        break
            if restart:
                continue
            break
        p = a[t][t]
        offender = None
        if abs(p) != 1:
            for i in range(t + 1, R):
                row = a[i]
                for j in range(t + 1, C):
                    if row[j] % p:
                        offender = i
                        break
                if offender is not None:
                    break
        if offender is not None:
            at, ao = a[t], a[offender]
            for j in range(t, C):
                at[j] += ao[j]
            continue
        divisors.append(abs(p))
        t += 1
    return SnfResult(tuple(divisors), len(divisors))


def torsion_from_snf(s: SnfResult) -> tuple[int, dict[int, int]]:
    """(order of the torsion part, prime factorization of that order)."""
    order = 1
    factors: dict[int, int] = {}
    for d in s.divisors:
        if d > 1:
            order *= d
            for p, e in factorint(d).items():
                factors[p] = factors.get(p, 0) + e
    return order, factors


# -- ranks ---------------------------------------------------------------


def rank_int_rational(entries) -> int:
    """Rank over Q of an integer matrix (fraction-free Bareiss)."""
    a = [list(r) for r in entries]
    R = len(a)
    C = len(a[0]) if R else 0
    r = 0
    prev = 1
    for c in range(C):
        if r == R:
            break
        pivot = None
        for i in range(r, R):
            if a[i][c]:
                pivot = i
                break
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        arc = a[r][c]
        for i in range(r + 1, R):
            aic = a[i][c]
            ai, ar = a[i], a[r]
            for j in range(c + 1, C):
                ai[j] = (ai[j] * arc - aic * ar[j]) // prev
            ai[c] = 0
        prev = arc
        r += 1
    return r


def rank_int_mod_p(entries, p: int) -> int:
    """Rank over F_p of an integer matrix."""
    a = [[x % p for x in r] for r in entries]
    R = len(a)
    C = len(a[0]) if R else 0
    r = 0
    for c in range(C):
        if r == R:
            break
        pivot = None
        for i in range(r, R):
            if a[i][c]:
                pivot = i
                break
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        inv = pow(a[r][c], p - 2, p)
        ar = a[r]
        for i in range(r + 1, R):
            f = a[i][c]
            if f:
                f = f * inv % p
                ai = a[i]
                for j in range(c, C):
                    ai[j] = (ai[j] - f * ar[j]) % p
        r += 1
    return r


def rank_field(rows) -> int:
    """Rank of a matrix of FieldElem entries (plain Gaussian elimination)."""
    a = [list(r) for r in rows]
    R = len(a)
    C = len(a[0]) if R else 0
    r = 0
    for c in range(C):
        if r == R:
            break
        pivot = None
        for i in range(r, R):
            if not a[i][c].is_zero():
                pivot = i
                break
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        inv = a[r][c].inverse()
        ar = a[r]
        for i in range(r + 1, R):
            f = a[i][c]
            if not f.is_zero():
                f = f * inv
                ai = a[i]
                for j in range(c, C):
                    ai[j] = ai[j] - f * ar[j]
        r += 1
    return r


def _poly_rank_bareiss(a) -> int:
    """Rank of a matrix of LaurentPolyZ or LaurentPolyK entries."""
    R = len(a)
    C = len(a[0]) if R else 0
    r = 0
    prev = None
    for c in range(C):
        if r == R:
            break
        pivot = None
        best = None
        for i in range(r, R):
            e = a[i][c]
            if e:
                if best is None or e.degree_span < best:
                    best = e.degree_span
                    pivot = i
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        arc = a[r][c]
        for i in range(r + 1, R):
            aic = a[i][c]
            ai, ar = a[i], a[r]
            for j in range(c + 1, C):
                num = ai[j] * arc - aic * ar[j]
                ai[j] = num.exact_div(prev) if prev is not None and num else num
            ai[c] = aic - aic  # zero of the right type
        prev = arc
        r += 1
    return r


def rank_over_fraction_field(m) -> int:
    """Rank of a matrix over the fraction field of its entry domain.

    Accepts IntMatrix (rank over Q), LaurentMatrixZ (rank over Q(t)), or raw
    rows of LaurentPolyK (rank over K(t)).
    """
    if isinstance(m, IntMatrix):
        return rank_int_rational(m.entries)
    if isinstance(m, LaurentMatrixZ):
        if not m.entries or m.cols == 0:
            return 0
        return _poly_rank_bareiss([list(r) for r in m.entries])
    rows = [list(r) for r in m]
    if not rows or not rows[0]:
        return 0
    first = rows[0][0]
    if isinstance(first, LaurentPolyZ) or isinstance(first, LaurentPolyK):
        return _poly_rank_bareiss(rows)
    if isinstance(first, int):
        return rank_int_rational(rows)
    raise TypeError(f"unsupported entry type {type(first).__name__}")


def det_laurent(rows) -> LaurentPolyZ:
    """Determinant of a square matrix of LaurentPolyZ entries (Bareiss)."""
    a = [list(r) for r in rows]
    n = len(a)
    if n == 0:
        return ONE
    if any(len(r) != n for r in a):
        raise ValueError("determinant needs a square matrix")
    sign = 1
    prev = None
    for c in range(n - 1):
        pivot = None
        best = None
        for i in range(c, n):
            e = a[i][c]
            if e:
                if best is None or e.degree_span < best:
                    best = e.degree_span
                    pivot = i
        if pivot is None:
            return LaurentPolyZ()
        if pivot != c:
            a[c], a[pivot] = a[pivot], a[c]
            sign = -sign
        acc = a[c][c]
        for i in range(c + 1, n):
            aic = a[i][c]
            ai, ar = a[i], a[c]
            for j in range(c + 1, n):
                num = ai[j] * acc - aic * ar[j]
                ai[j] = num.exact_div(prev) if prev is not None and num else num
        prev = acc
    d = a[n - 1][n - 1]
    return d if sign == 1 else -d


# -- Alexander-style minor gcds ------------------------------------------


def minor_gcd_laurent(m: LaurentMatrixZ) -> tuple[int, LaurentPolyZ]:
    """(rank r, gcd of all r x r minors) with the zero-matrix convention gcd = 1.

    The gcd is returned as a canonical representative.  Early exit once the
    running gcd collapses to a unit.
    """
    r = rank_over_fraction_field(m)
    if r == 0:
        return 0, ONE
    g: LaurentPolyZ | None = None
    for rowset in itertools.combinations(range(m.rows), r):
        sub_rows = [m.entries[i] for i in rowset]
        for colset in itertools.combinations(range(m.cols), r):
            d = det_laurent([[row[j] for j in colset] for row in sub_rows])
            if not d:
                continue
            g = canonical_rep(d) if g is None else laurent_gcd_z(g, d)
            if g == ONE:
                return r, ONE
    assert g is not None, "rank-r matrix must have a nonzero r x r minor"
    return r, g


# -- cyclic substitution t -> J_N ----------------------------------------


def cyclic_substitute(m: LaurentMatrixZ, n: int) -> IntMatrix:
    """Substitute the N x N cyclic shift for t in every entry.

    h(J_N) is the circulant with (r, c) entry = sum of coefficients of h over
    exponents congruent to r - c mod N.
    """
    if n < 1:
        raise ValueError("cover order must be >= 1")
    R, C = m.rows, m.cols
    out = [[0] * (C * n) for _ in range(R * n)]
    for bi in range(R):
        for bj in range(C):
            entry = m.entries[bi][bj]
            if not entry:
                continue
            col0 = [0] * n
            for e, coeff in entry.terms():
                col0[e % n] += coeff
            base_r, base_c = bi * n, bj * n
            for c in range(n):
                for r in range(n):
                    v = col0[(r - c) % n]
                    if v:
                        out[base_r + r][base_c + c] = v
    return IntMatrix(R * n, C * n, tuple(tuple(row) for row in out))


# -- elementary operations -----------------------------------------------


def elementary_ops_normalize(m: LaurentMatrixZ, ops) -> LaurentMatrixZ:
    """Apply a sequence of unit-preserving elementary row/column operations.

    Ops are tuples:
      ("swap_rows", i, j), ("swap_cols", i, j)
      ("scale_row", i, c, e), ("scale_col", j, c, e)  with c in {1, -1}: row *= c * t^e
      ("add_row", i, j, poly): row i += poly * row j   (i != j)
      ("add_col", i, j, poly): col i += poly * col j   (i != j)
    Any scaling by a non-unit raises IllegalOp.
    """
    a = [list(r) for r in m.entries]
    R = len(a)
    C = len(a[0]) if R else 0

    def _poly(x) -> LaurentPolyZ:
        return x if isinstance(x, LaurentPolyZ) else LaurentPolyZ((int(x),))

    for op in ops:
        kind = op[0]
        if kind == "swap_rows":
            _, i, j = op
            a[i], a[j] = a[j], a[i]
        elif kind == "swap_cols":
            _, i, j = op
            for row in a:
                row[i], row[j] = row[j], row[i]
        elif kind in ("scale_row", "scale_col"):
            _, idx, c, e = op
            if c not in (1, -1):
                raise IllegalOp(f"scaling by {c} * t^{e} is not a unit of Z[t, t^-1]")
            u = LaurentPolyZ((c,), min_exp=int(e))
            if kind == "scale_row":
                a[idx] = [u * x for x in a[idx]]
            else:
                for row in a:
                    row[idx] = u * row[idx]
        elif kind == "add_row":
            _, i, j, poly = op
            if i == j:
                raise IllegalOp("cannot add a row to itself")
            pj = _poly(poly)
            a[i] = [x + pj * y for x, y in zip(a[i], a[j])]
        elif kind == "add_col":
            _, i, j, poly = op
            if i == j:
                raise IllegalOp("cannot add a column to itself")
            pj = _poly(poly)
            for row in a:
                row[i] = row[i] + pj * row[j]
        else:
            raise IllegalOp(f"unknown elementary operation {kind!r}")
    return LaurentMatrixZ(R, C, tuple(tuple(r) for r in a))
