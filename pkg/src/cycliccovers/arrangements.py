"""Line arrangements in P2 and pencils in P1.

Lines are primitive integer coefficient triples (pairs for P1, embedded as
triples with last coordinate 0), or field-coefficient triples when the
arrangement needs roots of unity.  Intersection data is computed exactly by
cross products.  The degree <= 2 cohomology with its cup-by-nu maps is
assembled per intersection point from the local pencil basis a_{i1, il}; the
resulting pair of integer matrices yields the mod-p cup Betti numbers beta_0,
beta_1 and the cokernel torsion order tau_1.

Two models of the same projective arrangement appear.  With a designated
infinity line the complex describes the affine complement: the H^1 basis is
the affine lines and points on the infinity line drop out.  Without one it
describes the cone: all lines and all points contribute.
"""

from __future__ import annotations

import dataclasses
import math
from typing import NamedTuple

from ._numutil import is_prime
from .covers import EquivariantComplex, InternalCheckError
from .exactlin import (
    IntMatrix,
    LaurentMatrixZ,
    rank_int_mod_p,
    rank_int_rational,
    snf_int,
    torsion_from_snf,
)
from .fields import FieldSpec, field_elem_from_json, make_splitting_field, root_of_unity
from .fox import OrbifoldData
from .laurent import LaurentPolyZ


class DegenerateInput(ValueError):
    """Repeated lines or otherwise degenerate geometry."""


class NotEpimorphism(ValueError):
    """Weight vector whose gcd is not 1."""


class NotAThreeNet(ValueError):
    """Certificate requested for a multinet with k != 3 classes."""


class InvalidInput(ValueError):
    """Residue vector incompatible with the requested cover order."""


def _char(field_or_char) -> int:
    return getattr(field_or_char, "characteristic", field_or_char)


# -- arrangements -----------------------------------------------------------


def _normalize_int_line(v):
    g = math.gcd(*(abs(c) for c in v))
    if g == 0:
        raise DegenerateInput("zero coefficient vector is not a line")
    w = tuple(c // g for c in v)
    for c in w:
        if c:
            return w if c > 0 else tuple(-x for x in w)
    raise DegenerateInput("zero coefficient vector is not a line")


def _normalize_field_line(v):
    for c in v:
        if not c.is_zero():
            inv = c.inverse()
            return tuple(x * inv for x in v)
    raise DegenerateInput("zero coefficient vector is not a line")


@dataclasses.dataclass(frozen=True)
class LineArrangement:
    """Lines normalized to a canonical projective representative.

    ``field`` is None for integer coefficients; otherwise every coefficient
    is an element of that field.  ``infinity_index`` designates the line
    removed to pass to the affine complement.
    """

    ambient: str
    lines: tuple
    field: FieldSpec | None = None
    infinity_index: int | None = None

    def __post_init__(self):
        if self.ambient not in ("P1", "P2"):
            raise ValueError(f"ambient must be 'P1' or 'P2', got {self.ambient!r}")
        width = 2 if self.ambient == "P1" else 3
        if self.ambient == "P1" and self.infinity_index is not None:
            raise ValueError("P1 pencils have no infinity line")
        normalized = []
        for v in self.lines:
            v = tuple(v)
            if len(v) != width:
                raise ValueError(f"{self.ambient} lines need {width} coefficients, got {len(v)}")
            if self.field is None:
                normalized.append(_normalize_int_line(v))
            else:
                normalized.append(_normalize_field_line(v))
        object.__setattr__(self, "lines", tuple(normalized))
        if len(set(normalized)) != len(normalized):
            raise DegenerateInput("repeated line")
        if self.infinity_index is not None and not (0 <= self.infinity_index < len(normalized)):
            raise ValueError(f"infinity index {self.infinity_index} out of range")

    @property
    def n_lines(self) -> int:
        return len(self.lines)

    def coords3(self) -> tuple:
        """Coefficient triples; P1 pairs gain a zero last coordinate."""
        if self.ambient == "P2":
            return self.lines
        pad = self.field.zero() if self.field is not None else 0
        return tuple(v + (pad,) for v in self.lines)

    def affine_indices(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.n_lines) if i != self.infinity_index)

    def to_json(self) -> dict:
        if self.field is None:
            lines = [list(v) for v in self.lines]
        else:
            lines = [[c.to_json() for c in v] for v in self.lines]
        out = {"ambient": self.ambient, "lines": lines}
        if self.infinity_index is not None:
            out["infinity"] = self.infinity_index
        if self.field is not None:
            out["field"] = self.field.to_json()
        return out

    @classmethod
    def from_json(cls, data: dict) -> "LineArrangement":
        if not isinstance(data, dict) or "ambient" not in data or "lines" not in data:
            raise ValueError("arrangement needs 'ambient' and 'lines'")
        field = FieldSpec.from_json(data["field"]) if "field" in data else None
        if field is None:
            lines = tuple(tuple(int(c) for c in v) for v in data["lines"])
        else:
            lines = tuple(tuple(field_elem_from_json(field, c) for c in v)
                          for v in data["lines"])
        return cls(
            ambient=data["ambient"],
            lines=lines,
            field=field,
            infinity_index=data.get("infinity"),
        )


# -- intersection data ------------------------------------------------------


class IntersectionPoint(NamedTuple):
    point: tuple
    incident: tuple[int, ...]

    @property
    def multiplicity(self) -> int:
        return len(self.incident)


@dataclasses.dataclass(frozen=True)
class IntersectionData:
    points: tuple[IntersectionPoint, ...]

    def to_json(self) -> dict:
        out = []
        for pt in self.points:
            coords = [c.to_json() if hasattr(c, "to_json") else c for c in pt.point]
            out.append({"point": coords, "incident": list(pt.incident)})
        return {"points": out}


def _cross(a, b):
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def _normalize_point(v, field):
    if field is None:
        return _normalize_int_line(v)
    return _normalize_field_line(v)


def _is_zero_coord(c) -> bool:
    return c.is_zero() if hasattr(c, "is_zero") else c == 0


def _dot_is_zero(line, point) -> bool:
    s = line[0] * point[0] + line[1] * point[1] + line[2] * point[2]
    return _is_zero_coord(s)


def intersection_points(arr: LineArrangement) -> IntersectionData:
    """All pairwise intersections, deduplicated, in canonical order.

    Points are sorted by their (ascending) incident index tuples; multinet
    base loci index into this order.
    """
    lines = arr.coords3()
    d = len(lines)
    if d < 2:
        raise DegenerateInput("need at least 2 lines to intersect")
    seen: dict = {}
    for i in range(d):
        for j in range(i + 1, d):
            p = _normalize_point(_cross(lines[i], lines[j]), arr.field)
            if p not in seen:
                seen[p] = tuple(k for k in range(d) if _dot_is_zero(lines[k], p))
    pts = sorted(
        (IntersectionPoint(p, inc) for p, inc in seen.items()),
        key=lambda pt: pt.incident,
    )
    pairs = sum(pt.multiplicity * (pt.multiplicity - 1) // 2 for pt in pts)
    if pairs != d * (d - 1) // 2:
        raise InternalCheckError(
            f"incidence covers {pairs} pairs, expected {d * (d - 1) // 2}")
    return IntersectionData(tuple(pts))


# -- cup complexes ----------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class AomotoComplexZ:
    """Integer cup-by-nu maps H^0 -> H^1 -> H^2, rows indexed by the source.

    ``h2_basis`` labels each column as (index into ``points``, H^1 line
    index): per point with incident lines i_1 < ... < i_m the classes
    a_{i_1, i_l} for l >= 2, the rest eliminated by a_{ij} = a_{i_1 j} -
    a_{i_1 i}.
    """

    nu: tuple[int, ...]
    cup0: IntMatrix
    cup1: IntMatrix
    points: tuple[IntersectionPoint, ...]
    h2_basis: tuple[tuple[int, int], ...]

    @property
    def h1_rank(self) -> int:
        return self.cup0.cols

    @property
    def h2_rank(self) -> int:
        return self.cup1.cols

    def __post_init__(self):
        for c in range(self.cup1.cols):
            s = sum(self.nu[i] * self.cup1.entries[i][c] for i in range(self.cup0.cols))
            if s != 0:
                raise InternalCheckError(f"cup composition nonzero in column {c}")

    def to_json(self) -> dict:
        return {
            "nu": list(self.nu),
            "cup0": self.cup0.to_json(),
            "cup1": self.cup1.to_json(),
            "h2_basis": [list(b) for b in self.h2_basis],
        }


def aomoto_complex(arr: LineArrangement, nu) -> AomotoComplexZ:
    """Cup-by-nu complex of the arrangement complement.

    nu has one weight per H^1 line (affine lines when an infinity line is
    designated, all lines otherwise) and must have gcd 1.
    """
    affine = arr.affine_indices()
    nu = tuple(int(v) for v in nu)
    if len(nu) != len(affine):
        raise ValueError(f"nu has {len(nu)} entries for {len(affine)} lines")
    if math.gcd(*nu) != 1:
        raise NotEpimorphism(f"gcd of {nu} is not 1")
    pos = {orig: k for k, orig in enumerate(affine)}
    at_infinity = arr.infinity_index
    kept = []
    if arr.n_lines >= 2:
        for pt in intersection_points(arr).points:
            if at_infinity is not None and at_infinity in pt.incident:
                continue
            kept.append(pt)
    b1 = len(affine)
    basis: list[tuple[int, int]] = []
    col_of: dict[tuple[int, int], int] = {}
    for pi, pt in enumerate(kept):
        inc = [pos[i] for i in pt.incident]
        for line in inc[1:]:
            col_of[(pi, line)] = len(basis)
            basis.append((pi, line))
    rows = [[0] * len(basis) for _ in range(b1)]
    for pi, pt in enumerate(kept):
        inc = [pos[i] for i in pt.incident]
        leader = inc[0]
        for i in inc:
            row = rows[i]
            for j in inc:
                if j == i:
                    continue
                if j != leader:
                    row[col_of[(pi, j)]] += nu[j]
                if i != leader:
                    row[col_of[(pi, i)]] -= nu[j]
    return AomotoComplexZ(
        nu=nu,
        cup0=IntMatrix.from_rows([list(nu)], cols=b1),
        cup1=IntMatrix.from_rows(rows, cols=len(basis)),
        points=tuple(kept),
        h2_basis=tuple(basis),
    )


@dataclasses.dataclass(frozen=True)
class BetaTau:
    beta0: dict
    beta1: dict
    tau1: int
    tau1_divisors: tuple[int, ...]


def beta_tau(cx: AomotoComplexZ, fields=(0,)) -> BetaTau:
    """Cup Betti numbers per coefficient characteristic, plus integral torsion.

    beta_0 = 1 - rank(cup0), beta_1 = b_1 - rank(cup0) - rank(cup1); tau_1 is
    the torsion order of the cokernel of cup1 (torsion of ker/im agrees with
    it because the kernel is a pure submodule of free H^2).
    """
    chars = sorted({_char(f) for f in fields})
    beta0 = {}
    beta1 = {}
    for c in chars:
        if c == 0:
            r0 = rank_int_rational(cx.cup0.entries)
            r1 = rank_int_rational(cx.cup1.entries)
        else:
            r0 = rank_int_mod_p(cx.cup0.entries, c)
            r1 = rank_int_mod_p(cx.cup1.entries, c)
        beta0[c] = 1 - r0
        beta1[c] = cx.h1_rank - r0 - r1
    order, _ = torsion_from_snf(snf := snf_int(cx.cup1))
    divisors = tuple(d for d in snf.divisors if d > 1)
    return BetaTau(beta0, beta1, order, divisors)


# -- pencils ----------------------------------------------------------------


def pencil_arrangement(d: int) -> LineArrangement:
    """d distinct concurrent lines as a P1 pencil."""
    if d < 2:
        raise ValueError("pencil needs at least 2 lines")
    return LineArrangement("P1", tuple((1, k) for k in range(d)))


def pencil_complex(d: int, n) -> EquivariantComplex:
    """Equivariant complex of the complement of d concurrent lines.

    Generators: the central loop (weight sum(n)) followed by the meridians of
    the first d - 1 lines; relators are the d - 1 commutators, so the degree-1
    boundary column for relator l carries 1 - t^{n_l} in the central row and
    t^{sum(n)} - 1 on the diagonal.
    """
    n = tuple(int(v) for v in n)
    if d < 2 or len(n) != d:
        raise ValueError(f"need d >= 2 weights, got d={d}, len={len(n)}")
    if math.gcd(*n) != 1:
        raise NotEpimorphism(f"gcd of {n} is not 1")
    s = sum(n)
    one = LaurentPolyZ.one()
    t_s = LaurentPolyZ.t_power(s)
    zero = LaurentPolyZ.zero()
    d1 = LaurentMatrixZ.from_rows(
        [[t_s - one] + [LaurentPolyZ.t_power(n[l]) - one for l in range(d - 1)]],
        cols=d)
    rows = [[one - LaurentPolyZ.t_power(n[l]) for l in range(d - 1)]]
    for l in range(d - 1):
        row = [zero] * (d - 1)
        row[l] = t_s - one
        rows.append(row)
    d2 = LaurentMatrixZ.from_rows(rows, cols=d - 1)
    return EquivariantComplex(ranks=(1, d, d - 1), boundaries=(d1, d2))


# -- multinets --------------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class Multinet:
    """Weighted partition of an arrangement with a declared base locus.

    ``base_locus`` holds indices into the canonical intersection point order.
    Structural sanity (exact partition, k >= 3, positive weights, index
    ranges) is enforced here; the five multinet conditions are checked by
    verify_multinet.
    """

    arrangement: LineArrangement
    classes: tuple[tuple[int, ...], ...]
    weights: tuple[int, ...]
    base_locus: tuple[int, ...]

    def __post_init__(self):
        arr = self.arrangement
        classes = tuple(tuple(sorted(c)) for c in self.classes)
        object.__setattr__(self, "classes", classes)
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        object.__setattr__(self, "base_locus", tuple(sorted(set(self.base_locus))))
        if len(classes) < 3:
            raise ValueError("multinet needs at least 3 classes")
        flat = [i for c in classes for i in c]
        if sorted(flat) != list(range(arr.n_lines)):
            raise ValueError("classes must partition the lines exactly")
        if len(self.weights) != arr.n_lines:
            raise ValueError(f"need {arr.n_lines} weights, got {len(self.weights)}")
        if any(w < 1 for w in self.weights):
            raise ValueError("weights must be positive")
        n_points = len(intersection_points(arr).points)
        if any(not (0 <= x < n_points) for x in self.base_locus):
            raise ValueError("base locus index out of range")

    @property
    def k(self) -> int:
        return len(self.classes)

    @property
    def kappa(self) -> int:
        return sum(self.weights[i] for i in self.classes[0])

    def to_json(self) -> dict:
        return {
            "classes": [list(c) for c in self.classes],
            "weights": list(self.weights),
            "base_locus": list(self.base_locus),
        }

    @classmethod
    def from_json(cls, arr: LineArrangement, data: dict) -> "Multinet":
        for key in ("classes", "weights", "base_locus"):
            if key not in data:
                raise ValueError(f"multinet needs '{key}'")
        return cls(
            arrangement=arr,
            classes=tuple(tuple(int(i) for i in c) for c in data["classes"]),
            weights=tuple(int(w) for w in data["weights"]),
            base_locus=tuple(int(x) for x in data["base_locus"]),
        )


def verify_multinet(mn: Multinet) -> tuple[bool, tuple[str, ...]]:
    """Check the five multinet conditions; returns (valid, violated labels).

    a: every class has total weight kappa.  b: lines from different classes
    meet inside the base locus.  c: at each base point all classes have the
    same local weight.  d: each class is connected through intersections
    outside the base locus.  e: the weights have gcd 1.
    """
    arr = mn.arrangement
    pts = intersection_points(arr).points
    in_locus = set(mn.base_locus)
    class_of = {}
    for ci, cls in enumerate(mn.classes):
        for i in cls:
            class_of[i] = ci
    point_of_pair = {}
    for xi, pt in enumerate(pts):
        for a in pt.incident:
            for b in pt.incident:
                if a < b:
                    point_of_pair[(a, b)] = xi
    violated = set()
    sums = [sum(mn.weights[i] for i in cls) for cls in mn.classes]
    if len(set(sums)) != 1:
        violated.add("a")
    for (a, b), xi in point_of_pair.items():
        if class_of[a] != class_of[b] and xi not in in_locus:
            violated.add("b")
    for xi in in_locus:
        local = [0] * mn.k
        for i in pts[xi].incident:
            local[class_of[i]] += mn.weights[i]
        if len(set(local)) != 1:
            violated.add("c")
    for cls in mn.classes:
        if len(cls) <= 1:
            continue
        members = set(cls)
        stack = [cls[0]]
        seen = {cls[0]}
        while stack:
            u = stack.pop()
            for v in members - seen:
                xi = point_of_pair[(min(u, v), max(u, v))]
                if xi not in in_locus:
                    seen.add(v)
                    stack.append(v)
        if seen != members:
            violated.add("d")
    if math.gcd(*mn.weights) != 1:
        violated.add("e")
    return (not violated, tuple(sorted(violated)))


@dataclasses.dataclass(frozen=True)
class AssumptionCertificate:
    assumption_ok: bool
    failed: tuple[str, ...]
    nu: tuple[int, ...] | None
    tau1: int | None
    no_parallel_component: bool | None


def _deletion_procedure(a3_lines, locus_points, incident_of) -> bool:
    """Can the third class be emptied by repeatedly removing a (line, base
    point) pair where the point meets exactly one remaining class line?
    Backtracking over the choice order, greedy first."""
    seen_dead = set()

    def search(remaining: frozenset, avail: frozenset) -> bool:
        if not remaining:
            return True
        key = (remaining, avail)
        if key in seen_dead:
            return False
        for x in sorted(avail):
            on_x = [l for l in incident_of[x] if l in remaining]
            if len(on_x) == 1:
                if search(remaining - {on_x[0]}, avail - {x}):
                    return True
        seen_dead.add(key)
        return False

    return search(frozenset(a3_lines), frozenset(locus_points))


def check_assumption_and_certificate(mn: Multinet) -> AssumptionCertificate:
    """Assumption check plus the tau_1 = 1 certificate for a 3-class multinet.

    a: weight 1 throughout the first two classes.  b: same-class lines meeting
    outside the base locus meet in a plain double point.  c: the deletion
    procedure empties the third class.  On success nu assigns 1 to the first
    two classes and -2 * weight to the third, and tau_1 of the cone complex
    certifies (when it equals 1) that no translated component exists.
    """
    if mn.k != 3:
        raise NotAThreeNet(f"certificate needs exactly 3 classes, got {mn.k}")
    valid, violated = verify_multinet(mn)
    if not valid:
        raise ValueError(f"multinet violates conditions {violated}")
    arr = mn.arrangement
    pts = intersection_points(arr).points
    in_locus = set(mn.base_locus)
    failed = set()
    for i in mn.classes[0] + mn.classes[1]:
        if mn.weights[i] != 1:
            failed.add("a")
    class_of = {}
    for ci, cls in enumerate(mn.classes):
        for i in cls:
            class_of[i] = ci
    for xi, pt in enumerate(pts):
        if xi in in_locus:
            continue
        by_class = {class_of[i] for i in pt.incident}
        if len(by_class) == 1 and pt.multiplicity > 2:
            failed.add("b")
    incident_of = {xi: tuple(pt.incident) for xi, pt in enumerate(pts)}
    if not _deletion_procedure(mn.classes[2], in_locus, incident_of):
        failed.add("c")
    if failed:
        return AssumptionCertificate(False, tuple(sorted(failed)), None, None, None)
    nu = [0] * arr.n_lines
    for i in mn.classes[0] + mn.classes[1]:
        nu[i] = 1
    for i in mn.classes[2]:
        nu[i] = -2 * mn.weights[i]
    cone = dataclasses.replace(arr, infinity_index=None)
    bt = beta_tau(aomoto_complex(cone, nu), (0,))
    return AssumptionCertificate(True, (), tuple(nu), bt.tau1, bt.tau1 == 1)


# -- constructions ----------------------------------------------------------


def deleted_monomial_arrangement(mu: int) -> tuple[LineArrangement, OrbifoldData]:
    """The 3*mu + 2 lines y, z, x^mu - y^mu, x^mu - z^mu, y^mu - z^mu and the
    type (0, 2, (mu)) orbifold its complement fibers over.

    mu = 2 stays over the integers; mu >= 3 needs the mu-th roots of unity.
    """
    if mu < 2:
        raise ValueError("mu must be at least 2")
    if mu == 2:
        lines = [(0, 1, 0), (0, 0, 1)]
        for j in (1, -1):
            lines.append((1, -j, 0))
        for j in (1, -1):
            lines.append((1, 0, -j))
        for j in (1, -1):
            lines.append((0, 1, -j))
        arr = LineArrangement("P2", tuple(lines))
    else:
        field = make_splitting_field(0, mu)
        zeta = root_of_unity(field, mu)
        one = field.one()
        zero = field.zero()
        powers = [zeta**j for j in range(mu)]
        lines = [(zero, one, zero), (zero, zero, one)]
        lines += [(one, -w, zero) for w in powers]
        lines += [(one, zero, -w) for w in powers]
        lines += [(zero, one, -w) for w in powers]
        arr = LineArrangement("P2", tuple(lines), field=field)
    return arr, OrbifoldData(0, 2, (mu,))


def deleted_monomial_nu(mu: int) -> tuple[int, ...]:
    """Weights induced by the orbifold pencil: mu and -mu on y and z, then
    1 on x^mu - y^mu, -1 on x^mu - z^mu, 0 on y^mu - z^mu."""
    if mu < 2:
        raise ValueError("mu must be at least 2")
    return (mu, -mu) + (1,) * mu + (-1,) * mu + (0,) * mu


def deleted_b3_arrangement() -> LineArrangement:
    """The 8 lines z, x, y, x-y, x-z, y-z, x-y-z, x-y+z with z at infinity."""
    return LineArrangement(
        "P2",
        (
            (0, 0, 1),
            (1, 0, 0),
            (0, 1, 0),
            (1, -1, 0),
            (1, 0, -1),
            (0, 1, -1),
            (1, -1, -1),
            (1, -1, 1),
        ),
        infinity_index=0,
    )


DELETED_B3_NU = (1, -1, 0, -1, 1, 2, -2)


@dataclasses.dataclass(frozen=True)
class MultiplicityVector:
    """Positive per-line multiplicities; the Milnor-fiber style cover order is
    their total."""

    m: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "m", tuple(int(v) for v in self.m))
        if not self.m or any(v < 1 for v in self.m):
            raise ValueError("multiplicities must be positive")

    @property
    def total(self) -> int:
        return sum(self.m)

    def delta_images(self) -> tuple[int, ...]:
        return tuple(v % self.total for v in self.m)

    def to_json(self) -> dict:
        return {"m": list(self.m), "total": self.total}


def lift_multiplicity(chi, n: int, p: int) -> MultiplicityVector:
    """Smallest multiplicity vector with m_l > 0, m_l = chi_l mod N, and the
    total over N prime to p.

    The per-line minimum (residue, or N when the residue vanishes) already
    has total divisible by N; when p divides total / N the last coordinate
    is bumped by N, and consecutive integers cannot both be multiples of p.
    """
    chi = [int(c) for c in chi]
    if n < 1:
        raise InvalidInput("cover order must be positive")
    if not chi:
        raise InvalidInput("need at least one residue")
    if sum(chi) % n != 0:
        raise InvalidInput(f"N = {n} does not divide sum(chi) = {sum(chi)}")
    if not is_prime(p):
        raise InvalidInput(f"p = {p} is not prime")
    m = [c % n if c % n else n for c in chi]
    ratio = sum(m) // n
    if ratio % p == 0:
        m[-1] += n
    return MultiplicityVector(tuple(m))
