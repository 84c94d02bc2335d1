"""Fox calculus on finitely presented groups.

Words in a free group are tuples of (generator_index, exponent) syllables in
reduced form.  A presentation together with a surjection onto Z yields a rank
(1, n, s) equivariant chain complex over Z[t, 1/t] whose degree-1 invariants
are the Alexander polynomial and the normalized Betti limits; a finite-order
character with values in a field specializes the same Fox matrices to plain
field matrices computing twisted first cohomology.

Hyperbolic-type 2-orbifold groups (genus g, r boundary curves, cone orders
mu_1..mu_s) are provided as ready-made presentations with their default
surjection and the closed-form dimension counts their twisted cohomology obeys.
"""

from __future__ import annotations

import dataclasses
import itertools
import math

from .covers import EquivariantComplex
from .exactlin import LaurentMatrixZ, rank_field
from .fields import FieldElem, FieldSpec, coprime_part, make_splitting_field, root_of_unity
from .laurent import LaurentPolyZ


class InvalidEpimorphism(ValueError):
    """Images do not define a surjection onto Z killing the relators."""


class CharacterInvalid(ValueError):
    """Character values are not units or do not kill the relators."""


class InvalidType(ValueError):
    """Orbifold signature outside the supported hyperbolic-type range."""


class InvalidProfile(ValueError):
    """Fixed-point count inconsistent with the character type."""


# -- words ------------------------------------------------------------------

Word = tuple[tuple[int, int], ...]


def reduce_word(syllables) -> Word:
    """Merge adjacent same-generator syllables and drop zero exponents."""
    out: list[list[int]] = []
    for g, e in syllables:
        g = int(g)
        e = int(e)
        if e == 0:
            continue
        if out and out[-1][0] == g:
            out[-1][1] += e
            if out[-1][1] == 0:
                out.pop()
        else:
            out.append([g, e])
    return tuple((g, e) for g, e in out)


def word_inverse(w: Word) -> Word:
    return tuple((g, -e) for g, e in reversed(w))


def word_mul(a: Word, b: Word) -> Word:
    return reduce_word(list(a) + list(b))


def word_from_json(data) -> Word:
    if not isinstance(data, list):
        raise ValueError("word must be a list of [generator, exponent] pairs")
    for pair in data:
        if not (isinstance(pair, list) and len(pair) == 2):
            raise ValueError(f"malformed syllable {pair!r}")
    return reduce_word((g, e) for g, e in data)


def word_to_json(w: Word) -> list:
    return [[g, e] for g, e in w]


# -- presentations ----------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class GroupPresentation:
    """<x_0, ..., x_{n-1} | r_0, ..., r_{s-1}> with reduced relator words."""

    generators: int
    relators: tuple[Word, ...]

    def __post_init__(self):
        if self.generators < 1:
            raise ValueError("presentation needs at least one generator")
        reduced = []
        for rel in self.relators:
            rel = reduce_word(rel)
            for g, _ in rel:
                if not (0 <= g < self.generators):
                    raise ValueError(f"relator uses generator {g} outside 0..{self.generators - 1}")
            reduced.append(rel)
        object.__setattr__(self, "relators", tuple(reduced))

    def to_json(self) -> dict:
        return {
            "generators": self.generators,
            "relators": [word_to_json(r) for r in self.relators],
        }

    @classmethod
    def from_json(cls, data: dict) -> "GroupPresentation":
        if not isinstance(data, dict) or "generators" not in data or "relators" not in data:
            raise ValueError("presentation needs 'generators' and 'relators'")
        return cls(int(data["generators"]),
                   tuple(word_from_json(r) for r in data["relators"]))


@dataclasses.dataclass(frozen=True)
class EpimorphismToZ:
    """Generator images of a surjection G -> Z (image gcd must be 1)."""

    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(v) for v in self.images)
        object.__setattr__(self, "images", images)
        if not images or math.gcd(*images) != 1:
            raise InvalidEpimorphism(f"images {images} do not generate Z")

    def __call__(self, w: Word) -> int:
        return sum(e * self.images[g] for g, e in w)

    def to_json(self) -> dict:
        return {"images": list(self.images)}

    @classmethod
    def from_json(cls, data: dict) -> "EpimorphismToZ":
        if not isinstance(data, dict) or "images" not in data:
            raise ValueError("epimorphism needs 'images'")
        return cls(tuple(int(v) for v in data["images"]))


# -- Fox derivatives --------------------------------------------------------


def fox_derivative(word: Word, gen: int) -> dict[Word, int]:
    """d(word)/d(x_gen) in the integral group ring of the free group.

    Product rule d(uv) = du + u dv with d(x)/dx = 1, d(x^-1)/dx = -x^-1;
    keys are reduced words, values nonzero integer coefficients.
    """
    terms: dict[Word, int] = {}

    def add(w: Word, c: int):
        c += terms.pop(w, 0)
        if c:
            terms[w] = c

    prefix: list[list[int]] = []

    def snapshot(extra_exp: int) -> Word:
        w = tuple((g, e) for g, e in prefix)
        if extra_exp:
            w = word_mul(w, ((gen, extra_exp),))
        return w

    for g, e in word:
        if g == gen:
            if e > 0:
                for j in range(e):
                    add(snapshot(j), 1)
            else:
                for j in range(1, -e + 1):
                    add(snapshot(-j), -1)
        if prefix and prefix[-1][0] == g:
            prefix[-1][1] += e
            if prefix[-1][1] == 0:
                prefix.pop()
        else:
            prefix.append([g, e])
    return terms


def _fox_to_laurent(terms: dict[Word, int], nu: EpimorphismToZ) -> LaurentPolyZ:
    exps: dict[int, int] = {}
    for w, c in terms.items():
        e = nu(w)
        exps[e] = exps.get(e, 0) + c
    if not exps:
        return LaurentPolyZ()
    lo = min(exps)
    hi = max(exps)
    return LaurentPolyZ([exps.get(e, 0) for e in range(lo, hi + 1)], min_exp=lo)


def equivariant_complex_from_presentation(pres: GroupPresentation,
                                          nu: EpimorphismToZ) -> EquivariantComplex:
    """Rank (1, n, s) chain complex of the Z-cover of the presentation complex.

    Degree-0 boundary row is (t^nu(x_i) - 1); degree-1 boundary entry (i, k)
    is the Fox derivative d(r_k)/d(x_i) pushed through nu.
    """
    n = pres.generators
    if len(nu.images) != n:
        raise InvalidEpimorphism(
            f"epimorphism has {len(nu.images)} images for {n} generators")
    for rel in pres.relators:
        if nu(rel) != 0:
            raise InvalidEpimorphism(f"relator {word_to_json(rel)} maps to {nu(rel)} != 0")
    d1 = LaurentMatrixZ.from_rows(
        [[LaurentPolyZ.t_power(nu.images[i]) - LaurentPolyZ.one() for i in range(n)]],
        cols=n)
    s = len(pres.relators)
    fox_rows = []
    for i in range(n):
        fox_rows.append([_fox_to_laurent(fox_derivative(rel, i), nu)
                         for rel in pres.relators])
    d2 = LaurentMatrixZ.from_rows(fox_rows, cols=s)
    return EquivariantComplex(ranks=(1, n, s), boundaries=(d1, d2))


# -- finite-order characters ------------------------------------------------


@dataclasses.dataclass(frozen=True)
class Character:
    """Homomorphism G -> K^* given by unit values on the generators."""

    field: FieldSpec
    values: tuple[FieldElem, ...]

    def __post_init__(self):
        if not self.values:
            raise CharacterInvalid("character needs at least one value")
        for v in self.values:
            if v.field != self.field:
                raise CharacterInvalid("character value from a different field")
            if v.is_zero():
                raise CharacterInvalid("character values must be units")

    def __call__(self, w: Word) -> FieldElem:
        out = self.field.one()
        for g, e in w:
            out = out * self.values[g] ** e
        return out

    def is_trivial(self) -> bool:
        return all(v.is_one() for v in self.values)


def trivial_character(field: FieldSpec, n: int) -> Character:
    return Character(field, tuple(field.one() for _ in range(n)))


def specialize_character(pres: GroupPresentation, chi: Character):
    """(degree-0 row, degree-1 Fox matrix) of the chain complex twisted by chi.

    Raises CharacterInvalid unless chi kills every relator.
    """
    n = pres.generators
    if len(chi.values) != n:
        raise CharacterInvalid(f"character has {len(chi.values)} values for {n} generators")
    for rel in pres.relators:
        if not chi(rel).is_one():
            raise CharacterInvalid(f"character does not kill relator {word_to_json(rel)}")
    one = chi.field.one()
    d1 = [[chi.values[i] - one for i in range(n)]]
    d2 = []
    for i in range(n):
        row = []
        for rel in pres.relators:
            acc = chi.field.zero()
            for w, c in fox_derivative(rel, i).items():
                acc = acc + chi(w) * chi.field.from_int(c)
            row.append(acc)
        d2.append(row)
    return d1, d2


def twisted_h1_dim(pres: GroupPresentation, chi: Character) -> int:
    """dim_K H^1(G, K_chi) computed from the specialized Fox matrices."""
    d1, d2 = specialize_character(pres, chi)
    return pres.generators - rank_field(d1) - rank_field(d2)


# -- orbifold groups --------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class OrbifoldData:
    """Signature (genus g, boundary count r, cone orders mu) of a 2-orbifold.

    Restricted to the types whose group surjects onto Z: (g, r) = (0, 0) and
    (0, 1) are rejected, as is the closed case with exactly one cone point.
    Cone orders must be at least 2.
    """

    g: int
    r: int
    mu: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "mu", tuple(int(m) for m in self.mu))
        if self.g < 0 or self.r < 0:
            raise InvalidType("genus and boundary count must be nonnegative")
        if any(m < 2 for m in self.mu):
            raise InvalidType("cone orders must be at least 2")
        if (self.g, self.r) in ((0, 0), (0, 1)):
            raise InvalidType(
                f"signature (g={self.g}, r={self.r}) has no surjection onto Z")
        if self.r == 0 and len(self.mu) == 1:
            raise InvalidType("closed type with a single cone point is not supported")

    @property
    def s(self) -> int:
        return len(self.mu)

    @property
    def n_free(self) -> int:
        """Number of infinite-order generators in the standard presentation."""
        return 2 * self.g + self.r - 1 if self.r > 0 else 2 * self.g


def orbifold_presentation(d: OrbifoldData) -> GroupPresentation:
    """Standard presentation: torsion generators last.

    r > 0: free generators x_0..x_{n-1}, then gamma_j with relators
    gamma_j^mu_j.  r = 0: surface generators x_1 y_1 .. x_g y_g, then gamma_j,
    with the product relator prod [x_i, y_i] prod gamma_j first.
    """
    n = d.n_free
    s = d.s
    relators: list[Word] = []
    if d.r == 0:
        long_rel: list[tuple[int, int]] = []
        for k in range(d.g):
            x, y = 2 * k, 2 * k + 1
            long_rel += [(x, 1), (y, 1), (x, -1), (y, -1)]
        long_rel += [(n + j, 1) for j in range(s)]
        relators.append(reduce_word(long_rel))
    for j in range(s):
        relators.append(((n + j, d.mu[j]),))
    return GroupPresentation(n + s, tuple(relators))


def orbifold_default_epimorphism(d: OrbifoldData) -> EpimorphismToZ:
    """x_0 -> 1, everything else -> 0 (torsion images are forced to vanish)."""
    return EpimorphismToZ((1,) + (0,) * (d.n_free + d.s - 1))


def build_orbifold_complex(d: OrbifoldData, nu: EpimorphismToZ | None = None):
    """(presentation, surjection, equivariant complex) for the signature."""
    pres = orbifold_presentation(d)
    if nu is None:
        nu = orbifold_default_epimorphism(d)
    return pres, nu, equivariant_complex_from_presentation(pres, nu)


def ell_count(d: OrbifoldData, chi: Character) -> int:
    """Number of cone points fixed by chi and tame for the coefficient field:
    lambda_j = 1 and char does not divide mu_j."""
    p = chi.field.characteristic
    n = d.n_free
    count = 0
    for j, m in enumerate(d.mu):
        if chi.values[n + j].is_one() and (p == 0 or m % p != 0):
            count += 1
    return count


def orbifold_h1_dim_formula(d: OrbifoldData, characteristic: int,
                            ell: int, trivial: bool) -> int:
    """Closed form for dim H^1(G, K_chi) in terms of the profile (ell, trivial).

    ell counts cone points with lambda_j = 1 and char not dividing mu_j; the
    trivial character forces ell to equal that count for lambda = 1 across the
    board, and InvalidProfile rejects inconsistent inputs.
    """
    s = d.s
    if not (0 <= ell <= s):
        raise InvalidProfile(f"ell = {ell} outside 0..{s}")
    if trivial:
        p = characteristic
        forced = sum(1 for m in d.mu if p == 0 or m % p != 0)
        if ell != forced:
            raise InvalidProfile(
                f"trivial character has ell = {forced} in characteristic {p}, got {ell}")
    n = d.n_free
    if d.r > 0:
        if trivial:
            return n + s - ell
        return n + s - ell - 1
    if not trivial:
        return 2 * d.g + s - 2 - ell
    if ell < s:
        return 2 * d.g + s - 1 - ell
    return 2 * d.g


# -- character enumeration ---------------------------------------------------


def character_field(characteristic: int, mu) -> FieldSpec:
    """Smallest splitting field containing every tame mu_j-th root of unity."""
    n = 1
    for m in mu:
        n = n * coprime_part(m, characteristic) // math.gcd(n, coprime_part(m, characteristic))
    return make_splitting_field(characteristic, n)


def torsion_value_choices(field: FieldSpec, mu) -> list[list[FieldElem]]:
    """Per cone point, all solutions of lambda^mu_j = 1 in the field."""
    choices = []
    for m in mu:
        m_tame = coprime_part(m, field.characteristic)
        omega = root_of_unity(field, m_tame)
        choices.append([omega ** k for k in range(m_tame)])
    return choices


def iter_torsion_profiles(field: FieldSpec, d: OrbifoldData):
    """All admissible torsion-value tuples; the closed case keeps only those
    with product 1 (forced by the surface relator)."""
    for profile in itertools.product(*torsion_value_choices(field, d.mu)):
        if d.r == 0:
            prod = field.one()
            for v in profile:
                prod = prod * v
            if not prod.is_one():
                continue
        yield profile


def orbifold_character(d: OrbifoldData, field: FieldSpec,
                       free_values, torsion_values) -> Character:
    """Assemble a character from separate free-part and cone-point values."""
    free_values = tuple(free_values)
    torsion_values = tuple(torsion_values)
    if len(free_values) != d.n_free:
        raise CharacterInvalid(f"need {d.n_free} free-part values, got {len(free_values)}")
    if len(torsion_values) != d.s:
        raise CharacterInvalid(f"need {d.s} cone-point values, got {len(torsion_values)}")
    return Character(field, free_values + torsion_values)
