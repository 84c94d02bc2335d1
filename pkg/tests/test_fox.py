from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cycliccovers.covers import alexander_poly, alpha
from cycliccovers.fields import make_splitting_field, root_of_unity
from cycliccovers.fox import (
    Character,
    CharacterInvalid,
    EpimorphismToZ,
    GroupPresentation,
    InvalidEpimorphism,
    InvalidProfile,
    InvalidType,
    OrbifoldData,
    build_orbifold_complex,
    character_field,
    ell_count,
    equivariant_complex_from_presentation,
    fox_derivative,
    iter_torsion_profiles,
    orbifold_character,
    orbifold_default_epimorphism,
    orbifold_h1_dim_formula,
    orbifold_presentation,
    reduce_word,
    specialize_character,
    torsion_value_choices,
    trivial_character,
    twisted_h1_dim,
    word_from_json,
    word_inverse,
    word_mul,
    word_to_json,
)
from cycliccovers.laurent import LaurentPolyZ


def poly(*coeffs: int, min_exp: int = 0) -> LaurentPolyZ:
    return LaurentPolyZ(tuple(coeffs), min_exp)


syllables = st.lists(
    st.tuples(st.integers(0, 1), st.integers(-3, 3)), min_size=0, max_size=6
).map(tuple)


# -- word arithmetic -----------------------------------------------------------


def test_reduce_word_cancels():
    assert reduce_word(((0, 1), (0, -1))) == ()
    assert reduce_word(((0, 1), (0, 2))) == ((0, 3),)
    assert reduce_word(((0, 1), (1, 0), (0, -1))) == ()
    assert reduce_word(((0, 2), (1, 1), (1, -1), (0, -2))) == ()


@settings(deadline=None, max_examples=60)
@given(syllables)
def test_word_inverse_cancels(w):
    w = reduce_word(w)
    assert word_mul(w, word_inverse(w)) == ()
    assert word_mul(word_inverse(w), w) == ()


@settings(deadline=None, max_examples=60)
@given(syllables, syllables, syllables)
def test_word_mul_associative(a, b, c):
    a, b, c = reduce_word(a), reduce_word(b), reduce_word(c)
    assert word_mul(word_mul(a, b), c) == word_mul(a, word_mul(b, c))


def test_word_json_roundtrip():
    w = reduce_word(((0, 2), (1, -1), (0, 1)))
    assert word_from_json(word_to_json(w)) == w


# -- Fox derivatives -------------------------------------------------------------


def _ring_add(a, b):
    out = dict(a)
    for w, c in b.items():
        out[w] = out.get(w, 0) + c
        if out[w] == 0:
            del out[w]
    return out


def _ring_lmul_word(u, a):
    """Left multiplication of a group-ring element by the group element u."""
    out = {}
    for w, c in a.items():
        key = word_mul(u, w)
        out[key] = out.get(key, 0) + c
        if out[key] == 0:
            del out[key]
    return out


def _ring_mul(a, b):
    out = {}
    for w1, c1 in a.items():
        for w2, c2 in b.items():
            key = word_mul(w1, w2)
            out[key] = out.get(key, 0) + c1 * c2
            if out[key] == 0:
                del out[key]
    return out


def test_fox_on_generators():
    x = ((0, 1),)
    assert fox_derivative(x, 0) == {(): 1}
    assert fox_derivative(x, 1) == {}
    assert fox_derivative(word_inverse(x), 0) == {((0, -1),): -1}


def test_fox_power_rule():
    cube = ((0, 3),)
    assert fox_derivative(cube, 0) == {(): 1, ((0, 1),): 1, ((0, 2),): 1}


@settings(deadline=None, max_examples=50)
@given(syllables, syllables)
def test_fox_product_rule(u, v):
    u, v = reduce_word(u), reduce_word(v)
    for g in (0, 1):
        left = fox_derivative(word_mul(u, v), g)
        right = _ring_add(fox_derivative(u, g), _ring_lmul_word(u, fox_derivative(v, g)))
        assert left == right


@settings(deadline=None, max_examples=50)
@given(syllables)
def test_fox_fundamental_identity(w):
    # sum_g (dw/dx_g)(x_g - 1) = w - 1 in the integral group ring
    w = reduce_word(w)
    total = {}
    for g in (0, 1):
        gen_minus_1 = {((g, 1),): 1, (): -1}
        total = _ring_add(total, _ring_mul(fox_derivative(w, g), gen_minus_1))
    expected = {w: 1, (): -1} if w else {}
    assert total == expected


# -- presentations and their complexes ----------------------------------------------


def test_epimorphism_requires_coprime_images():
    with pytest.raises(InvalidEpimorphism):
        EpimorphismToZ((2, 4))
    nu = EpimorphismToZ((1, 0))
    assert nu(((0, 3), (1, 5))) == 3


def test_trefoil_complex():
    # <x, y | xyx(yxy)^-1>; its Alexander polynomial is t^2 - t + 1
    rel = ((0, 1), (1, 1), (0, 1), (1, -1), (0, -1), (1, -1))
    pres = GroupPresentation(2, (rel,))
    cx = equivariant_complex_from_presentation(pres, EpimorphismToZ((1, 1)))
    assert cx.ranks == (1, 2, 1)
    assert alexander_poly(cx, 1) == poly(1, -1, 1)
    assert all(alpha(cx, 1, c) == 0 for c in (0, 2, 3, 5))


def test_complex_rejects_unkilled_relator():
    pres = GroupPresentation(2, (((0, 1),),))           # relator x, nu(x) = 1
    with pytest.raises(InvalidEpimorphism):
        equivariant_complex_from_presentation(pres, EpimorphismToZ((1, 0)))


def test_cone_relator_complex_frozen():
    d = OrbifoldData(0, 2, (2,))
    pres, nu, cx = build_orbifold_complex(d)
    assert pres.generators == 2
    assert pres.relators == (((1, 2),),)
    assert nu.images == (1, 0)
    assert cx.ranks == (1, 2, 1)
    assert cx.boundaries[0].entries == ((poly(-1, 1), poly(0)),)
    assert cx.boundaries[1].entries == ((poly(0),), (poly(2),))
    assert alexander_poly(cx, 1) == poly(2)


# -- orbifold signatures --------------------------------------------------------------


def test_orbifold_presentation_shapes():
    closed = orbifold_presentation(OrbifoldData(1, 0, (2, 3)))
    assert closed.generators == 4                        # x1, y1, gamma1, gamma2
    assert len(closed.relators) == 3                     # long relator first, then powers
    assert closed.relators[1] == ((2, 2),)
    assert closed.relators[2] == ((3, 3),)
    long = closed.relators[0]
    assert long[:4] == ((0, 1), (1, 1), (0, -1), (1, -1))
    assert long[4:] == ((2, 1), (3, 1))

    punctured = orbifold_presentation(OrbifoldData(1, 2, (5,)))
    assert punctured.generators == 4                     # 2g + r - 1 = 3 free, one cone
    assert punctured.relators == (((3, 5),),)


def test_orbifold_default_epimorphism():
    nu = orbifold_default_epimorphism(OrbifoldData(1, 1, (2, 2)))
    assert nu.images == (1, 0, 0, 0)


def test_invalid_orbifold_types():
    for bad in [(0, 0, ()), (0, 1, (2,)), (1, 0, (2,)), (0, 2, (1,))]:
        with pytest.raises(InvalidType):
            OrbifoldData(*bad)


# -- characters ------------------------------------------------------------------------


def test_character_field_sizes():
    assert character_field(0, (2, 3)).unity_order == 6
    assert character_field(2, (2, 3)).size == 4          # only the order-3 part survives
    assert character_field(3, (2, 3)).size == 3
    assert character_field(5, (4,)).size == 5            # 4th roots already in F_5


def test_torsion_value_choices_counts():
    f = character_field(0, (2, 3))
    choices = torsion_value_choices(f, (2, 3))
    assert [len(c) for c in choices] == [2, 3]
    for lam in choices[0]:
        assert lam ** 2 == f.one()
    for lam in choices[1]:
        assert lam ** 3 == f.one()


def test_iter_torsion_profiles_closed_filters_product():
    d = OrbifoldData(1, 0, (2, 3))
    f = character_field(0, (2, 3))
    profiles = list(iter_torsion_profiles(f, d))
    assert len(profiles) == 1                            # only the trivial pair multiplies to 1
    assert all(v.is_one() for v in profiles[0])

    d22 = OrbifoldData(1, 0, (2, 2))
    f2 = character_field(0, (2, 2))
    profiles22 = list(iter_torsion_profiles(f2, d22))
    assert len(profiles22) == 2                          # (1,1) and (-1,-1)


def test_iter_torsion_profiles_open_keeps_all():
    d = OrbifoldData(0, 2, (2, 3))
    f = character_field(0, (2, 3))
    assert len(list(iter_torsion_profiles(f, d))) == 6


def test_character_killing_relators():
    d = OrbifoldData(0, 2, (2,))
    pres = orbifold_presentation(d)
    f = character_field(0, (2,))
    minus_one = root_of_unity(f, 2)
    chi = orbifold_character(d, f, [f.one(), f.one()][: d.n_free], [minus_one])
    d1, d2 = specialize_character(pres, chi)
    assert len(d1[0]) == 2 and len(d2) == 2


def test_character_not_killing_relator_rejected():
    d = OrbifoldData(0, 2, (2,))
    pres = orbifold_presentation(d)
    f = character_field(0, (3,))                          # cube roots, wrong order for mu = 2
    z3 = root_of_unity(f, 3)
    chi = Character(f, (f.one(), z3))
    with pytest.raises(CharacterInvalid):
        specialize_character(pres, chi)


def test_character_validation():
    f = character_field(0, (2,))
    with pytest.raises(CharacterInvalid):
        Character(f, (f.zero(),))
    with pytest.raises(CharacterInvalid):
        Character(f, ())


# -- twisted dimensions against the closed forms ------------------------------------------


def _free_value_pool(field, rng):
    """A few deterministic unit choices for the free coordinates."""
    if field.characteristic == 0:
        return [field.one(), field.from_int(2), field.from_int(-3)]
    pool = [field.one(), field.generator()]
    v = field.sample(rng)
    while v.is_zero():
        v = field.sample(rng)
    pool.append(v)
    return pool


@pytest.mark.parametrize("sig", [(0, 2, (2,)), (0, 2, (2, 3)), (1, 0, (2, 3)), (1, 1, (4,))])
@pytest.mark.parametrize("char", [0, 2, 3, 5])
def test_twisted_dim_matches_formula(sig, char):
    d = OrbifoldData(*sig)
    pres = orbifold_presentation(d)
    field = character_field(char, d.mu)
    rng = random.Random(hash((sig, char)) & 0xFFFF)
    pool = _free_value_pool(field, rng)
    for torsion in iter_torsion_profiles(field, d):
        for free in itertools.islice(itertools.product(pool, repeat=d.n_free), 4):
            chi = orbifold_character(d, field, free, torsion)
            computed = twisted_h1_dim(pres, chi)
            expected = orbifold_h1_dim_formula(d, char, ell_count(d, chi), chi.is_trivial())
            assert computed == expected, (sig, char, free, torsion)


def test_trivial_character_dim_closed_surface():
    # genus-1 surface with cone orders (2, 3): trivial character sees dim 2g = 2
    # whenever every cone order is tame, and picks up the wild ones otherwise
    d = OrbifoldData(1, 0, (2, 3))
    pres = orbifold_presentation(d)
    for char, expected in [(0, 2), (2, 2), (3, 2), (5, 2)]:
        field = character_field(char, d.mu)
        chi = trivial_character(field, pres.generators)
        assert twisted_h1_dim(pres, chi) == expected


# -- formula guard rails --------------------------------------------------------------------


def test_formula_rejects_bad_profiles():
    d = OrbifoldData(0, 2, (2, 3))
    with pytest.raises(InvalidProfile):
        orbifold_h1_dim_formula(d, 0, 5, False)
    with pytest.raises(InvalidProfile):
        orbifold_h1_dim_formula(d, 0, 1, True)           # trivial char 0 forces ell = 2
    with pytest.raises(InvalidProfile):
        orbifold_h1_dim_formula(d, 3, 2, True)           # char 3 forces ell = 1


def test_formula_trivial_values():
    d = OrbifoldData(0, 2, (2, 3))
    # n = 1 free generator, s = 2
    assert orbifold_h1_dim_formula(d, 0, 2, True) == 1 + 2 - 2
    assert orbifold_h1_dim_formula(d, 2, 1, True) == 1 + 2 - 1
    closed = OrbifoldData(1, 0, (2, 2))
    assert orbifold_h1_dim_formula(closed, 0, 2, True) == 2
    assert orbifold_h1_dim_formula(closed, 2, 0, True) == 2 + 2 - 1 - 0
