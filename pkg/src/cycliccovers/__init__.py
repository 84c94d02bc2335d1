"""Exact invariants of infinite cyclic covers.

Laurent-polynomial chain complexes over Z[t, 1/t] carry three families of
limits: Alexander polynomials (minor gcds of the boundaries), normalized
Betti numbers of N-fold covers over any coefficient characteristic, and
torsion growth rates given by Mahler measures.  The package computes all
three exactly, builds the complexes from group presentations via Fox
calculus and from line arrangements, and cross-checks every closed form
against brute-force finite-cover homology.
"""

from .laurent import (
    BothZero,
    FieldMismatch,
    LaurentPolyK,
    LaurentPolyZ,
    MahlerMeasure,
    ToleranceNotReached,
    ZeroPolynomial,
    canonical_rep,
    cyclotomic_poly,
    euler_phi,
    gcd_over_field,
    is_cyclotomic_type,
    is_unit,
    laurent_from_json,
    laurent_gcd_z,
    laurent_over_field,
    laurent_to_json,
    mahler_measure,
    reduce_mod_p,
    strip_unit_roots_at_one,
)
from .fields import (
    FieldElem,
    FieldSpec,
    OrderUnavailable,
    coprime_part,
    field_elem_from_json,
    make_splitting_field,
    root_of_unity,
)
from .exactlin import (
    IllegalOp,
    IntMatrix,
    LaurentMatrixZ,
    SnfResult,
    cyclic_substitute,
    det_laurent,
    elementary_ops_normalize,
    minor_gcd_laurent,
    rank_field,
    rank_int_mod_p,
    rank_int_rational,
    rank_over_fraction_field,
    snf_int,
    torsion_from_snf,
)
from .covers import (
    CoverHomology,
    DegreeHomology,
    DegreeOutOfRange,
    EquivariantComplex,
    FieldTooSmall,
    GenericDim,
    InternalCheckError,
    LimitScan,
    MultiplicityTooSmall,
    ParallelConnection,
    PredictedInvariants,
    TorsionWitness,
    alexander_poly,
    alpha,
    cover_homology,
    generic_local_system_dim,
    limit_scan,
    multiplication_complex,
    p_torsion_witness,
    parallel_connection_check,
    predicted_invariants,
)
from .fox import (
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
    word_inverse,
    word_mul,
)
from .arrangements import (
    DELETED_B3_NU,
    AomotoComplexZ,
    AssumptionCertificate,
    BetaTau,
    DegenerateInput,
    IntersectionData,
    IntersectionPoint,
    InvalidInput,
    LineArrangement,
    Multinet,
    MultiplicityVector,
    NotAThreeNet,
    NotEpimorphism,
    aomoto_complex,
    beta_tau,
    check_assumption_and_certificate,
    deleted_b3_arrangement,
    deleted_monomial_arrangement,
    deleted_monomial_nu,
    intersection_points,
    lift_multiplicity,
    pencil_arrangement,
    pencil_complex,
    verify_multinet,
)

__version__ = "0.1.0"
