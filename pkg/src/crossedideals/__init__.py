"""Crossed products of inverse semigroup actions on finite spaces, their
groupoid models, and exact ideal decomposition certificates."""

from .exactlin import (
    GF,
    QQ,
    Field,
    FiniteAlgebra,
    GuardError,
    PrimeField,
    QuotientMap,
    RationalField,
    Representation,
    StructureError,
    Subspace,
    enumerate_ideals,
    enumerate_subspaces,
    ideal_generate,
    intersect_all,
    is_ideal,
    left_regular_mod,
    nullspace,
    parse_field,
    rref,
    subspace_intersect,
    subspace_sum,
)
from .validation import ValidationReport
from .semigroups import InverseSemigroup
from .dynsys import AmpleSystem, Germ, IsotropyGroup, PartialBijection
from .bundles import (
    AlgebraAction,
    CovariantRep,
    CrossSectionalAlgebra,
    CrossedProduct,
    FellBundle,
    NotAFellBundle,
    UnitizationIso,
    crossed_product,
    disintegrate,
    extend_representation,
    function_action,
    function_algebra,
    integrate,
    semidirect_bundle,
    transport,
    unitization_isomorphism,
)
from .fixtures import FIXTURES
from .induction import (
    Discretization,
    InductionContext,
    IntersectionCertificate,
    PointCertificate,
    decompose_ideal,
    discretize,
    induction_context,
    induction_equivalence,
    isotropy_restriction,
)
from .groupoids import (
    CrossedProductModel,
    FiniteGroupoid,
    GermGroupoidModel,
    SteinbergIso,
    bisection_semigroup,
    bisections,
    germ_groupoid,
    groupoid_restriction,
    intrinsic_action,
    steinberg_algebra,
    steinberg_as_crossed_product,
    steinberg_isomorphism,
)
from .formats import (
    ParseError,
    parse_generator,
    parse_groupoid,
    parse_system,
    serialize_groupoid,
    serialize_system,
)

__version__ = "1.0.0"
