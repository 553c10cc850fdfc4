"""Exact arithmetic for the rank-two Neron-Severi lattices of elliptic
K3 surfaces: discriminant forms, Lagrangian subgroups and their
involution, Jacobian calculus, derived elliptic structures, and
Fourier-Mukai partner counts.

Everything is integer or Fraction arithmetic; nothing is floating point.
The two enumeration hot spots (isotropic element scans and isometry
scans) dispatch to a compiled extension when it was built, with a pure
Python fallback that computes identical results.

Sign convention: computations happen on the Neron-Severi discriminant
form; the transcendental one is the same group with q negated, which
changes none of the counts.  See the discforms module docstring.
"""

from .budget import DEFAULT_ELEMENT_CAP, DEFAULT_ISOMETRY_CAP, element_cap, isometry_cap
from .discforms import (
    DFElement,
    DFIsometry,
    FiniteQuadForm,
    LatticeForm,
    NSForm,
    PrimaryPart,
    as_isometry,
    b_eval,
    element_order,
    from_lattice,
    identity_isometry,
    is_isotropic,
    isometry_between,
    isometry_group,
    neg_identity,
    ns_form,
    primary_decomposition,
    q_eval,
    structure_invariants,
)
from .errors import (
    CapacityError,
    InvalidElementError,
    InvalidIsometryError,
    InvalidLatticeError,
    InvalidMukaiVectorError,
    InvalidParameterError,
    InvalidSubgroupError,
    K3FMError,
    NotApplicableError,
    OutOfScopeError,
)
from .lagrangians import (
    GSpec,
    LagrangianElement,
    LagrangianSubgroup,
    canonical_pair,
    count_lagrangians,
    double_quotient,
    enumerate_lagrangian_elements,
    enumerate_lagrangian_subgroups,
    g_orbits,
    involution,
    subgroup_generated_by,
    units_action,
)
from .lattices import (
    IntMatrix,
    Lattice,
    NSLattice,
    RationalVector,
    dual_generators,
    genus_representatives,
    is_isometric_rank2,
    isotropic_rays,
    ns_gram,
    overlattice,
    rank2_isometries,
    smith_normal_form,
)
from .surfaces import (
    HTClass,
    MukaiVector,
    SurfaceModel,
    allowed_G_orders,
    aut_orders,
    caldararu_class,
    coprime_jacobian_classes,
    de_counts,
    fibration_count,
    fibrations_isomorphic,
    fm_count,
    ht_classify,
    jac0_isomorphic,
    jacobian_class_canonical,
    jacobian_compose,
    jacobian_index,
    jspecial_torsor_exists,
    mukai_divisibility,
    o_lambda_image,
    o_plus_image,
    second_fibration_jacobian,
)

__version__ = "1.0.0"

__all__ = [
    "DEFAULT_ELEMENT_CAP",
    "DEFAULT_ISOMETRY_CAP",
    "CapacityError",
    "DFElement",
    "DFIsometry",
    "FiniteQuadForm",
    "GSpec",
    "HTClass",
    "IntMatrix",
    "InvalidElementError",
    "InvalidIsometryError",
    "InvalidLatticeError",
    "InvalidMukaiVectorError",
    "InvalidParameterError",
    "InvalidSubgroupError",
    "K3FMError",
    "LagrangianElement",
    "LagrangianSubgroup",
    "Lattice",
    "LatticeForm",
    "MukaiVector",
    "NSForm",
    "NSLattice",
    "NotApplicableError",
    "OutOfScopeError",
    "PrimaryPart",
    "RationalVector",
    "SurfaceModel",
    "allowed_G_orders",
    "as_isometry",
    "aut_orders",
    "b_eval",
    "caldararu_class",
    "canonical_pair",
    "coprime_jacobian_classes",
    "count_lagrangians",
    "de_counts",
    "double_quotient",
    "dual_generators",
    "element_cap",
    "element_order",
    "enumerate_lagrangian_elements",
    "enumerate_lagrangian_subgroups",
    "fibration_count",
    "fibrations_isomorphic",
    "fm_count",
    "from_lattice",
    "g_orbits",
    "genus_representatives",
    "ht_classify",
    "identity_isometry",
    "involution",
    "is_isometric_rank2",
    "is_isotropic",
    "isometry_between",
    "isometry_cap",
    "isometry_group",
    "isotropic_rays",
    "jac0_isomorphic",
    "jacobian_class_canonical",
    "jacobian_compose",
    "jacobian_index",
    "jspecial_torsor_exists",
    "mukai_divisibility",
    "neg_identity",
    "ns_form",
    "ns_gram",
    "o_lambda_image",
    "o_plus_image",
    "overlattice",
    "primary_decomposition",
    "q_eval",
    "rank2_isometries",
    "second_fibration_jacobian",
    "smith_normal_form",
    "structure_invariants",
    "subgroup_generated_by",
    "units_action",
]
