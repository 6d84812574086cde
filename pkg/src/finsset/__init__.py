"""Finite combinatorial constructions on truncated simplicial sets."""

from .errors import BudgetError, InputError, TruncationError
from .ops import (
    SimplicialOperator,
    compose,
    degeneracy_op,
    enumerate_injections,
    enumerate_operators,
    enumerate_surjections,
    ez_factor,
    face_op,
    identity_op,
    interval_op,
    vertex_op,
)

from .computad import (
    Bead,
    CanonicalCocone,
    Computad,
    ComputadVerdict,
    Factor,
    HcNerveResult,
    TruncSimpCat,
    atomic_factorization,
    canonical_cocone,
    discrete_simpcat,
    hc_map,
    hc_nerve,
    hc_realization,
    hc_simplex,
    hc_unit,
    is_computad,
    recompose,
    word_union_chain,
)
from .weights import (
    COLLAGE_TOP,
    Diagram,
    OplaxPushoutReport,
    SimpFunctor,
    Weight,
    WeightMap,
    WeightedColimit,
    arrow_weight,
    collage,
    collage_inclusion,
    colimit_induced_map,
    colimit_universal_check,
    enumerate_weight_maps,
    free_diagram,
    identity_functor,
    is_flexible,
    lan_weight,
    oplax_weight,
    realization_functor,
    representable_weight,
    restrict_diagram,
    simpcat_isomorphism,
    terminal_weight,
    verify_oplax_weight_pushout,
    weight_coproduct,
    weight_cylinder,
    weight_isomorphism,
    weight_product,
    weighted_colimit,
    weights_equal,
    wgt,
)
from .fib import (
    ArrowSpace,
    ArrowVerdict,
    CommaResult,
    ComprehensionData,
    CylinderSetup,
    FiberwiseReport,
    FibrationCertificate,
    FunctorVerdict,
    GrothendieckResult,
    arrow_space,
    comma,
    comprehension,
    cylinder_union,
    fiberwise_equivalence_check,
    grothendieck,
    is_cartesian_arrow,
    is_cartesian_fibration,
    is_cartesian_functor,
    is_cocartesian_arrow,
    is_cocartesian_fibration,
    pointwise_cocartesian_cylinder_lift,
    strict_fiber,
)

__all__ = [
    "BudgetError",
    "InputError",
    "TruncationError",
    "SimplicialOperator",
    "compose",
    "degeneracy_op",
    "enumerate_injections",
    "enumerate_operators",
    "enumerate_surjections",
    "ez_factor",
    "face_op",
    "identity_op",
    "interval_op",
    "vertex_op",
    "Bead",
    "CanonicalCocone",
    "Computad",
    "ComputadVerdict",
    "Factor",
    "HcNerveResult",
    "TruncSimpCat",
    "atomic_factorization",
    "canonical_cocone",
    "discrete_simpcat",
    "hc_map",
    "hc_nerve",
    "hc_realization",
    "hc_simplex",
    "hc_unit",
    "is_computad",
    "recompose",
    "word_union_chain",
    "COLLAGE_TOP",
    "Diagram",
    "OplaxPushoutReport",
    "SimpFunctor",
    "Weight",
    "WeightMap",
    "WeightedColimit",
    "arrow_weight",
    "collage",
    "collage_inclusion",
    "colimit_induced_map",
    "colimit_universal_check",
    "enumerate_weight_maps",
    "free_diagram",
    "identity_functor",
    "is_flexible",
    "lan_weight",
    "oplax_weight",
    "realization_functor",
    "representable_weight",
    "restrict_diagram",
    "simpcat_isomorphism",
    "terminal_weight",
    "verify_oplax_weight_pushout",
    "weight_coproduct",
    "weight_cylinder",
    "weight_isomorphism",
    "weight_product",
    "weighted_colimit",
    "weights_equal",
    "wgt",
    "ArrowSpace",
    "ArrowVerdict",
    "CommaResult",
    "ComprehensionData",
    "CylinderSetup",
    "FiberwiseReport",
    "FibrationCertificate",
    "FunctorVerdict",
    "GrothendieckResult",
    "arrow_space",
    "comma",
    "comprehension",
    "cylinder_union",
    "fiberwise_equivalence_check",
    "grothendieck",
    "is_cartesian_arrow",
    "is_cartesian_fibration",
    "is_cartesian_functor",
    "is_cocartesian_arrow",
    "is_cocartesian_fibration",
    "pointwise_cocartesian_cylinder_lift",
    "strict_fiber",
]

__version__ = "0.1.0"
