"""Finite truncated simplicial sets and their basic constructions."""

from .core import (
    Enc,
    FinSSet,
    Levelwise,
    LevelwiseResult,
    SSetMap,
    ValidationReport,
    build_sset,
    compose_maps,
    constant_map,
    empty_sset,
    identity_map,
    maps_equal,
    nondeg,
    op_operator,
    opposite,
    opposite_map,
    readable_depth,
    sset_isomorphism,
    truncate,
)
from .shapes import (
    as_map,
    boundary,
    horn,
    inclusion,
    make_shape,
    operator_as_map,
    point,
    simplex,
    simplex_vertices,
    spine,
    subcomplex,
    vertex_name,
)
from .limits import (
    QuotientResult,
    SpanResult,
    coequalizer,
    coproduct,
    product,
    product_map,
    pullback,
    pushout,
    quotient,
    terminal_map,
)
from .spaces import (
    MapSpaceResult,
    cone,
    join,
    join_inclusions,
    join_map,
    join_ops,
    map_as_vertex,
    mapping_space,
    slice_over,
    slice_projection,
    vertex_as_map,
)
from .cat import (
    FinCat,
    FinFunctor,
    HoResult,
    cat_isomorphism,
    discrete_category,
    essentially_surjective,
    fully_faithful,
    homotopy_category,
    is_equivalence,
    nerve,
    nerve_functor,
    poset_category,
    quasi_certificate,
    walking_isomorphism,
)
from .lifting import (
    LiftingCertificate,
    enumerate_maps,
    first_map,
    lifting_certify,
    solve_lifting,
)
