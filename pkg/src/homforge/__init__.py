"""Product homomorphism problem toolkit.

Finite relational structures, a deterministic homomorphism solver, the
exponential-tiling encoding into PHP, reductions down to a single binary
relation, and a CQ-definability decider with certificates.
"""

from .core import (
    Homomorphism,
    PhpInstance,
    PointedStructure,
    Signature,
    Structure,
    binarize_unary,
    digraph,
    disjoint_union,
    load_structure,
    parse,
    product,
    projection,
    save_structure,
    serialize,
)
from .cq import (
    ConjunctiveQuery,
    canonical_query,
    canonical_structure,
    evaluate,
    path_fan_query,
)
from .cqdef import (
    CqDefReduction,
    Definable,
    NotDefinable,
    audit_apex_paths,
    decide_cq_definability,
    reduce_php_to_nondefinability,
)
from .homsolver import (
    PhpVerdict,
    SolverConfig,
    decide_php,
    enumerate_homomorphisms,
    find_homomorphism,
    image_set,
)
from .normalform import (
    digraph_transform,
    gadget_digraph,
    lift_hom_digraph,
    lift_hom_star,
    merge_relations,
    pad_first_coordinate,
    restrict_hom_digraph,
    single_relation_transform,
    star_transform,
)
from .tiling import (
    TileSystem,
    TilingInstance,
    bits,
    brute_force_tiling,
    check_tiling,
    decode_hom_to_tiling,
    encode_tiling_php,
)

__version__ = "0.1.0"
