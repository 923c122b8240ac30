"""Branched circle packings of the unit disc and discrete Blaschke products.

The layers, bottom up: `triangulation` (combinatorial discs and branch
structures), `geometry` (tangency angles, Mobius transforms, disc-model
conversions), `solver` (radius iteration, layout, normalization), `maps`
(cp-maps, distortion, valence, extension, classical Blaschke products), and
`experiments`/`cli` (the harness).
"""

from .errors import BlpackError
from .geometry import (
    EuclideanCircle,
    MobiusTransform,
    apply_mobius_to_circle,
    disc_automorphism,
    euclidean_angle,
    hyperbolic_angle,
    mobius_from_three_points,
)
from .maps import (
    ClassicalBlaschke,
    CpMap,
    blaschke_critical_points,
    classical_blaschke_eval,
    cp_map_eval,
    equivalent_mod_mobius,
    extension_eval,
    local_distortion,
    per_face_dilatation,
    ratio_map,
    valence,
)
from .solver import (
    Packing,
    RadiusLabel,
    angle_sums,
    gauss_bonnet_residual,
    layout,
    normalize,
    observed_branch,
    pack,
    solve_radii,
)
from .triangulation import (
    EMPTY_BRANCH,
    BranchStructure,
    Triangulation,
    build_triangulation,
    hex_ball,
    hex_refine,
    validate_branch_structure,
)

__version__ = "0.1.0"

__all__ = [
    "BlpackError",
    "BranchStructure",
    "ClassicalBlaschke",
    "CpMap",
    "EMPTY_BRANCH",
    "EuclideanCircle",
    "MobiusTransform",
    "Packing",
    "RadiusLabel",
    "Triangulation",
    "angle_sums",
    "apply_mobius_to_circle",
    "blaschke_critical_points",
    "build_triangulation",
    "classical_blaschke_eval",
    "cp_map_eval",
    "disc_automorphism",
    "equivalent_mod_mobius",
    "euclidean_angle",
    "extension_eval",
    "gauss_bonnet_residual",
    "hex_ball",
    "hex_refine",
    "hyperbolic_angle",
    "layout",
    "local_distortion",
    "mobius_from_three_points",
    "normalize",
    "observed_branch",
    "pack",
    "per_face_dilatation",
    "ratio_map",
    "solve_radii",
    "valence",
    "validate_branch_structure",
]
