"""Mixed fractal cubes built from a Cross and a Frame digit set (base 5).

Iterates are exact voxel sets; the modules cover connectivity, distances,
box counts and the Cantor coding of components.
"""
from .digitset import DigitSet, make_cross, make_frame, union_disjoint
from .voxel import BudgetExceeded, VoxelSet, WordSpec, full_iterate, iterate
from .topology import ComponentLabeling, complement_components, components, dendrite_conditions, opposite_faces_congruent
from .metric import DistanceReport, Measurer, hausdorff_distance, min_distance, min_distance_sq, verify_sandwich
from .dimension import box_count, density_series, dimension_formula, estimate_dimension, summarize, theorem4_value
from .hyperspace import cantor_gap_bounds, holder_check, phi

__version__ = "0.1.0"

__all__ = [
    "DigitSet",
    "make_cross",
    "make_frame",
    "union_disjoint",
    "BudgetExceeded",
    "VoxelSet",
    "WordSpec",
    "iterate",
    "full_iterate",
    "ComponentLabeling",
    "components",
    "complement_components",
    "opposite_faces_congruent",
    "dendrite_conditions",
    "DistanceReport",
    "Measurer",
    "hausdorff_distance",
    "min_distance",
    "min_distance_sq",
    "verify_sandwich",
    "box_count",
    "density_series",
    "dimension_formula",
    "estimate_dimension",
    "summarize",
    "theorem4_value",
    "cantor_gap_bounds",
    "holder_check",
    "phi",
]
