"""Torus-bundle automorphisms, group presentations and their lifts."""

from .automorphism import (EUCLIDEAN, HALFLINE, SPHERE2, BaseAction, BaseFactor, BaseManifold,
                           BundleAutomorphism)
from .spec import GroupSpec, Relation, evaluate_word, invert_word, parse_group_spec, parse_token
from .relations import (RelationResult, SplitResult, leaf_conjugate, relation_residual, splitting_obstruction,
                        verify_all, verify_relation)
from .extension import Ratio, SplitExtension, exact_sqrt, rho, rho_linear, rho_word, split_extension, word_linear_part
from .fixed_points import (AffineFixedPoint, FiberFixedPointResult, affine_fixed_point_analysis,
                           fiber_fixed_point_free)
from .sections import (ConjugationResult, ExprAutomorphism, conjugate_by_section,
                       constant_translation_obstruction)


def compose(f: BundleAutomorphism, g: BundleAutomorphism) -> BundleAutomorphism:
    """f ∘ g."""
    return f.compose(g)


def invert(f: BundleAutomorphism) -> BundleAutomorphism:
    return f.inverse()


__all__ = [
    "EUCLIDEAN", "HALFLINE", "SPHERE2", "BaseAction", "BaseFactor", "BaseManifold", "BundleAutomorphism",
    "GroupSpec", "Relation", "evaluate_word", "invert_word", "parse_group_spec", "parse_token",
    "RelationResult", "SplitResult", "leaf_conjugate", "relation_residual", "splitting_obstruction",
    "verify_all", "verify_relation",
    "Ratio", "SplitExtension", "exact_sqrt", "rho", "rho_linear", "rho_word", "split_extension", "word_linear_part",
    "AffineFixedPoint", "FiberFixedPointResult", "affine_fixed_point_analysis", "fiber_fixed_point_free",
    "ConjugationResult", "ExprAutomorphism", "conjugate_by_section", "constant_translation_obstruction",
    "compose", "invert",
]
