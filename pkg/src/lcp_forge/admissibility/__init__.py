"""Admissibility of linear and group data."""

from .splitting import Splitting, certified_sign, identity_splitting, is_positive_definite, leading_minors
from .similarity import Ratio, exact_sqrt, similarity_ratio_squared
from .linear import (Block, BlockDecomposition, ModulusClass, RationalHull, RootRef, SemisimpleResult,
                     SimilarityCertificate, ThetaResult, block_decompose, commutant_check, density_check,
                     flat_subspace, invariant_form_2x2, is_semisimple, modulus_classes, product_polynomial,
                     rational_hull, similarity_certificate, theta_compact_check)
from .check import AdmissibilityReport, HypothesisResult, check_admissible

__all__ = [
    "AdmissibilityReport", "HypothesisResult", "check_admissible",
    "Splitting", "certified_sign", "identity_splitting", "is_positive_definite", "leading_minors",
    "Ratio", "exact_sqrt", "similarity_ratio_squared",
    "Block", "BlockDecomposition", "ModulusClass", "RationalHull", "RootRef", "SemisimpleResult",
    "SimilarityCertificate", "ThetaResult", "block_decompose", "commutant_check", "density_check",
    "flat_subspace", "invariant_form_2x2", "is_semisimple", "modulus_classes", "product_polynomial",
    "rational_hull", "similarity_certificate", "theta_compact_check",
]
