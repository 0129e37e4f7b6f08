"""Symmetric rank-distance code families over finite fields.

Construction of the S and T families of maximum additive codes of symmetric
bilinear forms, exact minimum-rank verification by (possibly sampled)
enumeration, Delsarte duals, and equivalence decision between family members.
"""

__version__ = "0.1.0"

from .codes import CodeBasis, CodeSpec, build_S, build_T, codeword, enumerate_codewords, member
from .dickson import DicksonMatrix, MINOR_FORMULAS, dickson_of, matrix_det, matrix_rank, minor_closed_form, submatrix
from .equiv import CodeTransform, EquivWitness, apply_transform, check_condition, codes_equal, derive_eta2, s_family_distinguisher
from .gf import FieldCtx, FieldElement, field_create, is_in_subfield, is_square, subfield_basis, trace_q
from .linpoly import LinPoly, linpoly, monomial, rank_cross_s
from .symforms import SelfAdjointPoly, delsarte_dual, gram_matrix, inner_product, restrict_to_hyperplane, w_basis
from .verify import VerifyReport, bound_size, min_rank, rank_distribution, verify_maximum

__all__ = [
    "CodeBasis", "CodeSpec", "CodeTransform", "DicksonMatrix", "EquivWitness",
    "FieldCtx", "FieldElement", "LinPoly", "MINOR_FORMULAS", "SelfAdjointPoly",
    "VerifyReport", "apply_transform", "bound_size", "build_S", "build_T",
    "check_condition", "codes_equal", "codeword", "delsarte_dual",
    "derive_eta2", "dickson_of", "enumerate_codewords", "field_create",
    "gram_matrix", "inner_product", "is_in_subfield", "is_square", "linpoly",
    "matrix_det", "matrix_rank", "member", "min_rank", "minor_closed_form",
    "monomial", "rank_cross_s", "rank_distribution", "restrict_to_hyperplane",
    "s_family_distinguisher", "subfield_basis", "submatrix", "trace_q",
    "verify_maximum", "w_basis",
]
