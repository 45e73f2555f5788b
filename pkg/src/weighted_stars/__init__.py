"""Exact classification and enumeration of weighted star matrices."""

from weighted_stars.enumerate import EnumQuery, EnumResult, count_affine, denominator_bounds, enumerate_affine
from weighted_stars.exact import (ExactMatrix, Inertia, a_r_inverse_last, bareiss_determinant,
                                  char_poly, inertia_symmetric)
from weighted_stars.report import emit_dot, render_table, verify_paper_tables
from weighted_stars.star import (AffineSolution, CoxeterLabels, MatrixClass, StarShape,
                                 WeightedGraph, build_star_matrix, build_weighted_matrix, classify,
                                 classify_general, coxeter_labels, coxeter_number,
                                 determinant_closed, dimension, entry_sum, schur_scalar,
                                 tau_decompose, tau_product, trace, verify_kernel)

__version__ = "0.1.0"
