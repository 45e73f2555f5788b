import itertools
import random
from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weighted_stars.exact import bareiss_determinant, type_a_cartan
from weighted_stars.star import (AffineSolution, CoxeterLabels, MatrixClass, MatrixTooLarge,
                                 NotAffineError, StarShape, WeightedGraph, build_star_matrix,
                                 build_weighted_matrix, classify, classify_general,
                                 coxeter_labels, coxeter_number, determinant_closed, dimension,
                                 entry_sum, label_vector, schur_scalar, star_graph,
                                 tau_decompose, tau_product, trace, verify_kernel)

from oracles import brute_force_tau_split, cofactor_det, greedy_unit_fractions, star_rows

shapes = st.builds(
    StarShape,
    st.integers(1, 6),
    st.lists(st.integers(1, 9), min_size=2, max_size=5),
)


def test_shape_canonical_form():
    s = StarShape(2, [5, 1, 2])
    assert s.arms == (1, 2, 5) and s.m == 3 and s.p == 1
    assert s == StarShape(2, (2, 5, 1))
    assert s.denominators == (2, 3, 6)


@pytest.mark.parametrize("k, arms", [(0, [1, 1]), (1, [1]), (2, [0, 1])])
def test_shape_rejects(k, arms):
    with pytest.raises(ValueError):
        StarShape(k, arms)


def test_build_star_matrix_examples():
    assert build_star_matrix(StarShape(1, [1, 1])).rows() == [[2, 0, -1], [0, 2, -1], [-1, -1, 1]]
    assert build_star_matrix(StarShape(2, [1, 2, 5])).order == 9


def test_two_armed_weight_two_star_is_a3():
    m = build_star_matrix(StarShape(2, [1, 1]))
    # path arm1 - center - arm2
    assert m.permuted([0, 2, 1]) == type_a_cartan(3)


@settings(max_examples=50)
@given(shapes)
def test_build_star_matches_hand_construction(shape):
    assert build_star_matrix(shape).rows() == star_rows(shape.k, shape.arms)
    assert build_weighted_matrix(star_graph(shape)) == build_star_matrix(shape)


def test_threshold():
    shape = StarShape(1, [1, 2, 6, 42, 1806, 3263441])
    with pytest.raises(MatrixTooLarge, match="D = 3265299"):
        build_star_matrix(shape)
    with pytest.raises(MatrixTooLarge):
        build_star_matrix(StarShape(2, [2, 2, 2]), threshold=6)
    assert build_star_matrix(StarShape(2, [2, 2, 2]), threshold=7).order == 7


def test_weighted_matrix_examples():
    assert build_weighted_matrix(WeightedGraph([2], [])).rows() == [[2]]
    c4 = WeightedGraph([2] * 4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    assert build_weighted_matrix(c4).rows() == [
        [2, -1, 0, -1], [-1, 2, -1, 0], [0, -1, 2, -1], [-1, 0, -1, 2]]


@pytest.mark.parametrize("edges", [[(0, 0)], [(0, 1), (1, 0)], [(0, 5)]])
def test_weighted_graph_rejects_non_simple(edges):
    with pytest.raises(ValueError):
        WeightedGraph([2, 2], edges)


def test_dimension_trace_entry_sum():
    assert dimension(StarShape(2, [1, 2, 5])) == 9
    assert dimension(StarShape(3, [1, 2, 6, 41])) == 51
    assert entry_sum(StarShape(3, [1, 1])) == 3
    assert trace(StarShape(3, [1, 1])) == 7


@settings(max_examples=60)
@given(shapes)
def test_materialized_sums(shape):
    m = build_star_matrix(shape)
    assert m.entry_sum() == entry_sum(shape) == shape.k
    assert m.trace() == trace(shape)
    assert m.order == dimension(shape)


def test_schur_scalar_examples():
    assert schur_scalar(StarShape(2, [2, 2, 2])) == 0
    assert schur_scalar(StarShape(2, [1, 1])) == 1
    assert schur_scalar(StarShape(1, [2, 2, 2])) == Fraction(1) - 3 + 3 * Fraction(1, 3) == -1


def test_determinant_closed_examples():
    assert determinant_closed(StarShape(2, [2, 2, 2])) == 0
    assert determinant_closed(StarShape(3, [1, 1])) == 8
    assert determinant_closed(StarShape(2, [1, 1])) == 4


@settings(max_examples=40)
@given(st.integers(1, 4), st.lists(st.integers(1, 3), min_size=2, max_size=3))
def test_determinant_closed_vs_cofactor(k, arms):
    assert determinant_closed(StarShape(k, arms)) == cofactor_det(star_rows(k, sorted(arms)))


def test_classify_examples():
    assert classify(StarShape(2, [2, 2, 2])) is MatrixClass.AFFINE
    assert classify(StarShape(3, [2, 2, 2])) is MatrixClass.FINITE
    assert classify(StarShape(1, [2, 2, 2])) is MatrixClass.INDEFINITE


@given(st.lists(st.integers(1, 50), min_size=2, max_size=6), st.integers(0, 4))
def test_k_at_least_m_is_finite(arms, extra):
    assert classify(StarShape(len(arms) + extra, arms)) is MatrixClass.FINITE


def test_coxeter_labels_examples():
    labels = coxeter_labels(StarShape(2, [1, 2, 5]))
    assert labels.center == 6
    assert [list(a) for a in labels.arm_labels] == [[3], [2, 4], [1, 2, 3, 4, 5]]
    d4 = coxeter_labels(StarShape(2, [1, 1, 1, 1]))
    assert d4.center == 2 and [list(a) for a in d4.arm_labels] == [[1]] * 4
    a = coxeter_labels(StarShape(1, [1, 1]))
    assert a.center == 2 and [list(x) for x in a.arm_labels] == [[1], [1]]


def test_coxeter_labels_rejects_non_affine():
    with pytest.raises(NotAffineError):
        coxeter_labels(StarShape(3, [2, 2, 2]))
    with pytest.raises(NotAffineError):
        coxeter_labels(StarShape(1, [2, 2, 2]))
    with pytest.raises(NotAffineError, match="p = m - k"):
        coxeter_number(StarShape(4, [1, 1]))


def test_coxeter_number_examples():
    assert coxeter_number(StarShape(2, [1, 2, 5])) == 30
    assert coxeter_number(StarShape(3, [1, 2, 6, 41])) == 1092
    assert coxeter_number(StarShape(1, [1, 1])) == 4


def test_verify_kernel_examples():
    e6 = StarShape(2, [2, 2, 2])
    assert verify_kernel(e6, coxeter_labels(e6))
    a = StarShape(1, [1, 1])
    assert not verify_kernel(a, CoxeterLabels(3, ((1,), (1,))))
    assert verify_kernel(a, CoxeterLabels(2, ((1,), (1,))))
    # a non-range sequence that is not an arithmetic progression
    assert not verify_kernel(e6, CoxeterLabels(3, ((1, 2), (1, 2), (2, 2))))


def test_verify_kernel_shape_mismatch():
    e6 = StarShape(2, [2, 2, 2])
    with pytest.raises(ValueError):
        verify_kernel(e6, CoxeterLabels(3, ((1, 2), (1, 2))))
    with pytest.raises(ValueError):
        verify_kernel(e6, CoxeterLabels(3, ((1, 2), (1, 2), (1,))))


def test_verify_kernel_greedy_six_arms():
    denoms = greedy_unit_fractions(1, 6)
    assert denoms == [2, 3, 7, 43, 1807, 3263442]
    assert sum(Fraction(1, n) for n in denoms) == 1
    shape = StarShape.from_denominators(denoms, 1)
    assert shape.k == 5
    assert shape.arms == (1, 2, 6, 42, 1806, 3263441)
    labels = coxeter_labels(shape)
    assert verify_kernel(shape, labels)
    assert labels.gcd() == 1
    sol = AffineSolution(shape)
    assert sol.D == 3265299 and sol.h * 2 == sol.s * (sol.D + 1)


def test_verify_kernel_tuple_labels_agree_with_ranges():
    shape = StarShape(3, [1, 3, 4, 19])
    labels = coxeter_labels(shape)
    as_tuples = CoxeterLabels(labels.center, tuple(tuple(a) for a in labels.arm_labels))
    assert verify_kernel(shape, as_tuples)
    assert as_tuples.gcd() == labels.gcd() == 1
    assert as_tuples.total() == labels.total() == 290


def test_kernel_matvec_small():
    for shape in [StarShape(2, [2, 2, 2]), StarShape(2, [1, 3, 3]), StarShape(3, [1, 2, 9, 14])]:
        c = label_vector(shape, coxeter_labels(shape))
        assert build_star_matrix(shape).matvec(c) == [0] * dimension(shape)


def test_affine_solution_fields():
    sol = AffineSolution(StarShape(2, [1, 2, 5]))
    assert (sol.s, sol.x, sol.D, sol.h, sol.p) == (6, (3, 2, 1), 9, 30, 1)
    assert str(sol) == "B^(1)(1,2,5)"
    assert sum(sol.x) == sol.p * sol.s


def test_tau_product_examples():
    a = AffineSolution.from_arms([1, 1], 1)
    d4 = tau_product(a, a)
    assert d4 == AffineSolution.from_arms([1, 1, 1, 1], 2)
    assert d4.shape.k == 2
    assert tau_product(a, AffineSolution.from_arms([2, 2, 2], 1)).arms == (1, 1, 2, 2, 2)
    out = tau_product(a, AffineSolution.from_arms([1, 2, 5], 1))
    assert out.arms == (1, 1, 1, 2, 5) and out.p == 2 and out.shape.k == 3


def test_tau_decompose_examples():
    assert tau_decompose(AffineSolution.from_arms([1, 2, 5], 1)) is None
    left, right = tau_decompose(AffineSolution.from_arms([1, 1, 1, 1], 2))
    assert left.arms == right.arms == (1, 1)
    left, right = tau_decompose(AffineSolution.from_arms([1, 1, 1, 2, 5], 2))
    assert (left.arms, right.arms) == ((1, 1), (1, 2, 5))
    assert tau_product(left, right).arms == (1, 1, 1, 2, 5)


def test_classify_general_examples():
    e6 = star_graph(StarShape(2, [2, 2, 2]))
    assert classify_general(e6).kind is MatrixClass.AFFINE
    assert classify_general(e6).corank == 1
    a3 = WeightedGraph([2, 2, 2], [(0, 1), (1, 2)])
    assert classify_general(a3).kind is MatrixClass.FINITE
    # B(1;1,1) with one arm vertex removed: weight-1 center with one neighbour
    g = WeightedGraph([2, 1], [(0, 1)])
    assert classify_general(g).kind is MatrixClass.FINITE
    neg = classify_general(star_graph(StarShape(1, [2, 2, 2])))
    assert neg.kind is MatrixClass.INDEFINITE and neg.n_neg == 1


def test_classify_general_cycle_and_disconnected():
    c4 = WeightedGraph([2] * 4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    result = classify_general(c4)
    assert result.kind is MatrixClass.AFFINE and result.inertia == (3, 1, 0)
    # weighted path 1 - 1 - 4 has determinant -1
    path = classify_general(WeightedGraph([1, 1, 4], [(0, 1), (1, 2)]))
    assert path.kind is MatrixClass.INDEFINITE and path.n_neg == 1
    with pytest.raises(ValueError):
        classify_general(WeightedGraph([2, 2], []))


@settings(max_examples=60)
@given(st.builds(StarShape, st.integers(1, 5), st.lists(st.integers(1, 5), min_size=2, max_size=4)))
def test_classify_general_agrees_on_stars(shape):
    assert classify_general(star_graph(shape)).kind is classify(shape)


@pytest.mark.parametrize("arms", [(1, 1, 2, 2, 2), (2, 2, 2, 2, 2, 2), (1, 1, 1, 2, 6, 41)])
def test_tau_decompose_agrees_with_index_subsets(arms):
    sol = AffineSolution.from_arms(list(arms), int(sum(Fraction(1, r + 1) for r in arms)))
    assert (tau_decompose(sol) is not None) == brute_force_tau_split(list(arms))


def test_determinant_random_sample():
    rnd = random.Random(7)
    for _ in range(50):
        shape = StarShape(rnd.randint(1, 6), [rnd.randint(1, 9) for _ in range(rnd.randint(2, 5))])
        assert determinant_closed(shape) == bareiss_determinant(build_star_matrix(shape))


def test_primitivity_small_grid():
    for arms in itertools.combinations_with_replacement(range(1, 12), 3):
        shape = StarShape(2, arms)
        if classify(shape) is MatrixClass.AFFINE:
            labels = coxeter_labels(shape)
            assert labels.gcd() == gcd(*label_vector(shape, labels)) == 1
