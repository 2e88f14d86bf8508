"""Kernel tests: exact matrices, graded complexes, spectral classification."""

from fractions import Fraction
import random

import pytest
from hypothesis import given, settings, strategies as st

from lefkit import polyroots
from lefkit.errors import PreconditionError, ValidationError
from lefkit.linalgq import (
    COMPLEX_GT1,
    COMPLEX_LT1,
    EQUALS_1,
    MIXED,
    QMatrix,
    REAL_01,
    REAL_GT1,
    REAL_LE0,
    UNIT_CIRCLE,
    GradedComplex,
    classify_spectrum,
    cohomology,
    endo_trace,
    invariant_subspace,
    mapping_cone_shifted,
    restriction_matrix,
)

F = Fraction


def mat(rows):
    return QMatrix.from_rows(rows)


def diag(*entries):
    n = len(entries)
    m = QMatrix.zeros(n, n)
    for i, e in enumerate(entries):
        m[i, i] = F(e)
    return m


# ---------------------------------------------------------------------------
# polynomial kernel
# ---------------------------------------------------------------------------

def test_sturm_counts_simple():
    # (x-2)(x-1/2)(x+3)
    p = polyroots.poly_mul([F(-2), F(1)],
                           polyroots.poly_mul([F(-1, 2), F(1)], [F(3), F(1)]))
    assert polyroots.count_real_roots(p) == 3
    assert polyroots.count_real_roots(p, F(1), "+inf") == 1
    assert polyroots.count_real_roots(p, F(0), F(1)) == 1
    assert polyroots.count_real_roots(p, "-inf", F(0)) == 1
    assert polyroots.count_real_roots(p, F(0), F(1), closed_hi=True) == 1
    assert polyroots.count_real_roots(p, F(2), F(3)) == 0
    assert polyroots.count_real_roots(p, F(2), F(3), closed_lo=True) == 1


def test_sturm_endpoint_roots():
    p = [F(0), F(-1), F(1)]  # x(x-1)
    assert polyroots.count_real_roots(p, F(0), F(1)) == 0
    assert polyroots.count_real_roots(p, F(0), F(1), closed_lo=True) == 1
    assert polyroots.count_real_roots(p, F(0), F(1), closed_lo=True,
                                      closed_hi=True) == 2


def test_schur_cohn_basic():
    assert polyroots.schur_cohn_inside([F(-1, 2), F(1)]) == 1
    assert polyroots.schur_cohn_inside([F(-2), F(1)]) == 0
    # lam^2 + 4 has roots +-2i with modulus 2
    assert polyroots.schur_cohn_inside([F(4), F(0), F(1)]) == 0
    # reciprocal polynomial 4 lam^2 + 1 has both roots inside
    assert polyroots.schur_cohn_inside([F(1), F(0), F(4)]) == 2


def test_schur_cohn_singular_fallback():
    # (x-2)(x-1/2): |a0| == |a2| degenerates, the scaled rerun recovers
    p = polyroots.poly_mul([F(-2), F(1)], [F(-1, 2), F(1)])
    with pytest.raises(PreconditionError):
        polyroots.schur_cohn_inside(p)
    assert polyroots.count_inside_unit_disk(p) == 1


def test_circle_root_count():
    assert polyroots.circle_root_count([F(1), F(0), F(1)]) == 2  # x^2+1
    assert polyroots.circle_root_count([F(4), F(0), F(1)]) == 0
    assert polyroots.circle_root_count([F(-1), F(1)]) == 1  # x - 1
    # Salem-like self-reciprocal with roots 2 and 1/2: none on the circle
    assert polyroots.circle_root_count([F(1), F(-5, 2), F(1)]) == 0
    # (x^2+1)(x-3)
    p = polyroots.poly_mul([F(1), F(0), F(1)], [F(-3), F(1)])
    assert polyroots.circle_root_count(p) == 2


def test_factor_over_q():
    p = polyroots.poly_mul([F(4), F(0), F(1)],
                           polyroots.poly_pow([F(-1, 2), F(1)], 2))
    factors = polyroots.factor_over_q(p)
    assert ([F(-1, 2), F(1)], 2) in factors
    assert ([F(4), F(0), F(1)], 1) in factors


# ---------------------------------------------------------------------------
# QMatrix
# ---------------------------------------------------------------------------

def _random_qmatrix(rng, rows, cols, denom=4):
    return QMatrix.from_rows(
        [[F(rng.randint(-4, 4), rng.randint(1, denom)) for _ in range(cols)]
         for _ in range(rows)])


def _rank_by_rref(m):
    return len(m.rref()[1])


def test_rank_matches_rref_on_random_matrices():
    rng = random.Random(7)
    for _ in range(40):
        rows, cols = rng.randint(0, 6), rng.randint(0, 6)
        m = _random_qmatrix(rng, rows, cols)
        assert m.rank() == _rank_by_rref(m)


def test_solve_and_kernel():
    m = mat([[1, 2], [2, 4]])
    k = m.kernel_basis()
    assert k.cols == 1
    assert all(v == 0 for v in m.mul_vec(k.column(0)))
    rhs = QMatrix.from_columns([[F(1), F(2)]])
    x = m.solve(rhs)
    assert (m @ x).column(0) == [F(1), F(2)]
    with pytest.raises(PreconditionError):
        m.solve(QMatrix.from_columns([[F(1), F(3)]]))


def test_det_and_char_poly():
    m = mat([[0, -4], [1, 0]])
    assert m.det() == F(4)
    assert m.char_poly() == [F(4), F(0), F(1)]
    assert diag(2, F(1, 2)).char_poly() == [F(1), F(-5, 2), F(1)]


# ---------------------------------------------------------------------------
# graded complexes: cohomology and Hopf traces
# ---------------------------------------------------------------------------

def circle_two_cell_complex():
    # 2 vertices a,b and 2 edges e,f with d(vertex dual) entries +-1
    d0 = mat([[-1, 1], [-1, 1]])  # rows e,f; cols a,b
    return GradedComplex({0: 2, 1: 2}, {0: d0})


def test_cohomology_circle_interval_zero():
    circle = circle_two_cell_complex()
    dims, _ = cohomology(circle)
    assert dims == {0: 1, 1: 1}

    interval = GradedComplex({0: 2, 1: 1}, {0: mat([[-1, 1]])})
    dims, _ = cohomology(interval)
    assert dims == {0: 1}

    zero = GradedComplex({}, {})
    dims, _ = cohomology(zero)
    assert dims == {}


def test_dd_zero_rejected():
    bad = GradedComplex({0: 1, 1: 1, 2: 1},
                        {0: mat([[1]]), 1: mat([[1]])})
    with pytest.raises(ValidationError) as err:
        bad.validate()
    assert "degree" in str(err.value)


def test_endo_trace_identity_on_circle():
    circle = circle_two_cell_complex()
    endo = {0: QMatrix.identity(2), 1: QMatrix.identity(2)}
    rep = endo_trace(circle, endo)
    assert rep.cochain_traces == {0: F(2), 1: F(2)}
    assert rep.cohomology_traces == {0: F(1), 1: F(1)}
    assert rep.alternating_sum == 0


def test_endo_trace_point_doubling():
    point = GradedComplex({0: 1}, {})
    rep = endo_trace(point, {0: mat([[2]])})
    assert rep.alternating_sum == 2


def test_endo_trace_rotation_by_pi():
    # rotation by pi on the consistently oriented 2-cell circle model
    # (edge e runs a->b, edge f runs b->a): swaps vertices and edges
    circle = GradedComplex({0: 2, 1: 2}, {0: mat([[-1, 1], [1, -1]])})
    swap = mat([[0, 1], [1, 0]])
    rep = endo_trace(circle, {0: swap, 1: swap})
    # degree-1 cochain trace is 0 and the alternating sums agree (Hopf)
    assert rep.cochain_traces[1] == 0
    assert rep.cochain_alternating() == rep.alternating_sum
    # oracle: direct elimination route, H^0 and H^1 both carry trace +1
    assert rep.cohomology_traces == {0: F(1), 1: F(1)}


def test_endo_must_commute():
    circle = circle_two_cell_complex()
    bad = {0: mat([[1, 0], [0, 2]]), 1: QMatrix.identity(2)}
    with pytest.raises(PreconditionError) as err:
        endo_trace(circle, bad)
    assert "degree 0" in str(err.value)


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=1 << 30))
def test_random_two_step_complexes_rank_nullity(seed):
    # random d1, then d0 a random map into ker d1: checks elimination
    # dims against the independent rank-nullity route on <= 40 total dim
    rng = random.Random(seed)
    n0, n1, n2 = rng.randint(1, 5), rng.randint(1, 5), rng.randint(1, 4)
    d1 = _random_qmatrix(rng, n2, n1)
    ker = d1.kernel_basis()
    lift = _random_qmatrix(rng, ker.cols, n0)
    d0 = ker @ lift if ker.cols else QMatrix.zeros(n1, n0)
    gc = GradedComplex({0: n0, 1: n1, 2: n2}, {0: d0, 1: d1})
    gc.validate()
    dims = gc.cohomology_dims()
    r0, r1 = d0.rank(), d1.rank()
    expected = {0: n0 - r0, 1: n1 - r1 - r0, 2: n2 - r1}
    for k in (0, 1, 2):
        assert dims.get(k, 0) == expected[k]


def test_mapping_cone_shifted_point_identity():
    # cone(id: C -> C)[-1] is acyclic
    point = GradedComplex({0: 1}, {})
    cone, endo = mapping_cone_shifted({0: QMatrix.identity(1)}, point, point,
                                      {0: QMatrix.identity(1)},
                                      {0: QMatrix.identity(1)})
    assert cone.cohomology_dims() == {}
    rep = endo_trace(cone, endo)
    assert rep.alternating_sum == 0


def test_mapping_cone_local_cohomology_of_point_in_line():
    # cone(C -> C^2)[-1] with the diagonal map: H^0 = 0, H^1 = C
    a = GradedComplex({0: 1}, {})
    b = GradedComplex({0: 2}, {})
    cone, _ = mapping_cone_shifted({0: mat([[1], [1]])}, a, b)
    assert cone.cohomology_dims() == {1: 1}


# ---------------------------------------------------------------------------
# spectral classification
# ---------------------------------------------------------------------------

def test_classify_examples_from_contract():
    assert classify_spectrum(mat([[2]])).factors[0].tag == REAL_GT1
    assert classify_spectrum(mat([[F(1, 2)]])).factors[0].tag == REAL_01
    cls = classify_spectrum(mat([[0, -4], [1, 0]]))
    assert [f.tag for f in cls.factors] == [COMPLEX_GT1]
    cert = cls.factors[0].certificate
    assert cert["schur_cohn_reciprocal_inside"] == 2


def test_classify_more_tags():
    assert classify_spectrum(mat([[1]])).factors[0].tag == EQUALS_1
    assert classify_spectrum(mat([[-1]])).factors[0].tag == REAL_LE0
    assert classify_spectrum(mat([[0, -1], [1, 0]])).factors[0].tag == UNIT_CIRCLE
    assert classify_spectrum(mat([[0, -1, 0], [1, 0, 0], [0, 0, 2]])).tags() \
        == {UNIT_CIRCLE, REAL_GT1}
    half_rot = mat([[0, F(-1, 4)], [1, 0]])  # eigenvalues +-i/2
    assert classify_spectrum(half_rot).factors[0].tag == COMPLEX_LT1
    # x^2 - 2: real roots on both sides of 1 -> mixed (not representable)
    sqrt2 = mat([[0, 2], [1, 0]])
    assert classify_spectrum(sqrt2).factors[0].tag == MIXED


def test_classification_invariant_under_conjugation():
    rng = random.Random(3)
    m = mat([[2, 1], [0, F(1, 2)]])
    base = classify_spectrum(m).signature()
    for _ in range(10):
        while True:
            g = _random_qmatrix(rng, 2, 2, denom=2)
            if g.det() != 0:
                break
        conj = g @ m @ g.solve(QMatrix.identity(2))
        assert classify_spectrum(conj).signature() == base


def test_invariant_subspace_examples():
    m = diag(2, F(1, 2))
    cls = classify_spectrum(m)
    expanding = cls.factors_with_tag(REAL_GT1)
    basis = invariant_subspace(m, expanding)
    assert basis.cols == 1
    assert basis.column(0)[1] == 0 and basis.column(0)[0] != 0

    full = invariant_subspace(diag(3, 2), classify_spectrum(diag(3, 2)).factors)
    assert full.cols == 2

    rot = mat([[0, -4], [1, 0]])
    none = invariant_subspace(
        rot, classify_spectrum(rot).factors_with_tag(REAL_GT1))
    assert none.cols == 0


def test_invariant_subspace_is_invariant_and_restriction():
    m = mat([[2, 1, 0], [0, F(1, 2), 1], [0, 0, 3]])
    cls = classify_spectrum(m)
    basis = invariant_subspace(m, cls.factors_with_tag(REAL_GT1))
    assert basis.cols == 2
    assert basis.in_column_span(m @ basis)
    restr = restriction_matrix(m, basis)
    assert sorted(polyroots.factor_over_q(restr.char_poly())) == sorted(
        [([F(-2), F(1)], 1), ([F(-3), F(1)], 1)])
