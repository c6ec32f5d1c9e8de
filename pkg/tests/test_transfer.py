from __future__ import annotations

import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from oracles import charpoly_numpy, count_dp, paths_by_product, side_b_dp
from stripmix.errors import DomainError, ExcludedPoint
from stripmix.kernel import enumerate_paths
from stripmix.poly import IntPolynomial
from stripmix.transfer import (
    build_transfer_graph,
    charpoly,
    charpoly_by_determinant,
    charpoly_closed_form,
    count_paths,
    count_series,
    det_i_minus_xa,
    generating_function,
    growth_constants,
    is_primitive_witness,
    perron,
    side_b_exact,
    u_series,
)


def test_transfer_graph_shape():
    for m in range(6):
        g = build_transfer_graph(m)
        assert g.size == 3 * m + 1
        assert g.vertices[0] == (0, 0)
        assert list(g.vertices) == sorted(g.vertices)


def test_retrace_edges_are_missing():
    g = build_transfer_graph(2)
    idx = {v: k for k, v in enumerate(g.vertices)}
    succ = g.successors()
    # (0,1) -> (1,0) would be N then S
    assert idx[(1, 0)] not in succ[idx[(0, 1)]]
    assert idx[(1, 2)] in succ[idx[(0, 1)]]


def test_small_series():
    assert count_series(2, 7) == [1, 2, 4, 8, 15, 28, 53, 101]
    assert count_series(0, 5) == [1] * 6
    assert count_paths(2, 0) == 1


@pytest.mark.parametrize("m", range(4))
def test_counts_match_word_enumeration(m):
    for n in range(9):
        assert count_paths(m, n) == len(paths_by_product(m, n))


@given(st.integers(0, 6), st.integers(0, 40))
def test_counts_match_dp(m, n):
    assert count_paths(m, n) == count_dp(m, n)


def test_negative_inputs_rejected():
    with pytest.raises(DomainError):
        count_series(-1, 3)
    with pytest.raises(DomainError):
        count_series(1, -3)


@pytest.mark.parametrize("m", range(6))
def test_charpoly_recurrence_vs_determinant(m):
    assert charpoly(m) == charpoly_by_determinant(m)


@pytest.mark.parametrize("m", range(5))
def test_charpoly_vs_numpy(m):
    want = charpoly_numpy(m)
    got = charpoly(m).coefficients
    assert len(got) == len(want)
    assert all(abs(a - b) < 1e-6 * max(1, abs(a)) for a, b in zip(got, want))


@given(st.integers(1, 8), st.floats(-2.5, 2.5), st.floats(-2.5, 2.5))
def test_closed_form_matches_recurrence(m, re, im):
    z = complex(re, im)
    try:
        val = charpoly_closed_form(m, z)
    except ExcludedPoint:
        return
    ref = complex(charpoly(m)(Fraction(re) + 0) if im == 0 else _eval_c(charpoly(m), z))
    assert abs(val - ref) <= 1e-9 * max(1.0, abs(ref))


def _eval_c(p: IntPolynomial, z: complex) -> complex:
    acc = 0j
    for c in reversed(p.coefficients):
        acc = acc * z + c
    return acc


def test_closed_form_at_two():
    # a_2(2) = -128 + 192 - 96 + 16 + 16 - 8 + 2 + 1 = -5
    assert charpoly(2)(2) == -5
    assert abs(charpoly_closed_form(2, 2) - (-5)) < 1e-9


@pytest.mark.parametrize("z", [1, -1, 1j, -1j, 1 + math.sqrt(2), 1 - math.sqrt(2)])
def test_closed_form_excluded_points(z):
    with pytest.raises(ExcludedPoint):
        charpoly_closed_form(3, z)


@pytest.mark.parametrize("m", range(6))
def test_reciprocal_identity(m):
    N = 3 * m + 1
    lhs = det_i_minus_xa(m)
    rhs = charpoly(m).reciprocal(N) * ((-1) ** N)
    assert lhs == rhs


def test_generating_function_m2():
    gf = generating_function(2)
    assert gf.numerator == IntPolynomial((1, 0, 1, 1))
    assert gf.denominator == IntPolynomial((1, -2, 1, -1, -1))


def test_generating_function_m0():
    gf = generating_function(0)
    assert gf.numerator == IntPolynomial((1,))
    assert gf.denominator == IntPolynomial((1, -1))


@pytest.mark.parametrize("m", range(6))
def test_generating_function_series(m):
    assert generating_function(m).series(25) == count_series(m, 24)


@pytest.mark.parametrize("m", range(1, 6))
def test_generating_function_is_reduced(m):
    from stripmix.poly import gcd_q

    gf = generating_function(m)
    assert len(gcd_q(gf.numerator.coefficients, gf.denominator.coefficients)) == 1
    assert gf.denominator[0] == 1


TABLE_R = [1.0, 1.6180, 1.8971, 2.0507, 2.1444]


@pytest.mark.parametrize("m", range(5))
def test_perron_table(m):
    assert abs(perron(m).r - TABLE_R[m]) < 1e-4


def test_perron_bracket_contains_root():
    g = perron(3, tol=1e-12)
    lo, hi = g.bracket
    a = charpoly(3)
    assert a(lo) * a(hi) <= 0
    assert hi - lo <= Fraction(1e-12)


def test_perron_monotone_and_bounded():
    rs = [perron(m).r for m in range(10)]
    assert all(a < b for a, b in zip(rs, rs[1:]))
    assert rs[-1] < 1 + math.sqrt(2)
    assert abs(perron(1).r - (1 + math.sqrt(5)) / 2) < 1e-9


@pytest.mark.parametrize("m", range(1, 5))
def test_perron_matches_count_ratio(m):
    c = count_series(m, 400)
    assert abs(c[400] / c[399] - perron(m).r) < 1e-8


@pytest.mark.parametrize("m", range(1, 6))
def test_growth_constant_q(m):
    g = growth_constants(m)
    c = count_paths(m, 300)
    assert abs(c / (g.q * g.r**300) - 1) < 1e-8


def test_growth_constants_reject_m0():
    with pytest.raises(DomainError):
        growth_constants(0)


def test_c_m_decreasing():
    Cs = [growth_constants(m).C for m in range(2, 10)]
    assert all(a > b for a, b in zip(Cs, Cs[1:]))
    assert Cs[-1] > 1.5 - math.sqrt(2)


@pytest.mark.parametrize("m", range(5))
def test_primitive(m):
    assert is_primitive_witness(m)


@given(st.integers(1, 4), st.integers(3, 30))
def test_side_b_formula_vs_dp(m, n):
    assert side_b_exact(m, n) == side_b_dp(m, n)


@given(st.integers(1, 4), st.integers(4, 30))
def test_u_series_misses_boundary_term(m, n):
    assert side_b_exact(m, n) - u_series(m, n) == n - 2


@pytest.mark.parametrize("m,n", [(2, 8), (3, 7)])
def test_side_b_by_listing(m, n):
    want = 0
    for p in enumerate_paths(m, n):
        vert = [s for s in p if s != "E"]
        want += len(vert) >= 2 and vert[1] == "S"
    assert side_b_exact(m, n) == want


def test_closed_form_principal_branch_is_irrelevant():
    # swapping the sign of the square root swaps the two terms, so both
    # branches give the same value; spot check at one point
    z = 0.3 + 0.7j
    assert abs(charpoly_closed_form(4, z) - _eval_c(charpoly(4), z)) < 1e-9 * abs(_eval_c(charpoly(4), z))
    assert cmath.isfinite(charpoly_closed_form(4, z))


@pytest.mark.parametrize("m", range(1, 6))
def test_primitive_exponent_is_sharp(m):
    assert not is_primitive_witness(m, m + 2)


@pytest.mark.parametrize("m", range(1, 6))
def test_reciprocal_with_negated_argument_fails(m):
    # (-x)^N a_m(-1/x) is a different polynomial; only a_m(1/x) works
    N = 3 * m + 1
    a = charpoly(m)
    negated = IntPolynomial(tuple(c * (-1) ** k for k, c in enumerate(a.coefficients)))
    assert det_i_minus_xa(m) != negated.reciprocal(N) * ((-1) ** N)


@pytest.mark.parametrize("m", range(8))
def test_closed_form_at_zero_and_fixed_point(m):
    assert abs(charpoly_closed_form(m, 0) - charpoly(m)[0]) < 1e-9 * max(1, abs(charpoly(m)[0]))
    z = 1.5 + 0.5j
    ref = _eval_c(charpoly(m), z)
    assert abs(charpoly_closed_form(m, z) - ref) <= 1e-9 * abs(ref)
