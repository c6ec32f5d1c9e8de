from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from stripmix.poly import (
    IntPolynomial,
    count_real_roots,
    divmod_q,
    gcd_q,
    interpolate,
)

coeffs = st.lists(st.integers(-20, 20), min_size=1, max_size=7)
polys = coeffs.map(lambda c: IntPolynomial(tuple(c)))


def test_str_rendering():
    p = IntPolynomial((1, -2, 0, 1))
    assert str(p) == "x^3 - 2*x + 1"
    assert str(IntPolynomial(())) == "0"
    assert str(-IntPolynomial.x()) == "-x"


def test_trailing_zeros_trimmed():
    assert IntPolynomial((1, 2, 0, 0)).degree == 1


@given(polys, polys, st.integers(-5, 5))
def test_ring_ops_agree_with_evaluation(p, q, x):
    assert (p + q)(x) == p(x) + q(x)
    assert (p - q)(x) == p(x) - q(x)
    assert (p * q)(x) == p(x) * q(x)


@given(polys, st.integers(0, 3))
def test_shift_is_multiplication_by_power(p, k):
    assert p.shift(k) == p * IntPolynomial((0,) * k + (1,))


@given(polys)
def test_reciprocal_involution(p):
    if p.is_zero():
        return
    d = p.degree
    r = p.reciprocal(d)
    if p[0] != 0:
        assert r.reciprocal(d) == p


@given(polys, polys.filter(lambda q: not q.is_zero()))
def test_divmod_reconstructs(p, q):
    quo, rem = divmod_q(p.coefficients, q.coefficients)
    lhs = [Fraction(0)] * (len(quo) + len(q.coefficients))
    for i, a in enumerate(quo):
        for j, b in enumerate(q.coefficients):
            lhs[i + j] += a * b
    for i, r in enumerate(rem):
        lhs[i] += r
    lhs = IntPolynomial.from_fractions(lhs)
    assert lhs == p
    assert len(rem) < len(q.coefficients)


@given(polys, polys, polys)
def test_gcd_divides_and_contains_common_factor(a, b, g):
    if g.is_zero() or (a.is_zero() and b.is_zero()):
        return
    A, B = (a * g).coefficients, (b * g).coefficients
    d = gcd_q(A, B)
    if not d:
        return
    for poly in (A, B):
        _, r = divmod_q(poly, d)
        assert not any(r)
    # g divides the gcd
    _, r = divmod_q(d, g.coefficients)
    assert not any(r)


@given(polys)
def test_interpolate_recovers(p):
    n = p.degree + 1 if not p.is_zero() else 1
    xs = [Fraction(k) for k in range(n)]
    ys = [Fraction(p(k)) for k in range(n)]
    got = IntPolynomial.from_fractions(interpolate(xs, ys))
    assert got == p


@given(st.lists(st.integers(-6, 6), min_size=1, max_size=5, unique=True))
def test_sturm_counts_known_roots(roots):
    p = IntPolynomial((1,))
    for r in roots:
        p = p * IntPolynomial((-r, 1))
    assert count_real_roots(p.coefficients, Fraction(-10), Fraction(10)) == len(roots)
    assert count_real_roots(p.coefficients, Fraction(0), Fraction(10)) == sum(r > 0 for r in roots)


@given(coeffs.filter(lambda c: len(c) >= 2 and c[-1] != 0))
def test_sturm_matches_numpy(c):
    p = IntPolynomial(tuple(c))
    if p.degree < 1:
        return
    # squarefree check: skip repeated roots, where numpy is unreliable
    if len(gcd_q(p.coefficients, p.derivative().coefficients)) > 1:
        return
    rts = np.roots(list(reversed(p.coefficients)))
    real = [r.real for r in rts if abs(r.imag) < 1e-7]
    lo, hi = Fraction(-7, 3), Fraction(5, 2)
    if any(abs(r - float(lo)) < 1e-6 or abs(r - float(hi)) < 1e-6 for r in real):
        return
    want = sum(float(lo) < r <= float(hi) for r in real)
    assert count_real_roots(p.coefficients, lo, hi) == want


def test_exact_div_raises_on_remainder():
    with pytest.raises(ArithmeticError):
        IntPolynomial((1, 0, 1)).exact_div(IntPolynomial((1, 1)))
