"""Transfer-matrix enumeration of monotone paths in a strip of height m.

A path is encoded by its successive height pairs (h_{i-1}, h_i).  The
transfer graph G_m has the 3m+1 admissible pairs as vertices and an edge
(i, j) -> (j, k) unless the step would retrace (j = i +- 1 and k = i).
Paths of length n are walks of length n from (0, 0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple, Sequence

import mpmath

from .errors import DegenerateRoot, DomainError, ExcludedPoint
from .poly import IntPolynomial, count_real_roots, divmod_q, gcd_q, interpolate


class HeightPair(NamedTuple):
    prev: int
    cur: int


@dataclass(frozen=True)
class TransferGraph:
    m: int
    vertices: tuple[HeightPair, ...]
    edges: tuple[tuple[int, int], ...]

    @property
    def size(self) -> int:
        return len(self.vertices)

    def successors(self) -> list[list[int]]:
        out = [[] for _ in self.vertices]
        for u, v in self.edges:
            out[u].append(v)
        return out

    def adjacency(self) -> list[list[int]]:
        A = [[0] * self.size for _ in range(self.size)]
        for u, v in self.edges:
            A[u][v] = 1
        return A


@dataclass(frozen=True)
class RationalGF:
    """Reduced P/Q with Q(0) = 1."""

    numerator: IntPolynomial
    denominator: IntPolynomial

    def series(self, terms: int) -> list[int]:
        """First ``terms`` Taylor coefficients at 0."""
        P, Q = self.numerator, self.denominator
        if Q[0] != 1:
            raise ValueError("denominator must have constant term 1")
        out: list[int] = []
        for n in range(terms):
            c = P[n] - sum(Q[k] * out[n - k] for k in range(1, min(n, Q.degree) + 1))
            out.append(c)
        return out

    def __str__(self) -> str:
        return f"({self.numerator})/({self.denominator})"


@dataclass(frozen=True)
class GrowthData:
    m: int
    r: float
    tol: float
    bracket: tuple[Fraction, Fraction]
    q: float | None = None
    C: float | None = None


def build_transfer_graph(m: int) -> TransferGraph:
    if m < 0:
        raise DomainError("strip height must be nonnegative")
    verts = sorted(
        HeightPair(i, j)
        for i in range(m + 1)
        for j in (i - 1, i, i + 1)
        if 0 <= j <= m
    )
    index = {v: k for k, v in enumerate(verts)}
    edges = []
    for u, (i, j) in enumerate(verts):
        for k in (j - 1, j, j + 1):
            if not 0 <= k <= m:
                continue
            if abs(j - i) == 1 and k == i:
                continue
            edges.append((u, index[HeightPair(j, k)]))
    return TransferGraph(m, tuple(verts), tuple(edges))


@lru_cache(maxsize=None)
def _succ(m: int) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(s) for s in build_transfer_graph(m).successors())


def count_series(m: int, n_max: int) -> list[int]:
    """c_m(0), ..., c_m(n_max) from one sweep of row-vector products."""
    if m < 0 or n_max < 0:
        raise DomainError("need m >= 0 and n >= 0")
    succ = _succ(m)
    vec = [0] * len(succ)
    vec[0] = 1  # (0, 0) sorts first
    out = [1]
    for _ in range(n_max):
        nxt = [0] * len(succ)
        for u, w in enumerate(vec):
            if w:
                for v in succ[u]:
                    nxt[v] += w
        vec = nxt
        out.append(sum(vec))
    return out


def count_paths(m: int, n: int) -> int:
    """c_m(n): sum of row (0,0) of A_m^n."""
    return count_series(m, n)[n]


# -- characteristic polynomial -------------------------------------------------

_REC = IntPolynomial((-1, -1, 1, -1))  # -x^3 + x^2 - x - 1
_X4 = IntPolynomial((0, 0, 0, 0, 1))


@lru_cache(maxsize=None)
def charpoly(m: int) -> IntPolynomial:
    """a_m(x) = det(A_m - x I) via the three-term recurrence."""
    if m < 0:
        raise DomainError("strip height must be nonnegative")
    a0 = IntPolynomial((1, -1))
    a1 = IntPolynomial((-1, 0, 1, -2, 1))
    if m == 0:
        return a0
    prev, cur = a0, a1
    for _ in range(2, m + 1):
        prev, cur = cur, _REC * cur - _X4 * prev
    return cur


_DISC_ROOTS = (1, -1, 1j, -1j, 1 + math.sqrt(2), 1 - math.sqrt(2))


def charpoly_closed_form(m: int, x: complex, excl_tol: float = 1e-9) -> complex:
    """Evaluate alpha_+ beta_+^m + alpha_- beta_-^m at a complex point.

    Principal square root.  Evaluated in 40-digit arithmetic because the two
    terms can cancel heavily for larger m.
    """
    x = complex(x)
    if any(abs(x - z) < excl_tol for z in _DISC_ROOTS):
        raise ExcludedPoint(f"{x} is within {excl_tol} of a discriminant root")
    with mpmath.workdps(40):
        z = mpmath.mpc(x.real, x.imag)
        sq = mpmath.sqrt((z**4 - 1) * (z**2 - 2 * z - 1))
        shift = (z**4 - 2 * z**3 - 1) / (2 * sq)
        base = (1 - z) / 2
        lin = -(z**3) + z**2 - z - 1
        beta_p = (lin + sq) / 2
        beta_m = (lin - sq) / 2
        val = (base + shift) * beta_p**m + (base - shift) * beta_m**m
        return complex(val)


# -- determinants of polynomial matrices ---------------------------------------

def det_bareiss(M: Sequence[Sequence]) -> object:
    """Fraction-free Gaussian elimination.  Works over Z and over Z[x].

    Entries must support +, -, * and an exact ``//``-style division given by
    ``_exact_div``.
    """
    a = [list(row) for row in M]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = None
    for k in range(n - 1):
        if _is_zero(a[k][k]):
            for r in range(k + 1, n):
                if not _is_zero(a[r][k]):
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return a[k][k] * 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                a[i][j] = num if prev is None else _exact_div(num, prev)
        prev = a[k][k]
    d = a[n - 1][n - 1]
    return d if sign > 0 else -d


def _is_zero(v) -> bool:
    return v.is_zero() if isinstance(v, IntPolynomial) else v == 0


def _exact_div(a, b):
    if isinstance(a, IntPolynomial):
        return a.exact_div(b)
    q, r = divmod(a, b)
    if r:
        raise ArithmeticError("Bareiss division not exact")
    return q


def _i_minus_xa(m: int, x, replace_row_00: bool = False) -> list[list]:
    """I - x A_m evaluated at ``x`` (an int, Fraction or IntPolynomial)."""
    g = build_transfer_graph(m)
    A = g.adjacency()
    one = IntPolynomial.constant(1) if isinstance(x, IntPolynomial) else 1
    zero = one * 0
    M = [[(one if i == j else zero) - x * A[i][j] for j in range(g.size)]
         for i in range(g.size)]
    if replace_row_00:
        M[0] = [one] * g.size
    return M


def _det_polynomial(m: int, replace_row_00: bool) -> IntPolynomial:
    """det of I - x A_m (optionally with row 00 set to ones) by evaluation at
    3m+2 integer nodes and exact interpolation."""
    nodes = [Fraction(k) for k in range(3 * m + 2)]
    values = [Fraction(det_bareiss(_i_minus_xa(m, int(t), replace_row_00))) for t in nodes]
    return IntPolynomial.from_fractions(interpolate(nodes, values))


def det_i_minus_xa(m: int) -> IntPolynomial:
    return _det_polynomial(m, replace_row_00=False)


def det_i_minus_xa_row00(m: int) -> IntPolynomial:
    return _det_polynomial(m, replace_row_00=True)


def det_symbolic(m: int, replace_row_00: bool = False) -> IntPolynomial:
    """Same determinant, by fraction-free elimination directly over Z[x]."""
    return det_bareiss(_i_minus_xa(m, IntPolynomial.x(), replace_row_00))


def charpoly_by_determinant(m: int) -> IntPolynomial:
    """det(A_m - x I) by fraction-free elimination over Z[x]."""
    g = build_transfer_graph(m)
    A = g.adjacency()
    x = IntPolynomial.x()
    M = [[IntPolynomial.constant(A[i][j]) - (x if i == j else IntPolynomial(()))
          for j in range(g.size)] for i in range(g.size)]
    return det_bareiss(M)


@lru_cache(maxsize=None)
def generating_function(m: int) -> RationalGF:
    """sum_n c_m(n) x^n as a reduced rational function."""
    if m < 0:
        raise DomainError("strip height must be nonnegative")
    num = det_i_minus_xa_row00(m)
    den = det_i_minus_xa(m)
    g = gcd_q(num.coefficients, den.coefficients)
    pn, rn = divmod_q(num.coefficients, g)
    pd, rd = divmod_q(den.coefficients, g)
    assert not rn and not rd
    scale = pd[0]
    P = IntPolynomial.from_fractions([c / scale for c in pn])
    Q = IntPolynomial.from_fractions([c / scale for c in pd])
    return RationalGF(P, Q)


# -- Perron root ---------------------------------------------------------------

SCAN_STEP = Fraction(1, 64)


def _sign(v) -> int:
    return (v > 0) - (v < 0)


def perron(m: int, tol: float = 1e-10) -> GrowthData:
    """Largest real root of a_m in [1, 3], bracketed by exact bisection.

    Scans down from 3 in steps of 1/64 for the topmost sign change, bisects
    that cell, then certifies with a Sturm count that no root of a_m lies
    above the bracket.  If the certificate fails (an even number of roots
    hid inside one scan cell) the scan step is halved and the search redone.
    """
    if m < 0:
        raise DomainError("strip height must be nonnegative")
    if not tol > 0:
        raise DomainError("tol must be positive")
    a = charpoly(m)
    top = Fraction(3)
    step = SCAN_STEP
    tol_q = Fraction(tol)
    while True:
        lo, hi = _scan(a, top, step)
        if lo == hi:
            break
        flo = _sign(a(lo))
        while hi - lo > tol_q:
            mid = (lo + hi) / 2
            fm = _sign(a(mid))
            if fm == 0:
                lo = hi = mid
                break
            if fm == flo:
                lo = mid
            else:
                hi = mid
        if count_real_roots(a.coefficients, hi, top) == 0:
            break
        step /= 2  # pragma: no cover - never triggered for the tested m
    r = float((lo + hi) / 2)
    return GrowthData(m=m, r=r, tol=float(max(hi - lo, Fraction(0))), bracket=(lo, hi))


def _scan(a: IntPolynomial, top: Fraction, step: Fraction) -> tuple[Fraction, Fraction]:
    x = top
    fx = _sign(a(x))
    if fx == 0:
        return x, x
    while x > 1:
        y = max(x - step, Fraction(1))
        fy = _sign(a(y))
        if fy == 0:
            return y, y
        if fy != fx:
            return y, x
        x, fx = y, fy
    raise ArithmeticError("no sign change of a_m in [1, 3]")


def growth_constants(m: int, tol: float = 1e-12) -> GrowthData:
    """Perron root r_m, the constant q_m in c_m(n) ~ q_m r_m^n, and
    C_m = 1 / (r^2 (r-1)^2)."""
    if m < 1:
        raise DomainError("growth constants need m >= 1")
    base = perron(m, tol)
    gf = generating_function(m)
    lo, hi = base.bracket
    r = (lo + hi) / 2
    x = 1 / r
    dq = gf.denominator.derivative()(x)
    if abs(dq) <= tol:
        raise DegenerateRoot(f"Q'(1/r) = {float(dq)} vanishes at m={m}")
    q = -r * gf.numerator(x) / dq
    C = 1 / (r**2 * (r - 1) ** 2)
    return GrowthData(m=m, r=float(r), tol=base.tol, bracket=base.bracket,
                      q=float(q), C=float(C))


def u_series(m: int, n: int) -> int:
    """u_m(n) = c(n-4) + 2 c(n-5) + ... + (n-3) c(0), taken as written."""
    if m < 1 or n < 0:
        raise DomainError("need m >= 1 and n >= 0")
    if n < 4:
        return 0
    c = count_series(m, n)
    return sum(j * c[n - 3 - j] for j in range(1, n - 2))


def side_b_exact(m: int, n: int) -> int:
    """Number of paths whose second vertical step exists and points down.

    The boundary term n-2 counts paths whose second vertical step is the last
    step; the u_m(n) sum omits it.
    """
    if m < 1 or n < 3:
        raise DomainError("need m >= 1 and n >= 3")
    c = count_series(m, n)
    return sum((k - 2) * c[n - k - 1] for k in range(3, n)) + (n - 2)


def is_primitive_witness(m: int, power: int | None = None) -> bool:
    """True iff A_m^power is entrywise positive.

    The default power m + 3 is the smallest one that works; the tests
    check sharpness for small m.
    """
    k = m + 3 if power is None else power
    A = build_transfer_graph(m).adjacency()
    n = len(A)
    P = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(k):
        P = [[sum(P[i][t] * A[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
    return all(v > 0 for row in P for v in row)
