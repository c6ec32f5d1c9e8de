"""Exact univariate polynomials over the integers and rationals.

Coefficients are stored lowest degree first.  Everything here is exact:
integer arithmetic for :class:`IntPolynomial`, :class:`fractions.Fraction`
where division is unavoidable (gcd, interpolation, root isolation).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence


def _trim(coeffs: Iterable) -> tuple:
    out = list(coeffs)
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


@dataclass(frozen=True)
class IntPolynomial:
    """Polynomial with arbitrary-precision integer coefficients."""

    coefficients: tuple[int, ...] = ()

    def __post_init__(self):
        coeffs = _trim(self.coefficients)
        for c in coeffs:
            if isinstance(c, Fraction):
                if c.denominator != 1:
                    raise ValueError(f"non-integer coefficient {c}")
            elif not isinstance(c, int):
                raise TypeError(f"coefficient {c!r} is not an integer")
        object.__setattr__(self, "coefficients", tuple(int(c) for c in coeffs))

    @classmethod
    def from_fractions(cls, coeffs: Sequence[Fraction]) -> IntPolynomial:
        return cls(tuple(coeffs))

    @classmethod
    def x(cls) -> IntPolynomial:
        return cls((0, 1))

    @classmethod
    def constant(cls, c: int) -> IntPolynomial:
        return cls((c,))

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coefficients) - 1

    def is_zero(self) -> bool:
        return not self.coefficients

    def __getitem__(self, k: int) -> int:
        if 0 <= k < len(self.coefficients):
            return self.coefficients[k]
        return 0

    def __call__(self, x):
        acc = 0 * x
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def __add__(self, other: IntPolynomial) -> IntPolynomial:
        n = max(len(self.coefficients), len(other.coefficients))
        return IntPolynomial(tuple(self[k] + other[k] for k in range(n)))

    def __neg__(self) -> IntPolynomial:
        return IntPolynomial(tuple(-c for c in self.coefficients))

    def __sub__(self, other: IntPolynomial) -> IntPolynomial:
        return self + (-other)

    def __mul__(self, other) -> IntPolynomial:
        if isinstance(other, int):
            return IntPolynomial(tuple(other * c for c in self.coefficients))
        if self.is_zero() or other.is_zero():
            return IntPolynomial(())
        out = [0] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            if a:
                for j, b in enumerate(other.coefficients):
                    out[i + j] += a * b
        return IntPolynomial(tuple(out))

    __rmul__ = __mul__

    def shift(self, k: int) -> IntPolynomial:
        """Multiply by x**k."""
        if self.is_zero():
            return self
        return IntPolynomial((0,) * k + self.coefficients)

    def derivative(self) -> IntPolynomial:
        return IntPolynomial(tuple(k * c for k, c in enumerate(self.coefficients) if k))

    def reciprocal(self, n: int) -> IntPolynomial:
        """x**n * p(1/x); requires n >= degree."""
        if n < self.degree:
            raise ValueError("n smaller than degree")
        padded = list(self.coefficients) + [0] * (n + 1 - len(self.coefficients))
        return IntPolynomial(tuple(reversed(padded)))

    def exact_div(self, other: IntPolynomial) -> IntPolynomial:
        """Quotient of an exact division in Z[x]; raises if a remainder is left."""
        q, r = divmod_q(self.coefficients, other.coefficients)
        if any(r):
            raise ArithmeticError("division is not exact")
        return IntPolynomial.from_fractions(q)

    def content(self) -> int:
        g = 0
        for c in self.coefficients:
            g = gcd(g, c)
        return g

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coefficients[k]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if k == 0:
                body = str(a)
            else:
                mono = "x" if k == 1 else f"x^{k}"
                body = mono if a == 1 else f"{a}*{mono}"
            terms.append((sign, body))
        first_sign, first_body = terms[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in terms[1:]:
            text += f" {sign} {body}"
        return text


def divmod_q(num: Sequence, den: Sequence) -> tuple[list[Fraction], list[Fraction]]:
    """Long division over Q.  Inputs are coefficient lists, lowest degree first."""
    den = list(_trim(den))
    if not den:
        raise ZeroDivisionError("polynomial division by zero")
    rem = [Fraction(c) for c in _trim(num)]
    lead = Fraction(den[-1])
    dq = len(den) - 1
    if len(rem) - 1 < dq:
        return [], rem
    quot = [Fraction(0)] * (len(rem) - dq)
    for k in range(len(rem) - 1, dq - 1, -1):
        c = rem[k] / lead
        quot[k - dq] = c
        if c:
            for i, d in enumerate(den):
                rem[k - dq + i] -= c * d
    return list(_trim(quot)), list(_trim(rem[:dq]))


def gcd_q(a: Sequence, b: Sequence) -> list[Fraction]:
    """Monic gcd over Q by the Euclidean algorithm."""
    a = [Fraction(c) for c in _trim(a)]
    b = [Fraction(c) for c in _trim(b)]
    while b:
        _, r = divmod_q(a, b)
        a, b = b, r
    if not a:
        return []
    lead = a[-1]
    return [c / lead for c in a]


def interpolate(xs: Sequence[Fraction], ys: Sequence[Fraction]) -> list[Fraction]:
    """Coefficients of the unique polynomial of degree < len(xs) through (xs, ys).

    Newton divided differences, then expansion into the monomial basis.
    """
    n = len(xs)
    if len(set(xs)) != n or len(ys) != n:
        raise ValueError("need distinct nodes and one value per node")
    dd = [Fraction(y) for y in ys]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - j])
    coeffs = [Fraction(0)] * n
    # Horner on the Newton form: p = dd[0] + (x-x0)(dd[1] + (x-x1)(...))
    acc = [dd[n - 1]]
    for i in range(n - 2, -1, -1):
        shifted = [Fraction(0)] + acc
        for k in range(len(acc)):
            shifted[k] -= xs[i] * acc[k]
        shifted[0] += dd[i]
        acc = shifted
    coeffs[: len(acc)] = acc
    return list(_trim(coeffs))


def sturm_sequence(p: Sequence) -> list[list[Fraction]]:
    seq = [[Fraction(c) for c in _trim(p)]]
    deriv = [k * c for k, c in enumerate(seq[0]) if k]
    seq.append(list(_trim(deriv)))
    while seq[-1]:
        _, r = divmod_q(seq[-2], seq[-1])
        seq.append([-c for c in r])
    seq.pop()
    return seq


def _eval_q(coeffs: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def sign_changes(values: Iterable) -> int:
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_real_roots(p: Sequence, lo: Fraction, hi: Fraction) -> int:
    """Number of distinct real roots in the half-open interval (lo, hi].

    Sturm's theorem; exact in rational arithmetic.
    """
    seq = sturm_sequence(p)
    lo, hi = Fraction(lo), Fraction(hi)
    return sign_changes(_eval_q(s, lo) for s in seq) - sign_changes(_eval_q(s, hi) for s in seq)
