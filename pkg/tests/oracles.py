"""Independent brute-force oracles used by several test modules.

Nothing here imports the transfer-matrix or PIP code; each function works
straight from the definitions.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product


def paths_by_product(m: int, n: int) -> list[str]:
    """All words over {E, N, S} of length n that stay in [0, m] and never
    put N next to S.  Exponential, fine for n <= 10."""
    out = []
    for word in product("ENS", repeat=n):
        w = "".join(word)
        if "NS" in w or "SN" in w:
            continue
        h, ok = 0, True
        for s in w:
            h += (s == "N") - (s == "S")
            if not 0 <= h <= m:
                ok = False
                break
        if ok:
            out.append(w)
    return out


@lru_cache(maxsize=None)
def count_dp(m: int, n: int, h: int = 0, last: str = "E") -> int:
    """Paths of n more steps from height h after step ``last``."""
    if n == 0:
        return 1
    total = count_dp(m, n - 1, h, "E")
    if h < m and last != "S":
        total += count_dp(m, n - 1, h + 1, "N")
    if h > 0 and last != "N":
        total += count_dp(m, n - 1, h - 1, "S")
    return total


@lru_cache(maxsize=None)
def side_b_dp(m: int, n: int, h: int = 0, last: str = "E", verticals: int = 0) -> int:
    """Paths whose second vertical step is an S, counted by a DP over
    (height, last step, number of vertical steps seen so far, capped at 2)."""
    if verticals == 2:
        return count_dp(m, n, h, last)
    if n == 0:
        return 0
    total = side_b_dp(m, n - 1, h, "E", verticals)
    if h < m and last != "S":
        total += 0 if verticals == 1 else side_b_dp(m, n - 1, h + 1, "N", 1)
    if h > 0 and last != "N":
        total += side_b_dp(m, n - 1, h - 1, "S", verticals + 1)
    return total


def charpoly_numpy(m: int):
    """det(A - xI) coefficients via numpy's eigenvalue-based poly, lowest first."""
    import numpy as np

    verts = [(0, 0)] + [(h, h2) for h in range(m + 1) for h2 in (h - 1, h, h + 1)
                        if 0 <= h2 <= m and (h, h2) != (0, 0)]
    verts.sort()
    A = np.zeros((len(verts), len(verts)))
    for a, (i, j) in enumerate(verts):
        for b, (j2, k) in enumerate(verts):
            if j2 == j and not (abs(j - i) == 1 and k == i):
                A[a, b] = 1
    c = np.poly(A)  # det(xI - A), highest first
    sign = (-1) ** len(verts)
    return [sign * v for v in c[::-1]]
