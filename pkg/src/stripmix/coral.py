"""Coral snakes, the coral PIP C_{m,n}, and rooted cube complexes of PIPs.

A coral snake is a path of unit cells starting at the bottom-left cell of a
strip with m cell rows, moving up (U), down (D) or right (R).  Cells are
coloured by index parity, cell 1 black.  Corner rule: for every
vertical-horizontal-vertical turn sequence, the two vertical runs point the
same way iff the two corner cells have the same colour.  The corner cells are
the ends of the horizontal run, so the rule reads: same direction iff the
horizontal run has an even number of R moves.  The first column is treated
as an upward run even if it is a single cell.

Consistent order ideals are stored as int bitmasks over the canonical
element order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterator

from .errors import AxiomViolation, DomainError, TooSmall
from .graphs import to_dot

OrderIdeal = int  # bitmask over CoralPip.elements


@dataclass(frozen=True, order=True)
class CoralSnake:
    moves: tuple[str, ...] = ()

    @cached_property
    def cells(self) -> tuple[tuple[int, int], ...]:
        col, row = 0, 0
        out = [(0, 0)]
        for mv in self.moves:
            if mv == "U":
                row += 1
            elif mv == "D":
                row -= 1
            else:
                col += 1
            out.append((col, row))
        return tuple(out)

    @property
    def length(self) -> int:
        return len(self.moves) + 1

    @property
    def height(self) -> int:
        return len({r for _, r in self.cells})

    @property
    def width(self) -> int:
        return len({c for c, _ in self.cells})

    def is_prefix_of(self, other: CoralSnake) -> bool:
        return other.moves[: len(self.moves)] == self.moves

    def runs(self) -> list[tuple[str, int]]:
        """Maximal runs as (kind, number of moves), kind in {"U", "D", "R"}.

        Always starts with a vertical run; a snake that begins with R gets a
        zero-move "U" run for its first column.
        """
        out: list[tuple[str, int]] = []
        for mv in self.moves:
            if out and out[-1][0] == mv:
                out[-1] = (mv, out[-1][1] + 1)
            else:
                out.append((mv, 1))
        if not out or out[0][0] == "R":
            out.insert(0, ("U", 0))
        return out

    def is_valid(self) -> bool:
        """Self-avoidance plus the corner-colour rule (row bounds excluded)."""
        for a, b in zip(self.moves, self.moves[1:]):
            if {a, b} == {"U", "D"}:
                return False
        if any(r < 0 for _, r in self.cells):
            return False
        runs = self.runs()
        for i in range(0, len(runs) - 2):
            (v1, _), (h, nh), (v2, _) = runs[i], runs[i + 1], runs[i + 2]
            if h != "R" or v1 == "R" or v2 == "R":
                continue
            if (v1 == v2) != (nh % 2 == 0):
                return False
        return True

    def draw(self) -> str:
        return "".join(self.moves) or "."


@dataclass(frozen=True, order=True)
class NumberedSnake:
    snake: CoralSnake
    s: int

    def __str__(self) -> str:
        return f"({self.snake.draw()},{self.s})"


def max_label(snake: CoralSnake, n: int) -> int:
    return n - snake.length - snake.width + 1


def enumerate_snakes(m: int, n: int) -> list[CoralSnake]:
    """Nonempty coral snakes with height <= m and at least one label in C_{m,n}."""
    if m < 0 or n < 0:
        raise DomainError("need m >= 0 and n >= 0")
    if m == 0 or n == 0:
        return []  # one path only: the poset is empty
    out = []
    stack = [CoralSnake(())]
    while stack:
        snake = stack.pop()
        out.append(snake)
        for mv in "UDR":
            nxt = CoralSnake(snake.moves + (mv,))
            if max(r for _, r in nxt.cells) > m - 1:
                continue
            if max_label(nxt, n) < 0 or not nxt.is_valid():
                continue
            stack.append(nxt)
    return sorted(out, key=lambda s: s.cells)


@dataclass
class CoralPip:
    """C_{m,n} with bitmask relations over the canonical element order.

    ``below[i]`` is the mask of elements <= i, ``above[i]`` of elements >= i.
    Only the minimal inconsistent pairs are stored; ``inconsistent_mask``
    derives the full relation by upward closure.
    """

    m: int
    n: int
    elements: list[NumberedSnake]
    below: list[int]
    above: list[int]
    lower_covers: list[list[int]]
    minimal_inconsistent: list[tuple[int, int]]
    _incon: list[int] | None = field(default=None, repr=False)

    @property
    def size(self) -> int:
        return len(self.elements)

    def index(self, elem: NumberedSnake) -> int:
        return self._index[elem]

    @cached_property
    def _index(self) -> dict[NumberedSnake, int]:
        return {e: i for i, e in enumerate(self.elements)}

    def leq(self, i: int, j: int) -> bool:
        return bool(self.below[j] >> i & 1)

    @property
    def inconsistent_mask(self) -> list[int]:
        if self._incon is None:
            inc = [0] * self.size
            for p, q in self.minimal_inconsistent:
                up_p, up_q = self.above[p], self.above[q]
                for i in _bits(up_p):
                    inc[i] |= up_q
                for j in _bits(up_q):
                    inc[j] |= up_p
            self._incon = inc
        return self._incon

    def is_inconsistent(self, i: int, j: int) -> bool:
        return bool(self.inconsistent_mask[i] >> j & 1)

    def check_axioms(self) -> None:
        """Raise AxiomViolation unless this is a PIP matching its definition."""
        n = self.size
        for i in range(n):
            for j in range(n):
                le = self.leq(i, j)
                a, b = self.elements[i], self.elements[j]
                if le != (a.snake.is_prefix_of(b.snake) and a.s >= b.s):
                    raise AxiomViolation(f"order mismatch at {a}, {b}")
        for i in range(n):
            for j in range(n):
                a, b = self.elements[i].snake, self.elements[j].snake
                want = not (a.is_prefix_of(b) or b.is_prefix_of(a))
                if self.is_inconsistent(i, j) != want:
                    raise AxiomViolation(f"inconsistency mismatch at {i}, {j}")
        inc = self.inconsistent_mask
        for i in range(n):
            for j in _bits(inc[i]):
                if self.above[i] & self.above[j]:
                    raise AxiomViolation(f"inconsistent pair {i},{j} has a common upper bound")
                for k in _bits(self.above[i]):
                    if (inc[k] & self.above[j]) != self.above[j]:
                        raise AxiomViolation(f"inconsistency not upward closed at {i},{j}")

    # -- ideals ----------------------------------------------------------------

    def is_consistent_ideal(self, mask: int) -> bool:
        for i in _bits(mask):
            if self.below[i] & ~mask or self.inconsistent_mask[i] & mask:
                return False
        return True

    def maximal(self, mask: int) -> int:
        out = 0
        for i in _bits(mask):
            if not (self.above[i] & mask) & ~(1 << i):
                out |= 1 << i
        return out

    def addable(self, mask: int) -> int:
        """Elements whose addition keeps ``mask`` a consistent ideal."""
        out = 0
        inc = self.inconsistent_mask
        for e in range(self.size):
            if mask >> e & 1:
                continue
            if all(mask >> c & 1 for c in self.lower_covers[e]) and not inc[e] & mask:
                out |= 1 << e
        return out

    def members(self, mask: int) -> list[NumberedSnake]:
        return [self.elements[i] for i in _bits(mask)]

    def hasse_dot(self) -> str:
        labels = [str(e) for e in self.elements]
        edges = [(c, e) for e in range(self.size) for c in self.lower_covers[e]]
        return to_dot("coral_pip", labels, edges, dashed=self.minimal_inconsistent,
                      directed=True)


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _canonical_key(e: NumberedSnake):
    return (e.snake.cells, -e.s)


def build_pip(m: int, n: int, check: bool = False) -> CoralPip:
    if m < 0 or n < 0:
        raise DomainError("need m >= 0 and n >= 0")
    snakes = enumerate_snakes(m, n)
    elems = sorted(
        (NumberedSnake(sn, s) for sn in snakes for s in range(max_label(sn, n) + 1)),
        key=_canonical_key,
    )
    return pip_from_elements(m, n, elems, check=check)


def pip_from_elements(m: int, n: int, elems: list[NumberedSnake],
                      check: bool = False) -> CoralPip:
    index = {e: i for i, e in enumerate(elems)}
    N = len(elems)
    covers: list[list[int]] = [[] for _ in range(N)]
    for i, e in enumerate(elems):
        up = NumberedSnake(e.snake, e.s + 1)
        if up in index:
            covers[i].append(index[up])
        if e.snake.moves:
            shorter = NumberedSnake(CoralSnake(e.snake.moves[:-1]), e.s)
            if shorter in index:
                covers[i].append(index[shorter])
    below = [0] * N
    # elements sorted so that every lower cover precedes its cover? not by
    # canonical order; resolve with memoised recursion instead
    done = [False] * N

    def fill(i: int) -> int:
        if not done[i]:
            mask = 1 << i
            for c in covers[i]:
                mask |= fill(c)
            below[i] = mask
            done[i] = True
        return below[i]

    for i in range(N):
        fill(i)
    above = [0] * N
    for j in range(N):
        for i in _bits(below[j]):
            above[i] |= 1 << j

    def incomparable_snakes(i: int, j: int) -> bool:
        a, b = elems[i].snake, elems[j].snake
        return not (a.is_prefix_of(b) or b.is_prefix_of(a))

    minimal = []
    for i in range(N):
        for j in range(i + 1, N):
            if not incomparable_snakes(i, j):
                continue
            if any(incomparable_snakes(c, j) for c in covers[i]):
                continue
            if any(incomparable_snakes(i, c) for c in covers[j]):
                continue
            minimal.append((i, j))
    pip = CoralPip(m, n, elems, below, above, covers, minimal)
    if check:
        pip.check_axioms()
    return pip


def consistent_ideals(pip: CoralPip) -> list[OrderIdeal]:
    """All consistent order ideals, BFS by size from the empty ideal."""
    out = [0]
    frontier = [0]
    while frontier:
        nxt: dict[int, None] = {}
        for mask in frontier:
            add = pip.addable(mask)
            for e in _bits(add):
                nxt.setdefault(mask | 1 << e, None)
        frontier = list(nxt)
        out.extend(frontier)
    return out


def ideal_graph(pip: CoralPip, ideals: list[OrderIdeal]) -> list[list[int]]:
    """Adjacency of ideals differing by one element."""
    index = {I: k for k, I in enumerate(ideals)}
    adj: list[list[int]] = [[] for _ in ideals]
    for k, I in enumerate(ideals):
        for e in _bits(pip.addable(I)):
            j = index[I | 1 << e]
            adj[k].append(j)
            adj[j].append(k)
    return [sorted(a) for a in adj]


def low_inconsistent_pair(pip: CoralPip) -> tuple[NumberedSnake, NumberedSnake]:
    """a = (vertical domino, n-2), b = (horizontal domino, n-3)."""
    if pip.m < 2 or pip.n < 3:
        raise TooSmall("low inconsistent pair needs m >= 2 and n >= 3")
    a = NumberedSnake(CoralSnake(("U",)), pip.n - 2)
    b = NumberedSnake(CoralSnake(("R",)), pip.n - 3)
    return a, b


@dataclass
class BottleneckPartition:
    sep: list[OrderIdeal]
    side_a: list[OrderIdeal]
    side_b: list[OrderIdeal]


def bottleneck_partition(pip: CoralPip, a: NumberedSnake, b: NumberedSnake,
                         ideals: list[OrderIdeal] | None = None) -> BottleneckPartition:
    ia, ib = pip.index(a), pip.index(b)
    if not pip.is_inconsistent(ia, ib):
        raise DomainError(f"{a} and {b} are not inconsistent")
    ideals = consistent_ideals(pip) if ideals is None else ideals
    part = BottleneckPartition([], [], [])
    for I in ideals:
        if I >> ia & 1:
            part.side_a.append(I)
        elif I >> ib & 1:
            part.side_b.append(I)
        else:
            part.sep.append(I)
    return part


@dataclass
class CubeComplex:
    """Rooted cube complex of a PIP: vertices are consistent ideals, cubes
    are pairs (I, L) with L a subset of the maximal elements of I."""

    pip: CoralPip
    vertices: list[OrderIdeal]
    cubes: list[tuple[OrderIdeal, int]]

    def cube_vertices(self, I: OrderIdeal, L: int) -> list[OrderIdeal]:
        bits = list(_bits(L))
        out = []
        for k in range(len(bits) + 1):
            for sub in combinations(bits, k):
                mask = I
                for e in sub:
                    mask &= ~(1 << e)
                out.append(mask)
        return out

    def skeleton(self) -> list[list[int]]:
        index = {I: k for k, I in enumerate(self.vertices)}
        adj: list[list[int]] = [[] for _ in self.vertices]
        for I, L in self.cubes:
            if L and not L & (L - 1):
                u, v = index[I], index[I & ~L]
                adj[u].append(v)
                adj[v].append(u)
        return [sorted(a) for a in adj]

    def dimension_counts(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for _, L in self.cubes:
            d = bin(L).count("1")
            out[d] = out.get(d, 0) + 1
        return out

    def has_cube(self, J: OrderIdeal, toggles: int) -> bool:
        """Is there a cube containing vertex J whose edges at J flip ``toggles``?"""
        I = J | toggles
        return self.pip.is_consistent_ideal(I) and toggles & ~self.pip.maximal(I) == 0

    def link_toggles(self, J: OrderIdeal) -> list[int]:
        rem = self.pip.maximal(J)
        add = self.pip.addable(J)
        return [1 << e for e in _bits(rem | add)]

    def link_is_flag(self, J: OrderIdeal) -> bool:
        """Every clique of the link's 1-skeleton spans a simplex (a cube at J)."""
        verts = self.link_toggles(J)
        edge = {
            (x, y): self.has_cube(J, x | y) for x, y in combinations(verts, 2)
        }
        for k in range(3, len(verts) + 1):
            for sub in combinations(verts, k):
                if all(edge[(x, y)] for x, y in combinations(sub, 2)):
                    T = 0
                    for x in sub:
                        T |= x
                    if not self.has_cube(J, T):
                        return False
        return True

    def skeleton_dot(self) -> str:
        labels = ["{" + ",".join(str(e) for e in self.pip.members(I)) + "}" for I in self.vertices]
        adj = self.skeleton()
        edges = [(u, v) for u in range(len(adj)) for v in adj[u] if u < v]
        return to_dot("cube_complex", labels, edges)


def build_cube_complex(pip: CoralPip, ideals: list[OrderIdeal] | None = None) -> CubeComplex:
    ideals = consistent_ideals(pip) if ideals is None else ideals
    cubes = []
    for I in ideals:
        mx = list(_bits(pip.maximal(I)))
        for k in range(len(mx) + 1):
            for sub in combinations(mx, k):
                L = 0
                for e in sub:
                    L |= 1 << e
                cubes.append((I, L))
    return CubeComplex(pip, ideals, cubes)
