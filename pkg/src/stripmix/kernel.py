"""Monotone paths, local moves, and the transition kernel graph S_{m,n}.

Paths are step strings over "E", "N", "S".  Canonical vertex order is
lexicographic with E < N < S, which is plain string order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Union

from .errors import DomainError, SeparationFailure
from .graphs import components, to_dot

_ROT = {"E": ("N", "S"), "N": ("E",), "S": ("E",)}


@dataclass(frozen=True)
class CornerSwitch:
    vertex: int  # swaps steps vertex and vertex+1 (1-indexed)

    def steps_involved(self) -> frozenset[int]:
        return frozenset((self.vertex, self.vertex + 1))

    def __str__(self) -> str:
        return f"switch@{self.vertex}"


@dataclass(frozen=True)
class EndFlip:
    target: str
    n: int

    def steps_involved(self) -> frozenset[int]:
        return frozenset((self.n,))

    def __str__(self) -> str:
        return f"flip->{self.target}"


Move = Union[CornerSwitch, EndFlip]


class VertexClass(str, Enum):
    SEPARATOR = "Separator"
    SIDE_A = "SideA"
    SIDE_B = "SideB"


def heights(steps: str) -> list[int]:
    h = [0]
    for s in steps:
        h.append(h[-1] + (s == "N") - (s == "S"))
    return h


def is_valid_path(steps: str, m: int) -> bool:
    if any(s not in "ENS" for s in steps):
        return False
    if "NS" in steps or "SN" in steps:
        return False
    return all(0 <= h <= m for h in heights(steps))


def enumerate_paths(m: int, n: int) -> list[str]:
    """All monotone paths of length n in the strip of height m, sorted."""
    if m < 0 or n < 0:
        raise DomainError("need m >= 0 and n >= 0")
    out: list[str] = []

    def grow(prefix: list[str], h: int):
        if len(prefix) == n:
            out.append("".join(prefix))
            return
        last = prefix[-1] if prefix else "E"
        for s in "ENS":
            if s == "N" and (h == m or last == "S"):
                continue
            if s == "S" and (h == 0 or last == "N"):
                continue
            prefix.append(s)
            grow(prefix, h + (s == "N") - (s == "S"))
            prefix.pop()

    grow([], 0)
    return out


def apply_move(steps: str, move: Move) -> str:
    if isinstance(move, CornerSwitch):
        i = move.vertex - 1
        return steps[:i] + steps[i + 1] + steps[i] + steps[i + 2:]
    return steps[:-1] + move.target


def available_moves(steps: str, m: int) -> list[tuple[Move, str]]:
    """Moves whose result is again a valid path, with that result."""
    n = len(steps)
    out: list[tuple[Move, str]] = []
    for v in range(1, n):
        if steps[v - 1] != steps[v]:
            mv = CornerSwitch(v)
            y = apply_move(steps, mv)
            if is_valid_path(y, m):
                out.append((mv, y))
    if n:
        for t in _ROT[steps[-1]]:
            mv = EndFlip(t, n)
            y = apply_move(steps, mv)
            if is_valid_path(y, m):
                out.append((mv, y))
    return out


def compatible(a: Move, b: Move, steps: str | None = None, m: int | None = None) -> bool:
    """No step is involved in both moves and, when the path is given, doing
    both still gives a valid path.

    The second condition matters: on "NEES" the switches at vertices 1 and 3
    share no step, but together they produce the retrace "ENSE".  Validity
    only looks at single heights and adjacent step pairs, so pairwise checks
    are enough for any number of moves.
    """
    if a.steps_involved() & b.steps_involved():
        return False
    if steps is None:
        return True
    if m is None:
        raise DomainError("compatibility on a path needs the strip height")
    return is_valid_path(apply_move(apply_move(steps, a), b), m)


def classify_vertex(steps: str) -> VertexClass:
    vertical = [s for s in steps if s != "E"]
    if len(vertical) <= 1:
        return VertexClass.SEPARATOR
    return VertexClass.SIDE_B if vertical[1] == "S" else VertexClass.SIDE_A


@dataclass
class KernelGraph:
    m: int
    n: int
    vertices: list[str]
    adjacency: list[list[tuple[int, Move]]]
    partition: list[VertexClass] | None = None
    _index: dict[str, int] = field(default_factory=dict, repr=False)

    def index(self, steps: str) -> int:
        return self._index[steps]

    def neighbors(self) -> list[list[int]]:
        return [[v for v, _ in row] for row in self.adjacency]

    def degree(self, u: int) -> int:
        return len(self.adjacency[u])

    @property
    def edge_count(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    @property
    def root(self) -> int:
        return self._index["E" * self.n]

    def class_members(self, cls: VertexClass) -> list[int]:
        if self.partition is None:
            raise DomainError("partition needs m >= 2 and n >= 3")
        return [u for u, c in enumerate(self.partition) if c == cls]

    def to_dot(self) -> str:
        attrs = {}
        if self.partition is not None:
            attrs = {u: {"class": c.value} for u, c in enumerate(self.partition)}
        edges = [(u, v) for u, row in enumerate(self.adjacency) for v, _ in row if u < v]
        return to_dot(f"S_{self.m}_{self.n}", self.vertices, edges, attrs)

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "vertices": [
                {
                    "id": u,
                    "steps": p,
                    "class": None if self.partition is None else self.partition[u].value,
                }
                for u, p in enumerate(self.vertices)
            ],
            "edges": [
                {"u": u, "v": v, "move": str(mv)}
                for u, row in enumerate(self.adjacency)
                for v, mv in row
                if u < v
            ],
        }


def build_kernel_graph(m: int, n: int) -> KernelGraph:
    paths = enumerate_paths(m, n)
    index = {p: k for k, p in enumerate(paths)}
    adj = [[(index[y], mv) for mv, y in available_moves(p, m)] for p in paths]
    partition = None
    if m >= 2 and n >= 3:
        partition = [classify_vertex(p) for p in paths]
    return KernelGraph(m, n, paths, adj, partition, index)


@dataclass
class BottleneckReport:
    sep_size: int
    component_sizes: list[int]
    side_a: int
    side_b: int

    def summary(self) -> str:
        return f"sep={self.sep_size} |A|={self.side_a} |B|={self.side_b}"


def verify_bottleneck(kernel: KernelGraph) -> BottleneckReport:
    """Delete the separator class and check the rest splits into SideA, SideB."""
    if kernel.partition is None:
        raise DomainError("bottleneck needs m >= 2 and n >= 3")
    sep = kernel.class_members(VertexClass.SEPARATOR)
    a = kernel.class_members(VertexClass.SIDE_A)
    b = kernel.class_members(VertexClass.SIDE_B)
    rest = set(a) | set(b)
    comps = components(kernel.neighbors(), rest)
    if len(sep) != kernel.n + 1:
        raise SeparationFailure(f"separator has {len(sep)} vertices, expected {kernel.n + 1}")
    if sorted(map(tuple, comps)) != sorted([tuple(a), tuple(b)]):
        raise SeparationFailure(
            f"components {[len(c) for c in comps]} do not match classes {len(a)}/{len(b)}"
        )
    return BottleneckReport(len(sep), sorted(len(c) for c in comps), len(a), len(b))


def render_path(steps: str, m: int) -> str:
    """ASCII drawing, one text row per strip level (top level first)."""
    hs = heights(steps)
    cols = steps.count("E") + 1
    grid = [[" "] * (2 * cols - 1) for _ in range(m + 1)]
    x = 0
    grid[m - hs[0]][0] = "o"
    for k, s in enumerate(steps):
        if s == "E":
            grid[m - hs[k]][2 * x + 1] = "-"
            x += 1
        grid[m - hs[k + 1]][2 * x] = "o" if s == "E" else ("^" if s == "N" else "v")
    grid[m - hs[0]][0] = "*"
    return "\n".join("".join(row).rstrip() or "." for row in grid)


def iter_cube_corners(kernel: KernelGraph, u: int, k: int) -> Iterator[tuple[tuple[Move, ...], set[str]]]:
    """For every k-set of pairwise compatible moves at vertex u, the set of
    paths reached by applying every subset of those moves."""
    from itertools import combinations

    steps = kernel.vertices[u]
    moves = [mv for _, mv in kernel.adjacency[u]]
    for combo in combinations(moves, k):
        if not all(compatible(a, b, steps, kernel.m) for a, b in combinations(combo, 2)):
            continue
        reached = set()
        for r in range(k + 1):
            for sub in combinations(combo, r):
                y = steps
                for mv in sub:
                    y = apply_move(y, mv)
                reached.add(y)
        yield combo, reached


def kernel_json(kernel: KernelGraph) -> str:
    return json.dumps(kernel.to_json(), indent=1)
