"""Small graph helpers shared by the coral PIP and kernel modules."""

from __future__ import annotations

from collections import deque
from typing import Iterable, Mapping, Sequence

import networkx as nx


def bfs_distances(adj: Sequence[Sequence[int]], root: int) -> list[int]:
    dist = [-1] * len(adj)
    dist[root] = 0
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def components(adj: Sequence[Sequence[int]], keep: Iterable[int] | None = None) -> list[list[int]]:
    """Connected components of the subgraph induced on ``keep`` (default: all)."""
    alive = set(range(len(adj))) if keep is None else set(keep)
    seen: set[int] = set()
    comps = []
    for s in sorted(alive):
        if s in seen:
            continue
        comp = [s]
        seen.add(s)
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if v in alive and v not in seen:
                    seen.add(v)
                    comp.append(v)
                    queue.append(v)
        comps.append(sorted(comp))
    return comps


def edge_count(adj: Sequence[Sequence[int]]) -> int:
    return sum(len(a) for a in adj) // 2


def _refined_colors(adj: Sequence[Sequence[int]], root: int) -> list:
    # color refinement seeded by distance from the root
    colors = bfs_distances(adj, root)
    for _ in range(len(adj)):
        sigs = [(colors[u], tuple(sorted(colors[v] for v in adj[u]))) for u in range(len(adj))]
        palette = {s: k for k, s in enumerate(sorted(set(sigs)))}
        new = [palette[s] for s in sigs]
        if len(set(new)) == len(set(colors)):
            return sigs
        colors = new
    return sigs


def rooted_isomorphic(adj1: Sequence[Sequence[int]], root1: int,
                      adj2: Sequence[Sequence[int]], root2: int) -> bool:
    """Isomorphism of undirected graphs that maps root1 to root2."""
    if len(adj1) != len(adj2) or edge_count(adj1) != edge_count(adj2):
        return False
    c1 = _refined_colors(adj1, root1)
    c2 = _refined_colors(adj2, root2)
    if sorted(c1) != sorted(c2):
        return False
    g1, g2 = nx.Graph(), nx.Graph()
    for g, adj, col in ((g1, adj1, c1), (g2, adj2, c2)):
        for u in range(len(adj)):
            g.add_node(u, c=col[u])
            for v in adj[u]:
                if u < v:
                    g.add_edge(u, v)
    g1.nodes[root1]["root"] = g2.nodes[root2]["root"] = True
    return nx.is_isomorphic(
        g1, g2, node_match=lambda a, b: a["c"] == b["c"] and a.get("root") == b.get("root")
    )


def to_dot(name: str, labels: Sequence[str], edges: Iterable[tuple[int, int]],
           node_attrs: Mapping[int, Mapping[str, str]] | None = None,
           dashed: Iterable[tuple[int, int]] = (), directed: bool = False) -> str:
    """Render a graph as DOT text.  Node ids are the indices."""
    node_attrs = node_attrs or {}
    arrow = "->" if directed else "--"
    lines = [f"{'digraph' if directed else 'graph'} {name} {{"]
    for i, lab in enumerate(labels):
        attrs = {"label": lab, **node_attrs.get(i, {})}
        body = ", ".join(f'{k}="{v}"' for k, v in attrs.items())
        lines.append(f"  {i} [{body}];")
    for u, v in edges:
        lines.append(f"  {u} {arrow} {v};")
    for u, v in dashed:
        lines.append(f'  {u} {arrow} {v} [style="dashed", dir="none"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
