"""Small directed-graph kernels on ``0..n-1`` adjacency lists.

Graphs are plain sequences of successor lists so the chain, pair and shift
modules can share them without conversion.
"""

from __future__ import annotations

from collections import deque
from math import gcd
from typing import Iterable, Sequence

import networkx as nx

Adjacency = Sequence[Sequence[int]]


def _digraph(succ: Adjacency, nodes: Iterable[int] | None) -> nx.DiGraph:
    g = nx.DiGraph()
    if nodes is None:
        g.add_nodes_from(range(len(succ)))
        g.add_edges_from((v, w) for v, ws in enumerate(succ) for w in ws)
    else:
        keep = set(nodes)
        g.add_nodes_from(keep)
        g.add_edges_from((v, w) for v in keep for w in succ[v] if w in keep)
    return g


def strongly_connected_components(succ: Adjacency,
                                  nodes: Iterable[int] | None = None) -> list[list[int]]:
    """SCCs of the graph (or of the subgraph induced on ``nodes``), each sorted.

    Components are listed by their lowest vertex.
    """
    comps = [sorted(c) for c in nx.strongly_connected_components(_digraph(succ, nodes))]
    comps.sort(key=lambda c: c[0])
    return comps


def has_cycle_through(succ: Adjacency, component: Sequence[int]) -> bool:
    """True if an SCC carries at least one directed cycle."""
    if len(component) > 1:
        return True
    v = component[0]
    return v in succ[v]


def bfs_levels(succ: Adjacency, base: int, members: set[int]) -> dict[int, int]:
    level = {base: 0}
    queue = deque([base])
    while queue:
        v = queue.popleft()
        for w in succ[v]:
            if w in members and w not in level:
                level[w] = level[v] + 1
                queue.append(w)
    return level


def is_strongly_connected(succ: Adjacency, members: Iterable[int]) -> bool:
    members = set(members)
    if not members:
        return False
    comps = strongly_connected_components(succ, members)
    return len(comps) == 1


def period(succ: Adjacency, members: Iterable[int]) -> int:
    """Graph period (gcd of cycle lengths) of a strongly connected vertex set.

    Uses BFS levels from the lowest vertex: the period is the gcd of
    ``level[u] + 1 - level[v]`` over internal edges ``u -> v``.  Returns 0 when
    the set carries no cycle.
    """
    members = set(members)
    base = min(members)
    level = bfs_levels(succ, base, members)
    g = 0
    for u in members:
        for v in succ[u]:
            if v in members:
                g = gcd(g, abs(level[u] + 1 - level[v]))
    return g


def cyclic_classes(succ: Adjacency, members: Iterable[int]) -> tuple[int, list[frozenset[int]]]:
    """Period ``m`` and the classes ``C_0..C_{m-1}`` (BFS level mod m from the lowest vertex)."""
    members = set(members)
    m = period(succ, members)
    if m == 0:
        return 0, []
    level = bfs_levels(succ, min(members), members)
    classes: list[set[int]] = [set() for _ in range(m)]
    for v in members:
        classes[level[v] % m].add(v)
    return m, [frozenset(c) for c in classes]
