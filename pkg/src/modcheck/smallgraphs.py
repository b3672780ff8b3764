"""Small-graph corpora and named graphs for exhaustive desk-scale checks.

Enumeration up to isomorphism walks edge bitmasks in increasing order and
marks the whole permutation orbit of each representative, so each class is
visited exactly once; cheap and exact for n <= 7.
"""

from __future__ import annotations

import itertools
import random
from functools import lru_cache
from typing import Iterator

from .core import Graph, graph


def path_graph(n: int) -> Graph:
    return graph(range(n), zip(range(n - 1), range(1, n)))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycles need at least 3 vertices")
    return graph(range(n), [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    return graph(range(n), itertools.combinations(range(n), 2))


def complete_bipartite(a: int, b: int) -> Graph:
    return graph(range(a + b), ((i, a + j) for i in range(a) for j in range(b)))


def star_graph(leaves: int) -> Graph:
    return graph(range(leaves + 1), ((0, i) for i in range(1, leaves + 1)))


def grid_graph(rows: int, cols: int) -> Graph:
    def vid(r, c):
        return r * cols + c

    edges = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                edges.append((vid(r, c), vid(r, c + 1)))
            if r + 1 < rows:
                edges.append((vid(r, c), vid(r + 1, c)))
    return graph(range(rows * cols), edges)


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return graph(range(10), outer + spokes + inner)


def random_graph(n: int, p: float, rng: random.Random) -> Graph:
    edges = [e for e in itertools.combinations(range(n), 2) if rng.random() < p]
    return graph(range(n), edges)


def _edge_positions(n: int) -> list[tuple[int, int]]:
    return list(itertools.combinations(range(n), 2))


@lru_cache(maxsize=None)
def _representative_masks(n: int) -> tuple[int, ...]:
    positions = _edge_positions(n)
    index = {e: i for i, e in enumerate(positions)}
    tables = []
    for perm in itertools.permutations(range(n)):
        tables.append(
            tuple(index[tuple(sorted((perm[a], perm[b])))] for a, b in positions)
        )
    seen = bytearray(1 << len(positions))
    reps = []
    for mask in range(1 << len(positions)):
        if seen[mask]:
            continue
        reps.append(mask)
        for table in tables:
            image = 0
            m = mask
            while m:
                bit = (m & -m).bit_length() - 1
                m &= m - 1
                image |= 1 << table[bit]
            seen[image] = 1
    return tuple(reps)


def _graph_from_mask(n: int, mask: int) -> Graph:
    positions = _edge_positions(n)
    edges = [positions[i] for i in range(len(positions)) if mask >> i & 1]
    return graph(range(n), edges)


def all_graphs(n: int) -> list[Graph]:
    """All graphs on exactly n vertices, one per isomorphism class."""
    if n == 0:
        return [graph((), ())]
    if n > 7:
        raise ValueError("exhaustive enumeration is supported for n <= 7")
    return [_graph_from_mask(n, mask) for mask in _representative_masks(n)]


def all_graphs_upto(n: int, start: int = 1) -> Iterator[Graph]:
    for k in range(start, n + 1):
        yield from all_graphs(k)


def _is_connected(g: Graph) -> bool:
    if not g.vertices:
        return False
    start = min(g.vertices)
    comp = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for u in g.adj[v]:
            if u not in comp:
                comp.add(u)
                stack.append(u)
    return comp == set(g.vertices)


def connected_graphs(n: int) -> list[Graph]:
    return [g for g in all_graphs(n) if _is_connected(g)]


def connected_graphs_upto(n: int, start: int = 1) -> Iterator[Graph]:
    for k in range(start, n + 1):
        yield from connected_graphs(k)
