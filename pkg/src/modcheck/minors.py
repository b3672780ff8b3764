"""Exact minor containment, obstruction-set membership, Hadwiger number.

The search is bag-based: a minor model of H in G is a family of disjoint
connected vertex sets of G, one per vertex of H, with an edge of G between
every pair of bags that are adjacent in H.  Candidates for a bag are the
connected subsets of the unused vertices, tried in deterministic order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .core import Graph, LimitExceeded, graph, parse_edge_list

DEFAULT_MINOR_LIMIT = 8


def complete_graph(n: int) -> Graph:
    return graph(range(n), itertools.combinations(range(n), 2))


def complete_bipartite(a: int, b: int) -> Graph:
    return graph(range(a + b), ((i, a + j) for i in range(a) for j in range(b)))


def contract_edge(g: Graph, edge: tuple[int, int]) -> Graph:
    """Contract an edge into a fresh vertex adjacent to the union of endpoints'
    neighbors; the fresh vertex reuses the smaller endpoint id."""
    u, v = edge
    if not g.has_edge(u, v):
        raise ValueError(f"edge ({u},{v}) not in graph")
    merged = min(u, v)
    other = max(u, v)
    edges = set()
    for a, b in g.edge_pairs():
        a = merged if a == other else a
        b = merged if b == other else b
        if a != b:
            edges.add(tuple(sorted((a, b))))
    return graph(g.vertices - {other}, edges)


def _connected_subsets(adj, pool: frozenset[int], max_size: int):
    """Connected subsets of pool, each yielded once, smallest-first order."""
    out = []
    for root in sorted(pool):
        # subsets whose minimum vertex is root
        grow = [(frozenset([root]), frozenset(u for u in adj[root] if u in pool and u > root))]
        while grow:
            current, frontier = grow.pop()
            out.append(current)
            if len(current) == max_size:
                continue
            frontier = sorted(frontier)
            for idx, nxt in enumerate(frontier):
                newset = current | {nxt}
                newfrontier = frozenset(frontier[idx + 1:]) | frozenset(
                    u for u in adj[nxt] if u in pool and u > root and u not in newset
                )
                grow.append((newset, newfrontier))
    return sorted(out, key=lambda s: (len(s), sorted(s)))


def is_minor(
    h: Graph,
    g: Graph,
    limit: int = DEFAULT_MINOR_LIMIT,
    witness: bool = False,
):
    """Exact test for h being a minor of g, optionally with the bag map."""
    if len(h.vertices) > limit:
        raise LimitExceeded(f"pattern larger than the minor-search limit {limit}")

    def fail():
        return (False, None) if witness else False

    hv = sorted(h.vertices, key=lambda v: (-len(h.adj[v]), v))
    if len(h.vertices) > len(g.vertices) or len(h.edges) > len(g.edges):
        return fail()
    if not h.vertices:
        return (True, {}) if witness else True

    adj = g.adj
    n_h = len(hv)
    bags: dict[int, frozenset[int]] = {}

    def edge_between(a: frozenset[int], b: frozenset[int]) -> bool:
        return any((u in adj[v]) for v in a for u in b)

    def place(i: int, used: frozenset[int]) -> bool:
        if i == n_h:
            return True
        v = hv[i]
        room = len(g.vertices) - len(used) - (n_h - i - 1)
        pool = g.vertices - used
        for bag in _connected_subsets(adj, pool, max_size=room):
            ok = True
            for j in range(i):
                w = hv[j]
                if h.has_edge(v, w) and not edge_between(bag, bags[w]):
                    ok = False
                    break
            if not ok:
                continue
            bags[v] = bag
            if place(i + 1, used | bag):
                return True
            del bags[v]
        return False

    found = place(0, frozenset())
    if witness:
        return (found, dict(bags) if found else None)
    return found


@dataclass(frozen=True)
class ObstructionSet:
    """Finite forbidden-minor list with a declared clique-exclusion bound.

    The bound asserts that every graph avoiding all listed minors also avoids
    the complete graph on ``bound`` vertices.  That holds exactly when some
    member is a minor of that complete graph (necessity: take the complete
    graph itself; sufficiency: minor transitivity), which is what gets
    validated.  When omitted the bound defaults to the largest member size.
    """

    graphs: tuple[Graph, ...]
    bound: int = 0
    name: str = ""

    def __post_init__(self):
        if not self.graphs:
            raise ValueError("an obstruction set must be non-empty")
        default = max(len(g.vertices) for g in self.graphs)
        bound = self.bound or default
        sound = any(
            is_minor(member, complete_graph(bound), limit=max(8, len(member.vertices)))
            for member in self.graphs
        )
        if not sound:
            raise ValueError(
                f"declared clique bound {bound} unsound: no member is a minor of K_{bound}"
            )
        object.__setattr__(self, "bound", bound)

    def excludes(self, g: Graph, limit: int = DEFAULT_MINOR_LIMIT) -> bool:
        """g avoids every member as a minor."""
        key = (frozenset(g.vertices), frozenset(g.edges))
        cached = _EXCLUSION_CACHE.get((id_key(self), key))
        if cached is not None:
            return cached
        result = not any(is_minor(member, g, limit=limit) for member in self.graphs)
        _EXCLUSION_CACHE[(id_key(self), key)] = result
        return result


_EXCLUSION_CACHE: dict = {}


def id_key(obstruction: ObstructionSet) -> tuple:
    return (
        obstruction.name,
        tuple((frozenset(m.vertices), frozenset(m.edges)) for m in obstruction.graphs),
    )


def excl_membership(g: Graph, obstruction: ObstructionSet, limit: int = DEFAULT_MINOR_LIMIT) -> bool:
    return obstruction.excludes(g, limit=limit)


def hadwiger_number(g: Graph, limit: int = DEFAULT_MINOR_LIMIT + 2) -> int:
    """Minimum k such that the complete graph on k vertices is not a minor of g."""
    k = 1
    while True:
        if k - 1 > limit:
            raise LimitExceeded(f"Hadwiger search exceeded the limit {limit}")
        if not is_minor(complete_graph(k), g, limit=max(k, DEFAULT_MINOR_LIMIT)):
            return k
        k += 1


def clique_obstruction(k: int) -> ObstructionSet:
    return ObstructionSet((complete_graph(k),), bound=k, name=f"K{k}")


PLANAR_OBSTRUCTIONS = ObstructionSet(
    (complete_graph(5), complete_bipartite(3, 3)), bound=5, name="planar"
)


BUILTIN_OBSTRUCTIONS = {
    "K33": complete_bipartite(3, 3),
}


def named_obstruction_graph(name: str) -> Graph:
    """K<k> builds a clique; K33 is the 3,3 biclique."""
    if name in BUILTIN_OBSTRUCTIONS:
        return BUILTIN_OBSTRUCTIONS[name]
    if name.startswith("K") and name[1:].isdigit():
        return complete_graph(int(name[1:]))
    raise ValueError(f"unknown obstruction graph {name!r}")


def parse_obstruction_bundle(text: str) -> dict[str, ObstructionSet]:
    """Named obstruction sets from an edge-list bundle.

    Sections begin with ``set <name> [bound]``; inside a section, ``graph``
    lines start a member and plain ``u v`` lines are its edges (``n <k>``
    declares isolated vertices).  Member names from ``use K5``-style lines
    pull in built-ins.
    """
    sets: dict[str, ObstructionSet] = {}
    name = None
    bound = 0
    members: list[Graph] = []
    chunk: list[str] = []

    def close_member():
        if chunk:
            members.append(parse_edge_list("\n".join(chunk)))
            chunk.clear()

    def close_set():
        nonlocal members, name, bound
        close_member()
        if name is not None:
            sets[name] = ObstructionSet(tuple(members), bound=bound, name=name)
        members = []
        name, bound = None, 0

    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "set":
            close_set()
            name = parts[1]
            bound = int(parts[2]) if len(parts) > 2 else 0
        elif parts[0] == "graph":
            close_member()
        elif parts[0] == "use":
            close_member()
            members.append(named_obstruction_graph(parts[1]))
        else:
            chunk.append(line)
    close_set()
    return sets
