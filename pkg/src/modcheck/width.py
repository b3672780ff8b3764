"""Exact treewidth and treedepth, tree-decomposition checking, brambles.

Treewidth runs a dynamic program over vertex subsets (elimination orders),
after peeling simplicial vertices, which is exact.  Brambles certify the
lower bound side: the maximum bramble order is computed by a small CSP that
assigns to every candidate hitting set a component of the graph it leaves
behind, which loses no generality because bramble elements may always be
grown to full components without breaking pairwise touching.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .core import Graph, LimitExceeded, Structure, components_avoiding, gaifman_graph, graph

DEFAULT_TREEWIDTH_LIMIT = 20
DEFAULT_BRAMBLE_LIMIT = 7


@dataclass(frozen=True)
class TreeDecomposition:
    """Bags indexed 0..k-1 plus tree edges between bag indices."""

    bags: tuple[frozenset[int], ...]
    tree_edges: tuple[tuple[int, int], ...]

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def to_text(self) -> str:
        n = len({v for bag in self.bags for v in bag})
        lines = [f"s td {len(self.bags)} {self.width + 1} {n}"]
        for i, bag in enumerate(self.bags, start=1):
            lines.append("b " + " ".join([str(i)] + [str(v) for v in sorted(bag)]))
        for a, b in self.tree_edges:
            lines.append(f"{a + 1} {b + 1}")
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_text(text: str) -> "TreeDecomposition":
        bags: dict[int, frozenset[int]] = {}
        edges = []
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line or line.startswith("c"):
                continue
            parts = line.split()
            if parts[0] == "s":
                continue
            if parts[0] == "b":
                bags[int(parts[1]) - 1] = frozenset(int(x) for x in parts[2:])
            else:
                edges.append((int(parts[0]) - 1, int(parts[1]) - 1))
        ordered = tuple(bags[i] for i in range(len(bags)))
        return TreeDecomposition(ordered, tuple(edges))


def validate_tree_decomposition(g: Graph, td: TreeDecomposition) -> tuple[bool, list[str]]:
    """Check the three conditions; returns (ok, list of violations)."""
    issues = []
    nodes = range(len(td.bags))
    tree_adj = {i: set() for i in nodes}
    for a, b in td.tree_edges:
        tree_adj[a].add(b)
        tree_adj[b].add(a)
    if td.bags and len(td.tree_edges) != len(td.bags) - 1:
        issues.append("tree must have exactly bags-1 edges")
    else:
        seen = set()
        stack = [0] if td.bags else []
        while stack:
            t = stack.pop()
            if t in seen:
                continue
            seen.add(t)
            stack.extend(tree_adj[t])
        if td.bags and len(seen) != len(td.bags):
            issues.append("tree is disconnected")
    covered = set().union(*td.bags) if td.bags else set()
    if covered != set(g.vertices):
        issues.append("bags do not cover the vertex set")
    for u, v in g.edge_pairs():
        if not any(u in bag and v in bag for bag in td.bags):
            issues.append(f"edge ({u},{v}) is in no bag")
    for v in g.vertices:
        holding = [i for i in nodes if v in td.bags[i]]
        if not holding:
            continue
        comp = {holding[0]}
        stack = [holding[0]]
        holding_set = set(holding)
        while stack:
            t = stack.pop()
            for u in tree_adj[t]:
                if u in holding_set and u not in comp:
                    comp.add(u)
                    stack.append(u)
        if comp != holding_set:
            issues.append(f"bags holding {v} are disconnected in the tree")
    return (not issues, issues)


def _simplicial_peel(adj: dict[int, set[int]]):
    """Remove vertices whose neighborhood is a clique; returns peel order."""
    peeled = []
    changed = True
    while changed:
        changed = False
        for v in sorted(adj):
            nb = adj[v]
            if all(u in adj[w] for u, w in itertools.combinations(sorted(nb), 2)):
                peeled.append((v, frozenset(nb)))
                for u in nb:
                    adj[u].discard(v)
                del adj[v]
                changed = True
                break
    return peeled


def treewidth_exact(
    g: Graph, limit: int = DEFAULT_TREEWIDTH_LIMIT, with_decomposition: bool = True
):
    """Exact treewidth by subset DP over elimination orders.

    Simplicial vertices are peeled first (their bag is forced), then the DP
    computes, for every subset S of the残 remaining vertices, the best
    possible maximum elimination degree when S is eliminated first.
    """
    if not g.vertices:
        td = TreeDecomposition((), ())
        return (-1, td) if with_decomposition else -1

    adj0 = {v: set(g.adj[v]) for v in g.vertices}
    peeled = _simplicial_peel(adj0)
    base = max((len(nb) for _, nb in peeled), default=0)

    rest = sorted(adj0)
    if len(rest) > limit:
        raise LimitExceeded(f"{len(rest)} vertices after peeling exceeds the limit {limit}")

    order_rest: list[int] = []
    if rest:
        index = {v: i for i, v in enumerate(rest)}
        nbr_mask = [0] * len(rest)
        for v in rest:
            for u in adj0[v]:
                nbr_mask[index[v]] |= 1 << index[u]
        full = (1 << len(rest)) - 1

        def elim_degree(done_mask: int, i: int) -> int:
            # neighbors of i reachable through eliminated vertices
            comp = 0
            frontier = (1 << i)
            seen = frontier
            reach = 0
            while frontier:
                j = (frontier & -frontier).bit_length() - 1
                frontier &= frontier - 1
                nb = nbr_mask[j]
                reach |= nb & ~(1 << i)
                inside = nb & done_mask & ~seen
                seen |= inside
                frontier |= inside
            return bin(reach & ~done_mask & ~(1 << i)).count("1")

        best = {0: -1}
        choice: dict[int, int] = {}
        for mask in range(1, full + 1):
            value = len(rest) + 1
            pick = -1
            m = mask
            while m:
                i = (m & -m).bit_length() - 1
                m &= m - 1
                prev = mask & ~(1 << i)
                cand = max(best[prev], elim_degree(prev, i))
                if cand < value:
                    value = cand
                    pick = i
            best[mask] = value
            choice[mask] = pick
        mask = full
        picks = []
        while mask:
            i = choice[mask]
            picks.append(rest[i])
            mask &= ~(1 << i)
        order_rest = list(reversed(picks))
        width = max(base, best[full])
    else:
        width = base

    if not with_decomposition:
        return width

    # Rebuild a decomposition from the total elimination order.
    order = [v for v, _ in peeled] + order_rest
    td = _decomposition_from_order(g, order)
    return td.width, td


def _decomposition_from_order(g: Graph, order: list[int]) -> TreeDecomposition:
    """Standard fill-in construction: one bag per eliminated vertex."""
    if not order:
        return TreeDecomposition((frozenset(),), ())
    adj = {v: set(g.adj[v]) for v in g.vertices}
    position = {v: i for i, v in enumerate(order)}
    bags: list[frozenset[int]] = []
    later_nb: list[frozenset[int]] = []
    for v in order:
        nb = frozenset(adj[v])
        bags.append(frozenset([v]) | nb)
        later_nb.append(nb)
        for a, b in itertools.combinations(sorted(nb), 2):
            adj[a].add(b)
            adj[b].add(a)
        for u in nb:
            adj[u].discard(v)
        del adj[v]
    edges = []
    for i, nb in enumerate(later_nb):
        if nb:
            j = position[min(nb, key=lambda u: position[u])]
            edges.append((i, j))
        elif i + 1 < len(order):
            # keep the tree connected across graph components
            edges.append((i, i + 1))
    return TreeDecomposition(tuple(bags), tuple(edges))


def treewidth_of_structure(structure: Structure, limit: int = DEFAULT_TREEWIDTH_LIMIT) -> int:
    return treewidth_exact(gaifman_graph(structure), limit=limit, with_decomposition=False)


# ---------------------------------------------------------------------------
# Brambles


@dataclass(frozen=True)
class Bramble:
    sets: tuple[frozenset[int], ...]


def _touch(g: Graph, a: frozenset[int], b: frozenset[int]) -> bool:
    if a & b:
        return True
    return any(u in g.adj[v] for v in a for u in b)


def _is_connected(g: Graph, s: frozenset[int]) -> bool:
    if not s:
        return False
    start = min(s)
    comp = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for u in g.adj[v]:
            if u in s and u not in comp:
                comp.add(u)
                stack.append(u)
    return comp == s


def validate_bramble(g: Graph, bramble: Bramble) -> None:
    for s in bramble.sets:
        if not s <= g.vertices:
            raise ValueError("bramble set leaves the graph")
        if not _is_connected(g, s):
            raise ValueError(f"bramble set {sorted(s)} is not connected")
    for a, b in itertools.combinations(bramble.sets, 2):
        if not _touch(g, a, b):
            raise ValueError(f"bramble sets {sorted(a)} and {sorted(b)} do not touch")


def bramble_order(g: Graph, bramble: Bramble) -> int:
    """Minimum size of a vertex set meeting every bramble element."""
    validate_bramble(g, bramble)
    if not bramble.sets:
        return 0
    vertices = sorted(set().union(*bramble.sets))
    for k in range(0, len(vertices) + 1):
        for hitting in itertools.combinations(vertices, k):
            hs = set(hitting)
            if all(hs & s for s in bramble.sets):
                return k
    return len(vertices)


def max_bramble_order(g: Graph, limit: int = DEFAULT_BRAMBLE_LIMIT) -> int:
    """Maximum order over all brambles of g (exhaustive, exact).

    A bramble has order >= k exactly when every (k-1)-subset S of V can be
    assigned a connected component of g - S such that all assigned components
    pairwise touch: growing each unhit bramble element to the component
    containing it preserves connectivity, avoidance, and touching.  The
    assignment search is a tiny CSP.
    """
    if len(g.vertices) > limit:
        raise LimitExceeded(f"graph larger than the bramble limit {limit}")
    if not g.vertices:
        return 0
    best = 1
    for k in range(2, len(g.vertices) + 2):
        if _bramble_order_feasible(g, k):
            best = k
        else:
            break
    return best


def _bramble_order_feasible(g: Graph, k: int) -> bool:
    vertices = sorted(g.vertices)
    domains = []
    for s in itertools.combinations(vertices, k - 1):
        comps = components_avoiding(g, frozenset(s))
        if not comps:
            return False
        domains.append(comps)
    domains.sort(key=len)

    def assign(i: int, chosen: list[frozenset[int]]) -> bool:
        if i == len(domains):
            return True
        for comp in domains[i]:
            if all(_touch(g, comp, other) for other in chosen):
                if assign(i + 1, chosen + [comp]):
                    return True
        return False

    return assign(0, [])


def enumerate_brambles_bruteforce(g: Graph):
    """Every maximal family of pairwise-touching connected sets (oracle use).

    Exponential in the number of connected sets; intended for n <= 5 where it
    cross-checks max_bramble_order.
    """
    conn = [s for s in _all_connected_sets(g)]
    compatible = {
        i: {j for j in range(len(conn)) if j != i and _touch(g, conn[i], conn[j])}
        for i in range(len(conn))
    }

    # Bron-Kerbosch over the compatibility graph.
    def expand(r: set[int], p: set[int], x: set[int]):
        if not p and not x:
            yield Bramble(tuple(conn[i] for i in sorted(r)))
            return
        pivot = max(p | x, key=lambda i: len(compatible[i] & p))
        for i in sorted(p - compatible[pivot]):
            yield from expand(r | {i}, p & compatible[i], x & compatible[i])
            p.remove(i)
            x.add(i)

    yield from expand(set(), set(range(len(conn))), set())


def _all_connected_sets(g: Graph):
    for size in range(1, len(g.vertices) + 1):
        for combo in itertools.combinations(sorted(g.vertices), size):
            s = frozenset(combo)
            if _is_connected(g, s):
                yield s


# ---------------------------------------------------------------------------
# Treedepth


def treedepth_exact(g: Graph, limit: int = 16) -> int:
    """Standard treedepth: 0 for the empty graph, 1 for a single vertex."""
    if len(g.vertices) > limit:
        raise LimitExceeded(f"graph larger than the treedepth limit {limit}")
    adj = g.adj
    memo: dict[frozenset[int], int] = {}

    def td(vs: frozenset[int]) -> int:
        if not vs:
            return 0
        if len(vs) == 1:
            return 1
        if vs in memo:
            return memo[vs]
        comps = _components_within(adj, vs)
        if len(comps) > 1:
            value = max(td(c) for c in comps)
        else:
            value = 1 + min(td(vs - {v}) for v in sorted(vs))
        memo[vs] = value
        return value

    return td(frozenset(g.vertices))


def _components_within(adj, vs: frozenset[int]) -> list[frozenset[int]]:
    seen: set[int] = set()
    comps = []
    for start in sorted(vs):
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for u in adj[v]:
                if u in vs and u not in comp:
                    comp.add(u)
                    stack.append(u)
        seen |= comp
        comps.append(frozenset(comp))
    return comps
