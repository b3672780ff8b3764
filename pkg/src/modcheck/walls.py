"""Elementary and subdivided walls, layers, central subwalls, canonical
partitions with greedy host extension, pseudogrids, privileged components,
scenario-driven privileged sequences, and bag-counting bidimensionality.

Branch vertices of an r-wall carry grid coordinates (x, y) with x in [1, 2r]
and y in [1, r]; the two vertices (2r, 1) and (1, r) do not exist.  Vertical
path i (i in [1, r]) zigzags over columns 2i-1 and 2i; horizontal path j is
row j.  Subdivision vertices live on elementary edges and are recorded per
edge in traversal order.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence

from .core import Graph, components_avoiding, graph

Coord = tuple[int, int]


def _wall_coords(r: int) -> set[Coord]:
    return {
        (x, y)
        for x in range(1, 2 * r + 1)
        for y in range(1, r + 1)
        if (x, y) not in {(2 * r, 1), (1, r)}
    }


def _wall_edges(r: int) -> set[tuple[Coord, Coord]]:
    """Elementary edges as coordinate pairs (normalized, smaller first)."""
    coords = _wall_coords(r)
    edges = set()
    for (x, y) in coords:
        if (x + 1, y) in coords:
            edges.add(((x, y), (x + 1, y)))
        if (x, y + 1) in coords and (x + y) % 2 == 0:
            edges.add(((x, y), (x, y + 1)))
    return edges


@dataclass(frozen=True)
class Wall:
    """A subdivision of the elementary r-wall, embedded in explicit ids."""

    r: int
    coords: dict[int, Coord]               # branch vertex id -> coordinate
    subdivisions: dict[tuple[Coord, Coord], tuple[int, ...]]

    def __post_init__(self):
        if self.r < 3 or self.r % 2 == 0:
            raise ValueError("wall height must be odd and >= 3")
        expected = _wall_coords(self.r)
        if set(self.coords.values()) != expected:
            raise ValueError("branch coordinates do not form an elementary wall")
        for edge in _wall_edges(self.r):
            if edge not in self.subdivisions:
                raise ValueError(f"missing subdivision record for {edge}")

    @cached_property
    def at(self) -> dict[Coord, int]:
        return {c: v for v, c in self.coords.items()}

    @cached_property
    def graph(self) -> Graph:
        edges = []
        for (a, b), mids in self.subdivisions.items():
            chain = [self.at[a], *mids, self.at[b]]
            edges.extend(zip(chain, chain[1:]))
        return graph(self.vertices, edges)

    @cached_property
    def vertices(self) -> frozenset[int]:
        vs = set(self.coords)
        for mids in self.subdivisions.values():
            vs.update(mids)
        return frozenset(vs)

    def edge_chain(self, a: Coord, b: Coord) -> list[int]:
        """Vertex ids along the elementary edge a-b, inclusive, oriented a->b."""
        if (a, b) in self.subdivisions:
            return [self.at[a], *self.subdivisions[(a, b)], self.at[b]]
        if (b, a) in self.subdivisions:
            return [self.at[b], *self.subdivisions[(b, a)], self.at[a]][::-1]
        raise KeyError(f"no elementary edge {a}-{b}")

    def _path_through(self, stops: list[Coord]) -> list[int]:
        out = [self.at[stops[0]]]
        for a, b in zip(stops, stops[1:]):
            out.extend(self.edge_chain(a, b)[1:])
        return out

    def horizontal_path(self, j: int) -> list[int]:
        """Row j as a vertex list, left to right (rows 1 and r are shorter)."""
        xs = [x for x in range(1, 2 * self.r + 1) if (x, j) in self.at]
        return self._path_through([(x, j) for x in xs])

    def vertical_path(self, i: int) -> list[int]:
        """The i-th zigzag path over columns 2i-1 and 2i, top to bottom."""
        r = self.r
        a, b = 2 * i - 1, 2 * i
        stops: list[Coord] = [(a, 1), (a, 2)]
        on_left = True  # currently on column a
        for y in range(2, r):
            # cross the rung at row y, then descend one row
            col = b if on_left else a
            stops.append((col, y))
            stops.append((col, y + 1))
            on_left = not on_left
        return self._path_through(stops)

    def layer_count(self) -> int:
        return (self.r - 1) // 2

    def perimeter(self) -> list[int]:
        """Vertex set of the cycle bounding the outer face."""
        vs: set[int] = set()
        vs.update(self.horizontal_path(1))
        vs.update(self.horizontal_path(self.r))
        vs.update(self.vertical_path(1))
        vs.update(self.vertical_path(self.r))
        return sorted(vs)

    def pegs(self) -> list[int]:
        adj = self.graph.adj
        return sorted(v for v in self.perimeter() if len(adj[v]) == 2 and v in self.coords)

    def corners(self) -> list[int]:
        r = self.r
        return [self.at[c] for c in [(1, 1), (2, r), (2 * r - 1, 1), (2 * r, r)]]

    def central_vertices(self) -> tuple[int, int]:
        r = self.r
        return (self.at[(r, (r + 1) // 2)], self.at[(r + 1, (r + 1) // 2)])


def elementary_wall(r: int, first_id: int = 0) -> Wall:
    """The elementary r-wall with ids assigned row-major."""
    if r < 3 or r % 2 == 0:
        raise ValueError("wall height must be odd and >= 3")
    coords = {}
    next_id = first_id
    for y in range(1, r + 1):
        for x in range(1, 2 * r + 1):
            if (x, y) in _wall_coords(r):
                coords[next_id] = (x, y)
                next_id += 1
    subdivisions = {edge: () for edge in _wall_edges(r)}
    return Wall(r, coords, subdivisions)


def subdivide_wall(wall: Wall, plan: dict[tuple[Coord, Coord], int]) -> Wall:
    """Insert the planned number of fresh vertices on each listed edge."""
    next_id = max(wall.vertices) + 1
    subdivisions = dict(wall.subdivisions)
    for edge in sorted(plan):
        key = edge if edge in subdivisions else (edge[1], edge[0])
        if key not in subdivisions:
            raise KeyError(f"no elementary edge {edge}")
        count = plan[edge]
        fresh = tuple(range(next_id, next_id + count))
        next_id += count
        existing = subdivisions[key]
        subdivisions[key] = existing + fresh if key == edge else fresh + existing
    return Wall(wall.r, dict(wall.coords), subdivisions)


def dissolve_to_elementary(wall: Wall) -> Graph:
    """Suppress all degree-2 subdivision vertices (oracle for subdivide)."""
    edges = set()
    for (a, b) in wall.subdivisions:
        edges.add(tuple(sorted((wall.at[a], wall.at[b]))))
    return graph(set(wall.coords), edges)


def layers(wall: Wall) -> list[frozenset[int]]:
    """Layer i is the perimeter of the wall peeled i-1 times."""
    out = [frozenset(wall.perimeter())]
    current = wall
    for _ in range(wall.layer_count() - 1):
        current = central_subwall(current, current.r - 2)
        out.append(frozenset(current.perimeter()))
    return out


def layer_index(wall: Wall) -> dict[int, Optional[int]]:
    """1-based layer per vertex; None for central vertices and the spoke
    subdivision vertices dropped during peeling."""
    out: dict[int, Optional[int]] = {v: None for v in wall.vertices}
    for i, layer in enumerate(layers(wall), start=1):
        for v in layer:
            out[v] = i
    return out


def central_subwall(wall: Wall, q: int) -> Wall:
    """Drop the outer (r-q)/2 layers; coordinates are re-indexed to [2q]x[q]."""
    r = wall.r
    if q % 2 == 0 or q < 3 or q > r:
        raise ValueError("subwall height must be odd with 3 <= q <= r")
    if q == r:
        return wall
    k = (r - q) // 2
    flip = k % 2 == 1

    def reindex(c: Coord) -> Optional[Coord]:
        x, y = c
        x2, y2 = x - 2 * k, y - k
        if not (1 <= x2 <= 2 * q and 1 <= y2 <= q):
            return None
        if flip:
            x2 = 2 * q + 1 - x2
        if (x2, y2) in {(2 * q, 1), (1, q)}:
            return None
        return (x2, y2)

    coords = {}
    for v, c in wall.coords.items():
        c2 = reindex(c)
        if c2 is not None:
            coords[v] = c2
    keep = {c for c in coords.values()}
    subdivisions = {}
    back = {c2: c for c, c2 in ((wall.coords[v], coords[v]) for v in coords)}
    for edge in _wall_edges(q):
        a, b = edge
        orig = (back[a], back[b])
        chain = wall.edge_chain(*orig)
        subdivisions[edge] = tuple(chain[1:-1])
    return Wall(q, coords, subdivisions)


# ---------------------------------------------------------------------------
# Canonical partitions


@dataclass(frozen=True)
class CanonicalPartition:
    """Internal bags indexed by (i, j) for i, j in [2, r-1], plus an external bag."""

    internal: dict[tuple[int, int], frozenset[int]]
    external: frozenset[int]

    @property
    def bags(self) -> list[frozenset[int]]:
        return [self.internal[k] for k in sorted(self.internal)] + [self.external]

    def covered(self) -> frozenset[int]:
        out = set(self.external)
        for bag in self.internal.values():
            out |= bag
        return frozenset(out)


def canonical_partition(wall: Wall) -> CanonicalPartition:
    """Grid-indexed connected bags partitioning the wall's vertex set.

    Bag (i, j) joins a stretch of vertical path i (descending for even i,
    ascending for odd i, stopping short of the next row path) with a stretch
    of row j reaching left up to, but not including, vertical path i-1.
    """
    r = wall.r
    rows = {j: wall.horizontal_path(j) for j in range(1, r + 1)}
    cols = {i: wall.vertical_path(i) for i in range(1, r + 1)}
    row_sets = {j: set(p) for j, p in rows.items()}
    col_sets = {i: set(p) for i, p in cols.items()}
    internal: dict[tuple[int, int], frozenset[int]] = {}
    for i in range(2, r):
        for j in range(2, r):
            rung = col_sets[i] & row_sets[j]
            path = cols[i]
            pos = [idx for idx, v in enumerate(path) if v in rung]
            lo, hi = min(pos), max(pos)
            a_part: set[int] = set(path[lo:hi + 1])
            if i % 2 == 0:
                stop = row_sets[j + 1]
                idx = hi + 1
                while idx < len(path) and path[idx] not in stop:
                    a_part.add(path[idx])
                    idx += 1
            else:
                stop = row_sets[j - 1]
                idx = lo - 1
                while idx >= 0 and path[idx] not in stop:
                    a_part.add(path[idx])
                    idx -= 1
            row = rows[j]
            rpos = [idx for idx, v in enumerate(row) if v in rung]
            rlo, rhi = min(rpos), max(rpos)
            b_part: set[int] = set(row[rlo:rhi + 1])
            stop = col_sets[i - 1]
            idx = rlo - 1
            while idx >= 0 and row[idx] not in stop:
                b_part.add(row[idx])
                idx -= 1
            internal[(i, j)] = frozenset(a_part | b_part)
    used = set().union(*internal.values()) if internal else set()
    external = frozenset(wall.vertices - used)
    return CanonicalPartition(internal, external)


def extend_canonical_partition(
    g: Graph,
    apex: Iterable[int],
    wall: Wall,
    partition: Optional[CanonicalPartition] = None,
) -> CanonicalPartition:
    """Greedily absorb the wall's host component, then dump the rest outside.

    Works in g minus the apex set.  While some uncovered vertex of the
    wall-containing component has a neighbor in a bag, the smallest such
    vertex joins the smallest-indexed adjacent bag (external bag last).
    Remaining vertices of g minus the apex set land in the external bag.
    """
    apex = frozenset(apex)
    if partition is None:
        partition = canonical_partition(wall)
    if not wall.vertices <= g.vertices - apex:
        raise ValueError("wall is not inside g minus the apex set")
    comps = components_avoiding(g, apex)
    compass = next((c for c in comps if wall.vertices <= c), None)
    if compass is None:
        raise ValueError("wall is split across components of g minus the apex set")

    bags: dict[object, set[int]] = {k: set(v) for k, v in partition.internal.items()}
    bags["ext"] = set(partition.external)
    order = sorted(partition.internal) + ["ext"]
    owner: dict[int, object] = {}
    for key in order:
        for v in bags[key]:
            owner[v] = key
    adj = g.adj
    uncovered = set(compass) - set(owner)
    frontier = {v for v in uncovered if any(u in owner for u in adj[v])}
    while frontier:
        v = min(frontier)
        key = min(
            (owner[u] for u in adj[v] if u in owner),
            key=lambda k: (1, ()) if k == "ext" else (0, k),
        )
        bags[key].add(v)
        owner[v] = key
        uncovered.discard(v)
        frontier.discard(v)
        for u in adj[v]:
            if u in uncovered and u not in frontier:
                frontier.add(u)
    leftovers = (g.vertices - apex) - set(owner)
    bags["ext"] |= leftovers
    return CanonicalPartition(
        {k: frozenset(v) for k, v in bags.items() if k != "ext"},
        frozenset(bags["ext"]),
    )


def bidimensionality(members: Iterable[int], partition: CanonicalPartition) -> int:
    """Number of internal bags meeting the given vertex set."""
    members = frozenset(members)
    return sum(1 for bag in partition.internal.values() if bag & members)


# ---------------------------------------------------------------------------
# Pseudogrids


@dataclass(frozen=True)
class Pseudogrid:
    """q horizontal and q vertical vertex paths intersecting grid-like."""

    horizontal: tuple[tuple[int, ...], ...]
    vertical: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.horizontal) != len(self.vertical):
            raise ValueError("a pseudogrid has equally many horizontal and vertical paths")

    @property
    def q(self) -> int:
        return len(self.horizontal)

    def all_vertices(self) -> frozenset[int]:
        out: set[int] = set()
        for p in self.horizontal + self.vertical:
            out.update(p)
        return frozenset(out)


def pseudogrid_from_wall(wall: Wall, q: Optional[int] = None) -> Pseudogrid:
    """Rows and zigzag columns of the central q-subwall (q defaults to r)."""
    sub = wall if q is None or q == wall.r else central_subwall(wall, q)
    horizontal = tuple(tuple(sub.horizontal_path(j)) for j in range(1, sub.r + 1))
    vertical = tuple(tuple(sub.vertical_path(i)) for i in range(1, sub.r + 1))
    return Pseudogrid(horizontal, vertical)


def _is_path(g: Graph, path: Sequence[int]) -> bool:
    if len(set(path)) != len(path) or not path:
        return False
    return all(b in g.adj[a] for a, b in zip(path, path[1:]))


def _block_structure(path: Sequence[int], others: Sequence[Sequence[int]]):
    """For each other path: the index block of `path` meeting it, or None.

    Returns None (invalid) unless every intersection is one contiguous block
    of positions; otherwise a list of (start, end) blocks aligned with
    ``others``.
    """
    blocks = []
    for other in others:
        hits = [idx for idx, v in enumerate(path) if v in other]
        if not hits:
            blocks.append(None)
            continue
        if hits[-1] - hits[0] + 1 != len(hits):
            return None
        blocks.append((hits[0], hits[-1]))
    return blocks


def _is_contiguous_run(segment: Sequence[int], container: Sequence[int]) -> bool:
    pos = {v: i for i, v in enumerate(container)}
    if any(v not in pos for v in segment):
        return False
    idxs = [pos[v] for v in segment]
    forward = all(b - a == 1 for a, b in zip(idxs, idxs[1:]))
    backward = all(a - b == 1 for a, b in zip(idxs, idxs[1:]))
    return forward or backward or len(idxs) == 1


def is_pseudogrid(g: Graph, candidate: Pseudogrid) -> bool:
    """Verify the decomposition conditions in both directions.

    Each family must consist of vertex-disjoint paths of g; every horizontal
    path must meet every vertical path in exactly one contiguous stretch that
    is also contiguous on the vertical path, with the stretches appearing in
    a consistent order (and symmetrically).
    """
    h, v = candidate.horizontal, candidate.vertical
    if candidate.q == 0:
        return False
    for family in (h, v):
        for path in family:
            if not _is_path(g, path):
                return False
        for a, b in itertools.combinations(family, 2):
            if set(a) & set(b):
                return False
    vsets = [set(p) for p in v]
    hsets = [set(p) for p in h]
    for path in h:
        blocks = _block_structure(path, vsets)
        if blocks is None or any(b is None for b in blocks):
            return False
        for (start, end), other in zip(blocks, v):
            if not _is_contiguous_run(path[start:end + 1], other):
                return False
        ordering = sorted(range(len(blocks)), key=lambda i: blocks[i][0])
        if ordering != list(range(len(blocks))) and ordering != list(reversed(range(len(blocks)))):
            return False
    for path in v:
        blocks = _block_structure(path, hsets)
        if blocks is None or any(b is None for b in blocks):
            return False
        for (start, end), other in zip(blocks, h):
            if not _is_contiguous_run(path[start:end + 1], other):
                return False
        ordering = sorted(range(len(blocks)), key=lambda i: blocks[i][0])
        if ordering != list(range(len(blocks))) and ordering != list(reversed(range(len(blocks)))):
            return False
    return True


def privileged_components(
    g: Graph, grid: Pseudogrid, removed: Iterable[int]
) -> list[frozenset[int]]:
    """Components of g minus the set containing a full horizontal and a full
    vertical path of the pseudogrid."""
    removed = frozenset(removed)
    comps = components_avoiding(g, removed)
    out = []
    hsets = [set(p) for p in grid.horizontal]
    vsets = [set(p) for p in grid.vertical]
    for comp in comps:
        if any(s <= comp for s in hsets) and any(s <= comp for s in vsets):
            out.append(comp)
    return out


PER_COMPONENT = "o"
WHOLE_GRAPH = "b"


def parse_scenario(text: str) -> str:
    """Scenario strings use 'o' (per-component) and 'b' (whole remainder)."""
    cleaned = text.strip()
    if not cleaned or any(ch not in (PER_COMPONENT + WHOLE_GRAPH) for ch in cleaned):
        raise ValueError("scenario must be a non-empty string over 'o' and 'b'")
    return cleaned


def w_privileged_sequence(
    g: Graph,
    grid: Pseudogrid,
    removals: Sequence[Iterable[int]],
    scenario: str,
) -> list[frozenset[int]]:
    """The nested sets C_1 .. C_{h+1} induced by a scenario.

    C_{h+1} is the whole vertex set.  Walking levels downward, a 'b' level
    subtracts its removal set from the level above, while an 'o' level takes
    the unique privileged component of g minus the union of this level's and
    all later removal sets (empty when none exists).
    """
    scenario = parse_scenario(scenario)
    sets = [frozenset(x) for x in removals]
    if len(sets) != len(scenario):
        raise ValueError("scenario length must match the number of removal sets")
    for a, b in itertools.combinations(range(len(sets)), 2):
        if sets[a] & sets[b]:
            raise ValueError("removal sets must be pairwise disjoint")
    h = len(sets)
    out: list[frozenset[int]] = [frozenset()] * (h + 1)
    out[h] = frozenset(g.vertices)
    suffix: frozenset[int] = frozenset()
    suffixes = [frozenset()] * h
    for i in range(h - 1, -1, -1):
        suffix = suffix | sets[i]
        suffixes[i] = suffix
    for i in range(h - 1, -1, -1):
        if scenario[i] == WHOLE_GRAPH:
            out[i] = out[i + 1] - sets[i]
        else:
            privileged = privileged_components(g, grid, suffixes[i])
            if len(privileged) > 1:
                raise ValueError("multiple privileged components: not a pseudogrid")
            out[i] = privileged[0] if privileged else frozenset()
    return out


# ---------------------------------------------------------------------------
# Serialization


def wall_to_json(wall: Wall) -> str:
    payload = {
        "r": wall.r,
        "branch": {str(v): list(c) for v, c in sorted(wall.coords.items())},
        "subdivisions": [
            [list(a), list(b), list(mids)]
            for (a, b), mids in sorted(wall.subdivisions.items())
            if mids
        ],
    }
    return json.dumps(payload, sort_keys=True, indent=1) + "\n"


def wall_from_json(text: str) -> Wall:
    payload = json.loads(text)
    r = payload["r"]
    coords = {int(v): tuple(c) for v, c in payload["branch"].items()}
    subdivisions = {edge: () for edge in _wall_edges(r)}
    for a, b, mids in payload.get("subdivisions", []):
        key = (tuple(a), tuple(b))
        if key not in subdivisions:
            key = (tuple(b), tuple(a))
        subdivisions[key] = tuple(mids)
    return Wall(r, coords, subdivisions)
