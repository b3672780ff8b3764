"""Finite relational structures, vocabularies, and graphs as {E}-structures.

Element ids are plain ints.  The null sentinel (the extra universe element
that constant symbols may point at) is represented by ``None``; it never
appears in relation tuples or in the universe itself.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Optional


class LimitExceeded(Exception):
    """A search limit (universe size, subset cap, ...) was exceeded."""


@dataclass(frozen=True)
class Vocabulary:
    """Relation symbols with arities, plus constant symbols."""

    relations: dict[str, int]
    constants: frozenset[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "constants", frozenset(self.constants))
        for name, arity in self.relations.items():
            if arity < 1:
                raise ValueError(f"arity of {name} must be >= 1, got {arity}")
        clash = set(self.relations) & self.constants
        if clash:
            raise ValueError(f"symbols both relation and constant: {sorted(clash)}")

    def arity(self, symbol: str) -> int:
        return self.relations[symbol]

    def extend(self, relations: Mapping[str, int] = (), constants: Iterable[str] = ()) -> "Vocabulary":
        rels = dict(self.relations)
        for name, arity in dict(relations).items():
            if name in rels and rels[name] != arity:
                raise ValueError(f"arity clash for {name}")
            rels[name] = arity
        return Vocabulary(rels, self.constants | frozenset(constants))

    def drop(self, symbol: str) -> "Vocabulary":
        rels = dict(self.relations)
        rels.pop(symbol, None)
        return Vocabulary(rels, self.constants - {symbol})

    def __hash__(self):
        return hash((tuple(sorted(self.relations.items())), self.constants))

    def __eq__(self, other):
        if not isinstance(other, Vocabulary):
            return NotImplemented
        return self.relations == other.relations and self.constants == other.constants


GRAPH_VOCABULARY = Vocabulary({"E": 2})


@dataclass(frozen=True, eq=False)
class Structure:
    """Immutable finite relational structure.

    ``relations`` maps every relation symbol of the vocabulary to a frozenset
    of id-tuples; ``constants`` maps every constant symbol to an element id or
    ``None`` (the null sentinel).
    """

    vocabulary: Vocabulary
    universe: frozenset[int]
    relations: dict[str, frozenset[tuple[int, ...]]]
    constants: dict[str, Optional[int]] = field(default_factory=dict)
    labels: dict[int, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "universe", frozenset(self.universe))
        rels = {}
        for name, arity in self.vocabulary.relations.items():
            tuples = frozenset(tuple(t) for t in self.relations.get(name, ()))
            for t in tuples:
                if len(t) != arity:
                    raise ValueError(f"tuple {t} has wrong arity for {name}/{arity}")
                if not set(t) <= self.universe:
                    raise ValueError(f"tuple {t} leaves the universe")
            rels[name] = tuples
        unknown = set(self.relations) - set(rels)
        if unknown:
            raise ValueError(f"relations not in vocabulary: {sorted(unknown)}")
        object.__setattr__(self, "relations", rels)
        consts = {}
        for name in self.vocabulary.constants:
            value = self.constants.get(name)
            if value is not None and value not in self.universe:
                raise ValueError(f"constant {name} -> {value} outside universe")
            consts[name] = value
        unknown = set(self.constants) - set(consts)
        if unknown:
            raise ValueError(f"constants not in vocabulary: {sorted(unknown)}")
        object.__setattr__(self, "constants", consts)

    # Structures are compared by content, not identity.
    def __eq__(self, other):
        if not isinstance(other, Structure):
            return NotImplemented
        return (
            self.vocabulary == other.vocabulary
            and self.universe == other.universe
            and self.relations == other.relations
            and self.constants == other.constants
        )

    def __hash__(self):
        return hash(
            (
                self.vocabulary,
                self.universe,
                tuple(sorted(self.relations.items())),
                tuple(sorted(self.constants.items(), key=lambda kv: kv[0])),
            )
        )

    def __repr__(self):
        parts = [f"|V|={len(self.universe)}"]
        for name in sorted(self.relations):
            parts.append(f"{name}:{len(self.relations[name])}")
        return f"Structure({', '.join(parts)})"

    @cached_property
    def gaifman_adjacency(self) -> dict[int, frozenset[int]]:
        adj: dict[int, set[int]] = {v: set() for v in self.universe}
        for tuples in self.relations.values():
            for t in tuples:
                for a, b in itertools.combinations(set(t), 2):
                    adj[a].add(b)
                    adj[b].add(a)
        return {v: frozenset(nb) for v, nb in adj.items()}

    def annotate(self, symbol: str, members: Iterable[int]) -> "Structure":
        """Return the same structure with an extra unary relation."""
        members = frozenset(members)
        if not members <= self.universe:
            raise ValueError("annotation set leaves the universe")
        vocab = self.vocabulary.extend({symbol: 1})
        rels = dict(self.relations)
        rels[symbol] = frozenset((v,) for v in members)
        return Structure(vocab, self.universe, rels, self.constants, self.labels)

    def annotation(self, symbol: str) -> frozenset[int]:
        return frozenset(t[0] for t in self.relations[symbol])


class Graph(Structure):
    """A {E}-structure whose binary relation is symmetric and anti-reflexive."""

    def __post_init__(self):
        super().__post_init__()
        if set(self.vocabulary.relations) != {"E"} or self.vocabulary.arity("E") != 2:
            raise ValueError("a Graph is a structure over the vocabulary {E/2}")
        if self.vocabulary.constants:
            raise ValueError("graphs carry no constants")
        for a, b in self.relations["E"]:
            if a == b:
                raise ValueError(f"loop at {a}")
            if (b, a) not in self.relations["E"]:
                raise ValueError(f"edge ({a},{b}) lacks its reverse")

    @cached_property
    def adj(self) -> dict[int, frozenset[int]]:
        return self.gaifman_adjacency

    @property
    def vertices(self) -> frozenset[int]:
        return self.universe

    @cached_property
    def edges(self) -> frozenset[frozenset[int]]:
        return frozenset(frozenset(e) for e in self.relations["E"])

    def edge_pairs(self) -> list[tuple[int, int]]:
        """Edges as sorted (u, v) pairs with u < v, in sorted order."""
        return sorted(tuple(sorted(e)) for e in self.edges)

    def has_edge(self, a: int, b: int) -> bool:
        return (a, b) in self.relations["E"]

    def subgraph(self, vertices: Iterable[int]) -> "Graph":
        vs = frozenset(vertices)
        if not vs <= self.universe:
            raise ValueError("vertex set leaves the graph")
        return graph(vs, (e for e in self.edge_pairs() if e[0] in vs and e[1] in vs))

    def delete_vertex(self, v: int) -> "Graph":
        return self.subgraph(self.universe - {v})

    def delete_edge(self, a: int, b: int) -> "Graph":
        if not self.has_edge(a, b):
            raise ValueError(f"no edge ({a},{b})")
        return graph(self.universe, (e for e in self.edge_pairs() if set(e) != {a, b}))

    def add_edges(self, pairs: Iterable[tuple[int, int]]) -> "Graph":
        new = set(self.edge_pairs())
        for a, b in pairs:
            if a != b:
                new.add(tuple(sorted((a, b))))
        return graph(self.universe, new)


def graph(vertices: Iterable[int], edges: Iterable[tuple[int, int]] = ()) -> Graph:
    """Build a Graph from a vertex iterable and undirected edge pairs."""
    vs = frozenset(vertices)
    rel = set()
    for a, b in edges:
        rel.add((a, b))
        rel.add((b, a))
    return Graph(GRAPH_VOCABULARY, vs, {"E": frozenset(rel)})


def graph_of(structure: Structure) -> Graph:
    """View an {E}-structure (or anything with a Gaifman graph) as a Graph."""
    if isinstance(structure, Graph):
        return structure
    return gaifman_graph(structure)


def gaifman_graph(structure: Structure) -> Graph:
    """Graph on the universe joining elements that co-occur in some tuple."""
    edges = set()
    for v, nb in structure.gaifman_adjacency.items():
        for u in nb:
            if v < u:
                edges.add((v, u))
    return graph(structure.universe, edges)


def induced_substructure(structure: Structure, subset: Iterable[int]) -> Structure:
    """Restrict relations to the subset; constants fall to None outside it."""
    s = frozenset(subset)
    if not s <= structure.universe:
        raise ValueError("subset leaves the universe")
    rels = {
        name: frozenset(t for t in tuples if set(t) <= s)
        for name, tuples in structure.relations.items()
    }
    consts = {
        name: (value if value in s else None)
        for name, value in structure.constants.items()
    }
    cls = type(structure) if isinstance(structure, Graph) else Structure
    return cls(structure.vocabulary, s, rels, consts, structure.labels)


def disjoint_union(a: Structure, b: Structure) -> Structure:
    """Disjoint union; b's elements are shifted above a's ids."""
    if a.vocabulary != b.vocabulary:
        raise ValueError("vocabularies differ")
    offset = (max(a.universe) + 1 if a.universe else 0) - (min(b.universe) if b.universe else 0)
    shift = lambda v: v + offset
    universe = a.universe | frozenset(shift(v) for v in b.universe)
    rels = {
        name: a.relations[name] | frozenset(tuple(shift(v) for v in t) for t in b.relations[name])
        for name in a.vocabulary.relations
    }
    consts = {}
    for name in a.vocabulary.constants:
        va, vb = a.constants.get(name), b.constants.get(name)
        if va is not None and vb is not None:
            raise ValueError(f"constant {name} set on both sides")
        consts[name] = va if va is not None else (shift(vb) if vb is not None else None)
    labels = dict(a.labels)
    labels.update({shift(v): lab for v, lab in b.labels.items()})
    cls = Graph if isinstance(a, Graph) and isinstance(b, Graph) else Structure
    return cls(a.vocabulary, universe, rels, consts, labels)


def connected_components(g: Structure) -> list[frozenset[int]]:
    """Vertex sets of the connected components of the (Gaifman) graph.

    Deterministic: components sorted by their minimum vertex.
    """
    adj = g.gaifman_adjacency
    seen: set[int] = set()
    comps = []
    for start in sorted(g.universe):
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for u in adj[v]:
                if u not in comp:
                    comp.add(u)
                    stack.append(u)
        seen |= comp
        comps.append(frozenset(comp))
    return comps


def components_avoiding(g: Structure, removed: Iterable[int]) -> list[frozenset[int]]:
    """Components of the Gaifman graph after deleting ``removed``."""
    removed = frozenset(removed)
    adj = g.gaifman_adjacency
    seen: set[int] = set(removed)
    comps = []
    for start in sorted(g.universe):
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for u in adj[v]:
                if u not in comp and u not in removed:
                    comp.add(u)
                    stack.append(u)
        seen |= comp
        comps.append(frozenset(comp))
    return comps


DEFAULT_ISO_LIMIT = 12


def is_isomorphic(
    a: Structure,
    b: Structure,
    limit: int = DEFAULT_ISO_LIMIT,
    witness: bool = False,
):
    """Exact isomorphism by permutation search with degree pruning.

    Returns a bool, or (bool, mapping-or-None) when ``witness`` is set.  The
    null sentinel is fixed by every isomorphism, so constants interpreted as
    None must match on both sides.
    """
    if max(len(a.universe), len(b.universe)) > limit:
        raise LimitExceeded(f"universe larger than the isomorphism limit {limit}")

    def fail():
        return (False, None) if witness else False

    if a.vocabulary != b.vocabulary or len(a.universe) != len(b.universe):
        return fail()
    if any(len(a.relations[n]) != len(b.relations[n]) for n in a.relations):
        return fail()

    adj_a, adj_b = a.gaifman_adjacency, b.gaifman_adjacency
    deg_a = {v: len(adj_a[v]) for v in a.universe}
    deg_b = {v: len(adj_b[v]) for v in b.universe}
    if sorted(deg_a.values()) != sorted(deg_b.values()):
        return fail()

    order = sorted(a.universe, key=lambda v: (-deg_a[v], v))
    candidates = {
        v: sorted(u for u in b.universe if deg_b[u] == deg_a[v]) for v in order
    }

    mapping: dict[int, int] = {}
    used: set[int] = set()

    def extend(i: int) -> bool:
        if i == len(order):
            return check(mapping)
        v = order[i]
        for u in candidates[v]:
            if u in used:
                continue
            ok = all(
                (w not in mapping) or ((mapping[w] in adj_b[u]) == (w in adj_a[v]))
                for w in a.universe
            )
            if not ok:
                continue
            mapping[v] = u
            used.add(u)
            if extend(i + 1):
                return True
            del mapping[v]
            used.discard(u)
        return False

    def check(m: dict[int, int]) -> bool:
        for name, tuples in a.relations.items():
            image = frozenset(tuple(m[v] for v in t) for t in tuples)
            if image != b.relations[name]:
                return False
        for name in a.vocabulary.constants:
            va, vb = a.constants.get(name), b.constants.get(name)
            if (va is None) != (vb is None):
                return False
            if va is not None and m[va] != vb:
                return False
        return True

    found = extend(0)
    if witness:
        return (found, dict(mapping) if found else None)
    return found


# ---------------------------------------------------------------------------
# File formats


def structure_to_text(s: Structure) -> str:
    """Serialize in the line-based structure format (see parse_structure)."""
    head = ["vocab"]
    for name in sorted(s.vocabulary.relations):
        head.append(f"{name}/{s.vocabulary.relations[name]}")
    for name in sorted(s.vocabulary.constants):
        head.append("const")
        head.append(name)
    lines = [" ".join(head)]
    ids = sorted(s.universe)
    index = {v: i for i, v in enumerate(ids)}
    lines.append(f"universe {len(ids)}")
    for name in sorted(s.relations):
        for t in sorted(s.relations[name]):
            lines.append("rel " + name + " " + " ".join(str(index[v]) for v in t))
    for name in sorted(s.constants):
        value = s.constants[name]
        lines.append(f"const {name} " + ("null" if value is None else str(index[value])))
    return "\n".join(lines) + "\n"


def parse_structure(text: str) -> Structure:
    """Parse the line-based structure format.

    Header: ``vocab R/arity ... const c ...`` then ``universe n`` (ids are
    0..n-1), then ``rel R a b ...`` and ``const c a|null`` lines.  ``#``
    starts a comment.
    """
    relations: dict[str, int] = {}
    constants: set[str] = set()
    universe: Optional[frozenset[int]] = None
    tuples: dict[str, set[tuple[int, ...]]] = {}
    values: dict[str, Optional[int]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind = parts[0]
        if kind == "vocab":
            i = 1
            while i < len(parts):
                if parts[i] == "const":
                    if i + 1 >= len(parts):
                        raise ValueError(f"line {lineno}: const needs a name")
                    constants.add(parts[i + 1])
                    i += 2
                else:
                    if "/" not in parts[i]:
                        raise ValueError(f"line {lineno}: expected name/arity, got {parts[i]}")
                    name, ar = parts[i].split("/", 1)
                    relations[name] = int(ar)
                    tuples[name] = set()
                    i += 1
        elif kind == "universe":
            universe = frozenset(range(int(parts[1])))
        elif kind == "rel":
            name = parts[1]
            if name not in relations:
                raise ValueError(f"line {lineno}: unknown relation {name}")
            tuples[name].add(tuple(int(x) for x in parts[2:]))
        elif kind == "const":
            name = parts[1]
            if name not in constants:
                raise ValueError(f"line {lineno}: unknown constant {name}")
            values[name] = None if parts[2] == "null" else int(parts[2])
        else:
            raise ValueError(f"line {lineno}: unknown directive {kind!r}")
    if universe is None:
        raise ValueError("missing universe line")
    vocab = Vocabulary(relations, frozenset(constants))
    return Structure(vocab, universe, {n: frozenset(ts) for n, ts in tuples.items()}, values)


def parse_edge_list(text: str) -> Graph:
    """Graph from 'u v' lines (0-based ids); 'n <count>' pins extra isolated ids."""
    edges = []
    vertices: set[int] = set()
    declared = 0
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "n":
            declared = int(parts[1])
            continue
        u, v = int(parts[0]), int(parts[1])
        edges.append((u, v))
        vertices |= {u, v}
    vertices |= set(range(declared))
    return graph(vertices, edges)


def edge_list_text(g: Graph) -> str:
    lines = [f"n {len(g.vertices)}"]
    index = {v: i for i, v in enumerate(sorted(g.vertices))}
    lines += [f"{index[u]} {index[v]}" for u, v in g.edge_pairs()]
    return "\n".join(lines) + "\n"
