"""Structure and graph surgeries: stellation, torsos, ind/rm/cl/star,
connectivity closure, and the apex projection of structures and sentences.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional

from .core import (
    Graph,
    Structure,
    Vocabulary,
    components_avoiding,
    connected_components,
    graph,
    induced_substructure,
)
from . import logic
from .logic import (
    And,
    Bottom,
    Const,
    Eq,
    Exists,
    Forall,
    Formula,
    Not,
    Or,
    Rel,
    Top,
    conj,
    disj,
    is_first_order,
)


def stellation(g: Graph, keep: Iterable[int], with_map: bool = False):
    """Contract every component of g - keep to a single fresh vertex.

    The fresh vertex for a component is its minimum original id (components
    are disjoint from keep, so ids never clash).  With ``with_map`` the
    component-vertex map {fresh id: component vertex set} is also returned.
    """
    keep = frozenset(keep)
    if not keep <= g.vertices:
        raise ValueError("keep leaves the graph")
    comps = components_avoiding(g, keep)
    rep = {}
    for comp in comps:
        fresh = min(comp)
        rep.update({v: fresh for v in comp})
    edges = set()
    for u, v in g.edge_pairs():
        a = u if u in keep else rep[u]
        b = v if v in keep else rep[v]
        if a != b:
            edges.add(tuple(sorted((a, b))))
    out = graph(keep | {min(c) for c in comps}, edges)
    if with_map:
        return out, {min(c): c for c in comps}
    return out


def torso(g: Graph, keep: Iterable[int]) -> Graph:
    """Graph on keep: original edges plus a clique on each component's neighborhood."""
    keep = frozenset(keep)
    stell, comp_map = stellation(g, keep, with_map=True)
    edges = {e for e in stell.edge_pairs() if e[0] in keep and e[1] in keep}
    for fresh in comp_map:
        boundary = sorted(stell.adj[fresh])
        edges.update(itertools.combinations(boundary, 2))
    return graph(keep, edges)


def torso_plus(g: Graph, keep: Iterable[int]) -> Graph:
    """As torso, but the contracted component vertices stay in place."""
    keep = frozenset(keep)
    stell, comp_map = stellation(g, keep, with_map=True)
    edges = set(stell.edge_pairs())
    for fresh in comp_map:
        boundary = sorted(stell.adj[fresh])
        edges.update(itertools.combinations(boundary, 2))
    return graph(stell.vertices, edges)


def ind_x(structure: Structure, members: Iterable[int], symbol: str = "X") -> Structure:
    """Induced substructure on the annotated set, the annotation symbol dropped."""
    members = frozenset(members)
    sub = induced_substructure(structure, members)
    return _drop_symbol(sub, symbol)


def rm_x(structure: Structure, members: Iterable[int], symbol: str = "X") -> Structure:
    """Induced substructure on the complement, the annotation symbol dropped."""
    members = frozenset(members)
    sub = induced_substructure(structure, structure.universe - members)
    return _drop_symbol(sub, symbol)


def _drop_symbol(structure: Structure, symbol: str) -> Structure:
    if symbol not in structure.vocabulary.relations:
        return structure
    vocab = structure.vocabulary.drop(symbol)
    rels = {n: ts for n, ts in structure.relations.items() if n != symbol}
    return Structure(vocab, structure.universe, rels, structure.constants, structure.labels)


def _resolve_members(structure: Structure, members, symbol: str) -> frozenset[int]:
    if members is None:
        return structure.annotation(symbol)
    members = frozenset(members)
    if not members <= structure.universe:
        raise ValueError("set leaves the universe")
    return members


def cl_x(structure: Structure, members: Optional[Iterable[int]] = None, symbol: str = "X",
         edge_symbol: str = "E") -> Structure:
    """Relate elements that co-occur with a common member of the set.

    Adds a fresh binary relation: x related to y whenever some z in the set
    shares a tuple with x and (possibly another) tuple with y.  Reflexive
    pairs are excluded so the Gaifman graph stays loop-free.  The fresh
    relation is named ``edge_symbol``; when that name is taken (graphs), a
    ``_cl`` suffix is used instead.  With no explicit set, the structure's
    own annotation is used.  The annotation symbol is added when missing.
    """
    members = _resolve_members(structure, members, symbol)
    co: dict[int, set[int]] = {z: set() for z in members}
    for name, tuples in structure.relations.items():
        if name == symbol:
            continue
        for t in tuples:
            tset = set(t)
            for z in tset & members:
                co[z] |= tset
    pairs = set()
    for z, mates in co.items():
        for x, y in itertools.combinations(sorted(mates), 2):
            pairs.add((x, y))
            pairs.add((y, x))
    base = structure if symbol in structure.vocabulary.relations else structure.annotate(symbol, members)
    target = edge_symbol
    if target in base.vocabulary.relations:
        target = edge_symbol + "_cl"
        if target in base.vocabulary.relations:
            raise ValueError(f"both {edge_symbol!r} and {target!r} already in use")
    vocab = base.vocabulary.extend({target: 2})
    rels = dict(base.relations)
    rels[target] = frozenset(pairs)
    return Structure(vocab, base.universe, rels, base.constants, base.labels)


def star_x(structure: Structure, members: Optional[Iterable[int]] = None, symbol: str = "X") -> Structure:
    """Collapse each component of the Gaifman graph minus the set to one element.

    Every relation tuple is projected entrywise (set members kept, other
    entries replaced by their component's element).  The annotation symbol is
    reinterpreted as the fresh component elements, which are named by the
    minimum original id of their component.
    """
    if structure.vocabulary.constants:
        raise ValueError("star is undefined for vocabularies with constants")
    members = _resolve_members(structure, members, symbol)
    comps = components_avoiding(structure, members)
    rep = {}
    for comp in comps:
        fresh = min(comp)
        rep.update({v: fresh for v in comp})
    universe = members | {min(c) for c in comps}
    rels = {}
    for name, tuples in structure.relations.items():
        if name == symbol:
            continue
        projected = set()
        for t in tuples:
            projected.add(tuple(v if v in members else rep[v] for v in t))
        rels[name] = frozenset(projected)
    vocab = structure.vocabulary if symbol in structure.vocabulary.relations else structure.vocabulary.extend({symbol: 1})
    rels[symbol] = frozenset((min(c),) for c in comps)
    return Structure(vocab, universe, rels, {}, structure.labels)


def eval_connectivity_closure(structure: Structure, sentence: Formula, **kw) -> bool:
    """True iff every connected component of the Gaifman graph models the sentence."""
    fo, so = logic.free_variables(sentence)
    if fo or so:
        raise ValueError("connectivity closure needs a sentence")
    return all(
        logic.evaluate(induced_substructure(structure, comp), sentence, **kw)
        for comp in connected_components(structure)
    )


# ---------------------------------------------------------------------------
# Apex projection


@dataclass(frozen=True)
class ApexTuple:
    """Ordered tuple of designated elements; entries may be None."""

    entries: tuple[Optional[int], ...]

    def __len__(self):
        return len(self.entries)

    @property
    def support(self) -> frozenset[int]:
        return frozenset(v for v in self.entries if v is not None)

    def compact(self) -> tuple[int, ...]:
        """The non-null entries in order."""
        return tuple(v for v in self.entries if v is not None)


def apex_constant(i: int) -> str:
    return f"c_{i}"


def projected_relation(symbol: str, size: int) -> str:
    return f"{symbol}_{size}"


def projected_apex_relation(symbol: str, size: int) -> str:
    return f"{symbol}_{size}_ap"


def apex_color(symbol: str, i: int) -> str:
    return f"Y_{symbol}_{i}"


def projected_vocabulary(base: Vocabulary, size: int) -> Vocabulary:
    """Vocabulary for apex-projected structures.

    Arity-1 relations of the base are carried unchanged.  Every relation R of
    arity r >= 2 contributes restriction families R_1..R_r, apex families
    R_1_ap..R_r_ap, and colors Y_R_1..Y_R_size; constants c_1..c_size name the
    apex entries.
    """
    rels: dict[str, int] = {}
    consts = set(base.constants)
    for i in range(1, size + 1):
        name = apex_constant(i)
        if name in base.relations or name in base.constants:
            raise ValueError(f"base vocabulary already uses {name!r}")
        consts.add(name)
    for symbol, arity in base.relations.items():
        if arity == 1:
            rels[symbol] = 1
            continue
        for j in range(1, arity + 1):
            rels[projected_relation(symbol, j)] = j
            rels[projected_apex_relation(symbol, j)] = j
        for i in range(1, size + 1):
            rels[apex_color(symbol, i)] = 1
    clash = set(rels) & set(base.relations)
    if any(base.relations[s] >= 2 for s in clash):
        raise ValueError(f"projected names clash with base vocabulary: {sorted(clash)}")
    return Vocabulary(rels, frozenset(consts))


def apex_project_structure(structure: Structure, apexes: ApexTuple) -> Structure:
    """Split every relation around the apex entries.

    The universe is unchanged.  For each relation R of arity >= 2, R_j holds
    the subtuples of R-tuples obtained by dropping apex entries (kept in
    order) when exactly j entries remain, R_j_ap the subtuples of apex
    entries, and Y_R_i marks non-apex elements co-occurring with apex i.
    """
    if not apexes.support <= structure.universe:
        raise ValueError("apex entry outside the universe")
    size = len(apexes)
    vocab = projected_vocabulary(structure.vocabulary, size)
    support = apexes.support
    rels: dict[str, set] = {name: set() for name in vocab.relations}
    for symbol, arity in structure.vocabulary.relations.items():
        if arity == 1:
            rels[symbol] = set(structure.relations[symbol])
            continue
        for t in structure.relations[symbol]:
            away = tuple(v for v in t if v not in support)
            into = tuple(v for v in t if v in support)
            if away:
                rels[projected_relation(symbol, len(away))].add(away)
            if into:
                rels[projected_apex_relation(symbol, len(into))].add(into)
            tset = set(t)
            for i, a in enumerate(apexes.entries, start=1):
                if a is not None and a in tset:
                    for v in tset - support:
                        rels[apex_color(symbol, i)].add((v,))
    consts = dict(structure.constants)
    for i, a in enumerate(apexes.entries, start=1):
        consts[apex_constant(i)] = a
    return Structure(
        vocab,
        structure.universe,
        {n: frozenset(ts) for n, ts in rels.items()},
        consts,
        structure.labels,
    )


def apex_project_sentence(sentence: Formula, size: int, vocabulary: Vocabulary) -> Formula:
    """Rewrite first-order sentences for apex-projected structures.

    Every atom over a relation of arity r >= 2 becomes a disjunction over the
    bipartitions of its term tuple into a non-apex part (tested against the
    restriction family) and an apex part (tested against the apex family,
    pinned to apex constants, with every non-apex term colored accordingly).
    The bipartition with an empty non-apex part is included: an all-apex
    tuple is testable only through the apex family.
    """
    if not is_first_order(sentence):
        raise ValueError("only first-order sentences can be apex-projected")

    def rewrite(phi: Formula) -> Formula:
        if isinstance(phi, Rel):
            arity = vocabulary.arity(phi.symbol)
            if arity == 1:
                return phi
            return _project_atom(phi, size)
        if isinstance(phi, (Top, Bottom, Eq)):
            return phi
        if isinstance(phi, Not):
            return Not(rewrite(phi.body))
        if isinstance(phi, And):
            return And(tuple(rewrite(p) for p in phi.parts))
        if isinstance(phi, Or):
            return Or(tuple(rewrite(p) for p in phi.parts))
        if isinstance(phi, Exists):
            return Exists(phi.var, rewrite(phi.body))
        if isinstance(phi, Forall):
            return Forall(phi.var, rewrite(phi.body))
        raise TypeError(f"unexpected node {phi!r}")

    return rewrite(sentence)


def _project_atom(atom: Rel, size: int) -> Formula:
    terms = atom.terms
    r = len(terms)
    branches: list[Formula] = []
    for positions in itertools.chain.from_iterable(
        itertools.combinations(range(r), j) for j in range(r, -1, -1)
    ):
        keep = tuple(terms[i] for i in positions)
        apex_part = tuple(t for i, t in enumerate(terms) if i not in positions)
        parts: list[Formula] = []
        if keep:
            parts.append(Rel(projected_relation(atom.symbol, len(keep)), keep))
        if apex_part:
            parts.append(Rel(projected_apex_relation(atom.symbol, len(apex_part)), apex_part))
            pinnings: list[Formula] = []
            for indices in itertools.product(range(1, size + 1), repeat=len(apex_part)):
                pin: list[Formula] = []
                for w, t_i in zip(apex_part, indices):
                    pin.append(Eq(w, Const(apex_constant(t_i))))
                    pin.extend(
                        Rel(apex_color(atom.symbol, t_i), (z,)) for z in keep
                    )
                pinnings.append(conj(*pin))
            parts.append(disj(*pinnings))
        branches.append(conj(*parts))
    return disj(*branches)
