"""The modification-string language: parser, recursive semantics, the
red/blue edge-to-vertex gadget, and subgraph-guided edge-set modification.

A modification string is a tree over vertex deletion (n), edge deletion (e),
per-component application (c), conjunction, disjunction, and terminal target
sentences.  The contraction letter (s) is recognized by the parser but its
evaluation is feature-flagged experimental.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Union

from .core import Graph, LimitExceeded, components_avoiding, graph
from . import logic, theta as theta_mod
from .minors import ObstructionSet, named_obstruction_graph
from .theta import Base, NAMED_TARGETS, ThetaSentence, model_check_theta

DEFAULT_MOD_CAP = 12


class ExperimentalFeature(Exception):
    pass


@dataclass(frozen=True)
class Terminal:
    target: ThetaSentence

    def __post_init__(self):
        if not isinstance(self.target, Base):
            raise ValueError("terminals are base sentences")


@dataclass(frozen=True)
class VertexDeletion:
    child: "ModString"


@dataclass(frozen=True)
class EdgeDeletion:
    child: "ModString"


@dataclass(frozen=True)
class Componentwise:
    child: "ModString"


@dataclass(frozen=True)
class Contraction:
    child: "ModString"


@dataclass(frozen=True)
class ModAnd:
    left: "ModString"
    right: "ModString"


@dataclass(frozen=True)
class ModOr:
    left: "ModString"
    right: "ModString"


ModString = Union[Terminal, VertexDeletion, EdgeDeletion, Componentwise, Contraction, ModAnd, ModOr]


def mod_depth(w: ModString) -> int:
    """Nodes on the longest root-terminal path (a bare terminal has depth 1)."""
    if isinstance(w, Terminal):
        return 1
    if isinstance(w, (ModAnd, ModOr)):
        return 1 + max(mod_depth(w.left), mod_depth(w.right))
    return 1 + mod_depth(w.child)


def terminal_kind_consistent(w: ModString) -> bool:
    """All terminals agree on carrying an obstruction part or not."""
    kinds = set()

    def walk(node):
        if isinstance(node, Terminal):
            kinds.add(node.target.obstructions is not None)
        elif isinstance(node, (ModAnd, ModOr)):
            walk(node.left)
            walk(node.right)
        else:
            walk(node.child)

    walk(w)
    return len(kinds) <= 1


# ---------------------------------------------------------------------------
# Parser


def parse_mod_string(text: str) -> ModString:
    parser = _ModParser(text)
    result = parser.parse()
    parser.skip_ws()
    if parser.pos != len(parser.text):
        parser.error("trailing input")
    return result


class _ModParser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str):
        consumed = self.text[: self.pos]
        line = consumed.count("\n") + 1
        column = self.pos - (consumed.rfind("\n") + 1) + 1
        raise logic.SyntaxIssue(message, line, column)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def parse(self) -> ModString:
        self.skip_ws()
        if self.pos >= len(self.text) or self.text[self.pos] != "(":
            self.error("expected '('")
        self.pos += 1
        self.skip_ws()
        head = self._word()
        if head in ("n", "e", "c", "s"):
            power = self._power()
            child = self.parse()
            self._close()
            return _wrap(head, child, power)
        if head == "F":
            inner = self._until_close()
            return Terminal(_parse_terminal(inner))
        # binary combination: rewind and parse (W and W) / (W or W)
        self.pos -= len(head)
        left = self.parse()
        self.skip_ws()
        op = self._word()
        if op not in ("and", "or"):
            self.error("expected 'and' or 'or'")
        right = self.parse()
        self._close()
        return ModAnd(left, right) if op == "and" else ModOr(left, right)

    def _word(self) -> str:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] == "_"):
            self.pos += 1
        return self.text[start:self.pos]

    def _power(self) -> int:
        if self.pos < len(self.text) and self.text[self.pos] == "^":
            self.pos += 1
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            if start == self.pos:
                self.error("expected an exponent")
            return int(self.text[start:self.pos])
        return 1

    def _close(self):
        self.skip_ws()
        if self.pos >= len(self.text) or self.text[self.pos] != ")":
            self.error("expected ')'")
        self.pos += 1

    def _until_close(self) -> str:
        depth = 1
        start = self.pos
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
                if depth == 0:
                    inner = self.text[start:self.pos]
                    self.pos += 1
                    return inner
            self.pos += 1
        self.error("unbalanced parenthesis")


def _wrap(letter: str, child: ModString, power: int) -> ModString:
    cls = {
        "n": VertexDeletion,
        "e": EdgeDeletion,
        "c": Componentwise,
        "s": Contraction,
    }[letter]
    out = child
    for _ in range(power):
        out = cls(out)
    return out


def _parse_terminal(inner: str) -> ThetaSentence:
    inner = inner.strip()
    if inner in NAMED_TARGETS:
        return NAMED_TARGETS[inner]
    if inner.startswith("base"):
        return theta_mod.parse_theta(inner)
    if ";" in inner:
        formula_text, _, tail = inner.partition(";")
        tail = tail.strip()
        if not (tail.startswith("excl{") and tail.endswith("}")):
            raise ValueError(f"bad terminal options {tail!r}")
        members = tuple(
            named_obstruction_graph(n.strip())
            for n in tail[len("excl{"):-1].split(",")
            if n.strip()
        )
        return Base(logic.parse_formula(formula_text), ObstructionSet(members))
    sigma = logic.parse_formula(inner)
    variant = "dp" if logic.uses_disjoint_paths(sigma) else "plain"
    return Base(sigma, None, variant)


# ---------------------------------------------------------------------------
# Semantics


def eval_mod(
    g: Graph,
    w: ModString,
    cap: int = DEFAULT_MOD_CAP,
    enable_contraction: bool = False,
    theta_cap: Optional[int] = None,
):
    """Recursive evaluation; returns (holds, witness script).

    The script lists the deletions taken on the accepting branch, outermost
    first; per-component steps nest one script per component.
    """
    if len(g.vertices) > cap:
        raise LimitExceeded(f"{len(g.vertices)} vertices exceeds cap {cap}")
    theta_cap = theta_cap if theta_cap is not None else theta_mod.DEFAULT_MODULATOR_CAP

    def run(current: Graph, node: ModString):
        if isinstance(node, Terminal):
            holds, _ = model_check_theta(current, node.target, cap=theta_cap)
            return holds, [] if holds else None
        if isinstance(node, VertexDeletion):
            for v in sorted(current.vertices):
                holds, script = run(current.delete_vertex(v), node.child)
                if holds:
                    return True, [("delete-vertex", v)] + script
            return False, None
        if isinstance(node, EdgeDeletion):
            for u, v in current.edge_pairs():
                holds, script = run(current.delete_edge(u, v), node.child)
                if holds:
                    return True, [("delete-edge", (u, v))] + script
            return False, None
        if isinstance(node, Contraction):
            if not enable_contraction:
                raise ExperimentalFeature(
                    "contraction steps are experimental; pass enable_contraction=True"
                )
            from .minors import contract_edge

            for u, v in current.edge_pairs():
                holds, script = run(contract_edge(current, (u, v)), node.child)
                if holds:
                    return True, [("contract-edge", (u, v))] + script
            return False, None
        if isinstance(node, Componentwise):
            scripts = []
            for comp in components_avoiding(current, frozenset()):
                holds, script = run(current.subgraph(comp), node.child)
                if not holds:
                    return False, None
                scripts.append((sorted(comp), script))
            return True, [("per-component", scripts)]
        if isinstance(node, ModAnd):
            left_holds, left_script = run(current, node.left)
            if not left_holds:
                return False, None
            right_holds, right_script = run(current, node.right)
            if not right_holds:
                return False, None
            return True, [("both", left_script, right_script)]
        if isinstance(node, ModOr):
            left_holds, left_script = run(current, node.left)
            if left_holds:
                return True, [("first", left_script)]
            right_holds, right_script = run(current, node.right)
            if right_holds:
                return True, [("second", right_script)]
            return False, None
        raise TypeError(f"unknown node {node!r}")

    return run(g, w)


# ---------------------------------------------------------------------------
# Red/blue gadget: simulate edge deletions by vertex deletions


def red_blue_gadget(g: Graph, c: int) -> tuple[Graph, frozenset[int], frozenset[int]]:
    """Subdivide every edge (blue vertex) and glue a fresh (c+1)-clique to
    every original vertex (its non-original vertices are red).

    Returns (gadget graph, red set, blue set).  The gadget has exactly
    (c+1)*|V| + |E| vertices.
    """
    if c < 1:
        raise ValueError("clique parameter must be >= 1")
    next_id = max(g.vertices, default=-1) + 1
    edges: list[tuple[int, int]] = []
    red: set[int] = set()
    blue: set[int] = set()
    for v in sorted(g.vertices):
        mates = list(range(next_id, next_id + c))
        next_id += c
        red.update(mates)
        for a, b in itertools.combinations([v] + mates, 2):
            edges.append((a, b))
    for u, v in g.edge_pairs():
        mid = next_id
        next_id += 1
        blue.add(mid)
        edges.append((u, mid))
        edges.append((mid, v))
    vertices = set(g.vertices) | red | blue
    return graph(vertices, edges), frozenset(red), frozenset(blue)


# ---------------------------------------------------------------------------
# Modification guided by a pattern graph


def subgraph_embeddings(h: Graph, g: Graph):
    """Injective maps V(h) -> V(g) preserving edges (not induced)."""
    hv = sorted(h.vertices, key=lambda v: (-len(h.adj[v]), v))
    gv = sorted(g.vertices)

    def place(i: int, mapping: dict[int, int], used: set[int]):
        if i == len(hv):
            yield dict(mapping)
            return
        v = hv[i]
        for u in gv:
            if u in used:
                continue
            if any(
                w in mapping and mapping[w] not in g.adj[u]
                for w in h.adj[v]
            ):
                continue
            mapping[v] = u
            used.add(u)
            yield from place(i + 1, mapping, used)
            del mapping[v]
            used.discard(u)

    yield from place(0, {}, set())


def h_modification_check(
    g: Graph,
    h: Graph,
    target: ThetaSentence,
    cap: int = DEFAULT_MOD_CAP,
    theta_cap: Optional[int] = None,
):
    """Is there a subgraph copy of h whose edge set, removed from g, leaves a
    model of the target sentence?  Returns (holds, embedding or None)."""
    if len(g.vertices) > cap:
        raise LimitExceeded(f"{len(g.vertices)} vertices exceeds cap {cap}")
    theta_cap = theta_cap if theta_cap is not None else theta_mod.DEFAULT_MODULATOR_CAP
    for mapping in subgraph_embeddings(h, g):
        doomed = {
            frozenset((mapping[a], mapping[b])) for a, b in h.edge_pairs()
        }
        remaining = [e for e in g.edge_pairs() if frozenset(e) not in doomed]
        candidate = graph(g.vertices, remaining)
        holds, _ = model_check_theta(candidate, target, cap=theta_cap)
        if holds:
            return True, mapping
    return False, None
