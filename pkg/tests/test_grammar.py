import itertools
import random

import pytest

from modcheck.core import LimitExceeded, connected_components, graph
from modcheck.grammar import (
    Componentwise,
    Contraction,
    EdgeDeletion,
    ExperimentalFeature,
    ModAnd,
    ModOr,
    Terminal,
    VertexDeletion,
    eval_mod,
    h_modification_check,
    mod_depth,
    parse_mod_string,
    red_blue_gadget,
    subgraph_embeddings,
)
from modcheck.logic import SyntaxIssue, parse_formula
from modcheck.minors import complete_graph
from modcheck.smallgraphs import all_graphs_upto, cycle_graph, path_graph
from modcheck.theta import (
    Base,
    TARGET_EDGELESS,
    TARGET_FORESTS,
    model_check_theta,
)


# ---------------------------------------------------------------------------
# Parsing


def test_parse_shapes():
    w = parse_mod_string("(n (F planar))")
    assert isinstance(w, VertexDeletion) and isinstance(w.child, Terminal)
    w2 = parse_mod_string("((n (F planar)) and (e (F planar)))")
    assert isinstance(w2, ModAnd)
    w3 = parse_mod_string("(c (F exists x. exists y. E(x, y)))")
    assert isinstance(w3, Componentwise)
    w4 = parse_mod_string("(s (F planar))")
    assert isinstance(w4, Contraction)


def test_parse_sugar_powers():
    w = parse_mod_string("(n^3 (F planar))")
    assert isinstance(w, VertexDeletion)
    assert isinstance(w.child, VertexDeletion)
    assert isinstance(w.child.child, VertexDeletion)
    assert isinstance(w.child.child.child, Terminal)
    assert mod_depth(w) == 4


def test_parse_terminal_flavours():
    t1 = parse_mod_string("(F true ; excl{K3})")
    assert t1.target.obstructions is not None
    t2 = parse_mod_string("(F forests)")
    assert t2.target is TARGET_FORESTS
    t3 = parse_mod_string("(F base(true ; excl{K5,K33}))")
    assert len(t3.target.obstructions.graphs) == 2


def test_parse_errors():
    with pytest.raises(SyntaxIssue):
        parse_mod_string("(n (F planar)")
    with pytest.raises(SyntaxIssue):
        parse_mod_string("(q (F planar))")


# ---------------------------------------------------------------------------
# Semantics


def test_vertex_deletion_example():
    w = parse_mod_string("(n (F true ; excl{K2}))")
    ok, script = eval_mod(path_graph(2), w)
    assert ok and script == [("delete-vertex", 0)]


def test_edge_deletion_to_planar_on_k5():
    w = parse_mod_string("(e (F planar))")
    ok, script = eval_mod(complete_graph(5), w)
    assert ok and script[0][0] == "delete-edge"


def test_componentwise_on_connected_equals_plain():
    phi = "exists x. exists y. E(x, y)"
    wc = parse_mod_string(f"(c (F {phi}))")
    wp = parse_mod_string(f"(F {phi})")
    for g in [cycle_graph(4), path_graph(3), complete_graph(3)]:
        assert eval_mod(g, wc)[0] == eval_mod(g, wp)[0]


def test_contraction_is_feature_flagged():
    w = parse_mod_string("(s (F edgeless))")
    with pytest.raises(ExperimentalFeature):
        eval_mod(cycle_graph(3), w)
    ok, script = eval_mod(path_graph(3), parse_mod_string("(s (F true ; excl{K3}))"),
                          enable_contraction=True)
    assert ok and script[0][0] == "contract-edge"


def test_eval_mod_cap():
    w = parse_mod_string("(F edgeless)")
    with pytest.raises(LimitExceeded):
        eval_mod(graph(range(13), ()), w)


# ---------------------------------------------------------------------------
# Independent oracle: compute the class membership straight off the bullets


def _oracle(g, node) -> bool:
    if isinstance(node, Terminal):
        holds, _ = model_check_theta(g, node.target)
        return holds
    if isinstance(node, VertexDeletion):
        return any(
            _oracle(g.subgraph(g.vertices - {v}), node.child) for v in g.vertices
        )
    if isinstance(node, EdgeDeletion):
        return any(
            _oracle(graph(g.vertices, [e for e in g.edge_pairs() if e != doomed]),
                    node.child)
            for doomed in g.edge_pairs()
        )
    if isinstance(node, Componentwise):
        return all(
            _oracle(g.subgraph(c), node.child) for c in connected_components(g)
        )
    if isinstance(node, ModAnd):
        return _oracle(g, node.left) and _oracle(g, node.right)
    if isinstance(node, ModOr):
        return _oracle(g, node.left) or _oracle(g, node.right)
    raise TypeError(node)


def _tree_pool(max_depth):
    terminals = [
        Terminal(TARGET_EDGELESS),
        Terminal(TARGET_FORESTS),
        Terminal(Base(parse_formula("exists x. exists y. E(x, y)"))),
    ]
    levels = {1: list(terminals)}
    for depth in range(2, max_depth + 1):
        new = []
        for child in levels[depth - 1]:
            new += [VertexDeletion(child), EdgeDeletion(child), Componentwise(child)]
        for a in levels[depth - 1]:
            for b in terminals:
                new += [ModAnd(a, b), ModOr(b, a)]
        levels[depth] = new
    out = []
    for trees in levels.values():
        out += trees
    return out


def test_eval_mod_matches_oracle():
    pool = _tree_pool(3)
    rng = random.Random(77)
    graphs = [g for g in all_graphs_upto(4)]
    for w in rng.sample(pool, 40):
        for g in rng.sample(graphs, 6):
            assert eval_mod(g, w)[0] == _oracle(g, w)


def test_eval_mod_scripts_replay():
    # replaying the deletion script step by step reaches an accepting state
    w = parse_mod_string("(n (e (F forests)))")
    g = complete_graph(4)
    ok, script = eval_mod(g, w)
    assert ok
    current = g
    for op, arg in script:
        if op == "delete-vertex":
            current = current.delete_vertex(arg)
        elif op == "delete-edge":
            current = current.delete_edge(*arg)
    holds, _ = model_check_theta(current, TARGET_FORESTS)
    assert holds


# ---------------------------------------------------------------------------
# Red/blue gadget


def test_gadget_counts():
    for g in [path_graph(2), cycle_graph(4), complete_graph(4), graph(range(3), ())]:
        for c in (1, 2, 3):
            gadget, red, blue = red_blue_gadget(g, c)
            assert len(gadget.vertices) == (c + 1) * len(g.vertices) + len(g.edges)
            assert len(red) == c * len(g.vertices)
            assert len(blue) == len(g.edges)
    _, _, blue = red_blue_gadget(graph(range(4), ()), 2)
    assert not blue


def test_gadget_blue_vertex_simulates_edge():
    # adjacency-via-blue in the gadget minus one blue vertex matches the
    # original graph minus the corresponding edge (exhaustive n <= 5)
    for g in all_graphs_upto(5):
        if not g.edges:
            continue
        gadget, red, blue = red_blue_gadget(g, 1)
        for mid in sorted(blue):
            u, v = sorted(gadget.adj[mid])
            kept = gadget.subgraph(gadget.vertices - {mid})

            def via_blue(a, b):
                return any(
                    a in kept.adj[m] and b in kept.adj[m] for m in blue - {mid}
                )

            for a, b in itertools.combinations(sorted(g.vertices), 2):
                expect = g.has_edge(a, b) and {a, b} != {u, v}
                assert via_blue(a, b) == expect


def test_gadget_component_preservation():
    for g in [path_graph(4), graph(range(5), [(0, 1), (2, 3)]), cycle_graph(5)]:
        gadget, red, blue = red_blue_gadget(g, 2)
        assert len(connected_components(gadget)) == len(connected_components(g))


def test_gadget_dissolves_back():
    # contract the cliques away, dissolve blues: the original graph returns
    for g in [cycle_graph(4), path_graph(3)]:
        gadget, red, blue = red_blue_gadget(g, 2)
        white = gadget.vertices - red - blue
        edges = set()
        for mid in blue:
            a, b = sorted(u for u in gadget.adj[mid] if u in white)
            edges.add((a, b))
        assert graph(white, edges) == g


# ---------------------------------------------------------------------------
# Pattern-guided modification


def test_h_modification_single_edge_equals_edge_step():
    h = graph(range(2), [(0, 1)])
    w = parse_mod_string("(e (F forests))")
    for g in all_graphs_upto(4):
        lhs, _ = h_modification_check(g, h, TARGET_FORESTS)
        rhs = eval_mod(g, w)[0]
        assert lhs == rhs


def test_h_modification_matching():
    # removing a perfect matching of 2 edges from C4 leaves the opposite
    # matching: a forest with exactly two disjoint edges
    matching = graph(range(4), [(0, 1), (2, 3)])
    ok, emb = h_modification_check(cycle_graph(4), matching, TARGET_FORESTS)
    assert ok
    image = {frozenset((emb[a], emb[b])) for a, b in matching.edge_pairs()}
    assert len(image) == 2 and not (set(next(iter(image))) & set(list(image)[1]))
    # but it cannot leave C4 edgeless
    ok2, _ = h_modification_check(cycle_graph(4), matching, TARGET_EDGELESS)
    assert not ok2


def test_h_modification_needs_subgraph():
    ok, emb = h_modification_check(path_graph(3), complete_graph(3), TARGET_EDGELESS)
    assert not ok and emb is None


def test_subgraph_embeddings_counts():
    # a triangle embeds into K4 in 4 * 3! ways
    assert len(list(subgraph_embeddings(complete_graph(3), complete_graph(4)))) == 24


def test_terminal_kind_consistency_helper():
    from modcheck.grammar import terminal_kind_consistent

    w = parse_mod_string("((n (F forests)) and (e (F true ; excl{K3})))")
    assert terminal_kind_consistent(w)
    mixed = parse_mod_string("((n (F forests)) or (F edgeless))")
    assert not terminal_kind_consistent(mixed)
