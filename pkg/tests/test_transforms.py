import itertools
import random

import pytest

from modcheck.core import (
    Structure,
    Vocabulary,
    gaifman_graph,
    graph,
    is_isomorphic,
)
from modcheck.logic import evaluate, parse_formula, quantifier_rank
from modcheck.smallgraphs import (
    all_graphs,
    all_graphs_upto,
    cycle_graph,
    path_graph,
    random_graph,
    star_graph,
)
from modcheck.transforms import (
    ApexTuple,
    apex_project_sentence,
    apex_project_structure,
    cl_x,
    eval_connectivity_closure,
    ind_x,
    projected_vocabulary,
    rm_x,
    star_x,
    stellation,
    torso,
    torso_plus,
)


def subsets(vs):
    vs = sorted(vs)
    for k in range(len(vs) + 1):
        yield from map(frozenset, itertools.combinations(vs, k))


# ---------------------------------------------------------------------------
# Graph surgeries


def test_stellation_examples():
    p3 = path_graph(3)
    s = stellation(p3, {1})
    assert len(s.vertices) == 3 and len(s.edges) == 2
    assert stellation(p3, p3.vertices) == p3
    c = stellation(cycle_graph(4), frozenset())
    assert len(c.vertices) == 1 and not c.edges


def test_torso_examples():
    p3 = path_graph(3)
    assert torso(p3, {0, 2}).edges == frozenset({frozenset({0, 2})})
    assert torso(p3, p3.vertices) == p3
    leaves = torso(star_graph(3), {1, 2, 3})
    assert len(leaves.edges) == 3  # triangle on the leaves


def test_torso_plus_examples():
    p3 = path_graph(3)
    t = torso_plus(p3, {0, 2})
    assert len(t.vertices) == 3 and len(t.edges) == 3
    assert torso_plus(p3, p3.vertices) == p3
    single = torso_plus(cycle_graph(5), frozenset())
    assert len(single.vertices) == 1


def test_torso_equals_stellation_cliqued_then_deleted():
    for g in all_graphs_upto(6):
        for keep in subsets(g.vertices):
            stell, comp_map = stellation(g, keep, with_map=True)
            cliqued = stell
            for fresh in comp_map:
                boundary = sorted(cliqued.adj[fresh])
                cliqued = cliqued.add_edges(itertools.combinations(boundary, 2))
            direct = torso(g, keep)
            assert cliqued.subgraph(keep) == direct


# ---------------------------------------------------------------------------
# ind / rm / cl / star


def _annotated(g, members):
    return g.annotate("X", members)


def test_ind_rm_basics():
    tri = cycle_graph(3)
    s = _annotated(tri, {0, 1})
    out = ind_x(s, {0, 1})
    assert "X" not in out.vocabulary.relations
    assert out.relations["E"] == frozenset({(0, 1), (1, 0)})
    assert ind_x(_annotated(tri, tri.vertices), tri.vertices).relations["E"] == tri.relations["E"]
    degenerate = ind_x(s, frozenset())
    assert not degenerate.universe

    assert rm_x(s, frozenset()).universe == tri.universe
    p3 = path_graph(3)
    out2 = rm_x(_annotated(p3, {1}), {1})
    assert out2.universe == frozenset({0, 2}) and not out2.relations["E"]


def test_cl_x_star_center():
    star = star_graph(3)  # center 0, leaves 1..3
    out = cl_x(star.annotate("X", {0}))
    pairs = {tuple(sorted(p)) for p in out.relations["E_cl"] if p[0] < p[1]}
    assert pairs == {(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)}


def test_cl_x_empty_and_single_edge():
    p2 = path_graph(2)
    # the fresh relation is empty for an empty set; originals are untouched
    assert cl_x(p2.annotate("X", frozenset())).relations["E_cl"] == frozenset()
    out = cl_x(p2.annotate("X", {0}))
    assert out.relations["E_cl"] == frozenset({(0, 1), (1, 0)})  # no (1,1) self-pair


def test_cl_x_fresh_symbol_on_plain_structure():
    vocab = Vocabulary({"R": 2})
    s = Structure(vocab, frozenset({0, 1}), {"R": frozenset({(0, 1)})})
    out = cl_x(s.annotate("X", {0}))
    assert out.vocabulary.relations["E"] == 2
    assert out.relations["E"] == frozenset({(0, 1), (1, 0)})


def test_star_x_projects_tuples():
    vocab = Vocabulary({"R": 3})
    s = Structure(vocab, frozenset(range(3)), {"R": frozenset({(0, 1, 2)})})
    out = star_x(s.annotate("X", {0}))
    # 1 and 2 share a Gaifman component, collapsed to min id 1
    assert out.universe == frozenset({0, 1})
    assert out.relations["R"] == frozenset({(0, 1, 1)})
    assert out.annotation("X") == frozenset({1})


def test_star_x_identity_when_all_kept():
    tri = cycle_graph(3)
    out = star_x(tri.annotate("X", tri.vertices))
    assert out.universe == tri.universe
    assert out.annotation("X") == frozenset()


def test_star_x_rejects_constants():
    vocab = Vocabulary({"R": 1}, frozenset({"c"}))
    s = Structure(vocab, frozenset({0}), {}, {"c": 0}).annotate("X", {0})
    with pytest.raises(ValueError):
        star_x(s)


def test_star_matches_stellation_on_graphs():
    for g in all_graphs_upto(6):
        for members in subsets(g.vertices):
            lhs = gaifman_graph(star_x(g.annotate("X", members)))
            rhs = stellation(g, members)
            assert is_isomorphic(lhs, rhs)


def test_cl_star_composition_matches_direct_construction():
    # Gaifman graph of cl(star): components collapsed, each collapsed
    # vertex's neighborhood in the kept set turned into a clique.
    for g in all_graphs_upto(6):
        for members in subsets(g.vertices):
            out = gaifman_graph(cl_x(star_x(g.annotate("X", members))))
            stell, comp_map = stellation(g, members, with_map=True)
            expected = stell
            for fresh in comp_map:
                boundary = sorted(stell.adj[fresh])
                expected = expected.add_edges(itertools.combinations(boundary, 2))
            assert out.edges == expected.edges


def test_connectivity_closure():
    tri = cycle_graph(3)
    has_edge = parse_formula("exists x. exists y. E(x, y)")
    assert eval_connectivity_closure(tri, has_edge) == evaluate(tri, has_edge)
    assert eval_connectivity_closure(tri, parse_formula("exists x. true"))
    two = graph(range(3), [(0, 1)])
    assert not eval_connectivity_closure(two, has_edge)
    with pytest.raises(ValueError):
        eval_connectivity_closure(tri, parse_formula("E(x, y)"))


# ---------------------------------------------------------------------------
# Apex projection


def test_projected_vocabulary_shape():
    vocab = Vocabulary({"E": 2, "U": 1})
    out = projected_vocabulary(vocab, 2)
    assert out.relations["U"] == 1
    assert out.relations["E_1"] == 1 and out.relations["E_2"] == 2
    assert out.relations["E_1_ap"] == 1 and out.relations["E_2_ap"] == 2
    assert out.relations["Y_E_1"] == 1 and out.relations["Y_E_2"] == 1
    assert {"c_1", "c_2"} <= set(out.constants)


def test_apex_projection_triangle():
    tri = cycle_graph(3)
    ap = apex_project_structure(tri, ApexTuple((0,)))
    assert ap.relations["E_1"] == frozenset({(1,), (2,)})
    assert ap.relations["E_2"] == frozenset({(1, 2), (2, 1)})
    assert ap.relations["E_1_ap"] == frozenset({(0,)})
    assert ap.relations["Y_E_1"] == frozenset({(1,), (2,)})
    assert ap.constants["c_1"] == 0


def test_apex_projection_null_tuple_keeps_relation():
    tri = cycle_graph(3)
    ap = apex_project_structure(tri, ApexTuple((None, None)))
    assert ap.relations["E_2"] == tri.relations["E"]
    assert not ap.relations["Y_E_1"] and not ap.relations["Y_E_2"]
    assert ap.constants["c_1"] is None


def test_apex_projection_gaifman_drops_cross_edges():
    for g in all_graphs_upto(5):
        vs = sorted(g.vertices)
        for a in vs:
            ap = apex_project_structure(g, ApexTuple((a,)))
            expected = frozenset(
                e for e in g.edges if not (a in e and e - {a})
            )
            assert gaifman_graph(ap).edges == expected


def test_projection_with_zero_apexes_is_plain_renaming():
    sigma = parse_formula("exists x. exists y. E(x, y)")
    out = apex_project_sentence(sigma, 0, cycle_graph(3).vocabulary)
    from modcheck.logic import pretty

    assert pretty(out) == "exists x. exists y. E_2(x, y)"


def test_projection_rejects_non_fol():
    with pytest.raises(ValueError):
        apex_project_sentence(parse_formula("exists X. Card2(X)"), 1,
                              cycle_graph(3).vocabulary)


SENTENCE_POOL = [
    "true",
    "exists x. exists y. E(x, y)",
    "forall x. exists y. E(x, y)",
    "exists x. forall y. (x = y | !E(x, y))",
    "exists x. (U(x) & exists y. (E(x, y) & !U(y)))",
    "forall x. (U(x) -> exists y. E(x, y))",
    "exists x. exists y. (!(x = y) & !E(x, y))",
    "forall x. forall y. (E(x, y) -> (U(x) | U(y)))",
    "exists x. (!U(x) & forall y. (E(x, y) -> U(y)))",
    "exists x. U(x)",
]


VOCAB_EU = Vocabulary({"E": 2, "U": 1})


def annotated_graph(n, edges, marked):
    rel = set()
    for a, b in edges:
        rel.add((a, b))
        rel.add((b, a))
    return Structure(
        VOCAB_EU,
        frozenset(range(n)),
        {"E": frozenset(rel), "U": frozenset((v,) for v in marked)},
    )


def _apex_tuples(universe, size):
    pool = sorted(universe) + [None]
    return [ApexTuple(t) for t in itertools.product(pool, repeat=size)]


def test_projection_roundtrip_exhaustive_small():
    sentences = [(parse_formula(t), t) for t in SENTENCE_POOL]
    for sigma, text in sentences:
        assert quantifier_rank(sigma) <= 2
    for n in (1, 2, 3):
        all_edges = list(itertools.combinations(range(n), 2))
        for edge_mask in range(1 << len(all_edges)):
            edges = [e for i, e in enumerate(all_edges) if edge_mask >> i & 1]
            for marked_mask in range(1 << n):
                marked = [v for v in range(n) if marked_mask >> v & 1]
                s = annotated_graph(n, edges, marked)
                for size in (1, 2):
                    for apexes in _apex_tuples(s.universe, size):
                        ap = apex_project_structure(s, apexes)
                        for sigma, text in sentences:
                            proj = apex_project_sentence(sigma, size, VOCAB_EU)
                            assert evaluate(s, sigma) == evaluate(ap, proj), (
                                text, n, edges, marked, apexes)


def test_projection_truth_same_for_same_size_tuples():
    rng = random.Random(11)
    sentences = [parse_formula(t) for t in SENTENCE_POOL]
    for _ in range(25):
        n = rng.randint(1, 5)
        g = random_graph(n, 0.5, rng)
        marked = frozenset(v for v in g.vertices if rng.random() < 0.5)
        s = annotated_graph(n, g.edge_pairs(), marked)
        for size in (1, 2):
            tuples = _apex_tuples(s.universe, size)
            rng.shuffle(tuples)
            for sigma in sentences:
                proj = apex_project_sentence(sigma, size, VOCAB_EU)
                values = {
                    evaluate(apex_project_structure(s, t), proj)
                    for t in tuples[:6]
                }
                assert len(values) == 1


def test_projection_inexact_on_directed_relations():
    # The rewrite loses tuple positions, so it over-approximates directed
    # relations: documented scope boundary, exercised here so a behavior
    # change is noticed.
    vocab = Vocabulary({"R": 2, "U": 1})
    s = Structure(
        vocab,
        frozenset({0, 1, 2}),
        {"R": frozenset({(1, 0), (2, 1)}), "U": frozenset()},
    )
    sigma = parse_formula("exists x. exists y. (R(x, y) & R(y, x))")
    assert not evaluate(s, sigma)
    apexes = ApexTuple((1, 2))
    ap = apex_project_structure(s, apexes)
    proj = apex_project_sentence(sigma, 2, vocab)
    assert evaluate(ap, proj)  # false positive by design of the rewrite
