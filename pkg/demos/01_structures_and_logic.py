#!/usr/bin/env python3
"""Tour of finite structures and the formula evaluator.

Structures are immutable values: a vocabulary (relation symbols with
arities, constant symbols), a finite universe of integer ids, and
interpretations.  Graphs are structures over {E/2} with a symmetric,
loop-free edge relation.
"""

from modcheck import (
    Structure,
    Vocabulary,
    connected_components,
    evaluate,
    gaifman_graph,
    graph,
    induced_substructure,
    is_isomorphic,
    parse_formula,
    pretty,
)
from modcheck.logic import BasicLocalSentence, Top, evaluate_basic_local
from modcheck.smallgraphs import cycle_graph, path_graph, star_graph

# A plain graph: the 5-cycle.
c5 = cycle_graph(5)
print("C5:", sorted(c5.edge_pairs()))

# First-order sentences in the ASCII syntax.  Uppercase identifiers are set
# variables, so plain vertex variables stay lowercase.
has_edge = parse_formula("exists x. exists y. E(x, y)")
dominating_vertex = parse_formula("exists x. forall y. (x = y | E(x, y))")
print("C5 has an edge:", evaluate(c5, has_edge))
print("C5 has a dominating vertex:", evaluate(c5, dominating_vertex))
print("K1,4 has a dominating vertex:", evaluate(star_graph(4), dominating_vertex))

# Monadic second-order quantification ranges over vertex subsets, and
# Card<p>(X) tests |X| modulo p.
even_split = parse_formula(
    "exists X. (Card2(X) & forall x. forall y. ((x in X & !(y in X)) -> !E(x, y)))"
)
print("C5 splits off an even union of components:", evaluate(c5, even_split))

# Distance atoms measure hops in the Gaifman graph.
p4 = path_graph(4)
far_apart = parse_formula("exists x. exists y. dist>2(x, y)")
print("P4 has two vertices at distance > 2:", evaluate(p4, far_apart))

# Disjoint-path atoms: dp2(a,b,c,d) wants two fully vertex-disjoint
# connecting paths, each with at least one interior vertex.
c6 = cycle_graph(6)
dp = parse_formula("dp2(a, b, c, d)")
print("C6 dp2(0,2,3,5):", evaluate(c6, dp, {"a": 0, "b": 2, "c": 3, "d": 5}))
print("C6 dp2(0,3,1,4):", evaluate(c6, dp, {"a": 0, "b": 3, "c": 1, "d": 4}))

# A non-graph structure: one ternary fact R(a,b,c).  Its Gaifman graph is
# the triangle on {a,b,c}, which drives distances and connectivity.
vocab = Vocabulary({"R": 3})
fact = Structure(vocab, frozenset({0, 1, 2}), {"R": frozenset({(0, 1, 2)})})
print("Gaifman graph of R(0,1,2):", sorted(gaifman_graph(fact).edge_pairs()))
print("components:", connected_components(fact))
print("induced on {0,1}:", induced_substructure(fact, {0, 1}).relations)

# Basic local sentences: some (count, radius)-scattered set of vertices,
# each satisfying a local formula.  On P4 the two endpoints are 1-scattered.
two_scattered = BasicLocalSentence(count=2, radius=1, var="x", local=Top())
print("P4 has a (2,1)-scattered pair:", evaluate_basic_local(p4, two_scattered))
print("K3 has one:", evaluate_basic_local(cycle_graph(3), two_scattered))

# Isomorphism is exact permutation search with degree pruning.
relabeled = graph({10, 20, 30, 40, 50},
                  [(10, 20), (20, 30), (30, 40), (40, 50), (50, 10)])
print("C5 isomorphic to relabeled copy:", is_isomorphic(c5, relabeled))
print("pretty-printer round trip:", pretty(dominating_vertex))
