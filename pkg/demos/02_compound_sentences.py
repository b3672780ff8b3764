#!/usr/bin/env python3
"""Compound modulator/target sentences and the modulator measures.

A compound sentence asks for a deletion set X: the collapsed (star)
structure must satisfy the modulator sentence, and the remainder must
satisfy a positive-Boolean combination of child sentences, each child
optionally applied per connected component.  The modulator sentence carries
a declared treewidth bound for its cliqued star structures; every accepted
X is verified against it.
"""

import math

from modcheck import (
    metadata,
    model_check_theta,
    parse_theta,
    replay_witness,
)
from modcheck.smallgraphs import complete_graph, cycle_graph, path_graph
from modcheck.theta import (
    TARGET_EDGELESS,
    TARGET_EMPTY,
    TARGET_FORESTS,
    TARGET_PLANAR,
    Child,
    Compound,
    bridge_depth,
    elimination_distance,
    g_treewidth,
    parametric_measure,
    size_at_most_modulator,
)
from modcheck.width import treedepth_exact

# "Delete at most one vertex so the rest is planar."  In star structures the
# annotation marks collapsed components, so a size bound on the deleted set
# counts the non-annotated elements; size_at_most_modulator writes that out.
planarize = Compound(size_at_most_modulator(1), Child(TARGET_PLANAR))
k5 = complete_graph(5)
holds, witness = model_check_theta(k5, planarize)
print("K5 planarizable by one deletion:", holds, "witness:", witness["modulator"])
print("witness replays:", replay_witness(k5, planarize, witness))
print("K6 too?", model_check_theta(complete_graph(6), planarize)[0])

# Metadata: height counts modulator levels; the treewidth and clique bounds
# feed the guarantee that models exclude a complete-graph minor.
m = metadata(planarize)
print("height/tw/hw:", m.height, m.tw, m.hw,
      "-> models exclude K_%d" % m.clique_exclusion_bound)

# The same sentence in the surface syntax (one universally bounded deleted
# vertex, then planar target):
text = (
    "mod(forall x0. forall x1. ((!X(x0) & !X(x1)) -> x0 = x1) ; tw=1)"
    " |> (base(true ; excl{K5,K33}))"
)
print("parsed == constructed:", model_check_theta(k5, parse_theta(text))[0])

# Modulator measures.  Vertex-deletion distance, elimination distance,
# bridge-depth, and class-constrained treewidth are all instances of
# "minimize a parameter of the torso over feasible deleted sets".
c5 = cycle_graph(5)
print("deletion distance C5 -> forests:", parametric_measure(c5, "size", TARGET_FORESTS))
print("class treewidth K4 -> edgeless:", g_treewidth(complete_graph(4), TARGET_EDGELESS))

p4 = path_graph(4)
print("elimination distance P4 -> edgeless:", elimination_distance(p4, TARGET_EDGELESS))
print("elimination distance P4 -> empty:", elimination_distance(p4, TARGET_EMPTY),
      "= treedepth:", treedepth_exact(p4))
print("bridge-depth C4 -> edgeless:", bridge_depth(cycle_graph(4), TARGET_EDGELESS))

# Infeasible targets report an unbounded measure rather than a sentinel.
impossible = parse_theta("base(exists x. !(x = x))")
value = parametric_measure(p4, "size", impossible)
print("measure against an unsatisfiable target:", value, math.isinf(value))
