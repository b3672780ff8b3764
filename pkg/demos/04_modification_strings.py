#!/usr/bin/env python3
"""The modification-string language and its gadgetry.

Strings compose vertex deletion (n), edge deletion (e), per-component
application (c), and/or over terminal target sentences.  The red/blue
gadget turns edge deletions into vertex deletions: subdivide every edge
(blue vertex) and anchor every original vertex with a fresh clique (red
vertices), so deleting a blue vertex severs exactly one original edge
while original vertices stay recognizable.
"""

from modcheck import (
    eval_mod,
    h_modification_check,
    parse_mod_string,
    red_blue_gadget,
)
from modcheck.grammar import mod_depth
from modcheck.smallgraphs import complete_graph, cycle_graph, path_graph
from modcheck.theta import TARGET_FORESTS
from modcheck.core import graph

# One edge deletion to reach planarity: true for K5.
w = parse_mod_string("(e (F planar))")
holds, script = eval_mod(complete_graph(5), w)
print("K5, delete one edge to planar:", holds, script)

# Sugar: n^2 nests two vertex deletions.  K5 needs both to reach planarity
# by vertex deletions... actually one suffices; two certainly do.
w2 = parse_mod_string("(n^2 (F planar))")
print("tree depth:", mod_depth(w2), "| K5:", eval_mod(complete_graph(5), w2)[0])

# Conjunction and per-component steps.
w3 = parse_mod_string(
    "((n (F forests)) and (c (F exists x. exists y. E(x, y))))"
)
print("C4 and-combined:", eval_mod(cycle_graph(4), w3)[0])

# Hierarchical steps are strict: an edge-deletion step needs an edge to
# delete, so isolated components fail it and need a disjunctive escape.
w4 = parse_mod_string("(n (c (e (F edgeless))))")
w5 = parse_mod_string("(n (c ((e (F edgeless)) or (F edgeless))))")
print("P4 strict layered:", eval_mod(path_graph(4), w4)[0],
      "| with escape:", eval_mod(path_graph(4), w5)[0])

# The red/blue gadget at work.
g = cycle_graph(4)
gadget, red, blue = red_blue_gadget(g, c=2)
print(f"gadget of C4 (c=2): {len(gadget.vertices)} vertices "
      f"({len(red)} red, {len(blue)} blue)")

# Pattern-guided edge removal: delete a 2-matching from C4 and land in the
# forests; the embedding found names the matched edges.
matching = graph(range(4), [(0, 1), (2, 3)])
ok, embedding = h_modification_check(cycle_graph(4), matching, TARGET_FORESTS)
print("C4 minus a perfect matching is a forest:", ok, "embedding:", embedding)
