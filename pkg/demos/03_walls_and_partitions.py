#!/usr/bin/env python3
"""Walls, canonical partitions, pseudogrids, and privileged components.

An elementary r-wall is the hexagonal brick pattern cut from a (2r x r)
grid.  Its canonical partition tiles the wall with connected grid-indexed
bags; the greedy extension absorbs a host graph around the wall.  The rows
and zigzag columns form a pseudogrid, and deleting any vertex set leaves at
most one component holding a full row and a full column.
"""

import random

from modcheck import (
    bidimensionality,
    canonical_partition,
    central_subwall,
    elementary_wall,
    extend_canonical_partition,
    graph,
    is_pseudogrid,
    layers,
    privileged_components,
    pseudogrid_from_wall,
    subdivide_wall,
    w_privileged_sequence,
)
from modcheck.transforms import cl_x, star_x
from modcheck.width import treewidth_of_structure

wall = elementary_wall(5)
print("5-wall:", len(wall.vertices), "vertices,", len(wall.graph.edges), "edges")
print("layers:", [len(l) for l in layers(wall)], "central:", wall.central_vertices())
print("central 3-subwall size:", len(central_subwall(wall, 3).vertices))

# Subdividing edges keeps every derived notion intact.
plan = {((1, 1), (2, 1)): 2, ((1, 1), (1, 2)): 1}
longer = subdivide_wall(wall, plan)
print("after subdividing:", len(longer.vertices), "vertices")

# Canonical partition: (r-2)^2 internal bags plus the external bag.
cp = canonical_partition(wall)
print("internal bags:", len(cp.internal),
      "| sizes:", sorted({len(b) for b in cp.internal.values()}))

# A host graph around the wall: chords and pendant vertices.
rng = random.Random(1)
vs = sorted(wall.vertices)
host = graph(vs + [100, 101], list(wall.graph.edge_pairs())
             + [(3, 27), (11, 40), (100, 0), (100, 101)])
extended = extend_canonical_partition(host, frozenset(), wall)
print("extension covers host:", extended.covered() == host.vertices)

# Bidimensionality counts touched internal bags.  Sets whose cliqued star
# structure has small treewidth touch few bags.
removed = frozenset({17, 18, 23})
annotated = host.annotate("X", removed)
width = treewidth_of_structure(cl_x(star_x(annotated)))
bid = bidimensionality(removed, extended)
print(f"deleted set {sorted(removed)}: cliqued-star treewidth {width}, "
      f"touches {bid} bags (bound {(width + 1) ** 2})")

# Pseudogrid and privileged components.
grid = pseudogrid_from_wall(wall)
print("pseudogrid valid in host:", is_pseudogrid(host, grid))
for density in (0.05, 0.3):
    cut = frozenset(v for v in host.vertices if rng.random() < density)
    comps = privileged_components(host, grid, cut)
    print(f"cut density {density}: {len(comps)} privileged component(s)")

# Scenario-driven nested sets: 'b' keeps the whole remainder, 'o' narrows
# to the privileged component of everything removed from this level down.
x1, x2 = frozenset({0, 1, 2}), frozenset({30, 31})
seq = w_privileged_sequence(host, grid, [x1, x2], "ob")
print("nested sizes:", [len(s) for s in seq])
