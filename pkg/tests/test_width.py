import itertools
import random

import pytest

from modcheck.core import LimitExceeded, graph, Structure, Vocabulary
from modcheck.minors import is_minor
from modcheck.smallgraphs import (
    all_graphs,
    all_graphs_upto,
    complete_graph,
    connected_graphs_upto,
    cycle_graph,
    grid_graph,
    path_graph,
    random_graph,
    star_graph,
)
from modcheck.width import (
    Bramble,
    TreeDecomposition,
    bramble_order,
    enumerate_brambles_bruteforce,
    max_bramble_order,
    treedepth_exact,
    treewidth_exact,
    treewidth_of_structure,
    validate_tree_decomposition,
)


# ---------------------------------------------------------------------------
# Treewidth


def test_treewidth_goldens():
    assert treewidth_exact(star_graph(5), with_decomposition=False) == 1
    assert treewidth_exact(path_graph(6), with_decomposition=False) == 1
    for n in (3, 4, 5, 6):
        assert treewidth_exact(cycle_graph(n), with_decomposition=False) == 2
    for n in (1, 2, 3, 4, 5):
        assert treewidth_exact(complete_graph(n), with_decomposition=False) == n - 1
    assert treewidth_exact(graph(range(3), ()), with_decomposition=False) == 0
    assert treewidth_exact(graph((), ()), with_decomposition=False) == -1


def test_returned_decompositions_validate():
    rng = random.Random(4)
    cases = [cycle_graph(5), grid_graph(3, 3), complete_graph(4), star_graph(4)]
    cases += [random_graph(7, 0.4, rng) for _ in range(10)]
    for g in cases:
        width, td = treewidth_exact(g)
        ok, issues = validate_tree_decomposition(g, td)
        assert ok, issues
        assert td.width == width


def test_validate_catches_violations():
    p3 = path_graph(3)
    # single bag: valid, width n-1
    td = TreeDecomposition((frozenset({0, 1, 2}),), ())
    ok, _ = validate_tree_decomposition(p3, td)
    assert ok and td.width == 2
    # missing edge coverage
    td2 = TreeDecomposition((frozenset({0, 1}), frozenset({2})), ((0, 1),))
    ok2, issues2 = validate_tree_decomposition(p3, td2)
    assert not ok2 and any("in no bag" in i for i in issues2)
    # disconnected vertex trace
    td3 = TreeDecomposition(
        (frozenset({0, 1}), frozenset({1, 2}), frozenset({0, 1})),
        ((0, 1), (1, 2)),
    )
    ok3, issues3 = validate_tree_decomposition(p3, td3)
    assert not ok3 and any("disconnected in the tree" in i for i in issues3)


def test_td_text_roundtrip():
    width, td = treewidth_exact(grid_graph(2, 3))
    parsed = TreeDecomposition.from_text(td.to_text())
    assert parsed.bags == td.bags and set(parsed.tree_edges) == set(td.tree_edges)


def test_treewidth_limit():
    with pytest.raises(LimitExceeded):
        treewidth_exact(grid_graph(5, 5), limit=20)


def test_treewidth_minor_monotone_sampled():
    rng = random.Random(7)
    pool = list(all_graphs_upto(5))
    checked = 0
    while checked < 30:
        h, g = rng.choice(pool), rng.choice(pool)
        if is_minor(h, g):
            assert treewidth_exact(h, with_decomposition=False) <= treewidth_exact(
                g, with_decomposition=False
            )
            checked += 1


def test_treewidth_of_structure():
    tri = cycle_graph(3)
    assert treewidth_of_structure(tri) == 2
    vocab = Vocabulary({"R": 3})
    s = Structure(vocab, frozenset(range(3)), {"R": frozenset({(0, 1, 2)})})
    assert treewidth_of_structure(s) == 2
    edgeless = Structure(vocab, frozenset(range(3)), {"R": frozenset()})
    assert treewidth_of_structure(edgeless) == 0


# ---------------------------------------------------------------------------
# Brambles


def test_bramble_order_examples():
    k3 = complete_graph(3)
    singletons = Bramble((frozenset({0}), frozenset({1}), frozenset({2})))
    assert bramble_order(k3, singletons) == 3
    assert bramble_order(k3, Bramble((frozenset({0, 1}),))) == 1


def test_cross_bramble_of_grid():
    g = grid_graph(3, 3)

    def vid(r, c):
        return 3 * r + c

    crosses = []
    for r in range(3):
        for c in range(3):
            crosses.append(
                frozenset({vid(r, cc) for cc in range(3)} | {vid(rr, c) for rr in range(3)})
            )
    order = bramble_order(g, Bramble(tuple(crosses)))
    assert order == 3


def test_bramble_validation():
    p3 = path_graph(3)
    with pytest.raises(ValueError):
        bramble_order(p3, Bramble((frozenset({0, 2}),)))  # disconnected set
    with pytest.raises(ValueError):
        bramble_order(p3, Bramble((frozenset({0}), frozenset({2}))))  # not touching


def test_max_bramble_order_examples():
    assert max_bramble_order(complete_graph(3)) == 3
    assert max_bramble_order(path_graph(3)) == 2
    assert max_bramble_order(cycle_graph(4)) == 3
    with pytest.raises(LimitExceeded):
        max_bramble_order(complete_graph(8))


def test_max_bramble_matches_bruteforce_enumeration():
    for g in all_graphs_upto(5):
        if not g.vertices:
            continue
        best = max(
            (bramble_order(g, b) for b in enumerate_brambles_bruteforce(g)),
            default=0,
        )
        assert max_bramble_order(g) == best


def test_duality_exhaustive_connected_5():
    for g in connected_graphs_upto(5):
        tw = treewidth_exact(g, with_decomposition=False)
        assert max_bramble_order(g) == tw + 1, g.edge_pairs()


# ---------------------------------------------------------------------------
# Treedepth


def _rooted_forest_depth_oracle(g) -> int:
    """Min height over rooted forests where every edge joins ancestor pairs."""
    vs = sorted(g.vertices)
    if not vs:
        return 0
    n = len(vs)
    best = n
    # parent[i] in range(n+1); n means root
    for parents in itertools.product(range(n + 1), repeat=n):
        if any(parents[i] == i for i in range(n)):
            continue
        # acyclicity + depth
        depth = {}

        def depth_of(i):
            if i in depth:
                return depth[i]
            seen = []
            j = i
            while j != n and j not in depth:
                seen.append(j)
                j = parents[j]
                if len(seen) > n:
                    return None
            basis = 0 if j == n else depth[j]
            for k, node in enumerate(reversed(seen), start=1):
                depth[node] = basis + k
            return depth[i]

        ok = True
        for i in range(n):
            if depth_of(i) is None:
                ok = False
                break
        if not ok:
            continue

        def is_ancestor(a, b):
            j = b
            while j != n:
                j = parents[j]
                if j == a:
                    return True
            return False

        index = {v: i for i, v in enumerate(vs)}
        if all(
            is_ancestor(index[a], index[b]) or is_ancestor(index[b], index[a])
            for a, b in g.edge_pairs()
        ):
            best = min(best, max(depth.values()))
    return best


def test_treedepth_examples():
    assert treedepth_exact(graph((), ())) == 0
    assert treedepth_exact(complete_graph(1)) == 1
    assert treedepth_exact(path_graph(4)) == 3
    for n in (2, 3, 4, 5):
        assert treedepth_exact(complete_graph(n)) == n


def test_treedepth_matches_forest_oracle():
    rng = random.Random(12)
    cases = [path_graph(4), cycle_graph(4), star_graph(3)]
    cases += [random_graph(5, 0.5, rng) for _ in range(5)]
    for g in cases:
        assert treedepth_exact(g) == _rooted_forest_depth_oracle(g)
