import itertools
import math
import random

import pytest

from modcheck.core import LimitExceeded, graph
from modcheck.logic import (
    And,
    Eq,
    Exists,
    Forall,
    Formula,
    Not,
    Or,
    Rel,
    Top,
    Var,
    conj,
    disj,
    evaluate,
    implies,
    parse_formula,
)
from modcheck.minors import ObstructionSet, complete_graph
from modcheck.smallgraphs import (
    all_graphs_upto,
    cycle_graph,
    path_graph,
    random_graph,
    star_graph,
)
from modcheck.theta import (
    ANNOTATION,
    Base,
    BodyAnd,
    BodyOr,
    Child,
    Compound,
    ModulatorContractError,
    ModulatorSentence,
    TARGET_ALL,
    TARGET_EDGELESS,
    TARGET_EMPTY,
    TARGET_FORESTS,
    TARGET_PLANAR,
    ThetaMetadata,
    bridge_depth,
    check_clique_exclusion_bound,
    elimination_distance,
    empty_modulator,
    g_treewidth,
    metadata,
    model_check_theta,
    parametric_measure,
    parse_theta,
    replay_witness,
    size_at_most_modulator,
    theta_to_text,
)
from modcheck.transforms import stellation
from modcheck.width import treedepth_exact


def holds(structure, theta, **kw):
    result, _ = model_check_theta(structure, theta, **kw)
    return result


# ---------------------------------------------------------------------------
# Metadata


def test_metadata_shapes():
    base = Base(Top(), ObstructionSet((complete_graph(3),)))
    assert metadata(base) == ThetaMetadata(0, 0, 3)
    one = Compound(size_at_most_modulator(1), Child(base))
    assert metadata(one) == ThetaMetadata(1, 1, 3)
    two = Compound(
        size_at_most_modulator(2),
        BodyAnd((Child(one, per_component=True), Child(Base(Top())))),
    )
    m = metadata(two)
    assert (m.height, m.tw, m.hw) == (2, 2, 3)
    assert m.clique_exclusion_bound == 3 + 3 * 2


def test_base_variant_validation():
    with pytest.raises(ValueError):
        Base(parse_formula("dp2(a,b,c,d)"))
    Base(parse_formula("dp2(a,b,c,d)"), variant="dp")


# ---------------------------------------------------------------------------
# Model checking


def test_planarization_shape():
    theta = Compound(size_at_most_modulator(1), Child(TARGET_PLANAR))
    ok, witness = model_check_theta(complete_graph(5), theta)
    assert ok and witness["modulator"] == [0]
    assert not holds(complete_graph(6), theta)


def test_void_modulator_reduces_to_target():
    theta = Compound(empty_modulator(), Child(TARGET_FORESTS))
    for g in [path_graph(4), cycle_graph(4), star_graph(3)]:
        assert holds(g, theta) == holds(g, TARGET_FORESTS)


def test_full_modulator_moves_question_into_modulator():
    # deleting the whole universe leaves the empty graph; the property asked
    # of the graph must live in the modulator sentence, which then genuinely
    # has bounded-treewidth models (here: edgeless ones)
    all_deleted_edgeless = ModulatorSentence(
        conj(
            Forall("x", Not(Rel(ANNOTATION, (Var("x"),)))),
            parse_formula("!exists x. exists y. E(x, y)"),
        ),
        declared_tw=0,
    )
    theta = Compound(all_deleted_edgeless, Child(TARGET_EMPTY))
    assert holds(graph(range(3), ()), theta)
    assert not holds(path_graph(3), theta)


def test_modulator_cap():
    theta = Compound(size_at_most_modulator(0), Child(TARGET_ALL))
    with pytest.raises(LimitExceeded):
        model_check_theta(graph(range(15), ()), theta, cap=14)


def test_declared_tw_violation_aborts():
    # claims treewidth 0 but accepts arbitrary modulators; the empty-graph
    # target pushes the search past the harmless empty modulator
    lying = ModulatorSentence(Top(), declared_tw=0)
    theta = Compound(lying, Child(TARGET_EMPTY))
    with pytest.raises(ModulatorContractError):
        model_check_theta(cycle_graph(4), theta)
    # an honestly declared bound on the same formula is fine
    honest = Compound(ModulatorSentence(Top(), declared_tw=2), Child(TARGET_EMPTY))
    assert holds(cycle_graph(4), honest)


def test_connectivity_closed_child():
    has_edge = Base(parse_formula("exists x. exists y. E(x, y)"))
    theta_cc = Compound(empty_modulator(), Child(has_edge, per_component=True))
    theta_plain = Compound(empty_modulator(), Child(has_edge))
    two_comp = graph(range(4), [(0, 1), (2, 3)])
    one_bad = graph(range(3), [(0, 1)])
    assert holds(two_comp, theta_cc)
    assert not holds(one_bad, theta_cc)
    assert holds(one_bad, theta_plain)


def test_body_boolean_combinations():
    edgeless_child = Child(TARGET_EDGELESS)
    forest_child = Child(TARGET_FORESTS)
    both = Compound(size_at_most_modulator(1), BodyAnd((edgeless_child, forest_child)))
    either = Compound(size_at_most_modulator(1), BodyOr((edgeless_child, forest_child)))
    tri = cycle_graph(3)
    assert not holds(tri, both)  # deleting one triangle vertex leaves an edge
    assert holds(tri, either)  # ... which is a forest
    ok, witness = model_check_theta(tri, either)
    assert witness["body"]["or"] == 1


def test_witnesses_replay():
    rng = random.Random(6)
    pool = _theta_pool()[:8]
    for _ in range(30):
        g = random_graph(rng.randint(1, 5), 0.5, rng)
        for theta in pool:
            ok, witness = model_check_theta(g, theta)
            if ok:
                assert replay_witness(g, theta, witness)


# ---------------------------------------------------------------------------
# Graph-level oracle: Eq (1) semantics via stellation with the deleted set
# annotated (the structure-level star form marks the complement)


def _negate_annotation(phi: Formula) -> Formula:
    if isinstance(phi, Rel) and phi.symbol == ANNOTATION:
        return Not(phi)
    if isinstance(phi, Not):
        return Not(_negate_annotation(phi.body))
    if isinstance(phi, (And, Or)):
        cls = type(phi)
        return cls(tuple(_negate_annotation(p) for p in phi.parts))
    if isinstance(phi, (Exists, Forall)):
        cls = type(phi)
        return cls(phi.var, _negate_annotation(phi.body))
    return phi


def _stellation_form_check(g, theta) -> bool:
    """Single-compound graph semantics: stellation of X annotated with X."""
    assert isinstance(theta, Compound) and isinstance(theta.body, Child)
    beta_graph = _negate_annotation(theta.modulator.formula)
    vs = sorted(g.vertices)
    for k in range(len(vs) + 1):
        for subset in itertools.combinations(vs, k):
            removed = frozenset(subset)
            stell = stellation(g, removed)
            annotated = stell.annotate(ANNOTATION, removed)
            if not evaluate(annotated, beta_graph):
                continue
            rest = g.subgraph(g.vertices - removed)
            child = theta.body
            if child.per_component:
                from modcheck.core import connected_components, induced_substructure

                if all(
                    holds(induced_substructure(rest, comp), child.theta)
                    for comp in connected_components(rest)
                ):
                    return True
            elif holds(rest, child.theta):
                return True
    return False


def test_star_form_matches_stellation_form():
    modulators = [size_at_most_modulator(1), size_at_most_modulator(2), empty_modulator()]
    targets = [Child(TARGET_FORESTS), Child(TARGET_EDGELESS, per_component=True),
               Child(Base(parse_formula("exists x. exists y. E(x, y)")))]
    for g in all_graphs_upto(5):
        for beta in modulators:
            for child in targets:
                theta = Compound(beta, child)
                assert holds(g, theta) == _stellation_form_check(g, theta)


# ---------------------------------------------------------------------------
# Clique-exclusion bound (pool checked exhaustively in the acceptance suite)


def _theta_pool():
    k2 = ObstructionSet((complete_graph(2),))
    k3 = ObstructionSet((complete_graph(3),))
    k4 = ObstructionSet((complete_graph(4),))
    has_edge = parse_formula("exists x. exists y. E(x, y)")
    no_edge = parse_formula("!exists x. exists y. E(x, y)")
    bases = [
        Base(Top(), k3),
        Base(has_edge, k4),
        Base(no_edge, k2),
        Base(Top(), k2),
    ]
    pool = list(bases)
    for base in bases[:3]:
        pool.append(Compound(size_at_most_modulator(1), Child(base)))
        pool.append(Compound(size_at_most_modulator(1), Child(base, per_component=True)))
        pool.append(Compound(empty_modulator(), Child(base)))
    pool.append(
        Compound(
            size_at_most_modulator(2),
            BodyOr((Child(bases[0]), Child(bases[2], per_component=True))),
        )
    )
    pool.append(
        Compound(
            size_at_most_modulator(1),
            Child(Compound(size_at_most_modulator(1), Child(bases[0]))),
        )
    )
    pool.append(
        Compound(
            size_at_most_modulator(1),
            BodyAnd(
                (
                    Child(Compound(empty_modulator(), Child(bases[1]))),
                    Child(bases[3], per_component=True),
                )
            ),
        )
    )
    return pool


def test_model_clique_bound_on_found_models():
    rng = random.Random(13)
    pool = _theta_pool()
    assert len(pool) >= 12
    hits = 0
    for _ in range(40):
        g = random_graph(rng.randint(1, 6), 0.4, rng)
        for theta in pool:
            if holds(g, theta):
                assert check_clique_exclusion_bound(g, theta)
                hits += 1
    assert hits > 20


def test_base_with_obstruction_requires_exclusion():
    theta = Base(Top(), ObstructionSet((complete_graph(3),)))
    assert holds(path_graph(4), theta)
    assert not holds(cycle_graph(3), theta)
    # plain-FOL base never checks minors
    assert holds(cycle_graph(3), TARGET_ALL)


# ---------------------------------------------------------------------------
# Measures


def test_parametric_measure_examples():
    assert parametric_measure(cycle_graph(5), "size", TARGET_FORESTS) == 1
    assert parametric_measure(complete_graph(4), "treewidth", TARGET_EDGELESS) == 2
    assert parametric_measure(complete_graph(4), "treedepth", TARGET_ALL) == 0
    with pytest.raises(ValueError):
        parametric_measure(path_graph(2), "girth", TARGET_ALL)


def test_parametric_measure_infeasible_reports_inf():
    impossible = Base(parse_formula("exists x. !(x = x)"))
    value = parametric_measure(path_graph(2), "size", impossible)
    assert value == math.inf


def test_elimination_distance_examples():
    assert elimination_distance(path_graph(4), TARGET_FORESTS) == 0
    assert elimination_distance(complete_graph(4), TARGET_FORESTS) == 2
    assert elimination_distance(path_graph(4), TARGET_EMPTY) == 3
    assert elimination_distance(path_graph(4), TARGET_EDGELESS) == 2
    assert elimination_distance(graph(range(2), ()), TARGET_EDGELESS) == 0


def test_elimination_distance_to_empty_is_treedepth():
    rng = random.Random(3)
    for _ in range(15):
        g = random_graph(rng.randint(1, 6), 0.45, rng)
        assert elimination_distance(g, TARGET_EMPTY) == treedepth_exact(g)


def test_elimination_distance_matches_torso_treedepth_form():
    # recursive semantics agree with min over X of treedepth(torso(G, X))
    rng = random.Random(19)
    for _ in range(10):
        g = random_graph(rng.randint(1, 5), 0.5, rng)
        for target in (TARGET_FORESTS, TARGET_EDGELESS):
            assert elimination_distance(g, target) == parametric_measure(
                g, "treedepth", target
            )


def test_g_treewidth_examples():
    assert g_treewidth(path_graph(4), TARGET_FORESTS) == 0
    for n in (5, 6, 7):
        assert g_treewidth(cycle_graph(n), TARGET_EDGELESS) == 2
    # C4 is special: the antipodal cover {0,2} leaves an edgeless remainder
    # and its torso is a single edge, so the measure drops to 1
    assert g_treewidth(cycle_graph(4), TARGET_EDGELESS) == 1
    assert g_treewidth(complete_graph(4), TARGET_ALL) == 0


def _bridge_depth_oracle(g, target_is_edgeless=True):
    """Independent brute force over removal traces for the edgeless target."""

    def is_forest(h):
        from modcheck.core import connected_components

        return len(h.edges) == len(h.vertices) - len(connected_components(h))

    from modcheck.core import components_avoiding
    from modcheck.transforms import torso_plus

    def feasible(h, k):
        if not h.edges:
            return True
        if k == 0:
            return False
        vs = sorted(h.vertices)
        for size in range(len(vs) + 1):
            for subset in itertools.combinations(vs, size):
                removed = frozenset(subset)
                if not is_forest(torso_plus(h, removed)):
                    continue
                if all(
                    feasible(h.subgraph(c), k - 1)
                    for c in components_avoiding(h, removed)
                ):
                    return True
        return False

    for k in range(len(g.vertices) + 2):
        if feasible(g, k):
            return k
    return math.inf


def test_bridge_depth_examples():
    assert bridge_depth(path_graph(4), TARGET_FORESTS) == 0
    tree = star_graph(3)
    assert bridge_depth(tree, TARGET_EDGELESS) <= treedepth_exact(tree)
    assert bridge_depth(cycle_graph(4), TARGET_EDGELESS) == _bridge_depth_oracle(
        cycle_graph(4)
    )
    rng = random.Random(23)
    for _ in range(6):
        g = random_graph(rng.randint(1, 5), 0.5, rng)
        assert bridge_depth(g, TARGET_EDGELESS) == _bridge_depth_oracle(g)


# ---------------------------------------------------------------------------
# Surface syntax


def test_parse_theta_roundtrip():
    texts = [
        "base(true ; excl{K5,K33})",
        "base(exists x. exists y. E(x, y))",
        "mod(forall x. X(x) ; tw=0) |> (base(true ; excl{K3}))",
        "mod(true ; tw=2) |> (cc(base(true ; excl{K2})) and base(true ; excl{K4}))",
        "mod(true ; tw=1) |> (base(true) or (base(false) and cc(base(true))))",
    ]
    for text in texts:
        theta = parse_theta(text)
        again = parse_theta(theta_to_text(theta))
        assert again == theta


def test_parse_theta_errors():
    from modcheck.logic import SyntaxIssue

    with pytest.raises((SyntaxIssue, ValueError)):
        parse_theta("mod(true) |> (base(true))")
    with pytest.raises((SyntaxIssue, ValueError)):
        parse_theta("base(true ; excl{K3}")


def test_theta_vs_plain_bridge():
    # attaching a hw(G)+1 clique exclusion to every base leaves truth intact
    from modcheck.minors import hadwiger_number

    plain = Compound(size_at_most_modulator(1),
                     Child(Base(parse_formula("!exists x. exists y. E(x, y)"))))

    def enriched(bound):
        target = Base(
            parse_formula("!exists x. exists y. E(x, y)"),
            ObstructionSet((complete_graph(bound),), bound=bound),
        )
        return Compound(size_at_most_modulator(1), Child(target))

    count = 0
    for g in all_graphs_upto(5):
        if not g.vertices:
            continue
        bound = hadwiger_number(g) + 1
        assert holds(g, plain) == holds(g, enriched(bound))
        count += 1
    assert count > 30
    # sampled larger graphs, up to 8 vertices
    rng = random.Random(31)
    for _ in range(30):
        g = random_graph(rng.randint(6, 8), rng.choice([0.25, 0.4, 0.6]), rng)
        bound = hadwiger_number(g) + 1
        assert holds(g, plain) == holds(g, enriched(bound))
