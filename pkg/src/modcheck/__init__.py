"""Desk-scale workbench for compound modulator/target logics on finite
structures, modification grammars, exact width measures, and wall
combinatorics, with brute-force oracles throughout."""

from .core import (
    Graph,
    LimitExceeded,
    Structure,
    Vocabulary,
    connected_components,
    disjoint_union,
    gaifman_graph,
    graph,
    induced_substructure,
    is_isomorphic,
    parse_edge_list,
    parse_structure,
)
from .logic import (
    BasicLocalSentence,
    evaluate,
    evaluate_basic_local,
    free_variables,
    is_scattered,
    parse_formula,
    pretty,
)
from .minors import (
    ObstructionSet,
    contract_edge,
    excl_membership,
    hadwiger_number,
    is_minor,
)
from .transforms import (
    ApexTuple,
    apex_project_sentence,
    apex_project_structure,
    cl_x,
    eval_connectivity_closure,
    ind_x,
    rm_x,
    star_x,
    stellation,
    torso,
    torso_plus,
)
from .width import (
    Bramble,
    TreeDecomposition,
    bramble_order,
    max_bramble_order,
    treedepth_exact,
    treewidth_exact,
    treewidth_of_structure,
    validate_tree_decomposition,
)
from .walls import (
    CanonicalPartition,
    Pseudogrid,
    Wall,
    bidimensionality,
    canonical_partition,
    central_subwall,
    elementary_wall,
    extend_canonical_partition,
    is_pseudogrid,
    layers,
    privileged_components,
    pseudogrid_from_wall,
    subdivide_wall,
    w_privileged_sequence,
)
from .theta import (
    Base,
    BodyAnd,
    BodyOr,
    Child,
    Compound,
    ModulatorContractError,
    ModulatorSentence,
    ThetaMetadata,
    bridge_depth,
    check_clique_exclusion_bound,
    elimination_distance,
    g_treewidth,
    metadata,
    model_check_theta,
    parametric_measure,
    parse_theta,
    replay_witness,
)
from .grammar import (
    ModAnd,
    ModOr,
    Componentwise,
    EdgeDeletion,
    Terminal,
    VertexDeletion,
    eval_mod,
    h_modification_check,
    parse_mod_string,
    red_blue_gadget,
)
