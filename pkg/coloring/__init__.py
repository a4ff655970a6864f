"""
貪欲彩色パッケージ

Grundy彩色・部分Grundy彩色・b彩色コアの厳密ソルバー、ガジェット生成、
下界用の帰着、K_{t,t} を含まないグラフでのFPTアルゴリズムを提供します。
"""

from .errors import (
    GreedyColoringError,
    CapExceededError,
    ContractBreachError,
    InvalidInstanceError,
    MalformedCertificateError,
    InvalidSolutionError,
    PreconditionError,
    ExtractionFailure,
)

from .graph_core import (
    Graph,
    GraphBuilder,
    TwinReduction,
    BicliqueResult,
    LabeledComponent,
    RamseyOutcome,
    induced_subgraph,
    connected_components,
    is_independent,
    is_clique,
    false_twin_classes,
    duplicate_vertices,
    find_biclique,
    has_biclique,
    find_labeled_isomorphism,
    labeled_isomorphic,
    ramsey_split,
    ramsey_clique_or_independent,
)

from .colorings import (
    WitnessKind,
    Verdict,
    Coloring,
    WitnessCertificate,
    SamplerReport,
    first_fit,
    certificate_from_coloring,
    verify_grundy,
    verify_partial_grundy,
    verify_b_coloring,
    verify_certificate,
    extend_partial_grundy,
    GreedyTrace,
    sample_first_fit_orders,
)

from .exact import (
    SolveResult,
    grundy_number,
    grundy_number_by_orderings,
    rooted_grundy,
    degree_bound_holds,
    crown_bound_holds,
    grundy_witness_search,
    find_partial_grundy_witness,
    find_b_core_witness,
    partial_grundy_number,
    b_chromatic_core_order,
)

from .generators import (
    GadgetFamily,
    GadgetSpec,
    binomial_tree,
    binomial_tree_coloring,
    pruned_binomial_tree,
    t5_edge_tree,
    half_graph,
    half_graph_path,
    half_graph_cycle,
    check_cycle_level_structure,
    anti_matching,
    star_forest,
    random_graph,
    random_almost_bounded_graph,
    parse_gadget_params,
)

from .reductions import (
    ReductionOutput,
    MisInstance,
    McsiInstance,
    GridTilingInstance,
    McsiCertificate,
    reduce_mis_to_rooted_grundy,
    find_multicolored_is,
    has_multicolored_is,
    mis_solution_certificate,
    reduce_mcsi_to_grundy,
    find_mcsi_solution,
    mcsi_solution_certificate,
    check_mcsi_gadget,
    reduce_gridtiling_to_bcore,
    find_grid_tiling_solution,
    gridtiling_certificate,
    verify_gridtiling_certificate,
)

from .fpt import (
    SeparatingFamily,
    TowerNumber,
    Thresholds,
    StarOrCliqueWitness,
    FptResult,
    separating_family,
    tower,
    thresholds,
    anti_biclique_extract,
    clique_or_multipartite_is,
    star_forest_extract,
    solve_almost_bounded_degree,
    exchange_component,
    solve_ktt_free,
)

from .formats import (
    ValidationResult,
    load_graph,
    load_certificate,
    load_instance,
    load_solution,
    write_graph,
    make_envelope,
    dump_json,
)

__all__ = [
    # errors
    'GreedyColoringError',
    'CapExceededError',
    'ContractBreachError',
    'InvalidInstanceError',
    'MalformedCertificateError',
    'InvalidSolutionError',
    'PreconditionError',
    'ExtractionFailure',
    # graph_core
    'Graph',
    'GraphBuilder',
    'TwinReduction',
    'BicliqueResult',
    'LabeledComponent',
    'RamseyOutcome',
    'induced_subgraph',
    'connected_components',
    'is_independent',
    'is_clique',
    'false_twin_classes',
    'duplicate_vertices',
    'find_biclique',
    'has_biclique',
    'find_labeled_isomorphism',
    'labeled_isomorphic',
    'ramsey_split',
    'ramsey_clique_or_independent',
    # colorings
    'WitnessKind',
    'Verdict',
    'Coloring',
    'WitnessCertificate',
    'SamplerReport',
    'first_fit',
    'certificate_from_coloring',
    'verify_grundy',
    'verify_partial_grundy',
    'verify_b_coloring',
    'verify_certificate',
    'extend_partial_grundy',
    'GreedyTrace',
    'sample_first_fit_orders',
    # exact
    'SolveResult',
    'grundy_number',
    'grundy_number_by_orderings',
    'rooted_grundy',
    'degree_bound_holds',
    'crown_bound_holds',
    'grundy_witness_search',
    'find_partial_grundy_witness',
    'find_b_core_witness',
    'partial_grundy_number',
    'b_chromatic_core_order',
    # generators
    'GadgetFamily',
    'GadgetSpec',
    'binomial_tree',
    'binomial_tree_coloring',
    'pruned_binomial_tree',
    't5_edge_tree',
    'half_graph',
    'half_graph_path',
    'half_graph_cycle',
    'check_cycle_level_structure',
    'anti_matching',
    'star_forest',
    'random_graph',
    'random_almost_bounded_graph',
    'parse_gadget_params',
    # reductions
    'ReductionOutput',
    'MisInstance',
    'McsiInstance',
    'GridTilingInstance',
    'McsiCertificate',
    'reduce_mis_to_rooted_grundy',
    'find_multicolored_is',
    'has_multicolored_is',
    'mis_solution_certificate',
    'reduce_mcsi_to_grundy',
    'find_mcsi_solution',
    'mcsi_solution_certificate',
    'check_mcsi_gadget',
    'reduce_gridtiling_to_bcore',
    'find_grid_tiling_solution',
    'gridtiling_certificate',
    'verify_gridtiling_certificate',
    # fpt
    'SeparatingFamily',
    'TowerNumber',
    'Thresholds',
    'StarOrCliqueWitness',
    'FptResult',
    'separating_family',
    'tower',
    'thresholds',
    'anti_biclique_extract',
    'clique_or_multipartite_is',
    'star_forest_extract',
    'solve_almost_bounded_degree',
    'exchange_component',
    'solve_ktt_free',
    # formats
    'ValidationResult',
    'load_graph',
    'load_certificate',
    'load_instance',
    'load_solution',
    'write_graph',
    'make_envelope',
    'dump_json',
]
