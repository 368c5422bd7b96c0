"""Knowledge compilation of Bayesian network classifiers.

Naive Bayes and latent-tree classifiers compile into canonical ordered
decision diagrams, on which decisions can be explained symbolically:
minimum-cardinality explanations, prime-implicant explanations,
shortest-explanation selection, and monotonicity analysis, all backed
by brute-force oracles for validation.
"""

from .classifiers import (
    CAPACITY_ENV_VAR,
    DecisionTable,
    LatentTreeClassifier,
    LogOddsForm,
    NaiveBayesClassifier,
    TreeNode,
    decision_table,
    train_naive_bayes,
)
from .compiler import (
    CompileStats,
    CompileStep,
    PartialDecisionGraph,
    compile_latent_tree,
    compile_naive_bayes,
    expand_then_merge,
    latent_tree_order,
)
from .diagram import (
    COMPLETE,
    REDUCED,
    DecisionDiagram,
    Manager,
    Variable,
    all_instances,
    binary_variables,
    diagram_from_table,
    instance_rank,
)
from .errors import (
    ArityError,
    CapacityError,
    DomainError,
    ManagerError,
    ModelError,
    OddError,
    ParseError,
    PolarityError,
    RangeError,
    SequencingError,
    StructureError,
    TrainingError,
    UndefinedPosteriorError,
)
from .explain import (
    ImplicantSet,
    McExplanationSet,
    OnOffPartition,
    brute_mc_oracle,
    brute_pi_oracle,
    compatibility_filter,
    count_explanations,
    explain_pi,
    mc_explanations,
    mc_explanations_general,
    pi_cover,
    pi_inst,
    shortest_pis,
    star_manager,
)
from .io import (
    deserialize_odd,
    dump_classifier,
    dumps_classifier,
    dumps_odd,
    load_classifier,
    loads_classifier,
    loads_odd,
    parse_instance,
    read_labeled_csv,
    render_instance,
    render_partial,
    serialize_odd,
    to_dot,
)
from .monotone import MonotonicityReport, is_monotone, matches, mc_matches_shortest_pi

__version__ = "0.1.0"

__all__ = [
    "ArityError",
    "CAPACITY_ENV_VAR",
    "COMPLETE",
    "CapacityError",
    "CompileStats",
    "CompileStep",
    "DecisionDiagram",
    "DecisionTable",
    "DomainError",
    "ImplicantSet",
    "LatentTreeClassifier",
    "LogOddsForm",
    "Manager",
    "ManagerError",
    "McExplanationSet",
    "ModelError",
    "MonotonicityReport",
    "NaiveBayesClassifier",
    "OddError",
    "OnOffPartition",
    "ParseError",
    "PartialDecisionGraph",
    "PolarityError",
    "REDUCED",
    "RangeError",
    "SequencingError",
    "StructureError",
    "TrainingError",
    "TreeNode",
    "UndefinedPosteriorError",
    "Variable",
    "all_instances",
    "binary_variables",
    "brute_mc_oracle",
    "brute_pi_oracle",
    "compatibility_filter",
    "compile_latent_tree",
    "compile_naive_bayes",
    "count_explanations",
    "decision_table",
    "deserialize_odd",
    "diagram_from_table",
    "dump_classifier",
    "dumps_classifier",
    "dumps_odd",
    "expand_then_merge",
    "explain_pi",
    "instance_rank",
    "is_monotone",
    "latent_tree_order",
    "load_classifier",
    "loads_classifier",
    "loads_odd",
    "matches",
    "mc_explanations",
    "mc_explanations_general",
    "mc_matches_shortest_pi",
    "parse_instance",
    "pi_cover",
    "pi_inst",
    "read_labeled_csv",
    "render_instance",
    "render_partial",
    "serialize_odd",
    "shortest_pis",
    "star_manager",
    "to_dot",
    "train_naive_bayes",
]
