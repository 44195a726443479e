"""Finitely generated subgroups of free groups through folded core graphs."""

from .bounds import BoundReport, ClassicalBounds, classical_bounds, compare, family_core, family_pair, paper_bound
from .cores import (
    BasedCore,
    Bouquet,
    LabeledGraph,
    Trace,
    core_from_words,
    fold_over_base,
    free_basis,
    is_basis,
    is_member,
    lattice_excision,
    rebase,
    trace,
    trivial_core,
    whole_group,
)
from .covering import (
    ExtendedSpine,
    GaloisResult,
    SpineInvariants,
    checker_count,
    complete_to_finite_cover,
    escape_witness,
    extended_spine,
    index,
    is_galois,
    schreier_basis,
    spine_invariants,
)
from .graph import Graph, Path, Subgraph, rank, spanning_tree, spine
from .pullback import (
    PullbackReport,
    conjugate_intersection,
    double_coset_reps,
    fiber_product,
    intersection_rank_sum,
    join,
    pointed_intersection,
)
from .words import Substitution, format_word, free_reduce, inverse, multiply, parse_word, parse_words

__version__ = "0.1.0"
