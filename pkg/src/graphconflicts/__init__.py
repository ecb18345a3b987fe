"""Conflict analysis for typed graph rules with nested application conditions."""
from .analysis import AnalysisReport, run_analysis
from .conditions import (
    And, Bounds, CTrue, Condition, Equivalent, Exists, Inequivalent, NacConjunction, No, Not,
    Unknown, Yes, bounded_equivalent, bounded_satisfiable, conj, disj, exists, false, forall,
    left, left_span, nac, neg, normalize, satisfies, shift, true,
)
from .conflicts import (
    AC_INITIAL, USE_DELETE_DELETE_USE, CriticalPair, Inducing, InitialConflict,
    InitialConflictResult, NoUpToBound, NotAConflict, NotInducingUpToBound,
    SymbolicTransformationPair, build_symbolic_pair, compute_critical_pairs,
    compute_initial_conflicts, compute_plain_critical_pairs, compute_plain_initial_conflicts,
    conflict_inducing_status, enumerate_unfolding, find_representing_initial_conflict,
    is_critical_pair,
)
from .dot import export_dot
from .grammar import GrammarError, GrammarFile, load_grammar, parse_grammar, serialize_grammar
from .graphs import (
    UNTYPED, GluingViolation, Graph, Morphism, TypeGraph, classify_morphism, compose, coproduct,
    enumerate_jointly_epi_pairs, enumerate_morphisms, epi_mono_factorize, pushout,
    pushout_complement,
)
from .rules import (
    AC_PRODUCE, DELETE_USE, PRODUCE_AC, USE_DELETE, ACViolation, DirectTransformation,
    IndependenceReport, Rule, TransformationPair, apply, check_parallel_independence,
    embed_transformation_pair, find_matches,
)
from .unfolding import (
    DisjunctiveForm, NotEstablished, Regular, check_regular, disjunctive_unfolding,
    nac_critical_pair_predicate,
)
from .verify import VerificationResult, verify_completeness
