//! Canonical LR(1) automata, conflict-free merging of similar states, and a
//! reduction from graph coloring to minimum merge schemes.
//!
//! The pipeline: a [`Grammar`] is built into a canonical LR(1)
//! [`Automaton`]; states with identical item cores are *similar*; a
//! [`MergeScheme`] partitions states into similar, conflict-free,
//! successor-congruent blocks and [`apply_scheme`] produces the smaller
//! machine. [`graph_to_grammar`] turns an undirected graph into a grammar
//! whose minimum merge scheme is a minimum coloring of that graph.

pub mod coloring;
pub mod first;
pub mod grammar;
pub mod language;
pub mod machine;
pub mod minimize;
pub mod reduction;
pub mod render;
pub mod termset;

pub use coloring::{chromatic_oracle, parse_dimacs, ColorGraph, Coloring, ColoringError};
pub use first::{compute_first, FirstSets};
pub use grammar::{
    parse_grammar, serialize_grammar, Grammar, GrammarError, GrammarStats, GrammarWarning,
    Production, Symbol, SymbolId, SymbolKind, END_MARKER,
};
pub use language::{enumerate_language, find_cycle, LanguageError, Sentence};
pub use machine::{
    build_lr0, build_lr1, detect_conflicts, merge_block, parse_sentence, similarity_classes,
    Automaton, Conflict, ConflictKind, ConflictReport, Item, ItemCore, ItemSets, LrState,
    MergeError, ParseError, ParseOutcome, SimilarityClasses, StateComparison, StateId,
};
pub use minimize::{
    apply_scheme, build_conflict_graph, congruence_close, enumerate_schemes_oracle,
    merge_all_similar, minimize_exact, minimize_greedy, pair_mergeable, validate_scheme,
    BlockReason, ClosureResult, ConflictGraph, MergeScheme, MinimizeError, Verdict, Violation,
    DEFAULT_BUDGET, ORACLE_LIMIT,
};
pub use reduction::{
    expected_states, expected_stats, graph_to_grammar, recover_coloring, scheme_from_coloring,
    state_node_mapping, verify_reduction, Check, GenTrace, IterationTrace, NodeStateMap, Reduction,
    ReductionError, VerificationReport,
};
pub use render::{dump, export_dot};
pub use termset::TerminalSet;
