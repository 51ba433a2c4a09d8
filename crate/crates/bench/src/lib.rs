//! Shared inputs for the pipeline benchmarks.

use lrmin_core::{build_lr1, graph_to_grammar, Automaton, ColorGraph};

/// Seeded random graph on `n` nodes at edge density one half.
pub fn graph(n: usize, seed: u64) -> ColorGraph {
    ColorGraph::random(n, 0.5, seed)
}

/// The generated machine for [`graph`].
pub fn reduction_machine(n: usize, seed: u64) -> Automaton {
    let r = graph_to_grammar(&graph(n, seed)).expect("n >= 2");
    build_lr1(&r.grammar)
}
