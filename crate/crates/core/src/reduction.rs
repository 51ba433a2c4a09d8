//! From color graphs to grammars whose minimum merge schemes are minimum
//! colorings, and back.
//!
//! Node `v_μ` becomes the integer terminal `μ`. Every node adds two
//! nonterminals `Xμ`, `Yμ` with rules `Xμ ::= @` and `Yμ ::= @`, so the state
//! reached by `μ @` holds one completed `Π ::= @ •` item per generated
//! nonterminal. These `n` states are the only similar ones. Two of them
//! conflict exactly when their nodes share an edge, because then a
//! lookahead terminal is shared between different `Π ::= @ •` items.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::coloring::{chromatic_oracle, ColorGraph, Coloring, ColoringError};
use crate::grammar::{Grammar, GrammarStats};
use crate::machine::{build_lr1, similarity_classes, Automaton, StateId};
use crate::minimize::{
    apply_scheme, build_conflict_graph, minimize_exact, validate_scheme, MergeScheme,
    MinimizeError, DEFAULT_BUDGET,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("graph needs at least 2 nodes to generate a grammar, got {0}")]
    TooFewNodes(usize),
    #[error("generated machine is malformed: {0}")]
    Structural(String),
    #[error("node map line {line}: {message}")]
    MapSyntax { line: usize, message: String },
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error(transparent)]
    Minimize(#[from] MinimizeError),
}

/// What one generation step created. The base step holds `P`, `S`, `$`, `@`,
/// `1` and `P ::= S $`; step `μ ≥ 2` adds node `v_μ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IterationTrace {
    /// `None` for the base step.
    pub mu: Option<usize>,
    pub nonterminals: Vec<String>,
    pub terminals: Vec<String>,
    pub rules: Vec<String>,
    /// Edges from `v_μ` to earlier nodes.
    pub earlier_edges: usize,
}

impl IterationTrace {
    pub fn counts(&self) -> GrammarStats {
        GrammarStats {
            nonterminals: self.nonterminals.len(),
            terminals: self.terminals.len(),
            productions: self.rules.len(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenTrace {
    pub base: IterationTrace,
    pub iterations: Vec<IterationTrace>,
}

impl GenTrace {
    /// Generated nonterminals other than `P` and `S`, in creation order.
    pub fn new_nonterminals(&self) -> impl Iterator<Item = &str> {
        self.iterations
            .iter()
            .flat_map(|it| it.nonterminals.iter().map(String::as_str))
    }

    /// One line per created symbol or rule, tagged with its step.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for it in std::iter::once(&self.base).chain(&self.iterations) {
            let tag = match it.mu {
                None => "base".to_string(),
                Some(mu) => format!("mu={mu}"),
            };
            for nt in &it.nonterminals {
                out.push_str(&format!("[{tag}] nonterminal {nt}\n"));
            }
            for t in &it.terminals {
                out.push_str(&format!("[{tag}] terminal {t}\n"));
            }
            for r in &it.rules {
                out.push_str(&format!("[{tag}] rule {r}\n"));
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub grammar: Grammar,
    pub trace: GenTrace,
}

/// Builds the grammar for `f`, taking nodes in index order.
///
/// Generated terminals are `t1, t2, ...` in creation order. The rules are
/// laid out as `P ::= S $`, then the `S` rules grouped by their leading
/// integer (within a group, by the creation order of the nonterminal they
/// use), then the `Π ::= @` rules.
pub fn graph_to_grammar(f: &ColorGraph) -> Result<Reduction, ReductionError> {
    let n = f.node_count();
    if n < 2 {
        return Err(ReductionError::TooFewNodes(n));
    }
    let mut counter = 0usize;
    let mut fresh = || {
        counter += 1;
        format!("t{counter}")
    };

    let base = IterationTrace {
        mu: None,
        nonterminals: vec!["P".into(), "S".into()],
        terminals: vec!["$".into(), "@".into(), "1".into()],
        rules: vec!["P ::= S $".into()],
        earlier_edges: 0,
    };

    // s_rules[i] holds (nonterminal rank, rule) for rules `S ::= i Π t`.
    let mut s_rules: Vec<Vec<(usize, [String; 3])>> = vec![Vec::new(); n + 1];
    let mut new_nonterms: Vec<String> = Vec::new();
    let mut iterations = Vec::new();

    for mu in 2..=n {
        let delta = format!("X{mu}");
        let theta = format!("Y{mu}");
        let (d_rank, t_rank) = (new_nonterms.len(), new_nonterms.len() + 1);
        let mut it = IterationTrace {
            mu: Some(mu),
            nonterminals: vec![delta.clone(), theta.clone()],
            terminals: vec![mu.to_string()],
            rules: Vec::new(),
            earlier_edges: 0,
        };
        let mut add = |it: &mut IterationTrace, lead: usize, rank: usize, nt: &str, t: &str| {
            it.rules.push(format!("S ::= {lead} {nt} {t}"));
            s_rules[lead].push((rank, [lead.to_string(), nt.to_string(), t.to_string()]));
        };

        let phi = fresh();
        let omega = fresh();
        it.terminals.extend([phi.clone(), omega.clone()]);
        add(&mut it, mu, d_rank, &delta, &phi);
        add(&mut it, mu, t_rank, &theta, &omega);
        it.rules.push(format!("{delta} ::= @"));
        it.rules.push(format!("{theta} ::= @"));

        for (rank, pi) in new_nonterms.iter().enumerate() {
            let psi = fresh();
            it.terminals.push(psi.clone());
            add(&mut it, mu, rank, pi, &psi);
        }

        for d in 1..mu {
            let edge = f.has_edge(d, mu);
            let tau = (!edge).then(&mut fresh);
            let rho = fresh();
            it.terminals.extend(tau.iter().cloned());
            it.terminals.push(rho.clone());
            add(&mut it, d, t_rank, &theta, &rho);
            match tau {
                None => {
                    it.earlier_edges += 1;
                    add(&mut it, d, d_rank, &delta, &omega);
                }
                Some(tau) => add(&mut it, d, d_rank, &delta, &tau),
            }
        }

        new_nonterms.extend([delta, theta]);
        iterations.push(it);
    }

    let mut rules: Vec<(String, Vec<String>)> = vec![("P".into(), vec!["S".into(), "$".into()])];
    for group in &mut s_rules {
        group.sort_by_key(|(rank, _)| *rank);
        rules.extend(
            group
                .drain(..)
                .map(|(_, rhs)| ("S".to_string(), rhs.to_vec())),
        );
    }
    rules.extend(
        new_nonterms
            .iter()
            .map(|nt| (nt.clone(), vec!["@".to_string()])),
    );

    let grammar = Grammar::from_rules(rules).expect("generated names are valid");
    Ok(Reduction {
        grammar,
        trace: GenTrace { base, iterations },
    })
}

/// `map[μ - 1]` is the state `s_μ` standing for node `v_μ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeStateMap {
    states: Vec<StateId>,
}

impl NodeStateMap {
    pub fn new(states: Vec<StateId>) -> NodeStateMap {
        NodeStateMap { states }
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[StateId] {
        &self.states
    }

    /// State for 1-based node `mu`.
    pub fn state_of(&self, mu: usize) -> Option<StateId> {
        mu.checked_sub(1).and_then(|i| self.states.get(i)).copied()
    }

    /// 1-based node for a state.
    pub fn node_of(&self, s: StateId) -> Option<usize> {
        self.states.iter().position(|t| *t == s).map(|i| i + 1)
    }

    /// One `node state` pair per line.
    pub fn to_text(&self) -> String {
        self.states
            .iter()
            .enumerate()
            .map(|(i, s)| format!("{} {}\n", i + 1, s))
            .collect()
    }

    pub fn parse(text: &str) -> Result<NodeStateMap, ReductionError> {
        let mut pairs = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let err = |message: &str| ReductionError::MapSyntax {
                line: i + 1,
                message: message.to_string(),
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields[..] {
                [] => continue,
                [node, state] => {
                    let node: usize = node.parse().map_err(|_| err("invalid node"))?;
                    let state: usize = state.parse().map_err(|_| err("invalid state"))?;
                    pairs.push((node, StateId(state)));
                }
                _ => return Err(err("expected `<node> <state>`")),
            }
        }
        pairs.sort();
        if pairs
            .iter()
            .enumerate()
            .any(|(i, (node, _))| *node != i + 1)
        {
            return Err(ReductionError::MapSyntax {
                line: 0,
                message: "nodes must be exactly 1..n, each once".into(),
            });
        }
        Ok(NodeStateMap::new(
            pairs.into_iter().map(|(_, s)| s).collect(),
        ))
    }
}

/// Finds `s_μ` by walking `μ @` from the start state for every node, and
/// checks that these states are exactly the machine's one non-singleton
/// similarity class.
pub fn state_node_mapping(f: &ColorGraph, m: &Automaton) -> Result<NodeStateMap, ReductionError> {
    let g = m.grammar();
    let at = g
        .lookup("@")
        .ok_or_else(|| ReductionError::Structural("grammar has no `@` terminal".into()))?;
    let mut states = Vec::with_capacity(f.node_count());
    for mu in 1..=f.node_count() {
        let node = g
            .lookup(&mu.to_string())
            .ok_or_else(|| ReductionError::Structural(format!("no terminal for node {mu}")))?;
        let s = m
            .walk(&[node, at])
            .ok_or_else(|| ReductionError::Structural(format!("no path `{mu} @`")))?;
        states.push(s);
    }

    let classes = similarity_classes(m);
    let similar: Vec<&Vec<StateId>> = classes.non_singleton().collect();
    let mut mapped = states.clone();
    mapped.sort();
    match similar[..] {
        [class] if *class == mapped => Ok(NodeStateMap::new(states)),
        _ => Err(ReductionError::Structural(format!(
            "`μ @` states {mapped:?} are not the unique similarity class (classes: {similar:?})"
        ))),
    }
}

/// Pulls the scheme's blocks back to node colors. Unmapped states are
/// ignored.
pub fn recover_coloring(scheme: &MergeScheme, map: &NodeStateMap) -> Coloring {
    let blocks = scheme
        .blocks()
        .iter()
        .map(|b| b.iter().filter_map(|s| map.node_of(*s)).collect())
        .collect();
    Coloring::new(blocks)
}

/// The scheme merging `s`-states of equal color and leaving every other
/// state alone.
pub fn scheme_from_coloring(m: &Automaton, map: &NodeStateMap, coloring: &Coloring) -> MergeScheme {
    let mut blocks: Vec<Vec<StateId>> = coloring
        .blocks()
        .iter()
        .map(|b| b.iter().filter_map(|&v| map.state_of(v)).collect())
        .collect();
    let mapped: BTreeSet<StateId> = map.states().iter().copied().collect();
    blocks.extend(
        m.states()
            .iter()
            .map(|s| s.id)
            .filter(|s| !mapped.contains(s))
            .map(|s| vec![s]),
    );
    MergeScheme::new(blocks)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub nodes: usize,
    pub edges: usize,
    pub chromatic: usize,
    pub minimized_blocks: usize,
    pub states: usize,
    pub minimized_states: usize,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "n={} e={} k={} blocks={} states {} -> {}",
            self.nodes,
            self.edges,
            self.chromatic,
            self.minimized_blocks,
            self.states,
            self.minimized_states
        )?;
        for c in &self.checks {
            let mark = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "  [{mark}] {}: {}", c.name, c.detail)?;
        }
        Ok(())
    }
}

/// Expected `(nonterminals, terminals, productions)` for `n` nodes and `e`
/// edges.
pub fn expected_stats(n: usize, e: usize) -> GrammarStats {
    GrammarStats {
        nonterminals: 2 * n,
        terminals: 2 * n * n - n + 2 - e,
        productions: 2 * n * n - 1,
    }
}

/// Expected LR(1) state count for `n` nodes.
pub fn expected_states(n: usize) -> usize {
    4 * n * n - 2 * n + 3
}

/// Runs the whole pipeline on `f` and checks every claim about it: grammar
/// and machine sizes, the conflict graph against `f`, and the minimum
/// scheme against the chromatic number in both directions.
pub fn verify_reduction(
    f: &ColorGraph,
    oracle_limit: usize,
) -> Result<VerificationReport, ReductionError> {
    let n = f.node_count();
    let e = f.edge_count();
    let (chromatic, oracle_coloring) = chromatic_oracle(f, oracle_limit)?;
    let Reduction { grammar, trace } = graph_to_grammar(f)?;
    let mut checks = Vec::new();
    let mut check = |name, passed, detail: String| {
        checks.push(Check {
            name,
            passed,
            detail,
        })
    };

    let stats = grammar.stats();
    let want = expected_stats(n, e);
    let triple =
        |s: &GrammarStats| format!("({}, {}, {})", s.nonterminals, s.terminals, s.productions);
    check(
        "grammar size",
        stats == want,
        format!("{}, expected {}", triple(&stats), triple(&want)),
    );

    let bad_step = trace.iterations.iter().find(|it| {
        let mu = it.mu.unwrap_or(0);
        it.counts()
            != GrammarStats {
                nonterminals: 2,
                terminals: 4 * mu - 3 - it.earlier_edges,
                productions: 4 * mu - 2,
            }
    });
    check(
        "per-step increments",
        bad_step.is_none(),
        match bad_step {
            None => format!("{} steps", trace.iterations.len()),
            Some(it) => format!("step {:?} added {:?}", it.mu, it.counts()),
        },
    );

    let m = build_lr1(&grammar);
    check(
        "machine size",
        m.len() == expected_states(n),
        format!("{} states, expected {}", m.len(), expected_states(n)),
    );

    let map = state_node_mapping(f, &m)?;
    let cg = build_conflict_graph(&m)?;
    let mapped: BTreeSet<(usize, usize)> = cg
        .edges()
        .iter()
        .map(|&(i, j)| {
            let a = map
                .node_of(cg.nodes()[i])
                .expect("conflict-graph nodes are mapped");
            let b = map
                .node_of(cg.nodes()[j])
                .expect("conflict-graph nodes are mapped");
            (a.min(b), a.max(b))
        })
        .collect();
    check(
        "conflict graph matches input",
        cg.node_count() == n && &mapped == f.edges(),
        format!("{} nodes, {} edges", cg.node_count(), cg.edges().len()),
    );

    let scheme = minimize_exact(&m, DEFAULT_BUDGET.max(n))?;
    let blocks = scheme.count_blocks_within(map.states());
    check(
        "minimum scheme equals chromatic number",
        blocks == chromatic,
        format!("{blocks} blocks, chromatic number {chromatic}"),
    );

    let recovered = recover_coloring(&scheme, &map);
    check(
        "recovered coloring is proper",
        recovered.is_proper(f) && recovered.color_count() == blocks,
        format!("{} colors", recovered.color_count()),
    );

    let induced = scheme_from_coloring(&m, &map, &oracle_coloring);
    let valid = validate_scheme(&m, &induced);
    check(
        "oracle coloring induces a valid scheme",
        valid.is_ok(),
        match &valid {
            Ok(()) => format!("{} merges", induced.merges()),
            Err(v) => format!("{} violations", v.len()),
        },
    );

    let minimized = apply_scheme(&m, &scheme)?;
    Ok(VerificationReport {
        nodes: n,
        edges: e,
        chromatic,
        minimized_blocks: blocks,
        states: m.len(),
        minimized_states: minimized.len(),
        checks,
    })
}
