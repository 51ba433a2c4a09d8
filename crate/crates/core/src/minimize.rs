//! Merge schemes and their minimization.
//!
//! A merge scheme partitions an automaton's states into blocks that are
//! pairwise similar, merge without conflicts, and are closed under
//! successors: if two states share a block, their successors on every symbol
//! share a block too. Only states in non-singleton similarity classes can
//! ever share a block; those states and the pairs that cannot be merged form
//! the conflict graph.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::coloring::ColorGraph;
use crate::grammar::{Grammar, SymbolId};
use crate::machine::{
    detect_conflicts, merge_block, similarity_classes, Automaton, ConflictReport, StateId,
};

pub const DEFAULT_BUDGET: usize = 24;
pub const ORACLE_LIMIT: usize = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MinimizeError {
    #[error("automaton has {} conflict(s); minimization needs a conflict-free machine", .0.len())]
    Conflicted(ConflictReport),
    #[error("conflict graph has {nodes} nodes, over the exact-search budget of {budget}; use greedy mode")]
    BudgetExceeded { nodes: usize, budget: usize },
    #[error("conflict graph has {nodes} nodes, over the enumeration limit of {limit}")]
    OracleLimit { nodes: usize, limit: usize },
    #[error("invalid merge scheme ({} violation(s))", .0.len())]
    InvalidScheme(Vec<Violation>),
    #[error("scheme line {line}: {message}")]
    SchemeSyntax { line: usize, message: String },
}

/// A partition of an automaton's states.
///
/// Blocks are kept sorted, and ordered by their smallest state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MergeScheme {
    blocks: Vec<Vec<StateId>>,
}

impl MergeScheme {
    pub fn new(blocks: Vec<Vec<StateId>>) -> MergeScheme {
        let mut blocks: Vec<Vec<StateId>> = blocks
            .into_iter()
            .filter(|b| !b.is_empty())
            .map(|mut b| {
                b.sort();
                b
            })
            .collect();
        blocks.sort();
        MergeScheme { blocks }
    }

    /// Every state alone.
    pub fn identity(m: &Automaton) -> MergeScheme {
        MergeScheme::new(m.states().iter().map(|s| vec![s.id]).collect())
    }

    pub fn blocks(&self) -> &[Vec<StateId>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_of(&self, s: StateId) -> Option<usize> {
        self.blocks.iter().position(|b| b.binary_search(&s).is_ok())
    }

    /// Number of distinct blocks that contain at least one of `states`.
    pub fn count_blocks_within(&self, states: &[StateId]) -> usize {
        states
            .iter()
            .filter_map(|s| self.block_of(*s))
            .collect::<BTreeSet<_>>()
            .len()
    }

    /// Number of states minus number of blocks.
    pub fn merges(&self) -> usize {
        self.blocks.iter().map(|b| b.len() - 1).sum()
    }

    /// One block per line, comma-separated state ids.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for b in &self.blocks {
            let ids: Vec<String> = b.iter().map(|s| s.to_string()).collect();
            out.push_str(&ids.join(","));
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<MergeScheme, MinimizeError> {
        let mut blocks = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let block = line
                .split(',')
                .map(|tok| {
                    tok.trim().parse::<usize>().map(StateId).map_err(|_| {
                        MinimizeError::SchemeSyntax {
                            line: i + 1,
                            message: format!("invalid state id {:?}", tok.trim()),
                        }
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            blocks.push(block);
        }
        Ok(MergeScheme::new(blocks))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// A state appears `occurrences` times instead of once.
    Coverage {
        state: StateId,
        occurrences: usize,
    },
    UnknownState(StateId),
    Dissimilar {
        block: usize,
        a: StateId,
        b: StateId,
    },
    Conflict {
        block: usize,
        report: ConflictReport,
    },
    /// Two members of `block` move on `symbol` into different blocks.
    Congruence {
        block: usize,
        symbol: SymbolId,
        targets: (StateId, StateId),
    },
}

impl Violation {
    pub fn render(&self, g: &Grammar) -> String {
        match self {
            Violation::Congruence {
                block,
                symbol,
                targets,
            } => format!(
                "block {block}: successors on {} ({} and {}) are not merged together",
                g.name(*symbol),
                targets.0,
                targets.1
            ),
            Violation::Conflict { block, report } => {
                format!(
                    "block {block}: merging creates conflicts\n{}",
                    report.render(g)
                )
            }
            other => other.to_string(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Coverage { state, occurrences } => {
                write!(f, "state {state} appears {occurrences} times")
            }
            Violation::UnknownState(s) => write!(f, "state {s} does not exist"),
            Violation::Dissimilar { block, a, b } => {
                write!(f, "block {block}: states {a} and {b} are not similar")
            }
            Violation::Conflict { block, report } => {
                write!(
                    f,
                    "block {block}: merging creates {} conflict(s)",
                    report.len()
                )
            }
            Violation::Congruence {
                block,
                symbol,
                targets,
            } => write!(
                f,
                "block {block}: successors on symbol #{} ({} and {}) are not merged together",
                symbol.0, targets.0, targets.1
            ),
        }
    }
}

/// Checks every merge-scheme invariant, listing each violation found.
pub fn validate_scheme(m: &Automaton, scheme: &MergeScheme) -> Result<(), Vec<Violation>> {
    let mut violations = Vec::new();
    let mut seen = vec![0usize; m.len()];
    let mut block_of = vec![usize::MAX; m.len()];
    for (b, block) in scheme.blocks().iter().enumerate() {
        for s in block {
            match seen.get_mut(s.0) {
                Some(count) => {
                    *count += 1;
                    block_of[s.0] = b;
                }
                None => violations.push(Violation::UnknownState(*s)),
            }
        }
    }
    for (i, &count) in seen.iter().enumerate() {
        if count != 1 {
            violations.push(Violation::Coverage {
                state: StateId(i),
                occurrences: count,
            });
        }
    }
    if !violations.is_empty() {
        return Err(violations);
    }

    for (b, block) in scheme.blocks().iter().enumerate() {
        let head = block[0];
        let mut similar = true;
        for &s in &block[1..] {
            if !m.state(head).is_similar(m.state(s)) {
                violations.push(Violation::Dissimilar {
                    block: b,
                    a: head,
                    b: s,
                });
                similar = false;
            }
        }
        if !similar {
            continue;
        }
        let merged = merge_block(m, block).expect("similarity checked");
        let report = detect_conflicts(m.grammar(), &merged);
        if !report.is_empty() {
            violations.push(Violation::Conflict { block: b, report });
        }
        for (&x, &target) in m.transitions(head) {
            for &s in &block[1..] {
                let Some(other) = m.successor(s, x) else {
                    continue;
                };
                if block_of[target.0] != block_of[other.0] {
                    violations.push(Violation::Congruence {
                        block: b,
                        symbol: x,
                        targets: (target, other),
                    });
                }
            }
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

/// Quotient automaton of a valid scheme.
pub fn apply_scheme(m: &Automaton, scheme: &MergeScheme) -> Result<Automaton, MinimizeError> {
    validate_scheme(m, scheme).map_err(MinimizeError::InvalidScheme)?;
    Ok(m.quotient(scheme.blocks()))
}

/// Merges every similarity class regardless of conflicts (the LALR(1)
/// attempt). The report lists the conflicts of the merged machine; an empty
/// report on a conflict-free input means the grammar is LALR(1).
pub fn merge_all_similar(m: &Automaton) -> (Automaton, ConflictReport) {
    let classes = similarity_classes(m);
    let merged = m.quotient(classes.classes());
    let report = merged.conflicts();
    (merged, report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockReason {
    Dissimilar,
    Conflict,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Mergeable,
    Blocked {
        reason: BlockReason,
        witness: (StateId, StateId),
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureResult {
    /// Normalized `(low, high)` pairs, the seed included.
    pub forced: BTreeSet<(StateId, StateId)>,
    pub verdict: Verdict,
}

fn norm(a: StateId, b: StateId) -> (StateId, StateId) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

fn pair_conflicts(m: &Automaton, a: StateId, b: StateId) -> bool {
    let merged = merge_block(m, &[a, b]).expect("similar pair");
    !detect_conflicts(m.grammar(), &merged).is_empty()
}

/// Everything that merging `u` with `v` drags along: successors of a merged
/// pair must be merged too. The verdict is blocked if a forced pair is
/// dissimilar, if a forced pair conflicts when merged, or if the classes
/// formed by chaining forced pairs conflict.
pub fn congruence_close(m: &Automaton, u: StateId, v: StateId) -> ClosureResult {
    let seed = norm(u, v);
    let mut forced = BTreeSet::from([seed]);
    let similar = |a: StateId, b: StateId| m.state(a).is_similar(m.state(b));
    if !similar(u, v) {
        return ClosureResult {
            forced,
            verdict: Verdict::Blocked {
                reason: BlockReason::Dissimilar,
                witness: seed,
            },
        };
    }

    let mut order = vec![seed];
    let mut at = 0;
    while at < order.len() {
        let (a, b) = order[at];
        at += 1;
        if a == b || !similar(a, b) {
            continue;
        }
        for (&x, &ta) in m.transitions(a) {
            if let Some(tb) = m.successor(b, x) {
                let p = norm(ta, tb);
                if forced.insert(p) {
                    order.push(p);
                }
            }
        }
    }

    let blocked = |reason, witness| ClosureResult {
        forced: forced.clone(),
        verdict: Verdict::Blocked { reason, witness },
    };
    if let Some(&p) = order.iter().find(|(a, b)| !similar(*a, *b)) {
        return blocked(BlockReason::Dissimilar, p);
    }
    if let Some(&p) = order
        .iter()
        .find(|(a, b)| a != b && pair_conflicts(m, *a, *b))
    {
        return blocked(BlockReason::Conflict, p);
    }

    // Pairs chain into classes; each class must merge cleanly as a whole.
    let mut groups = UnionFind::default();
    for &(a, b) in &order {
        groups.union(a, b);
    }
    for class in groups.classes() {
        if class.len() < 3 {
            continue;
        }
        let merged = merge_block(m, &class).expect("chained similar pairs are similar");
        if !detect_conflicts(m.grammar(), &merged).is_empty() {
            let witness = class
                .iter()
                .enumerate()
                .flat_map(|(i, a)| class[i + 1..].iter().map(move |b| (*a, *b)))
                .find(|(a, b)| pair_conflicts(m, *a, *b))
                .unwrap_or((class[0], class[class.len() - 1]));
            return blocked(BlockReason::Conflict, witness);
        }
    }
    ClosureResult {
        forced,
        verdict: Verdict::Mergeable,
    }
}

#[derive(Default)]
struct UnionFind {
    parent: BTreeMap<StateId, StateId>,
}

impl UnionFind {
    fn find(&mut self, s: StateId) -> StateId {
        let p = *self.parent.entry(s).or_insert(s);
        if p == s {
            return s;
        }
        let root = self.find(p);
        self.parent.insert(s, root);
        root
    }

    fn union(&mut self, a: StateId, b: StateId) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = norm(ra, rb);
            self.parent.insert(hi, lo);
        }
    }

    fn classes(&mut self) -> Vec<Vec<StateId>> {
        let keys: Vec<StateId> = self.parent.keys().copied().collect();
        let mut by_root: BTreeMap<StateId, Vec<StateId>> = BTreeMap::new();
        for k in keys {
            let r = self.find(k);
            by_root.entry(r).or_default().push(k);
        }
        by_root.into_values().collect()
    }
}

/// Whether `u` and `v` can share a block of some merge scheme.
pub fn pair_mergeable(m: &Automaton, u: StateId, v: StateId) -> bool {
    u == v || congruence_close(m, u, v).verdict == Verdict::Mergeable
}

/// States with at least one similar partner, plus an edge for every pair
/// that cannot be merged.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConflictGraph {
    nodes: Vec<StateId>,
    edges: BTreeSet<(usize, usize)>,
}

impl ConflictGraph {
    /// Source states, ascending. Node `i` stands for `nodes()[i]`.
    pub fn nodes(&self) -> &[StateId] {
        &self.nodes
    }

    /// Edges as `(i, j)` node indices with `i < j`.
    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn index_of(&self, s: StateId) -> Option<usize> {
        self.nodes.binary_search(&s).ok()
    }

    pub fn has_edge(&self, a: StateId, b: StateId) -> bool {
        match (self.index_of(a), self.index_of(b)) {
            (Some(i), Some(j)) => self.edges.contains(&(i.min(j), i.max(j))),
            _ => false,
        }
    }

    /// The same graph with 1-based node numbers, in node order.
    pub fn to_color_graph(&self) -> ColorGraph {
        ColorGraph::new(
            self.nodes.len(),
            self.edges.iter().map(|(i, j)| (i + 1, j + 1)),
        )
        .expect("conflict graph edges are in range and loop-free")
    }

    /// DIMACS `.col` text; comment lines record which state each node is.
    pub fn to_dimacs(&self) -> String {
        let mut out = String::from("c conflict graph\n");
        for (i, s) in self.nodes.iter().enumerate() {
            out.push_str(&format!("c node {} = state {}\n", i + 1, s));
        }
        out.push_str(&self.to_color_graph().to_dimacs());
        out
    }
}

pub fn build_conflict_graph(m: &Automaton) -> Result<ConflictGraph, MinimizeError> {
    let report = m.conflicts();
    if !report.is_empty() {
        return Err(MinimizeError::Conflicted(report));
    }
    let classes = similarity_classes(m);
    let nodes: Vec<StateId> = m
        .states()
        .iter()
        .map(|s| s.id)
        .filter(|s| !classes.is_singleton(*s))
        .collect();
    let mut edges = BTreeSet::new();
    for i in 0..nodes.len() {
        for j in i + 1..nodes.len() {
            let (a, b) = (nodes[i], nodes[j]);
            if !classes.similar(a, b) || !pair_mergeable(m, a, b) {
                edges.insert((i, j));
            }
        }
    }
    Ok(ConflictGraph { nodes, edges })
}

/// Pairwise facts about the conflict-graph nodes used by both searches.
struct SearchSpace<'m> {
    m: &'m Automaton,
    nodes: Vec<StateId>,
    node_of: HashMap<StateId, usize>,
    /// Similar and conflict-free when merged as a pair.
    compatible: Vec<Vec<bool>>,
}

impl<'m> SearchSpace<'m> {
    fn new(m: &'m Automaton) -> Result<Self, MinimizeError> {
        let report = m.conflicts();
        if !report.is_empty() {
            return Err(MinimizeError::Conflicted(report));
        }
        let classes = similarity_classes(m);
        let nodes: Vec<StateId> = m
            .states()
            .iter()
            .map(|s| s.id)
            .filter(|s| !classes.is_singleton(*s))
            .collect();
        let node_of = nodes.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        let n = nodes.len();
        let mut compatible = vec![vec![false; n]; n];
        for i in 0..n {
            compatible[i][i] = true;
            for j in i + 1..n {
                let ok =
                    classes.similar(nodes[i], nodes[j]) && !pair_conflicts(m, nodes[i], nodes[j]);
                compatible[i][j] = ok;
                compatible[j][i] = ok;
            }
        }
        Ok(SearchSpace {
            m,
            nodes,
            node_of,
            compatible,
        })
    }

    fn scheme(&self, partial: &Partial) -> MergeScheme {
        let mut in_graph = vec![false; self.m.len()];
        let mut blocks: Vec<Vec<StateId>> = partial
            .blocks
            .iter()
            .filter(|b| !b.is_empty())
            .map(|b| b.iter().map(|&i| self.nodes[i]).collect())
            .collect();
        for s in &self.nodes {
            in_graph[s.0] = true;
        }
        blocks.extend(
            (0..self.m.len())
                .filter(|i| !in_graph[*i])
                .map(|i| vec![StateId(i)]),
        );
        MergeScheme::new(blocks)
    }
}

/// A partial assignment of conflict-graph nodes to blocks.
///
/// Invariant: for every live block, the successors of its members on each
/// symbol already share a block.
#[derive(Clone, Debug)]
struct Partial {
    block_of: Vec<Option<usize>>,
    blocks: Vec<Vec<usize>>,
    live: usize,
}

impl Partial {
    fn new(n: usize) -> Self {
        Partial {
            block_of: vec![None; n],
            blocks: Vec::new(),
            live: 0,
        }
    }

    fn open(&mut self, node: usize) {
        self.block_of[node] = Some(self.blocks.len());
        self.blocks.push(vec![node]);
        self.live += 1;
    }

    /// Puts `a` and `b` in one block and propagates to successors. Returns
    /// false (leaving `self` unusable) when that is impossible.
    fn join(&mut self, space: &SearchSpace, a: usize, b: usize) -> bool {
        let mut work = vec![(a, b)];
        while let Some((x, y)) = work.pop() {
            if self.block_of[x].is_none() {
                self.open(x);
            }
            if self.block_of[y].is_none() {
                self.open(y);
            }
            let (bx, by) = (self.block_of[x].unwrap(), self.block_of[y].unwrap());
            if bx == by {
                continue;
            }
            let ok = self.blocks[bx]
                .iter()
                .all(|&p| self.blocks[by].iter().all(|&q| space.compatible[p][q]));
            if !ok {
                return false;
            }
            let moved = std::mem::take(&mut self.blocks[by]);
            for &q in &moved {
                self.block_of[q] = Some(bx);
            }
            self.blocks[bx].extend(moved);
            self.live -= 1;

            let (sx, sy) = (space.nodes[x], space.nodes[y]);
            for (&sym, &tx) in space.m.transitions(sx) {
                let Some(ty) = space.m.successor(sy, sym) else {
                    return false;
                };
                if tx == ty {
                    continue;
                }
                match (space.node_of.get(&tx), space.node_of.get(&ty)) {
                    (Some(&nx), Some(&ny)) => work.push((nx, ny)),
                    _ => return false,
                }
            }
        }
        true
    }
}

/// A minimum merge scheme by exhaustive backtracking.
///
/// Conflict-graph nodes are assigned lowest-id first; each node tries the
/// existing blocks in creation order and then a fresh block, and a branch is
/// cut once it uses as many blocks as the best scheme found so far. The
/// first optimum reached is returned, so ties resolve deterministically.
/// Refuses when the conflict graph has more than `budget` nodes.
pub fn minimize_exact(m: &Automaton, budget: usize) -> Result<MergeScheme, MinimizeError> {
    let space = SearchSpace::new(m)?;
    let n = space.nodes.len();
    if n > budget {
        return Err(MinimizeError::BudgetExceeded { nodes: n, budget });
    }
    let mut best: Option<Partial> = None;
    search(&space, Partial::new(n), 0, &mut best);
    let best = best.expect("the all-singletons assignment is always reachable");
    Ok(space.scheme(&best))
}

fn search(space: &SearchSpace, partial: Partial, from: usize, best: &mut Option<Partial>) {
    let n = space.nodes.len();
    let Some(next) = (from..n).find(|i| partial.block_of[*i].is_none()) else {
        if best.as_ref().is_none_or(|b| partial.live < b.live) {
            *best = Some(partial);
        }
        return;
    };
    let bound = best.as_ref().map_or(usize::MAX, |b| b.live);
    if partial.live >= bound {
        return;
    }
    for b in 0..partial.blocks.len() {
        let Some(&rep) = partial.blocks[b].first() else {
            continue;
        };
        let mut trial = partial.clone();
        if trial.join(space, next, rep) {
            search(space, trial, next + 1, best);
        }
    }
    let bound = best.as_ref().map_or(usize::MAX, |b| b.live);
    if partial.live + 1 < bound {
        let mut trial = partial;
        trial.open(next);
        search(space, trial, next + 1, best);
    }
}

/// A valid merge scheme from seeded first-fit block growth. Nodes are
/// visited in a seed-determined random order; each joins the first block it
/// can (propagating to successors) or opens a new one.
pub fn minimize_greedy(m: &Automaton, seed: u64) -> Result<MergeScheme, MinimizeError> {
    let space = SearchSpace::new(m)?;
    let n = space.nodes.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));

    let mut partial = Partial::new(n);
    for node in order {
        if partial.block_of[node].is_some() {
            continue;
        }
        let mut placed = false;
        for b in 0..partial.blocks.len() {
            let Some(&rep) = partial.blocks[b].first() else {
                continue;
            };
            let mut trial = partial.clone();
            if trial.join(&space, node, rep) {
                partial = trial;
                placed = true;
                break;
            }
        }
        if !placed {
            partial.open(node);
        }
    }
    Ok(space.scheme(&partial))
}

/// The minimum number of blocks among conflict-graph nodes, found by
/// enumerating every set partition of those nodes and keeping the valid
/// ones. Independent of the backtracking search; meant as its oracle.
pub fn enumerate_schemes_oracle(m: &Automaton, limit: usize) -> Result<usize, MinimizeError> {
    let report = m.conflicts();
    if !report.is_empty() {
        return Err(MinimizeError::Conflicted(report));
    }
    let classes = similarity_classes(m);
    let nodes: Vec<StateId> = classes
        .non_singleton()
        .flatten()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let k = nodes.len();
    if k > limit {
        return Err(MinimizeError::OracleLimit { nodes: k, limit });
    }
    if k == 0 {
        return Ok(0);
    }
    let index: HashMap<StateId, usize> = nodes.iter().enumerate().map(|(i, s)| (*s, i)).collect();

    let mut block_ok: HashMap<u32, bool> = HashMap::new();
    let mut check_block = |mask: u32| -> bool {
        *block_ok.entry(mask).or_insert_with(|| {
            let members: Vec<StateId> = (0..k)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| nodes[i])
                .collect();
            let head = m.state(members[0]);
            if !members.iter().all(|s| head.is_similar(m.state(*s))) {
                return false;
            }
            let merged = merge_block(m, &members).expect("similar");
            detect_conflicts(m.grammar(), &merged).is_empty()
        })
    };

    let mut best = k;
    // Restricted growth strings: label[i] <= 1 + max(label[..i]).
    let mut label = vec![0usize; k];
    loop {
        let count = label.iter().max().unwrap() + 1;
        if count < best {
            let mut masks = vec![0u32; count];
            for (i, &l) in label.iter().enumerate() {
                masks[l] |= 1 << i;
            }
            let blocks_ok = masks.iter().all(|&mask| check_block(mask));
            let congruent = blocks_ok
                && (0..k).all(|i| {
                    (0..k).filter(|j| label[*j] == label[i]).all(|j| {
                        m.transitions(nodes[i]).iter().all(|(x, ti)| {
                            match m.successor(nodes[j], *x) {
                                None => false,
                                Some(tj) if tj == *ti => true,
                                Some(tj) => match (index.get(ti), index.get(&tj)) {
                                    (Some(a), Some(b)) => label[*a] == label[*b],
                                    _ => false,
                                },
                            }
                        })
                    })
                });
            if congruent {
                best = count;
            }
        }
        // Advance to the next restricted growth string.
        let mut i = k - 1;
        loop {
            if i == 0 {
                return Ok(best);
            }
            let prefix_max = label[..i].iter().max().copied().unwrap();
            if label[i] <= prefix_max {
                label[i] += 1;
                for l in &mut label[i + 1..] {
                    *l = 0;
                }
                break;
            }
            i -= 1;
        }
    }
}
