//! Canonical LR(1) and LR(0) automata.
//!
//! States are canonically ordered item sets. Items with equal cores are
//! coalesced by lookahead union, so a state never holds two items with the
//! same `(production, dot)`. State ids follow breadth-first discovery from
//! the start state, visiting successor symbols in symbol-id order (the order
//! of first appearance in the grammar text). Building the same grammar twice
//! yields identical automata.
//!
//! End of input is the synthetic marker `⊣`, never a grammar terminal. The
//! parser accepts when it reduces production 0 with `⊣` as lookahead.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::first::FirstSets;
use crate::grammar::{Grammar, SymbolId};
use crate::termset::TerminalSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateId(pub usize);

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

/// An item with its lookahead stripped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ItemCore {
    pub production: usize,
    pub dot: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Item {
    pub core: ItemCore,
    pub lookahead: TerminalSet,
}

impl ItemCore {
    /// Symbol right after the dot, if any.
    pub fn next_symbol(&self, g: &Grammar) -> Option<SymbolId> {
        g.production(self.production).rhs.get(self.dot).copied()
    }

    pub fn is_complete(&self, g: &Grammar) -> bool {
        self.dot == g.production(self.production).rhs.len()
    }

    pub fn render(&self, g: &Grammar) -> String {
        let p = g.production(self.production);
        let mut out = format!("{} ::=", g.name(p.lhs));
        for (i, s) in p.rhs.iter().enumerate() {
            if i == self.dot {
                out.push_str(" •");
            }
            out.push(' ');
            out.push_str(g.name(*s));
        }
        if self.dot == p.rhs.len() {
            out.push_str(" •");
        }
        out
    }
}

impl Item {
    /// Renders `A ::= α • β , {la}` with lookaheads comma-joined in
    /// terminal-index order.
    pub fn render(&self, g: &Grammar) -> String {
        format!(
            "{} , {}",
            self.core.render(g),
            render_lookahead(g, &self.lookahead)
        )
    }
}

pub fn render_lookahead(g: &Grammar, la: &TerminalSet) -> String {
    let names: Vec<&str> = la.iter().map(|t| g.terminal_name(t)).collect();
    format!("{{{}}}", names.join(","))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LrState {
    pub id: StateId,
    items: Vec<Item>,
}

impl LrState {
    /// Items sorted by `(production, dot)`.
    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn cores(&self) -> impl Iterator<Item = ItemCore> + '_ {
        self.items.iter().map(|i| i.core)
    }

    pub fn core_key(&self) -> Vec<ItemCore> {
        self.cores().collect()
    }

    /// Same cores, lookaheads ignored.
    pub fn is_similar(&self, other: &LrState) -> bool {
        self.items.len() == other.items.len()
            && self.cores().zip(other.cores()).all(|(a, b)| a == b)
    }

    pub fn lookahead_of(&self, core: ItemCore) -> Option<&TerminalSet> {
        self.items
            .binary_search_by(|i| i.core.cmp(&core))
            .ok()
            .map(|at| &self.items[at].lookahead)
    }
}

/// Closure and goto over one grammar.
///
/// In LR(0) mode every item carries the full lookahead universe, which makes
/// states equal exactly when their cores are equal.
pub struct ItemSets<'g> {
    grammar: &'g Grammar,
    first: FirstSets,
    lr0: bool,
}

impl<'g> ItemSets<'g> {
    pub fn lr1(grammar: &'g Grammar) -> Self {
        ItemSets {
            grammar,
            first: FirstSets::compute(grammar),
            lr0: false,
        }
    }

    pub fn lr0(grammar: &'g Grammar) -> Self {
        ItemSets {
            lr0: true,
            ..Self::lr1(grammar)
        }
    }

    pub fn grammar(&self) -> &'g Grammar {
        self.grammar
    }

    fn start_lookahead(&self) -> TerminalSet {
        let g = self.grammar;
        if self.lr0 {
            TerminalSet::full(g.lookahead_universe())
        } else {
            TerminalSet::singleton(g.lookahead_universe(), g.end_index())
        }
    }

    /// Least item set containing `seed` such that every
    /// `(A ::= α • B β, la)` brings in `(B ::= • γ, FIRST(β la))`.
    pub fn closure(&self, seed: &[Item]) -> Vec<Item> {
        let g = self.grammar;
        let mut set: BTreeMap<ItemCore, TerminalSet> = BTreeMap::new();
        let mut work: VecDeque<ItemCore> = VecDeque::new();
        for item in seed {
            let la = set
                .entry(item.core)
                .or_insert_with(|| TerminalSet::empty(g.lookahead_universe()));
            la.union_with(&item.lookahead);
            work.push_back(item.core);
        }
        while let Some(core) = work.pop_front() {
            let p = g.production(core.production);
            let Some(&next) = p.rhs.get(core.dot) else {
                continue;
            };
            if g.is_terminal(next) {
                continue;
            }
            let spawned = if self.lr0 {
                TerminalSet::full(g.lookahead_universe())
            } else {
                self.first
                    .first_of_sequence(&p.rhs[core.dot + 1..], &set[&core])
            };
            for &q in g.productions_of(next) {
                let c = ItemCore {
                    production: q,
                    dot: 0,
                };
                let mut grew = false;
                let la = set.entry(c).or_insert_with(|| {
                    grew = true;
                    TerminalSet::empty(g.lookahead_universe())
                });
                grew |= la.union_with(&spawned);
                if grew {
                    work.push_back(c);
                }
            }
        }
        set.into_iter()
            .map(|(core, lookahead)| Item { core, lookahead })
            .collect()
    }

    /// Closure of the items in `items` advanced over `x`; empty when nothing
    /// moves.
    pub fn goto_set(&self, items: &[Item], x: SymbolId) -> Vec<Item> {
        let kernel: Vec<Item> = items
            .iter()
            .filter(|i| i.core.next_symbol(self.grammar) == Some(x))
            .map(|i| Item {
                core: ItemCore {
                    production: i.core.production,
                    dot: i.core.dot + 1,
                },
                lookahead: i.lookahead.clone(),
            })
            .collect();
        if kernel.is_empty() {
            return kernel;
        }
        self.closure(&kernel)
    }

    fn start_items(&self) -> Vec<Item> {
        self.closure(&[Item {
            core: ItemCore {
                production: 0,
                dot: 0,
            },
            lookahead: self.start_lookahead(),
        }])
    }
}

/// A deterministic LR automaton over an augmented grammar.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automaton {
    grammar: Arc<Grammar>,
    states: Vec<LrState>,
    transitions: Vec<BTreeMap<SymbolId, StateId>>,
}

pub fn build_lr1(g: &Grammar) -> Automaton {
    Automaton::build(g, false)
}

pub fn build_lr0(g: &Grammar) -> Automaton {
    Automaton::build(g, true)
}

impl Automaton {
    fn build(g: &Grammar, lr0: bool) -> Automaton {
        let grammar = Arc::new(g.augmented());
        let sets = if lr0 {
            ItemSets::lr0(&grammar)
        } else {
            ItemSets::lr1(&grammar)
        };

        let start = sets.start_items();
        let mut index: HashMap<Vec<Item>, StateId> = HashMap::new();
        index.insert(start.clone(), StateId(0));
        let mut items: Vec<Vec<Item>> = vec![start];
        let mut transitions: Vec<BTreeMap<SymbolId, StateId>> = vec![BTreeMap::new()];

        let mut at = 0;
        while at < items.len() {
            let symbols: BTreeSet<SymbolId> = items[at]
                .iter()
                .filter_map(|i| i.core.next_symbol(&grammar))
                .collect();
            for x in symbols {
                let target = sets.goto_set(&items[at], x);
                let id = match index.get(&target) {
                    Some(id) => *id,
                    None => {
                        let id = StateId(items.len());
                        index.insert(target.clone(), id);
                        items.push(target);
                        transitions.push(BTreeMap::new());
                        id
                    }
                };
                transitions[at].insert(x, id);
            }
            at += 1;
        }

        let states = items
            .into_iter()
            .enumerate()
            .map(|(i, items)| LrState {
                id: StateId(i),
                items,
            })
            .collect();
        drop(sets);
        Automaton {
            grammar,
            states,
            transitions,
        }
    }

    /// The augmented grammar the automaton was built over.
    pub fn grammar(&self) -> &Grammar {
        &self.grammar
    }

    pub fn start_state(&self) -> StateId {
        StateId(0)
    }

    pub fn states(&self) -> &[LrState] {
        &self.states
    }

    pub fn state(&self, id: StateId) -> &LrState {
        &self.states[id.0]
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn transitions(&self, id: StateId) -> &BTreeMap<SymbolId, StateId> {
        &self.transitions[id.0]
    }

    pub fn successor(&self, id: StateId, x: SymbolId) -> Option<StateId> {
        self.transitions[id.0].get(&x).copied()
    }

    pub fn transition_count(&self) -> usize {
        self.transitions.iter().map(BTreeMap::len).sum()
    }

    /// Follows a path of symbols from the start state.
    pub fn walk(&self, path: &[SymbolId]) -> Option<StateId> {
        path.iter()
            .try_fold(self.start_state(), |at, x| self.successor(at, *x))
    }

    /// Conflicts of every state, in state order.
    pub fn conflicts(&self) -> ConflictReport {
        let mut report = ConflictReport::default();
        for s in &self.states {
            report
                .entries
                .extend(detect_conflicts(&self.grammar, s).entries);
        }
        report
    }

    pub fn is_conflict_free(&self) -> bool {
        self.states
            .iter()
            .all(|s| detect_conflicts(&self.grammar, s).is_empty())
    }

    /// Quotient by a partition of the states. Every block must be
    /// similarity-closed and successor-congruent; items are merged by
    /// lookahead union and the result is renumbered breadth-first from the
    /// start block.
    pub(crate) fn quotient(&self, blocks: &[Vec<StateId>]) -> Automaton {
        let mut block_of = vec![usize::MAX; self.states.len()];
        for (b, block) in blocks.iter().enumerate() {
            for s in block {
                block_of[s.0] = b;
            }
        }
        debug_assert!(block_of.iter().all(|b| *b != usize::MAX));

        let mut new_id: Vec<Option<StateId>> = vec![None; blocks.len()];
        let mut order: Vec<usize> = Vec::new();
        let start_block = block_of[0];
        new_id[start_block] = Some(StateId(0));
        order.push(start_block);
        let mut transitions: Vec<BTreeMap<SymbolId, StateId>> = Vec::new();
        let mut at = 0;
        while at < order.len() {
            let b = order[at];
            let mut out: BTreeMap<SymbolId, StateId> = BTreeMap::new();
            for s in &blocks[b] {
                for (&x, &t) in &self.transitions[s.0] {
                    let tb = block_of[t.0];
                    let id = *new_id[tb].get_or_insert_with(|| {
                        order.push(tb);
                        StateId(order.len() - 1)
                    });
                    let prev = out.insert(x, id);
                    debug_assert!(
                        prev.is_none_or(|p| p == id),
                        "quotient is not deterministic"
                    );
                }
            }
            transitions.push(out);
            at += 1;
        }

        let states = order
            .iter()
            .enumerate()
            .map(|(i, &b)| LrState {
                id: StateId(i),
                items: union_items(blocks[b].iter().map(|s| self.state(*s))),
            })
            .collect();
        Automaton {
            grammar: Arc::clone(&self.grammar),
            states,
            transitions,
        }
    }

    /// Maps each state of `self` to the state of `other` reached by the same
    /// path, checking that this is a bijection, that transitions agree, and
    /// that paired states match under `cmp`.
    pub fn isomorphism(&self, other: &Automaton, cmp: StateComparison) -> Option<Vec<StateId>> {
        if self.len() != other.len() {
            return None;
        }
        let mut fwd: Vec<Option<StateId>> = vec![None; self.len()];
        let mut back: Vec<Option<StateId>> = vec![None; other.len()];
        let mut queue = VecDeque::from([(self.start_state(), other.start_state())]);
        fwd[0] = Some(other.start_state());
        back[0] = Some(self.start_state());
        while let Some((a, b)) = queue.pop_front() {
            let (sa, sb) = (self.state(a), other.state(b));
            let same = match cmp {
                StateComparison::Cores => sa.is_similar(sb),
                StateComparison::Items => sa.items == sb.items,
            };
            if !same {
                return None;
            }
            let (ta, tb) = (self.transitions(a), other.transitions(b));
            if ta.len() != tb.len() {
                return None;
            }
            for ((xa, na), (xb, nb)) in ta.iter().zip(tb) {
                if xa != xb {
                    return None;
                }
                match (fwd[na.0], back[nb.0]) {
                    (None, None) => {
                        fwd[na.0] = Some(*nb);
                        back[nb.0] = Some(*na);
                        queue.push_back((*na, *nb));
                    }
                    (Some(f), Some(r)) if f == *nb && r == *na => {}
                    _ => return None,
                }
            }
        }
        fwd.into_iter().collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StateComparison {
    /// Paired states must have the same item cores.
    Cores,
    /// Paired states must have identical items, lookaheads included.
    Items,
}

fn union_items<'a>(states: impl IntoIterator<Item = &'a LrState>) -> Vec<Item> {
    let mut iter = states.into_iter();
    let first = iter.next().expect("non-empty block");
    let mut items = first.items.clone();
    for s in iter {
        for (mine, theirs) in items.iter_mut().zip(&s.items) {
            mine.lookahead.union_with(&theirs.lookahead);
        }
    }
    items
}

/// Partition of an automaton's states by item-core equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimilarityClasses {
    classes: Vec<Vec<StateId>>,
    class_of: Vec<usize>,
}

pub fn similarity_classes(m: &Automaton) -> SimilarityClasses {
    let mut by_key: HashMap<Vec<ItemCore>, usize> = HashMap::new();
    let mut classes: Vec<Vec<StateId>> = Vec::new();
    let mut class_of = Vec::with_capacity(m.len());
    for s in m.states() {
        let c = *by_key.entry(s.core_key()).or_insert_with(|| {
            classes.push(Vec::new());
            classes.len() - 1
        });
        classes[c].push(s.id);
        class_of.push(c);
    }
    SimilarityClasses { classes, class_of }
}

impl SimilarityClasses {
    /// Classes ordered by smallest member; members ascending.
    pub fn classes(&self) -> &[Vec<StateId>] {
        &self.classes
    }

    pub fn class_of(&self, s: StateId) -> usize {
        self.class_of[s.0]
    }

    pub fn is_singleton(&self, s: StateId) -> bool {
        self.classes[self.class_of[s.0]].len() == 1
    }

    pub fn non_singleton(&self) -> impl Iterator<Item = &Vec<StateId>> {
        self.classes.iter().filter(|c| c.len() > 1)
    }

    pub fn similar(&self, a: StateId, b: StateId) -> bool {
        self.class_of[a.0] == self.class_of[b.0]
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MergeError {
    #[error("cannot merge an empty block")]
    EmptyBlock,
    #[error("states {0} and {1} are not similar")]
    Dissimilar(StateId, StateId),
}

/// Merges similar states into one whose lookaheads are the per-item unions.
/// The merged state takes the smallest id in the block.
pub fn merge_block(m: &Automaton, block: &[StateId]) -> Result<LrState, MergeError> {
    let Some(&first) = block.iter().min() else {
        return Err(MergeError::EmptyBlock);
    };
    let head = m.state(first);
    for &s in block {
        if !head.is_similar(m.state(s)) {
            return Err(MergeError::Dissimilar(first, s));
        }
    }
    Ok(LrState {
        id: first,
        items: union_items(block.iter().map(|s| m.state(*s))),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConflictKind {
    ReduceReduce,
    ShiftReduce,
}

impl fmt::Display for ConflictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConflictKind::ReduceReduce => "reduce-reduce",
            ConflictKind::ShiftReduce => "shift-reduce",
        })
    }
}

/// One terminal with two competing decisions in a state.
///
/// For reduce-reduce both items are completed; for shift-reduce `first` is
/// the completed item and `second` the item shifting `terminal`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conflict {
    pub state: StateId,
    /// Terminal index (the grammar's end index stands for `⊣`).
    pub terminal: usize,
    pub first: ItemCore,
    pub second: ItemCore,
    pub kind: ConflictKind,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConflictReport {
    pub entries: Vec<Conflict>,
}

impl ConflictReport {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn render(&self, g: &Grammar) -> String {
        let mut out = String::new();
        for c in &self.entries {
            out.push_str(&format!(
                "state {}: {} conflict on {} between `{}` and `{}`\n",
                c.state,
                c.kind,
                g.terminal_name(c.terminal),
                c.first.render(g),
                c.second.render(g),
            ));
        }
        out
    }
}

pub fn detect_conflicts(g: &Grammar, s: &LrState) -> ConflictReport {
    let mut report = ConflictReport::default();
    let completed: Vec<&Item> = s.items.iter().filter(|i| i.core.is_complete(g)).collect();
    for (i, a) in completed.iter().enumerate() {
        for b in &completed[i + 1..] {
            for t in a.lookahead.intersection(&b.lookahead) {
                report.entries.push(Conflict {
                    state: s.id,
                    terminal: t,
                    first: a.core,
                    second: b.core,
                    kind: ConflictKind::ReduceReduce,
                });
            }
        }
    }
    for r in &completed {
        for shift in &s.items {
            let Some(x) = shift.core.next_symbol(g) else {
                continue;
            };
            let Some(t) = g.terminal_index(x) else {
                continue;
            };
            if r.lookahead.contains(t) {
                report.entries.push(Conflict {
                    state: s.id,
                    terminal: t,
                    first: r.core,
                    second: shift.core,
                    kind: ConflictKind::ShiftReduce,
                });
            }
        }
    }
    report
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseOutcome {
    Accept,
    /// Index of the offending token; the input length means end of input.
    Reject {
        position: usize,
    },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("automaton has {} conflict(s)", .0.len())]
    Conflicted(ConflictReport),
}

/// Runs the shift/reduce parser over `tokens` followed by `⊣`.
pub fn parse_sentence(m: &Automaton, tokens: &[SymbolId]) -> Result<ParseOutcome, ParseError> {
    let report = m.conflicts();
    if !report.is_empty() {
        return Err(ParseError::Conflicted(report));
    }
    let g = m.grammar();
    let end = g.end_index();
    let mut stack = vec![m.start_state()];
    let mut pos = 0;
    loop {
        let top = *stack.last().expect("stack never empties");
        let la = match tokens.get(pos) {
            Some(&t) => match (t.index() < g.symbols().len())
                .then(|| g.terminal_index(t))
                .flatten()
            {
                Some(i) => i,
                None => return Ok(ParseOutcome::Reject { position: pos }),
            },
            None => end,
        };
        if let Some(&tok) = tokens.get(pos) {
            if let Some(next) = m.successor(top, tok) {
                stack.push(next);
                pos += 1;
                continue;
            }
        }
        let reduce = m
            .state(top)
            .items
            .iter()
            .find(|i| i.core.is_complete(g) && i.lookahead.contains(la));
        let Some(item) = reduce else {
            return Ok(ParseOutcome::Reject { position: pos });
        };
        if item.core.production == 0 {
            // Production 0 only ever carries ⊣ in its lookahead.
            return Ok(ParseOutcome::Accept);
        }
        let p = g.production(item.core.production);
        stack.truncate(stack.len() - p.rhs.len());
        let below = *stack.last().expect("reduction leaves the start state");
        match m.successor(below, p.lhs) {
            Some(next) => stack.push(next),
            None => return Ok(ParseOutcome::Reject { position: pos }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TABLE2_RIGHT: &str =
        "P ::= S $\nS ::= 1 X )\nS ::= 1 Y b\nS ::= 2 X c\nS ::= 2 Y )\nX ::= @\nY ::= @";
    const TABLE2_LEFT: &str =
        "P ::= S $\nS ::= 1 X a\nS ::= 1 Y b\nS ::= 2 X c\nS ::= 2 Y d\nX ::= @\nY ::= @";

    fn rendered(g: &Grammar, items: &[Item]) -> Vec<String> {
        items.iter().map(|i| i.render(g)).collect()
    }

    fn item(g: &Grammar, production: usize, dot: usize, la: &[&str]) -> Item {
        let mut set = TerminalSet::empty(g.lookahead_universe());
        for name in la {
            let t = match *name {
                "⊣" => g.end_index(),
                n => g.terminal_index(g.lookup(n).unwrap()).unwrap(),
            };
            set.insert(t);
        }
        Item {
            core: ItemCore { production, dot },
            lookahead: set,
        }
    }

    fn sym(g: &Grammar, name: &str) -> SymbolId {
        g.lookup(name).unwrap()
    }

    #[test]
    fn closure_of_start_item() {
        let g: Grammar = TABLE2_RIGHT.parse().unwrap();
        let sets = ItemSets::lr1(&g);
        let closed = sets.closure(&[item(&g, 0, 0, &["⊣"])]);
        assert_eq!(
            rendered(&g, &closed),
            [
                "P ::= • S $ , {⊣}",
                "S ::= • 1 X ) , {$}",
                "S ::= • 1 Y b , {$}",
                "S ::= • 2 X c , {$}",
                "S ::= • 2 Y ) , {$}",
            ]
        );
    }

    #[test]
    fn closure_before_terminal_adds_nothing() {
        let g: Grammar = TABLE2_RIGHT.parse().unwrap();
        let sets = ItemSets::lr1(&g);
        let seed = [item(&g, 1, 0, &["$"])];
        assert_eq!(sets.closure(&seed), seed);
    }

    #[test]
    fn closure_propagates_following_terminal() {
        let g: Grammar = TABLE2_RIGHT.parse().unwrap();
        let sets = ItemSets::lr1(&g);
        let closed = sets.closure(&[item(&g, 1, 1, &["$"])]);
        assert_eq!(
            rendered(&g, &closed),
            ["S ::= 1 • X ) , {$}", "X ::= • @ , {)}"]
        );
    }

    #[test]
    fn goto_examples() {
        let g: Grammar = TABLE2_RIGHT.parse().unwrap();
        let sets = ItemSets::lr1(&g);
        let start = sets.start_items();
        let after_one = sets.goto_set(&start, sym(&g, "1"));
        assert_eq!(
            rendered(&g, &after_one),
            [
                "S ::= 1 • X ) , {$}",
                "S ::= 1 • Y b , {$}",
                "X ::= • @ , {)}",
                "Y ::= • @ , {b}",
            ]
        );
        assert!(sets.goto_set(&start, sym(&g, "@")).is_empty());

        let reduce_seed = [item(&g, 5, 0, &[")"]), item(&g, 6, 0, &["b"])];
        assert_eq!(
            rendered(&g, &sets.goto_set(&reduce_seed, sym(&g, "@"))),
            ["X ::= @ • , {)}", "Y ::= @ • , {b}"]
        );
    }

    #[test]
    fn single_rule_machine() {
        let g: Grammar = "P ::= a".parse().unwrap();
        let m = build_lr1(&g);
        assert_eq!(m.len(), 2);
        assert_eq!(m.transition_count(), 1);
        assert_eq!(
            m.isomorphism(&build_lr0(&g), StateComparison::Cores)
                .unwrap()
                .len(),
            2
        );
    }

    #[test]
    fn table2_machines() {
        for text in [TABLE2_LEFT, TABLE2_RIGHT] {
            let g: Grammar = text.parse().unwrap();
            let m = build_lr1(&g);
            assert_eq!(m.len(), 4 * 4 - 4 + 3);
            assert!(m.is_conflict_free());
            let classes = similarity_classes(&m);
            let big: Vec<_> = classes.non_singleton().collect();
            assert_eq!(big.len(), 1);
            assert_eq!(big[0].len(), 2);
            assert_eq!(build_lr0(&g).len(), m.len() - 1);
        }
    }

    #[test]
    fn merging_the_table2_right_pair_conflicts_on_paren() {
        let g: Grammar = TABLE2_RIGHT.parse().unwrap();
        let m = build_lr1(&g);
        let s1 = m.walk(&[sym(&g, "1"), sym(&g, "@")]).unwrap();
        let s2 = m.walk(&[sym(&g, "2"), sym(&g, "@")]).unwrap();
        assert_eq!(
            rendered(&g, m.state(s1).items()),
            ["X ::= @ • , {)}", "Y ::= @ • , {b}"]
        );
        assert_eq!(
            rendered(&g, m.state(s2).items()),
            ["X ::= @ • , {c}", "Y ::= @ • , {)}"]
        );
        let merged = merge_block(&m, &[s1, s2]).unwrap();
        assert_eq!(
            rendered(&g, merged.items()),
            ["X ::= @ • , {),c}", "Y ::= @ • , {),b}"]
        );
        let report = detect_conflicts(m.grammar(), &merged);
        assert_eq!(report.len(), 1);
        assert_eq!(report.entries[0].kind, ConflictKind::ReduceReduce);
        assert_eq!(g.terminal_name(report.entries[0].terminal), ")");
    }

    #[test]
    fn singleton_merge_is_identity() {
        let g: Grammar = TABLE2_RIGHT.parse().unwrap();
        let m = build_lr1(&g);
        assert_eq!(
            &merge_block(&m, &[StateId(3)]).unwrap(),
            m.state(StateId(3))
        );
    }

    #[test]
    fn dissimilar_merge_is_rejected() {
        let g: Grammar = TABLE2_RIGHT.parse().unwrap();
        let m = build_lr1(&g);
        assert_eq!(
            merge_block(&m, &[StateId(0), StateId(1)]),
            Err(MergeError::Dissimilar(StateId(0), StateId(1)))
        );
    }

    #[test]
    fn single_item_state_has_no_conflicts() {
        let g: Grammar = TABLE2_RIGHT.parse().unwrap();
        let m = build_lr1(&g);
        let one = m.states().iter().find(|s| s.items().len() == 1).unwrap();
        assert!(detect_conflicts(&g, one).is_empty());
    }

    #[test]
    fn shift_reduce_detected() {
        // Dangling else.
        let g: Grammar = "S ::= i S\nS ::= i S e S\nS ::= x".parse().unwrap();
        let report = build_lr1(&g).conflicts();
        assert!(!report.is_empty());
        assert!(report
            .entries
            .iter()
            .all(|c| c.kind == ConflictKind::ShiftReduce));
        assert!(report
            .entries
            .iter()
            .all(|c| g.terminal_name(c.terminal) == "e"));
    }

    #[test]
    fn parser_accepts_and_rejects() {
        let g: Grammar = TABLE2_RIGHT.parse().unwrap();
        let m = build_lr1(&g);
        let run = |s: &str| parse_sentence(&m, &g.tokenize(s).unwrap()).unwrap();
        assert_eq!(run("1 @ ) $"), ParseOutcome::Accept);
        assert_eq!(run("1 @ b $"), ParseOutcome::Accept);
        assert_eq!(run("1 @ c $"), ParseOutcome::Reject { position: 2 });
        assert_eq!(run("1 @ )"), ParseOutcome::Reject { position: 3 });
        assert_eq!(run(""), ParseOutcome::Reject { position: 0 });
    }

    #[test]
    fn parser_on_epsilon_grammar() {
        let g: Grammar = "A ::=".parse().unwrap();
        let m = build_lr1(&g);
        assert_eq!(parse_sentence(&m, &[]).unwrap(), ParseOutcome::Accept);
    }

    #[test]
    fn parser_on_recursive_start() {
        let g: Grammar = "E ::= E + x\nE ::= x".parse().unwrap();
        let m = build_lr1(&g);
        assert_eq!(m.grammar().production_text(0), "E' ::= E");
        let run = |s: &str| parse_sentence(&m, &g.tokenize(s).unwrap()).unwrap();
        assert_eq!(run("x + x + x"), ParseOutcome::Accept);
        assert_eq!(run("x + + x"), ParseOutcome::Reject { position: 2 });
    }

    #[test]
    fn parser_refuses_conflicted_machine() {
        let g: Grammar = "S ::= A\nS ::= B\nA ::= x\nB ::= x".parse().unwrap();
        let m = build_lr1(&g);
        assert!(matches!(
            parse_sentence(&m, &[]),
            Err(ParseError::Conflicted(_))
        ));
    }

    #[test]
    fn rebuild_is_identical() {
        let g: Grammar = TABLE2_LEFT.parse().unwrap();
        assert_eq!(build_lr1(&g), build_lr1(&g));
    }

    #[test]
    fn identity_quotient_is_isomorphic() {
        let g: Grammar = TABLE2_RIGHT.parse().unwrap();
        let m = build_lr1(&g);
        let blocks: Vec<Vec<StateId>> = m.states().iter().map(|s| vec![s.id]).collect();
        let q = m.quotient(&blocks);
        assert!(q.isomorphism(&m, StateComparison::Items).is_some());
    }
}
