//! Finite language enumeration.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::grammar::{Grammar, SymbolId};

pub type Sentence = Vec<SymbolId>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LanguageError {
    #[error("grammar is recursive ({}); a length bound is required", .cycle.join(" -> "))]
    Recursive { cycle: Vec<String> },
}

/// Finds a derivation cycle `A -> ... -> A` through right-hand-side
/// occurrences of nonterminals, returning the names along the cycle with the
/// first name repeated at the end.
pub fn find_cycle(g: &Grammar) -> Option<Vec<String>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Active,
        Done,
    }
    let n = g.symbols().len();
    let mut mark = vec![Mark::New; n];
    let mut path: Vec<SymbolId> = Vec::new();

    fn visit(
        g: &Grammar,
        at: SymbolId,
        mark: &mut [Mark],
        path: &mut Vec<SymbolId>,
    ) -> Option<Vec<SymbolId>> {
        mark[at.index()] = Mark::Active;
        path.push(at);
        for &pi in g.productions_of(at) {
            for &sym in &g.production(pi).rhs {
                if g.is_terminal(sym) {
                    continue;
                }
                match mark[sym.index()] {
                    Mark::Active => {
                        let from = path.iter().position(|s| *s == sym).unwrap();
                        let mut cycle = path[from..].to_vec();
                        cycle.push(sym);
                        return Some(cycle);
                    }
                    Mark::New => {
                        if let Some(c) = visit(g, sym, mark, path) {
                            return Some(c);
                        }
                    }
                    Mark::Done => {}
                }
            }
        }
        path.pop();
        mark[at.index()] = Mark::Done;
        None
    }

    for nt in g.nonterminals() {
        if mark[nt.index()] == Mark::New {
            if let Some(c) = visit(g, nt, &mut mark, &mut path) {
                return Some(c.iter().map(|s| g.name(*s).to_string()).collect());
            }
        }
    }
    None
}

/// Every terminal string derivable from the start symbol, optionally capped
/// at `max_length` tokens.
///
/// Without a cap the grammar must be free of recursion; that is checked
/// first. Sentences come back sorted lexicographically by token name.
pub fn enumerate_language(
    g: &Grammar,
    max_length: Option<usize>,
) -> Result<Vec<Sentence>, LanguageError> {
    if max_length.is_none() {
        if let Some(cycle) = find_cycle(g) {
            return Err(LanguageError::Recursive { cycle });
        }
    }
    let cap = max_length.unwrap_or(usize::MAX);

    let mut lang: Vec<BTreeSet<Sentence>> = vec![BTreeSet::new(); g.symbols().len()];
    loop {
        let mut changed = false;
        for p in g.productions() {
            let mut partial: BTreeSet<Sentence> = BTreeSet::from([Vec::new()]);
            for &sym in &p.rhs {
                let options: Vec<Sentence> = if g.is_terminal(sym) {
                    vec![vec![sym]]
                } else {
                    lang[sym.index()].iter().cloned().collect()
                };
                let mut next = BTreeSet::new();
                for prefix in &partial {
                    for tail in &options {
                        if prefix.len() + tail.len() <= cap {
                            let mut s = prefix.clone();
                            s.extend_from_slice(tail);
                            next.insert(s);
                        }
                    }
                }
                partial = next;
                if partial.is_empty() {
                    break;
                }
            }
            let target = &mut lang[p.lhs.index()];
            for s in partial {
                changed |= target.insert(s);
            }
        }
        if !changed {
            break;
        }
    }

    let mut out: Vec<Sentence> = std::mem::take(&mut lang[g.start().index()])
        .into_iter()
        .collect();
    out.sort_by(|a, b| {
        a.iter()
            .map(|s| g.name(*s))
            .cmp(b.iter().map(|s| g.name(*s)))
    });
    Ok(out)
}
