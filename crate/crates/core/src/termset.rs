//! Dense bitsets over a grammar's terminal alphabet plus the end marker.

use std::fmt;

const WORD: usize = 64;

/// A set of terminal indices.
///
/// Indices are dense terminal positions as handed out by
/// [`Grammar::terminal_index`](crate::grammar::Grammar::terminal_index); the
/// last index of the universe is the end-of-input marker. Two sets built over
/// the same universe compare equal iff they hold the same members.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TerminalSet {
    words: Vec<u64>,
}

impl TerminalSet {
    pub fn empty(universe: usize) -> Self {
        TerminalSet {
            words: vec![0; universe.div_ceil(WORD)],
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut set = Self::empty(universe);
        for i in 0..universe {
            set.insert(i);
        }
        set
    }

    pub fn singleton(universe: usize, index: usize) -> Self {
        let mut set = Self::empty(universe);
        set.insert(index);
        set
    }

    /// Returns true if the index was not already present.
    pub fn insert(&mut self, index: usize) -> bool {
        let (w, b) = (index / WORD, index % WORD);
        let before = self.words[w];
        self.words[w] |= 1 << b;
        before != self.words[w]
    }

    pub fn contains(&self, index: usize) -> bool {
        let (w, b) = (index / WORD, index % WORD);
        self.words.get(w).is_some_and(|word| word & (1 << b) != 0)
    }

    /// In-place union. Returns true if `self` grew.
    pub fn union_with(&mut self, other: &TerminalSet) -> bool {
        let mut changed = false;
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            let next = *a | *b;
            changed |= next != *a;
            *a = next;
        }
        changed
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_disjoint(&self, other: &TerminalSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn intersection<'a>(&'a self, other: &'a TerminalSet) -> impl Iterator<Item = usize> + 'a {
        self.words
            .iter()
            .zip(&other.words)
            .enumerate()
            .flat_map(|(w, (a, b))| bits(a & b).map(move |bit| w * WORD + bit))
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words
            .iter()
            .enumerate()
            .flat_map(|(w, word)| bits(*word).map(move |bit| w * WORD + bit))
    }
}

fn bits(mut word: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if word == 0 {
            return None;
        }
        let bit = word.trailing_zeros() as usize;
        word &= word - 1;
        Some(bit)
    })
}

impl fmt::Debug for TerminalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
