//! FIRST sets and nullability.

use crate::grammar::{Grammar, SymbolId};
use crate::termset::TerminalSet;

/// Least-fixpoint FIRST sets for every symbol of a grammar.
///
/// Sets are built over the grammar's lookahead universe so they can be
/// unioned directly into item lookaheads. A terminal's FIRST set is the
/// terminal itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FirstSets {
    universe: usize,
    first: Vec<TerminalSet>,
    nullable: Vec<bool>,
}

pub fn compute_first(g: &Grammar) -> FirstSets {
    FirstSets::compute(g)
}

impl FirstSets {
    pub fn compute(g: &Grammar) -> FirstSets {
        let universe = g.lookahead_universe();
        let mut sets = FirstSets {
            universe,
            first: g
                .symbols()
                .iter()
                .map(|s| match g.terminal_index(s.id) {
                    Some(t) => TerminalSet::singleton(universe, t),
                    None => TerminalSet::empty(universe),
                })
                .collect(),
            nullable: vec![false; g.symbols().len()],
        };
        while sets.relax(g) {}
        sets
    }

    /// Applies every production's equation once; returns whether anything grew.
    fn relax(&mut self, g: &Grammar) -> bool {
        let mut changed = false;
        for p in g.productions() {
            let lhs = p.lhs.index();
            let mut all_nullable = true;
            for sym in &p.rhs {
                if sym.index() != lhs {
                    let (a, b) = pick_two(&mut self.first, lhs, sym.index());
                    changed |= a.union_with(b);
                }
                if !self.nullable[sym.index()] {
                    all_nullable = false;
                    break;
                }
            }
            if all_nullable && !self.nullable[lhs] {
                self.nullable[lhs] = true;
                changed = true;
            }
        }
        changed
    }

    /// One further round of the fixpoint equations starting from `self`.
    /// A true fixpoint is returned unchanged.
    pub fn step(&self, g: &Grammar) -> FirstSets {
        let mut next = self.clone();
        next.relax(g);
        next
    }

    pub fn first(&self, sym: SymbolId) -> &TerminalSet {
        &self.first[sym.index()]
    }

    pub fn nullable(&self, sym: SymbolId) -> bool {
        self.nullable[sym.index()]
    }

    /// FIRST of `seq` followed by any member of `follow`.
    pub fn first_of_sequence(&self, seq: &[SymbolId], follow: &TerminalSet) -> TerminalSet {
        let mut out = TerminalSet::empty(self.universe);
        for sym in seq {
            out.union_with(self.first(*sym));
            if !self.nullable(*sym) {
                return out;
            }
        }
        out.union_with(follow);
        out
    }
}

fn pick_two<T>(v: &mut [T], a: usize, b: usize) -> (&mut T, &T) {
    debug_assert_ne!(a, b);
    if a < b {
        let (lo, hi) = v.split_at_mut(b);
        (&mut lo[a], &hi[0])
    } else {
        let (lo, hi) = v.split_at_mut(a);
        (&mut hi[0], &lo[b])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn first_names(g: &Grammar, sets: &FirstSets, nt: &str) -> Vec<String> {
        let mut v: Vec<String> = sets
            .first(g.lookup(nt).unwrap())
            .iter()
            .map(|t| g.terminal_name(t).to_string())
            .collect();
        v.sort();
        v
    }

    #[test]
    fn table2_right_first_sets() {
        let g: Grammar =
            "P ::= S $\nS ::= 1 X )\nS ::= 1 Y b\nS ::= 2 X c\nS ::= 2 Y )\nX ::= @\nY ::= @"
                .parse()
                .unwrap();
        let f = compute_first(&g);
        assert_eq!(first_names(&g, &f, "X"), ["@"]);
        assert_eq!(first_names(&g, &f, "Y"), ["@"]);
        assert_eq!(first_names(&g, &f, "S"), ["1", "2"]);
        for nt in ["P", "S", "X", "Y"] {
            assert!(!f.nullable(g.lookup(nt).unwrap()));
        }
    }

    #[test]
    fn epsilon_rule_is_nullable() {
        let g: Grammar = "A ::=".parse().unwrap();
        let f = compute_first(&g);
        let a = g.lookup("A").unwrap();
        assert!(f.first(a).is_empty());
        assert!(f.nullable(a));
    }

    #[test]
    fn nullable_prefix_passes_through() {
        let g: Grammar = "A ::= B c\nB ::=".parse().unwrap();
        let f = compute_first(&g);
        assert_eq!(first_names(&g, &f, "A"), ["c"]);
        assert!(!f.nullable(g.lookup("A").unwrap()));
        assert!(f.nullable(g.lookup("B").unwrap()));
    }

    #[test]
    fn left_recursion_converges() {
        let g: Grammar = "E ::= E + T\nE ::= T\nT ::= ( E )\nT ::= x"
            .parse()
            .unwrap();
        let f = compute_first(&g);
        assert_eq!(first_names(&g, &f, "E"), ["(", "x"]);
        assert_eq!(f.step(&g), f);
    }

    #[test]
    fn sequence_first_appends_follow_when_nullable() {
        let g: Grammar = "A ::= B C d\nB ::=\nC ::= e\nC ::=".parse().unwrap();
        let f = compute_first(&g);
        let follow = TerminalSet::singleton(g.lookahead_universe(), g.end_index());
        let b = g.lookup("B").unwrap();
        let c = g.lookup("C").unwrap();
        let got: Vec<&str> = f
            .first_of_sequence(&[b, c], &follow)
            .iter()
            .map(|t| g.terminal_name(t))
            .collect();
        assert_eq!(got, ["e", "⊣"]);
    }
}
