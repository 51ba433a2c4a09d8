#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};
use std::path::PathBuf;

use lrmin_core::{ColorGraph, Grammar, Sentence, SymbolId};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

pub fn data(name: &str) -> String {
    std::fs::read_to_string(data_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn grammar(name: &str) -> Grammar {
    data(name).parse().unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn fixed(name: &str) -> bool {
    matches!(name, "P" | "S" | "$" | "@") || name.chars().all(|c| c.is_ascii_digit())
}

/// Checks that `actual` is `expected` with its symbols renamed by one
/// injective map, rule for rule and in order. `P`, `S`, `$`, `@` and the
/// integer terminals must map to themselves.
pub fn same_up_to_renaming(expected: &Grammar, actual: &Grammar) -> Result<(), String> {
    if expected.productions().len() != actual.productions().len() {
        return Err(format!(
            "{} rules vs {}",
            expected.productions().len(),
            actual.productions().len()
        ));
    }
    let mut fwd: HashMap<&str, &str> = HashMap::new();
    let mut back: HashMap<&str, &str> = HashMap::new();
    for (i, (p, q)) in expected
        .productions()
        .iter()
        .zip(actual.productions())
        .enumerate()
    {
        let ps = std::iter::once(p.lhs).chain(p.rhs.iter().copied());
        let qs = std::iter::once(q.lhs).chain(q.rhs.iter().copied());
        if p.rhs.len() != q.rhs.len() {
            return Err(format!("rule {i}: lengths differ"));
        }
        for (a, b) in ps.zip(qs) {
            let (a, b) = (expected.name(a), actual.name(b));
            if expected.is_terminal(expected.lookup(a).unwrap())
                != actual.is_terminal(actual.lookup(b).unwrap())
            {
                return Err(format!("rule {i}: {a} and {b} differ in kind"));
            }
            if (fixed(a) || fixed(b)) && a != b {
                return Err(format!("rule {i}: {a} must stay {a}, got {b}"));
            }
            if *fwd.entry(a).or_insert(b) != b || *back.entry(b).or_insert(a) != a {
                return Err(format!("rule {i}: {a} -> {b} breaks the renaming"));
            }
        }
    }
    Ok(())
}

/// Every graph on `n` nodes, by edge subset.
pub fn all_graphs(n: usize) -> impl Iterator<Item = ColorGraph> {
    let pairs: Vec<(usize, usize)> = (1..=n)
        .flat_map(|i| (i + 1..=n).map(move |j| (i, j)))
        .collect();
    (0u32..1 << pairs.len()).map(move |mask| {
        let edges = pairs
            .iter()
            .enumerate()
            .filter(|(k, _)| mask & (1 << k) != 0)
            .map(|(_, e)| *e);
        ColorGraph::new(n, edges).unwrap()
    })
}

/// A random grammar without recursion: nonterminal `Ni` only uses `Nj` for
/// `j > i`.
pub fn random_acyclic_grammar(seed: u64) -> Grammar {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nts = rng.gen_range(2..=5);
    let terminals = ["a", "b", "c", "d", "e"];
    let mut rules: Vec<(String, Vec<String>)> = Vec::new();
    for i in 0..nts {
        for _ in 0..rng.gen_range(1..=3) {
            let len = rng.gen_range(0..=3);
            let rhs = (0..len)
                .map(|_| {
                    if i + 1 < nts && rng.gen_bool(0.4) {
                        format!("N{}", rng.gen_range(i + 1..nts))
                    } else {
                        terminals.choose(&mut rng).unwrap().to_string()
                    }
                })
                .collect();
            rules.push((format!("N{i}"), rhs));
        }
    }
    rules.sort_by_key(|(lhs, _)| lhs[1..].parse::<usize>().unwrap());
    rules.dedup();
    Grammar::from_rules(rules).unwrap()
}

/// `count` terminal strings outside `language`, mixing random strings with
/// one-token edits of real sentences.
pub fn non_sentences(g: &Grammar, language: &[Sentence], count: usize, seed: u64) -> Vec<Sentence> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let members: BTreeSet<&Sentence> = language.iter().collect();
    let terminals: Vec<SymbolId> = g.terminals().to_vec();
    if terminals.is_empty() {
        return Vec::new();
    }
    let longest = language.iter().map(Vec::len).max().unwrap_or(0);
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < count && attempts < 100 * count {
        attempts += 1;
        let candidate: Sentence = if !language.is_empty() && rng.gen_bool(0.5) {
            let mut s = language.choose(&mut rng).unwrap().clone();
            match rng.gen_range(0..3) {
                0 if !s.is_empty() => {
                    let at = rng.gen_range(0..s.len());
                    s.remove(at);
                }
                1 if !s.is_empty() => {
                    let at = rng.gen_range(0..s.len());
                    s[at] = *terminals.choose(&mut rng).unwrap();
                }
                _ => {
                    let at = rng.gen_range(0..=s.len());
                    s.insert(at, *terminals.choose(&mut rng).unwrap());
                }
            }
            s
        } else {
            let len = rng.gen_range(0..=longest + 1);
            (0..len)
                .map(|_| *terminals.choose(&mut rng).unwrap())
                .collect()
        };
        if !members.contains(&candidate) {
            out.push(candidate);
        }
    }
    out
}
