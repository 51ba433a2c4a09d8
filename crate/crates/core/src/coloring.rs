//! Undirected graphs in DIMACS form, colorings, and an exact chromatic
//! number by backtracking.

use std::collections::BTreeSet;
use std::fmt::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ColoringError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("edge {0}-{1} is out of range for {2} nodes")]
    OutOfRange(usize, usize, usize),
    #[error("self-loop on node {0}")]
    SelfLoop(usize),
    #[error("graph has {nodes} nodes, over the oracle limit of {limit}")]
    TooLarge { nodes: usize, limit: usize },
}

/// Simple undirected graph on nodes `1..=n`. Edges are stored as `(i, j)`
/// with `i < j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColorGraph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl ColorGraph {
    pub fn new<I>(n: usize, edges: I) -> Result<ColorGraph, ColoringError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == 0 || b == 0 || a > n || b > n {
                return Err(ColoringError::OutOfRange(a, b, n));
            }
            if a == b {
                return Err(ColoringError::SelfLoop(a));
            }
            set.insert((a.min(b), a.max(b)));
        }
        Ok(ColorGraph { n, edges: set })
    }

    /// Random graph where each pair is an edge with probability `density`.
    pub fn random(n: usize, density: f64, seed: u64) -> ColorGraph {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut edges = BTreeSet::new();
        for i in 1..=n {
            for j in i + 1..=n {
                if rng.gen_bool(density.clamp(0.0, 1.0)) {
                    edges.insert((i, j));
                }
            }
        }
        ColorGraph { n, edges }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p edge {} {}\n", self.n, self.edges.len());
        for (a, b) in &self.edges {
            let _ = writeln!(out, "e {a} {b}");
        }
        out
    }
}

/// Reads DIMACS `.col` text: `c` comment lines, one `p edge N M` header,
/// then `e I J` lines. Duplicate edges collapse; the header edge count is
/// not enforced.
pub fn parse_dimacs(text: &str) -> Result<ColorGraph, ColoringError> {
    let mut n = None;
    let mut edges = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let err = |message: &str| ColoringError::Syntax {
            line: line_no,
            message: message.to_string(),
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields.first().copied() {
            None | Some("c") => {}
            Some("p") => {
                if n.is_some() {
                    return Err(err("duplicate problem line"));
                }
                if fields.len() != 4 || !matches!(fields[1], "edge" | "col") {
                    return Err(err("expected `p edge <nodes> <edges>`"));
                }
                n = Some(
                    fields[2]
                        .parse::<usize>()
                        .map_err(|_| err("invalid node count"))?,
                );
                fields[3]
                    .parse::<usize>()
                    .map_err(|_| err("invalid edge count"))?;
            }
            Some("e") => {
                let Some(n) = n else {
                    return Err(err("edge before problem line"));
                };
                if fields.len() != 3 {
                    return Err(err("expected `e <node> <node>`"));
                }
                let a = fields[1]
                    .parse::<usize>()
                    .map_err(|_| err("invalid node"))?;
                let b = fields[2]
                    .parse::<usize>()
                    .map_err(|_| err("invalid node"))?;
                if a == 0 || b == 0 || a > n || b > n {
                    return Err(ColoringError::OutOfRange(a, b, n));
                }
                if a == b {
                    return Err(ColoringError::SelfLoop(a));
                }
                edges.push((a, b));
            }
            Some(other) => return Err(err(&format!("unknown line type {other:?}"))),
        }
    }
    let n = n.ok_or(ColoringError::Syntax {
        line: 0,
        message: "missing problem line".into(),
    })?;
    ColorGraph::new(n, edges)
}

/// Color classes as sets of 1-based nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    blocks: Vec<Vec<usize>>,
}

impl Coloring {
    /// Sorts nodes within each class and classes by their smallest node.
    pub fn new(blocks: Vec<Vec<usize>>) -> Coloring {
        let mut blocks: Vec<Vec<usize>> = blocks
            .into_iter()
            .filter(|b| !b.is_empty())
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        blocks.sort();
        Coloring { blocks }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn color_count(&self) -> usize {
        self.blocks.len()
    }

    /// Every node of `f` colored exactly once and no edge inside a class.
    pub fn is_proper(&self, f: &ColorGraph) -> bool {
        let mut seen = vec![0u32; f.node_count() + 1];
        for b in &self.blocks {
            for &v in b {
                if v == 0 || v > f.node_count() {
                    return false;
                }
                seen[v] += 1;
            }
            for (i, &a) in b.iter().enumerate() {
                if b[i + 1..].iter().any(|&c| f.has_edge(a, c)) {
                    return false;
                }
            }
        }
        seen[1..].iter().all(|&c| c == 1)
    }

    /// One class per line, space-separated nodes.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for b in &self.blocks {
            let nodes: Vec<String> = b.iter().map(|v| v.to_string()).collect();
            out.push_str(&nodes.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Coloring, ColoringError> {
        let mut blocks = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let block = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>().map_err(|_| ColoringError::Syntax {
                        line: i + 1,
                        message: format!("invalid node {t:?}"),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            blocks.push(block);
        }
        Ok(Coloring::new(blocks))
    }
}

/// Chromatic number and a witness coloring. Refuses graphs with more than
/// `limit` nodes.
pub fn chromatic_oracle(f: &ColorGraph, limit: usize) -> Result<(usize, Coloring), ColoringError> {
    let n = f.node_count();
    if n > limit {
        return Err(ColoringError::TooLarge { nodes: n, limit });
    }
    if n == 0 {
        return Ok((0, Coloring::new(Vec::new())));
    }
    let adj: Vec<Vec<bool>> = (0..=n)
        .map(|a| {
            (0..=n)
                .map(|b| a != 0 && b != 0 && f.has_edge(a, b))
                .collect()
        })
        .collect();
    let mut best = (n + 1, Vec::new());
    let mut color = vec![0usize; n + 1];
    color_from(&adj, n, 1, 0, &mut color, &mut best);
    let (k, assignment) = best;
    let mut blocks = vec![Vec::new(); k];
    for v in 1..=n {
        blocks[assignment[v] - 1].push(v);
    }
    Ok((k, Coloring::new(blocks)))
}

fn color_from(
    adj: &[Vec<bool>],
    n: usize,
    v: usize,
    used: usize,
    color: &mut [usize],
    best: &mut (usize, Vec<usize>),
) {
    if used >= best.0 {
        return;
    }
    if v > n {
        *best = (used, color.to_vec());
        return;
    }
    // Colors 1..=used, then one fresh color; symmetric choices are skipped.
    for c in 1..=(used + 1).min(best.0 - 1) {
        if (1..v).any(|u| adj[v][u] && color[u] == c) {
            continue;
        }
        color[v] = c;
        color_from(adj, n, v + 1, used.max(c), color, best);
    }
    color[v] = 0;
}
