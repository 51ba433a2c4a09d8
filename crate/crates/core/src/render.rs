//! Text dumps and Graphviz output for automata.

use std::fmt::Write;

use crate::machine::Automaton;

/// One line per state, `id | item;item;...`, followed by one line per
/// transition, `src -x-> dst`. Output depends only on the automaton.
pub fn dump(m: &Automaton) -> String {
    let g = m.grammar();
    let mut out = String::new();
    for s in m.states() {
        let items: Vec<String> = s.items().iter().map(|i| i.render(g)).collect();
        let _ = writeln!(out, "{} | {}", s.id, items.join(";"));
    }
    for s in m.states() {
        for (x, t) in m.transitions(s.id) {
            let _ = writeln!(out, "{} -{}-> {}", s.id, g.name(*x), t);
        }
    }
    out
}

fn escape(label: &str) -> String {
    let mut out = String::with_capacity(label.len());
    for ch in label.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '{' | '}' | '<' | '>' | '|' => {
                out.push('\\');
                out.push(ch);
            }
            _ => out.push(ch),
        }
    }
    out
}

/// Graphviz digraph of the automaton. With `show_items` each node lists its
/// items, one per line.
pub fn export_dot(m: &Automaton, show_items: bool) -> String {
    let g = m.grammar();
    let mut out =
        String::from("digraph lr {\n  rankdir=LR;\n  node [shape=box, fontname=\"monospace\"];\n");
    for s in m.states() {
        let mut label = format!("{}", s.id);
        if show_items {
            for item in s.items() {
                label.push_str("\\l");
                label.push_str(&escape(&item.render(g)));
            }
            label.push_str("\\l");
        }
        let _ = writeln!(out, "  s{} [label=\"{}\"];", s.id, label);
    }
    for s in m.states() {
        for (x, t) in m.transitions(s.id) {
            let _ = writeln!(
                out,
                "  s{} -> s{} [label=\"{}\"];",
                s.id,
                t,
                escape(g.name(*x))
            );
        }
    }
    out.push_str("}\n");
    out
}
