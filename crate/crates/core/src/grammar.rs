//! Context-free grammars: symbol tables, the text format, and size statistics.
//!
//! The text format is one rule per line, `LHS ::= tok tok ...`. Tokens are
//! separated by whitespace, an empty right-hand side is allowed, and `//`
//! starts a comment that runs to the end of the line. A token is a
//! nonterminal iff it appears on the left of some rule; every other token is
//! a terminal. The left-hand side of the first rule is the start symbol.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Display name of the synthetic end-of-input marker. It never names a real
/// grammar symbol.
pub const END_MARKER: &str = "⊣";

const DERIVES: &str = "::=";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolId(pub u32);

impl SymbolId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SymbolKind {
    Terminal,
    Nonterminal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Symbol {
    pub id: SymbolId,
    pub name: String,
    pub kind: SymbolKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Production {
    pub index: usize,
    pub lhs: SymbolId,
    pub rhs: Vec<SymbolId>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GrammarStats {
    pub nonterminals: usize,
    pub terminals: usize,
    pub productions: usize,
}

impl fmt::Display for GrammarStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "nonterminals {}\nterminals {}\nproductions {}",
            self.nonterminals, self.terminals, self.productions
        )
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GrammarError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("grammar has no rules")]
    Empty,
    #[error("invalid symbol name {0:?}")]
    InvalidName(String),
    #[error("unknown token {0:?}")]
    UnknownToken(String),
    #[error("{0:?} is a nonterminal, not a terminal")]
    NotATerminal(String),
}

/// Non-fatal findings from [`parse_grammar`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GrammarWarning {
    DuplicateRule {
        line: usize,
        first_line: usize,
        rule: String,
    },
}

impl fmt::Display for GrammarWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GrammarWarning::DuplicateRule {
                line,
                first_line,
                rule,
            } => write!(f, "line {line}: rule `{rule}` duplicates line {first_line}"),
        }
    }
}

/// An immutable context-free grammar.
///
/// Symbol ids are dense and assigned in order of first appearance in the
/// rule list (left-hand side before right-hand side). Terminals additionally
/// get a dense *terminal index* in id order; the index one past the last
/// terminal is reserved for the end marker.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grammar {
    symbols: Vec<Symbol>,
    productions: Vec<Production>,
    start: SymbolId,
    by_name: HashMap<String, SymbolId>,
    terminals: Vec<SymbolId>,
    terminal_index: Vec<Option<usize>>,
    by_lhs: Vec<Vec<usize>>,
}

impl Grammar {
    /// Builds a grammar from `(lhs, rhs)` rules in order.
    pub fn from_rules<I, L, R, S>(rules: I) -> Result<Grammar, GrammarError>
    where
        I: IntoIterator<Item = (L, R)>,
        L: AsRef<str>,
        R: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let rules: Vec<(String, Vec<String>)> = rules
            .into_iter()
            .map(|(lhs, rhs)| {
                (
                    lhs.as_ref().to_string(),
                    rhs.into_iter().map(|s| s.as_ref().to_string()).collect(),
                )
            })
            .collect();
        if rules.is_empty() {
            return Err(GrammarError::Empty);
        }

        let mut by_name: HashMap<String, SymbolId> = HashMap::new();
        let mut names: Vec<String> = Vec::new();
        let mut intern = |name: &str| -> Result<SymbolId, GrammarError> {
            if let Some(&id) = by_name.get(name) {
                return Ok(id);
            }
            validate_name(name)?;
            let id = SymbolId(names.len() as u32);
            names.push(name.to_string());
            by_name.insert(name.to_string(), id);
            Ok(id)
        };

        let mut interned = Vec::with_capacity(rules.len());
        for (lhs, rhs) in &rules {
            let lhs = intern(lhs)?;
            let rhs = rhs
                .iter()
                .map(|s| intern(s))
                .collect::<Result<Vec<_>, _>>()?;
            interned.push((lhs, rhs));
        }

        let mut is_nonterminal = vec![false; names.len()];
        for (lhs, _) in &interned {
            is_nonterminal[lhs.index()] = true;
        }
        let symbols: Vec<Symbol> = names
            .into_iter()
            .enumerate()
            .map(|(i, name)| Symbol {
                id: SymbolId(i as u32),
                name,
                kind: if is_nonterminal[i] {
                    SymbolKind::Nonterminal
                } else {
                    SymbolKind::Terminal
                },
            })
            .collect();

        let productions: Vec<Production> = interned
            .into_iter()
            .enumerate()
            .map(|(index, (lhs, rhs))| Production { index, lhs, rhs })
            .collect();

        Ok(Self::assemble(symbols, productions, by_name))
    }

    fn assemble(
        symbols: Vec<Symbol>,
        productions: Vec<Production>,
        by_name: HashMap<String, SymbolId>,
    ) -> Grammar {
        let mut terminals = Vec::new();
        let mut terminal_index = vec![None; symbols.len()];
        for s in &symbols {
            if s.kind == SymbolKind::Terminal {
                terminal_index[s.id.index()] = Some(terminals.len());
                terminals.push(s.id);
            }
        }
        let mut by_lhs = vec![Vec::new(); symbols.len()];
        for p in &productions {
            by_lhs[p.lhs.index()].push(p.index);
        }
        Grammar {
            start: productions[0].lhs,
            symbols,
            productions,
            by_name,
            terminals,
            terminal_index,
            by_lhs,
        }
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn symbol(&self, id: SymbolId) -> &Symbol {
        &self.symbols[id.index()]
    }

    pub fn name(&self, id: SymbolId) -> &str {
        &self.symbols[id.index()].name
    }

    pub fn lookup(&self, name: &str) -> Option<SymbolId> {
        self.by_name.get(name).copied()
    }

    pub fn is_terminal(&self, id: SymbolId) -> bool {
        self.symbols[id.index()].kind == SymbolKind::Terminal
    }

    pub fn is_nonterminal(&self, id: SymbolId) -> bool {
        !self.is_terminal(id)
    }

    pub fn productions(&self) -> &[Production] {
        &self.productions
    }

    pub fn production(&self, index: usize) -> &Production {
        &self.productions[index]
    }

    /// Indices of the productions whose left-hand side is `lhs`.
    pub fn productions_of(&self, lhs: SymbolId) -> &[usize] {
        &self.by_lhs[lhs.index()]
    }

    pub fn start(&self) -> SymbolId {
        self.start
    }

    /// Terminals in id order.
    pub fn terminals(&self) -> &[SymbolId] {
        &self.terminals
    }

    pub fn nonterminals(&self) -> impl Iterator<Item = SymbolId> + '_ {
        self.symbols
            .iter()
            .filter(|s| s.kind == SymbolKind::Nonterminal)
            .map(|s| s.id)
    }

    pub fn terminal_index(&self, id: SymbolId) -> Option<usize> {
        self.terminal_index[id.index()]
    }

    /// Terminal index of the end marker.
    pub fn end_index(&self) -> usize {
        self.terminals.len()
    }

    /// Size of lookahead sets: every terminal plus the end marker.
    pub fn lookahead_universe(&self) -> usize {
        self.terminals.len() + 1
    }

    /// Symbol behind a terminal index, `None` for the end marker.
    pub fn terminal_at(&self, index: usize) -> Option<SymbolId> {
        self.terminals.get(index).copied()
    }

    pub fn terminal_name(&self, index: usize) -> &str {
        match self.terminal_at(index) {
            Some(id) => self.name(id),
            None => END_MARKER,
        }
    }

    pub fn stats(&self) -> GrammarStats {
        let terminals = self.terminals.len();
        GrammarStats {
            nonterminals: self.symbols.len() - terminals,
            terminals,
            productions: self.productions.len(),
        }
    }

    /// True when the start symbol has a single rule and never occurs on a
    /// right-hand side, so production 0 can serve as the accepting rule.
    pub fn is_augmented(&self) -> bool {
        self.by_lhs[self.start.index()].len() == 1
            && !self.productions.iter().any(|p| p.rhs.contains(&self.start))
    }

    /// Returns a grammar whose production 0 is the unique start rule. When
    /// the grammar already has that shape it is returned unchanged;
    /// otherwise a fresh `S'`-style start symbol is added as `S' ::= S`.
    ///
    /// Existing symbol ids and terminal indices are preserved; the fresh
    /// symbol takes the next id and every production index shifts by one.
    pub fn augmented(&self) -> Grammar {
        if self.is_augmented() {
            return self.clone();
        }
        let mut fresh = format!("{}'", self.name(self.start));
        while self.by_name.contains_key(&fresh) {
            fresh.push('\'');
        }
        let id = SymbolId(self.symbols.len() as u32);
        let mut symbols = self.symbols.clone();
        symbols.push(Symbol {
            id,
            name: fresh.clone(),
            kind: SymbolKind::Nonterminal,
        });
        let mut by_name = self.by_name.clone();
        by_name.insert(fresh, id);
        let mut productions = vec![Production {
            index: 0,
            lhs: id,
            rhs: vec![self.start],
        }];
        productions.extend(self.productions.iter().map(|p| Production {
            index: p.index + 1,
            lhs: p.lhs,
            rhs: p.rhs.clone(),
        }));
        Self::assemble(symbols, productions, by_name)
    }

    /// Resolves a whitespace-separated sentence to terminal ids.
    pub fn tokenize(&self, sentence: &str) -> Result<Vec<SymbolId>, GrammarError> {
        sentence
            .split_whitespace()
            .map(|tok| {
                let id = self
                    .lookup(tok)
                    .ok_or_else(|| GrammarError::UnknownToken(tok.to_string()))?;
                if self.is_terminal(id) {
                    Ok(id)
                } else {
                    Err(GrammarError::NotATerminal(tok.to_string()))
                }
            })
            .collect()
    }

    pub fn sentence_text(&self, sentence: &[SymbolId]) -> String {
        sentence
            .iter()
            .map(|s| self.name(*s))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn production_text(&self, index: usize) -> String {
        let p = &self.productions[index];
        let mut out = format!("{} {DERIVES}", self.name(p.lhs));
        for s in &p.rhs {
            out.push(' ');
            out.push_str(self.name(*s));
        }
        out
    }
}

fn validate_name(name: &str) -> Result<(), GrammarError> {
    if name.is_empty()
        || name.chars().any(char::is_whitespace)
        || name == DERIVES
        || name == END_MARKER
        || name.contains("//")
    {
        return Err(GrammarError::InvalidName(name.to_string()));
    }
    Ok(())
}

/// Parses the grammar text format, returning the grammar and any warnings.
pub fn parse_grammar(text: &str) -> Result<(Grammar, Vec<GrammarWarning>), GrammarError> {
    let mut rules: Vec<(String, Vec<String>)> = Vec::new();
    let mut seen: HashMap<(String, Vec<String>), usize> = HashMap::new();
    let mut warnings = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let line = match raw.find("//") {
            Some(cut) => &raw[..cut],
            None => raw,
        };
        let tokens = tokens_with_columns(line);
        if tokens.is_empty() {
            continue;
        }
        let syntax = |column: usize, message: &str| GrammarError::Syntax {
            line: line_no,
            column,
            message: message.to_string(),
        };
        let (lhs_col, lhs) = tokens[0];
        if lhs == DERIVES {
            return Err(syntax(lhs_col, "missing left-hand side before `::=`"));
        }
        match tokens.get(1) {
            Some((_, DERIVES)) => {}
            Some((col, _)) => return Err(syntax(*col, "expected `::=` after left-hand side")),
            None => {
                let col = lhs_col + lhs.chars().count();
                return Err(syntax(col, "expected `::=` after left-hand side"));
            }
        }
        let mut rhs = Vec::new();
        for &(col, tok) in &tokens[2..] {
            if tok == DERIVES {
                return Err(syntax(col, "unexpected `::=` in right-hand side"));
            }
            if tok == END_MARKER {
                return Err(syntax(col, "the end marker is reserved"));
            }
            rhs.push(tok.to_string());
        }
        if lhs == END_MARKER {
            return Err(syntax(lhs_col, "the end marker is reserved"));
        }
        let key = (lhs.to_string(), rhs.clone());
        if let Some(&first_line) = seen.get(&key) {
            let mut rule = format!("{lhs} {DERIVES}");
            for t in &rhs {
                rule.push(' ');
                rule.push_str(t);
            }
            warnings.push(GrammarWarning::DuplicateRule {
                line: line_no,
                first_line,
                rule,
            });
        } else {
            seen.insert(key, line_no);
        }
        rules.push((lhs.to_string(), rhs));
    }

    if rules.is_empty() {
        return Err(GrammarError::Empty);
    }
    Ok((Grammar::from_rules(rules)?, warnings))
}

/// 1-based character columns of each whitespace-separated token.
fn tokens_with_columns(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start: Option<(usize, usize)> = None;
    for (col, (byte, ch)) in line.char_indices().enumerate() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some((col + 1, byte)),
            (true, Some((c, b))) => {
                out.push((c, &line[b..byte]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some((c, b)) = start {
        out.push((c, &line[b..]));
    }
    out
}

/// Renders a grammar in the text format: rules in index order, single
/// spaces between tokens, empty right-hand sides written as a bare `::=`.
pub fn serialize_grammar(g: &Grammar) -> String {
    let mut out = String::new();
    for p in g.productions() {
        out.push_str(&g.production_text(p.index));
        out.push('\n');
    }
    out
}

impl FromStr for Grammar {
    type Err = GrammarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_grammar(s).map(|(g, _)| g)
    }
}

impl fmt::Display for Grammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_grammar(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TABLE2_RIGHT: &str =
        "P ::= S $\nS ::= 1 X )\nS ::= 1 Y b\nS ::= 2 X c\nS ::= 2 Y )\nX ::= @\nY ::= @\n";

    fn names(g: &Grammar, kind: SymbolKind) -> Vec<&str> {
        g.symbols()
            .iter()
            .filter(|s| s.kind == kind)
            .map(|s| s.name.as_str())
            .collect()
    }

    #[test]
    fn classifies_by_lhs_appearance() {
        let g: Grammar = TABLE2_RIGHT.parse().unwrap();
        assert_eq!(names(&g, SymbolKind::Nonterminal), ["P", "S", "X", "Y"]);
        assert_eq!(
            names(&g, SymbolKind::Terminal),
            ["$", "1", ")", "b", "2", "c", "@"]
        );
        assert_eq!(
            g.stats(),
            GrammarStats {
                nonterminals: 4,
                terminals: 7,
                productions: 7
            }
        );
        assert_eq!(g.name(g.start()), "P");
    }

    #[test]
    fn epsilon_only_grammar() {
        let g: Grammar = "A ::=".parse().unwrap();
        assert_eq!(
            g.stats(),
            GrammarStats {
                nonterminals: 1,
                terminals: 0,
                productions: 1
            }
        );
        assert!(g.production(0).rhs.is_empty());
        assert_eq!(serialize_grammar(&g), "A ::=\n");
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "// header\n\nA ::= b # // trailing\n   \nB ::= # c\n";
        let g: Grammar = text.parse().unwrap();
        assert_eq!(g.productions().len(), 2);
        assert!(g.is_terminal(g.lookup("#").unwrap()));
    }

    #[test]
    fn syntax_errors_carry_position() {
        assert_eq!(
            "A ::= b\n  B c d".parse::<Grammar>().unwrap_err(),
            GrammarError::Syntax {
                line: 2,
                column: 5,
                message: "expected `::=` after left-hand side".into()
            }
        );
        assert!(matches!(
            "::= a".parse::<Grammar>().unwrap_err(),
            GrammarError::Syntax {
                line: 1,
                column: 1,
                ..
            }
        ));
        assert!(matches!(
            "A ::= b ::= c".parse::<Grammar>().unwrap_err(),
            GrammarError::Syntax {
                line: 1,
                column: 9,
                ..
            }
        ));
        assert!(matches!(
            "A".parse::<Grammar>().unwrap_err(),
            GrammarError::Syntax {
                line: 1,
                column: 2,
                ..
            }
        ));
    }

    #[test]
    fn empty_grammar_rejected() {
        assert_eq!("".parse::<Grammar>().unwrap_err(), GrammarError::Empty);
        assert_eq!(
            "// nothing\n\n".parse::<Grammar>().unwrap_err(),
            GrammarError::Empty
        );
    }

    #[test]
    fn duplicate_rules_warn() {
        let (g, warnings) = parse_grammar("A ::= a\nA ::= b\nA ::= a\n").unwrap();
        assert_eq!(g.productions().len(), 3);
        assert_eq!(
            warnings,
            vec![GrammarWarning::DuplicateRule {
                line: 3,
                first_line: 1,
                rule: "A ::= a".into()
            }]
        );
    }

    #[test]
    fn end_marker_is_reserved() {
        assert!("A ::= ⊣".parse::<Grammar>().is_err());
    }

    #[test]
    fn round_trip_keeps_structure() {
        let g: Grammar = TABLE2_RIGHT.parse().unwrap();
        let again: Grammar = serialize_grammar(&g).parse().unwrap();
        assert_eq!(g, again);
        assert_eq!(serialize_grammar(&g), TABLE2_RIGHT);
    }

    #[test]
    fn augmentation_only_when_needed() {
        let g: Grammar = TABLE2_RIGHT.parse().unwrap();
        assert!(g.is_augmented());
        assert_eq!(g.augmented(), g);

        let rec: Grammar = "S ::= S a\nS ::= b\n".parse().unwrap();
        assert!(!rec.is_augmented());
        let aug = rec.augmented();
        assert_eq!(aug.production_text(0), "S' ::= S");
        assert_eq!(aug.productions().len(), 3);

        let two: Grammar = "S ::= a\nS ::= b\nS' ::= c\n".parse().unwrap();
        assert_eq!(two.augmented().production_text(0), "S'' ::= S");
    }

    #[test]
    fn tokenize_rejects_nonterminals() {
        let g: Grammar = TABLE2_RIGHT.parse().unwrap();
        assert_eq!(g.tokenize("1 @ ) $").unwrap().len(), 4);
        assert_eq!(
            g.tokenize("1 X").unwrap_err(),
            GrammarError::NotATerminal("X".into())
        );
        assert_eq!(
            g.tokenize("q").unwrap_err(),
            GrammarError::UnknownToken("q".into())
        );
    }
}
