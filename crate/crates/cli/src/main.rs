use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use lrmin_core::{
    apply_scheme, build_conflict_graph, build_lr0, build_lr1, chromatic_oracle, dump,
    enumerate_schemes_oracle, export_dot, graph_to_grammar, merge_all_similar, minimize_exact,
    minimize_greedy, parse_dimacs, parse_grammar, recover_coloring, serialize_grammar,
    state_node_mapping, validate_scheme, verify_reduction, Automaton, ColorGraph, Grammar,
    MergeScheme, MinimizeError, NodeStateMap, DEFAULT_BUDGET, ORACLE_LIMIT,
};

#[derive(Parser)]
#[command(
    name = "lrmin",
    version,
    about = "Build, merge and minimize LR(1) automata"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Canonical LR(1) automaton dump and sizes.
    Lr1(MachineArgs),
    /// LR(0) automaton dump and sizes.
    Lr0(MachineArgs),
    /// Merge every similar class; fails if that creates conflicts.
    Lalr(MachineArgs),
    /// Find a minimum (or greedy) merge scheme and print the merged machine.
    Minimize {
        grammar: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        mode: Mode,
        /// Largest conflict graph the exact search accepts.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Apply this scheme file instead of searching.
        #[arg(long, conflicts_with_all = ["mode", "budget", "seed"])]
        apply: Option<PathBuf>,
        /// Also write the scheme to this file.
        #[arg(long)]
        scheme: Option<PathBuf>,
        /// Cross-check the block count against full enumeration.
        #[arg(long)]
        verify: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Conflict graph of the LR(1) machine in DIMACS format.
    ConflictGraph {
        grammar: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Generate the grammar for a DIMACS color graph.
    Reduce {
        graph: PathBuf,
        /// Write the generation trace here.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Write the node-to-state map here.
        #[arg(long)]
        map: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Turn a merge scheme back into a node coloring.
    Recover {
        #[arg(long)]
        scheme: PathBuf,
        #[arg(long)]
        map: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Exact chromatic number of a DIMACS graph.
    OracleColor {
        graph: PathBuf,
        #[arg(long, default_value_t = 12)]
        limit: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the full reduction check on DIMACS graphs (files or directories).
    Verify {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        #[arg(long, default_value_t = 12)]
        limit: usize,
    },
    /// Graphviz rendering of the LR(1) (or LR(0)) machine.
    Dot {
        grammar: PathBuf,
        #[arg(long)]
        show_items: bool,
        #[arg(long)]
        lr0: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Nonterminal, terminal and production counts.
    Stats { grammar: PathBuf },
}

#[derive(clap::Args)]
struct MachineArgs {
    grammar: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exact,
    Greedy,
}

/// Exit 1 for domain failures, 2 for I/O and parse failures.
enum Failure {
    Domain(anyhow::Error),
    Input(anyhow::Error),
}

type Outcome = Result<(), Failure>;

fn input<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Input(e.into())
}

fn domain<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Domain(e.into())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(Failure::Input)
}

fn emit(path: Option<&Path>, text: &str) -> Outcome {
    match path {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(p) => fs::write(p, text)
            .with_context(|| format!("writing {}", p.display()))
            .map_err(Failure::Input),
    }
}

fn load_grammar(path: &Path) -> Result<Grammar, Failure> {
    let (g, warnings) = parse_grammar(&read(path)?)
        .with_context(|| format!("parsing {}", path.display()))
        .map_err(Failure::Input)?;
    for w in warnings {
        eprintln!("warning: {}: {w}", path.display());
    }
    Ok(g)
}

fn load_graph(path: &Path) -> Result<ColorGraph, Failure> {
    parse_dimacs(&read(path)?)
        .with_context(|| format!("parsing {}", path.display()))
        .map_err(Failure::Input)
}

fn machine_summary(m: &Automaton) -> String {
    format!(
        "{}states {}\ntransitions {}\n",
        dump(m),
        m.len(),
        m.transition_count()
    )
}

fn minimize_error(e: MinimizeError) -> Failure {
    match e {
        MinimizeError::SchemeSyntax { .. } => input(e),
        other => domain(other),
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Lr1(args) => {
            let m = build_lr1(&load_grammar(&args.grammar)?);
            emit(args.output.as_deref(), &machine_summary(&m))
        }
        Command::Lr0(args) => {
            let m = build_lr0(&load_grammar(&args.grammar)?);
            emit(args.output.as_deref(), &machine_summary(&m))
        }
        Command::Lalr(args) => {
            let g = load_grammar(&args.grammar)?;
            let lr1 = build_lr1(&g);
            if !lr1.is_conflict_free() {
                return Err(domain(anyhow!(
                    "grammar is not LR(1):\n{}",
                    lr1.conflicts().render(lr1.grammar())
                )));
            }
            let (merged, report) = merge_all_similar(&lr1);
            emit(args.output.as_deref(), &machine_summary(&merged))?;
            if report.is_empty() {
                Ok(())
            } else {
                Err(domain(anyhow!(
                    "merging all similar states creates conflicts:\n{}",
                    report.render(merged.grammar())
                )))
            }
        }
        Command::Minimize {
            grammar,
            mode,
            budget,
            seed,
            apply,
            scheme,
            verify,
            output,
        } => {
            let m = build_lr1(&load_grammar(&grammar)?);
            let found = match (apply, mode) {
                (Some(path), _) => MergeScheme::parse(&read(&path)?).map_err(minimize_error)?,
                (None, Mode::Exact) => minimize_exact(&m, budget).map_err(minimize_error)?,
                (None, Mode::Greedy) => minimize_greedy(&m, seed).map_err(minimize_error)?,
            };
            if let Err(violations) = validate_scheme(&m, &found) {
                let lines: Vec<String> = violations.iter().map(|v| v.render(m.grammar())).collect();
                return Err(domain(anyhow!(
                    "invalid merge scheme:\n{}",
                    lines.join("\n")
                )));
            }
            if verify {
                let cg = build_conflict_graph(&m).map_err(minimize_error)?;
                let oracle = enumerate_schemes_oracle(&m, ORACLE_LIMIT).map_err(minimize_error)?;
                let blocks = found.count_blocks_within(cg.nodes());
                if blocks != oracle {
                    return Err(domain(anyhow!(
                        "scheme uses {blocks} blocks on the conflict graph; the minimum is {oracle}"
                    )));
                }
                eprintln!("verified: {blocks} blocks is minimum");
            }
            if let Some(path) = &scheme {
                emit(Some(path), &found.to_text())?;
            }
            let merged = apply_scheme(&m, &found).map_err(minimize_error)?;
            let text = format!(
                "scheme\n{}merges {}\n{}",
                found.to_text(),
                found.merges(),
                machine_summary(&merged)
            );
            emit(output.as_deref(), &text)
        }
        Command::ConflictGraph { grammar, output } => {
            let m = build_lr1(&load_grammar(&grammar)?);
            let cg = build_conflict_graph(&m).map_err(minimize_error)?;
            emit(output.as_deref(), &cg.to_dimacs())
        }
        Command::Reduce {
            graph,
            trace,
            map,
            output,
        } => {
            let f = load_graph(&graph)?;
            let r = graph_to_grammar(&f).map_err(domain)?;
            if let Some(path) = &trace {
                emit(Some(path), &r.trace.to_text())?;
            }
            if let Some(path) = &map {
                let m = build_lr1(&r.grammar);
                let nodes = state_node_mapping(&f, &m).map_err(domain)?;
                emit(Some(path), &nodes.to_text())?;
            }
            emit(output.as_deref(), &serialize_grammar(&r.grammar))
        }
        Command::Recover {
            scheme,
            map,
            output,
        } => {
            let scheme = MergeScheme::parse(&read(&scheme)?).map_err(input)?;
            let map = NodeStateMap::parse(&read(&map)?).map_err(input)?;
            emit(
                output.as_deref(),
                &recover_coloring(&scheme, &map).to_text(),
            )
        }
        Command::OracleColor {
            graph,
            limit,
            output,
        } => {
            let f = load_graph(&graph)?;
            let (k, coloring) = chromatic_oracle(&f, limit).map_err(domain)?;
            eprintln!("chromatic number {k}");
            emit(output.as_deref(), &coloring.to_text())
        }
        Command::Verify { paths, limit } => {
            let mut files = Vec::new();
            for p in &paths {
                if p.is_dir() {
                    let mut found: Vec<PathBuf> = fs::read_dir(p)
                        .with_context(|| format!("listing {}", p.display()))
                        .map_err(Failure::Input)?
                        .filter_map(|e| e.ok().map(|e| e.path()))
                        .filter(|f| f.extension().is_some_and(|x| x == "col"))
                        .collect();
                    found.sort();
                    files.extend(found);
                } else {
                    files.push(p.clone());
                }
            }
            let mut failed = 0;
            for file in &files {
                let report = verify_reduction(&load_graph(file)?, limit).map_err(domain)?;
                println!("{}: {report}", file.display());
                if !report.passed() {
                    failed += 1;
                }
            }
            if failed == 0 {
                Ok(())
            } else {
                Err(domain(anyhow!(
                    "{failed} of {} instances failed",
                    files.len()
                )))
            }
        }
        Command::Dot {
            grammar,
            show_items,
            lr0,
            output,
        } => {
            let g = load_grammar(&grammar)?;
            let m = if lr0 { build_lr0(&g) } else { build_lr1(&g) };
            emit(output.as_deref(), &export_dot(&m, show_items))
        }
        Command::Stats { grammar } => {
            let stats = load_grammar(&grammar)?.stats();
            emit(None, &format!("{stats}\n"))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
