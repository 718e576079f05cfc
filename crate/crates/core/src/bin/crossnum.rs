//! Command-line front end.
//!
//! Exit codes: 0 success, 1 I/O or other failure, 2 unreadable input,
//! 3 no vertex cover within `--k-max`, 4 resource cap reached,
//! 5 verification mismatch, 64 bad command line.

use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use crossnum::clustering::{build_iqp, enumerate_clusterings_capped};
use crossnum::drawing::CombinatorialDrawing;
use crossnum::graph::{compress, expand, expansion_order, find_vertex_cover, CompressedGraph, Graph};
use crossnum::oracle::{oracle_cr, OracleConfig};
use crossnum::pipeline::{crossing_number, initial_budget, verify, SolveOptions};
use crossnum::render::render_svg;
use crossnum::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    EdgeList,
    Compressed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Solve,
    Oracle,
    Verify,
    DumpClusterings,
}

/// Exact crossing numbers of graphs with a small vertex cover.
#[derive(Debug, Parser)]
#[command(name = "crossnum", version)]
struct Cli {
    /// Input file, `-` for standard input.
    input: PathBuf,
    #[arg(long, value_enum, default_value = "edge-list")]
    format: Format,
    #[arg(long, value_enum, default_value = "solve")]
    mode: Mode,
    /// Largest vertex cover searched for edge-list input.
    #[arg(long, default_value_t = 6)]
    k_max: usize,
    /// Most crossings allowed inside a searched clustering.
    #[arg(long)]
    budget_cap: Option<usize>,
    /// Branch-and-bound node limit per quadratic program.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    iqp_cap: Option<u64>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    max_crossing_sets: Option<u64>,
    /// Deepening ceiling of the oracle.
    #[arg(long, default_value_t = 12)]
    oracle_max_crossings: usize,
    #[arg(long)]
    out_report: Option<PathBuf>,
    /// Lifted drawing in the interchange format.
    #[arg(long)]
    out_drawing: Option<PathBuf>,
    #[arg(long)]
    out_svg: Option<PathBuf>,
    /// Assert that no randomness is configured (there is none).
    #[arg(long)]
    seed_free: bool,
    /// Worker threads; 0 picks one per core.
    #[arg(long, env = "CROSSNUM_WORKERS", default_value_t = 0)]
    workers: usize,
    #[arg(short, long, action = clap::ArgAction::Count)]
    verbose: u8,
}

/// Failure with the exit status it maps to.
struct Failure(u8, String);

impl Failure {
    fn input(e: Error) -> Self {
        match e {
            Error::Io(e) => Failure(1, e.to_string()),
            e => Failure(2, e.to_string()),
        }
    }

    fn run(e: Error) -> Self {
        let code = match e {
            Error::CoverExceeded { .. } => 3,
            Error::ResourceCap(_) => 4,
            Error::Mismatch(_) => 5,
            _ => 1,
        };
        Failure(code, e.to_string())
    }
}

/// The input as given, and its compressed form.
struct Input {
    /// Edge-list inputs keep the graph and the position of each vertex in
    /// the expanded numbering.
    graph: Option<(Graph, Vec<usize>)>,
    cg: CompressedGraph,
}

fn read_input(cli: &Cli) -> Result<String, Failure> {
    let mut text = String::new();
    if cli.input == Path::new("-") {
        std::io::stdin().read_to_string(&mut text).map_err(|e| Failure(1, e.to_string()))?;
    } else {
        text = std::fs::read_to_string(&cli.input).map_err(|e| Failure(1, format!("{}: {e}", cli.input.display())))?;
    }
    Ok(text)
}

fn load(cli: &Cli, text: &str) -> Result<Input, Failure> {
    match cli.format {
        Format::Compressed => Ok(Input { graph: None, cg: CompressedGraph::parse(text).map_err(Failure::input)? }),
        Format::EdgeList => {
            let g = Graph::parse_edge_list(text).map_err(Failure::input)?;
            let x = find_vertex_cover(&g, cli.k_max).map_err(Failure::run)?;
            let cg = compress(&g, &x).map_err(Failure::run)?;
            let pos = expansion_order(&g, &x);
            Ok(Input { graph: Some((g, pos)), cg })
        }
    }
}

fn concrete(input: &Input) -> Result<Graph, Failure> {
    match &input.graph {
        Some((g, _)) => Ok(g.clone()),
        None => expand(&input.cg).map_err(Failure::run),
    }
}

/// Writes through a temporary file so a failure never leaves half a file.
fn write_atomic(path: &Path, contents: &str) -> Result<(), Failure> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".partial");
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, contents).map_err(|e| Failure(1, format!("{}: {e}", tmp.display())))?;
    std::fs::rename(&tmp, path).map_err(|e| Failure(1, format!("{}: {e}", path.display())))
}

fn run(cli: &Cli) -> Result<(), Failure> {
    if cli.workers > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(cli.workers).build_global().map_err(|e| Failure(1, e.to_string()))?;
    }
    if cli.seed_free && cli.verbose > 0 {
        eprintln!("seed-free: no random source is used");
    }
    let text = read_input(cli)?;
    let input = load(cli, &text)?;
    let mut opts = SolveOptions { budget_cap: cli.budget_cap, ..SolveOptions::default() };
    if let Some(cap) = cli.iqp_cap {
        opts.iqp_node_cap = cap;
    }
    if let Some(cap) = cli.max_crossing_sets {
        opts.max_crossing_sets = cap;
    }
    let ocfg = OracleConfig { max_crossings: cli.oracle_max_crossings, ..OracleConfig::default() };
    // everything is computed before anything is written
    let mut outputs: Vec<(PathBuf, String)> = Vec::new();
    match cli.mode {
        Mode::Solve => {
            let report = crossing_number(&input.cg, &opts).map_err(Failure::run)?;
            if cli.verbose > 0 {
                for (i, c) in report.components.iter().enumerate() {
                    eprintln!("component {i}: value {} from {:?}", c.value, c.origin);
                    for l in &c.levels {
                        eprintln!(
                            "  level {}: {} rep sets, {} crossing sets, {} candidates, {} witness checks, best {}",
                            l.level, l.rep_sets, l.crossing_sets, l.candidates, l.witness_checks, l.best
                        );
                    }
                }
            }
            if let Some(path) = &cli.out_report {
                outputs.push((path.clone(), report.to_json() + "\n"));
            }
            if cli.out_drawing.is_some() || cli.out_svg.is_some() {
                let mut d: CombinatorialDrawing = report.lifted(&input.cg).map_err(Failure::run)?;
                if let Some((_, pos)) = &input.graph {
                    d = d.induced(pos);
                }
                if let Some(path) = &cli.out_drawing {
                    outputs.push((path.clone(), d.to_json() + "\n"));
                }
                if let Some(path) = &cli.out_svg {
                    outputs.push((path.clone(), render_svg(&d).map_err(Failure::run)?));
                }
            }
            for (path, contents) in &outputs {
                write_atomic(path, contents)?;
            }
            println!("{}", report.crossing_number);
        }
        Mode::Oracle => {
            let g = concrete(&input)?;
            let c = oracle_cr(&g, &ocfg).map_err(Failure::run)?;
            println!("{c}");
        }
        Mode::Verify => {
            let report = crossing_number(&input.cg, &opts).map_err(Failure::run)?;
            match verify(&report, &input.cg) {
                Ok(v) => {
                    let oracle = v.oracle.map_or("skipped".to_string(), |c| c.to_string());
                    println!("pipeline={} oracle={oracle}", report.crossing_number);
                }
                Err(Error::Mismatch(m)) => {
                    println!("pipeline={} mismatch", report.crossing_number);
                    return Err(Failure(5, m));
                }
                Err(e) => return Err(Failure::run(e)),
            }
        }
        Mode::DumpClusterings => {
            let budget = cli.budget_cap.unwrap_or_else(|| initial_budget(&input.cg));
            let all = enumerate_clusterings_capped(&input.cg, budget, 1_000_000).map_err(Failure::run)?;
            let mut dump = String::new();
            for c in &all {
                let mut line: serde_json::Value = serde_json::from_str(&c.to_json_line()).expect("clustering JSON");
                line["instance"] = build_iqp(c, &input.cg).to_text().into();
                dump.push_str(&line.to_string());
                dump.push('\n');
            }
            if let Some(path) = &cli.out_report {
                write_atomic(path, &dump)?;
            } else {
                print!("{dump}");
            }
            if cli.verbose > 0 {
                eprintln!("{} clusterings with budget {budget}", all.len());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(64),
            };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(code, msg)) => {
            eprintln!("crossnum: {msg}");
            ExitCode::from(code)
        }
    }
}
