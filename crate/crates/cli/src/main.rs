use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use icleak::commands::{analyze, graph, load_instance, AnalyzeOptions, GraphOptions};
use icleak::fixtures::verify_paper;
use icleak::{CliError, EXIT_VERIFY_FAILED};
use icleak_core::fitting::SearchLimits;
use icleak_core::leakage::DEFAULT_NODE_BUDGET;

#[derive(Parser)]
#[command(name = "icleak", version, about = "Index coding rates and information leakage")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exhaustive,
    Randomized,
}

#[derive(Subcommand)]
enum Command {
    /// Rate bounds, least-leakage linear code and the leakage bracket.
    Analyze {
        file: PathBuf,
        /// Override the field size of the instance.
        #[arg(long)]
        q: Option<u64>,
        /// Free-cell limit for exhaustive fitting-matrix search.
        #[arg(long)]
        max_free_cells: Option<usize>,
        #[arg(long, value_enum, default_value = "exhaustive")]
        mode: Mode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Samples drawn in randomized mode.
        #[arg(long, default_value_t = 100_000)]
        iterations: u64,
        /// Also search all deterministic single-symbol codes.
        #[arg(long)]
        exhaustive_t1: bool,
        /// Also report the rank/leakage trade-off of linear codes.
        #[arg(long)]
        pareto: bool,
        /// Also report the mutual information of the least-leakage code.
        #[arg(long)]
        mutual_info: bool,
        #[arg(long)]
        json: bool,
        /// Report leakage in bits instead of q-ary symbols.
        #[arg(long)]
        bits: bool,
        /// Node limit for --exhaustive-t1.
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        node_budget: u64,
    },
    /// Statistics of the confusion graph.
    Graph {
        file: PathBuf,
        #[arg(long)]
        q: Option<u64>,
        /// Block length.
        #[arg(long, default_value_t = 1)]
        t: usize,
        /// Write a Graphviz rendering to this path.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Use the graph seen by the adversary's receiver, restricted to the
        /// messages it does not know.
        #[arg(long)]
        adversary_view: bool,
        #[arg(long)]
        json: bool,
    },
    /// Recompute the reference values of the built-in instances.
    VerifyPaper {
        #[arg(long)]
        json: bool,
        #[arg(long, hide = true)]
        corrupt: Option<String>,
    },
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Analyze {
            file,
            q,
            max_free_cells,
            mode,
            seed,
            iterations,
            exhaustive_t1,
            pareto,
            mutual_info,
            json,
            bits,
            node_budget,
        } => {
            let text = read(&file)?;
            let (_, inst, _) = load_instance(&text, q)?;
            let mut limits = match mode {
                Mode::Exhaustive => SearchLimits::exhaustive(inst.field()),
                Mode::Randomized => SearchLimits::randomized(inst.field(), seed, iterations),
            };
            if let Some(m) = max_free_cells {
                limits.max_free_cells = m;
            }
            let opts = AnalyzeOptions { q, limits, exhaustive_t1, pareto, mutual_info, bits, node_budget };
            let report = analyze(&text, &opts)?;
            if json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.render_human());
            }
            Ok(0)
        }
        Command::Graph { file, q, t, dot, adversary_view, json } => {
            let text = read(&file)?;
            let (report, g) = graph(&text, &GraphOptions { q, t, adversary_view })?;
            if let Some(path) = dot {
                std::fs::write(&path, g.to_dot()?)
                    .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
            }
            if json {
                println!("{}", serde_json::to_string_pretty(&report).expect("graph reports serialize"));
            } else {
                print!("{}", report.render_human());
            }
            Ok(0)
        }
        Command::VerifyPaper { json, corrupt } => {
            let report = verify_paper(corrupt.as_deref())?;
            if json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.render_human());
            }
            Ok(if report.all_passed() { 0 } else { EXIT_VERIFY_FAILED })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("icleak: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
