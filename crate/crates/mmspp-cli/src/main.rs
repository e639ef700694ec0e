//! `mmspp`: solve, check and generate min-max-out-degree routing instances
//! on tree-shaped networks.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use mmspp_cli::commands::{
    self, AlgoChoice, BenchArgs, GenArgs, JunctionChoice, LbArgs, SolveArgs,
};

#[derive(Parser)]
#[command(name = "mmspp", version, about = "Min-max-out-degree routing on tree networks")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Route an instance and print the solution report.
    Solve {
        /// Instance file.
        file: PathBuf,
        /// Solver family (default: pick by shape).
        #[arg(long, value_enum, default_value_t = AlgoChoice::Auto)]
        algo: AlgoChoice,
        /// Fixed degree target (single-source and out-tree only).
        #[arg(long)]
        target: Option<u32>,
        /// Attach a lower-bound certificate (single-source only).
        #[arg(long)]
        certificate: bool,
        /// Print the claw contraction trail to stderr (out-tree only).
        #[arg(long)]
        trace_contractions: bool,
        /// Junction solver (tree only; default auto).
        #[arg(long, value_enum)]
        junction: Option<JunctionChoice>,
    },
    /// Re-check a solution file against its instance.
    Verify {
        /// Instance file.
        instance: PathBuf,
        /// Solution file produced by `solve` or `oracle`.
        solution: PathBuf,
    },
    /// Exact reference solver (exponential; limit-guarded).
    Oracle {
        /// Instance file.
        file: PathBuf,
        /// Node cap override (also settable via MMSPP_ORACLE_MAX_NODES).
        #[arg(long)]
        max_nodes: Option<u32>,
        /// Compare the pruned and unpruned searches instead of solving.
        #[arg(long)]
        self_check: bool,
    },
    /// Evaluate or maximize witness lower bounds.
    Lb {
        /// Instance file.
        file: PathBuf,
        /// Witness node names (whitespace- or comma-separated).
        #[arg(long)]
        witness: Option<String>,
        /// Commodity indices; auto-selected when omitted.
        #[arg(long)]
        commodities: Option<String>,
        /// Maximize over all connected witness sets instead.
        #[arg(long)]
        exhaustive: bool,
        /// Witness size cap for --exhaustive.
        #[arg(long)]
        max_witness_size: Option<u32>,
    },
    /// Emit an instance file for a structured or random family.
    Gen {
        #[command(subcommand)]
        family: GenCmd,
    },
    /// CSV timing sweep over seeded random instances.
    Bench {
        /// Shape family: single-source-tree, out-tree, star or tree.
        #[arg(long)]
        shape: String,
        /// Node budgets to sweep (comma-separated).
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<u32>,
        /// Seeds 0..N per size.
        #[arg(long, default_value_t = 5)]
        seeds: u64,
        /// Source count for the generator.
        #[arg(long, default_value_t = 1)]
        sources: u32,
        /// Commodity density in (0, 1].
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        /// Solver family to time.
        #[arg(long, value_enum, default_value_t = AlgoChoice::Auto)]
        algo: AlgoChoice,
        /// Also compute the exact optimum per row (within oracle limits).
        #[arg(long)]
        oracle: bool,
        /// Worker threads.
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
}

#[derive(Subcommand)]
enum GenCmd {
    /// Hitting-set decision reduction (threshold printed to stderr).
    HittingSet {
        /// File with one set per line, elements whitespace-separated.
        #[arg(long)]
        sets: PathBuf,
        /// Maximum hitting-set size.
        #[arg(long)]
        budget: u32,
    },
    /// Signed-vector balanced-partition broom.
    Svbp {
        /// Comma-separated signed weights, e.g. "2,-1,3".
        #[arg(long)]
        weights: String,
        /// Degree threshold of the encoding (>= 2).
        #[arg(long)]
        target: u32,
    },
    /// Star family whose best witness bound trails the optimum.
    StarGap {
        /// Sources per side.
        #[arg(long)]
        n: u32,
    },
    /// Seeded random instance.
    Random {
        /// Shape family: single-source-tree, out-tree, star or tree.
        #[arg(long)]
        shape: String,
        /// Node budget.
        #[arg(long)]
        n: u32,
        /// Source count.
        #[arg(long, default_value_t = 1)]
        sources: u32,
        /// Commodity density in (0, 1].
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        /// RNG seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Solve {
            file,
            algo,
            target,
            certificate,
            trace_contractions,
            junction,
        } => commands::cmd_solve(&SolveArgs {
            file,
            algo,
            target,
            certificate,
            trace_contractions,
            junction,
        }),
        Cmd::Verify { instance, solution } => commands::cmd_verify(&instance, &solution),
        Cmd::Oracle {
            file,
            max_nodes,
            self_check,
        } => commands::cmd_oracle(&file, max_nodes, self_check),
        Cmd::Lb {
            file,
            witness,
            commodities,
            exhaustive,
            max_witness_size,
        } => commands::cmd_lb(&LbArgs {
            file,
            witness,
            commodities,
            exhaustive,
            max_witness_size,
        }),
        Cmd::Gen { family } => {
            let args = match family {
                GenCmd::HittingSet { sets, budget } => GenArgs::HittingSet { sets, budget },
                GenCmd::Svbp { weights, target } => GenArgs::Svbp { weights, target },
                GenCmd::StarGap { n } => GenArgs::StarGap { n },
                GenCmd::Random {
                    shape,
                    n,
                    sources,
                    density,
                    seed,
                } => GenArgs::Random {
                    shape,
                    n,
                    sources,
                    density,
                    seed,
                },
            };
            commands::cmd_gen(&args)
        }
        Cmd::Bench {
            shape,
            sizes,
            seeds,
            sources,
            density,
            algo,
            oracle,
            threads,
        } => commands::cmd_bench(&BenchArgs {
            shape,
            sizes,
            seeds,
            sources,
            density,
            algo,
            oracle,
            threads,
        }),
    };
    match result {
        Ok(out) => {
            print!("{}", out.stdout);
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
