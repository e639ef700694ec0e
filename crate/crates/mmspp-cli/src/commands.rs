//! Implementations behind the `mmspp` subcommands.
//!
//! Each command returns its stdout payload and a process exit code, so the
//! logic is testable without spawning the binary. Exit codes:
//!
//! | code | meaning                                              |
//! |------|------------------------------------------------------|
//! | 0    | success                                              |
//! | 1    | internal error                                       |
//! | 2    | unreadable input: IO, syntax, validation, bad flags  |
//! | 3    | instance shape not supported by the chosen solver    |
//! | 4    | infeasible at the requested target / checks failed   |
//! | 5    | configured limits exceeded                           |

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::OnceLock;
use std::time::Instant;

use mmspp_core::generators::{self, HittingSetInput, RandomShape, SvbpInput};
use mmspp_core::oracle::{self, OracleLimits};
use mmspp_core::out_tree::{self, ContractionRecord, OutTreeOutcome};
use mmspp_core::tree_framework::{self, JunctionSolver};
use mmspp_core::witness;
use mmspp_core::{
    CertificateKind, GeneratorError, Instance, OracleError, ShapeClass, Solution, SolveError,
    SolveReport, SolveStats, SolveStatus,
};

use crate::format::{self, ParseError};

/// Name of the environment variable that overrides the oracle node cap.
pub const ORACLE_MAX_NODES_ENV: &str = "MMSPP_ORACLE_MAX_NODES";

/// A command failure carrying the process exit code.
#[derive(Debug)]
pub struct CliError {
    /// Process exit code (see the module table).
    pub code: i32,
    /// Human-readable explanation, printed to stderr.
    pub message: String,
}

impl CliError {
    fn parse(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::parse(e.to_string())
    }
}

fn solve_error(e: SolveError) -> CliError {
    let code = match &e {
        SolveError::WrongShape { .. } | SolveError::NotNormalized | SolveError::Junction(_) => 3,
        SolveError::BadTarget(_) => 2,
        SolveError::InvalidCertificate(_) | SolveError::ContractionDissolved => 1,
    };
    CliError {
        code,
        message: e.to_string(),
    }
}

fn oracle_error(e: OracleError) -> CliError {
    let code = match &e {
        OracleError::LimitsExceeded(_) => 5,
        OracleError::BadLimits => 2,
        OracleError::NotATree => 3,
    };
    CliError {
        code,
        message: e.to_string(),
    }
}

fn generator_error(e: GeneratorError) -> CliError {
    let code = match &e {
        GeneratorError::TooLarge(_) => 5,
        GeneratorError::InvalidInput(_) | GeneratorError::InfeasibleParams(_) => 2,
    };
    CliError {
        code,
        message: e.to_string(),
    }
}

/// What a command wants printed and returned to the shell.
#[derive(Debug)]
pub struct CmdOutput {
    /// Payload for stdout (may be empty).
    pub stdout: String,
    /// Process exit code.
    pub code: i32,
}

impl CmdOutput {
    fn ok(stdout: String) -> Self {
        CmdOutput { stdout, code: 0 }
    }
}

/// Which solver family `solve` (and `bench`) should run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum AlgoChoice {
    /// Pick by shape classification.
    Auto,
    /// Exact single-source solver.
    SingleSource,
    /// Additive-1 multi-source out-tree solver.
    OutTree,
    /// Centroid-decomposition framework for general trees.
    Tree,
}

impl AlgoChoice {
    fn label(self) -> &'static str {
        match self {
            AlgoChoice::Auto => "auto",
            AlgoChoice::SingleSource => "single-source",
            AlgoChoice::OutTree => "out-tree",
            AlgoChoice::Tree => "tree",
        }
    }
}

/// Junction solver selection for `solve --algo tree`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum JunctionChoice {
    /// 2-approximation; junctions must be stars.
    Star,
    /// Exact search within the configured limits.
    Oracle,
    /// Direct routing, no quality guarantee.
    Direct,
    /// Stars approximately, small junctions exactly, direct otherwise.
    Auto,
}

/// Resolves the oracle limits: built-in defaults, overridden by
/// `MMSPP_ORACLE_MAX_NODES`, overridden in turn by an explicit flag.
pub fn oracle_limits(max_nodes_flag: Option<u32>) -> Result<OracleLimits, CliError> {
    let mut lim = OracleLimits::default();
    if let Ok(raw) = std::env::var(ORACLE_MAX_NODES_ENV) {
        lim.max_nodes = raw.trim().parse().map_err(|_| {
            CliError::parse(format!(
                "{ORACLE_MAX_NODES_ENV} must be a positive integer, got {raw:?}"
            ))
        })?;
    }
    if let Some(n) = max_nodes_flag {
        lim.max_nodes = n;
    }
    Ok(lim)
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::parse(format!("cannot read {}: {e}", path.display())))
}

/// Reads and normalizes an instance file: canonical commodity indices, no
/// sink-less leaves. All solvers and checks run on the normalized form.
fn load_instance(path: &Path) -> Result<Instance, CliError> {
    let text = read_file(path)?;
    let raw = format::parse_instance(&text)?;
    raw.normalize()
        .map_err(|e| CliError::parse(format!("{}: {e}", path.display())))
}

fn junction_solver(choice: JunctionChoice) -> Result<JunctionSolver, CliError> {
    Ok(match choice {
        JunctionChoice::Star => JunctionSolver::Star,
        JunctionChoice::Oracle => JunctionSolver::Oracle(oracle_limits(None)?),
        JunctionChoice::Direct => JunctionSolver::Direct,
        JunctionChoice::Auto => JunctionSolver::Auto,
    })
}

/// Runs one solver family on a normalized instance; the returned label
/// names the solver actually used (`auto` resolves it by classification).
fn run_algo(
    i: &Instance,
    algo: AlgoChoice,
    js: JunctionSolver,
) -> Result<(SolveReport, &'static str), SolveError> {
    match algo {
        AlgoChoice::SingleSource => Ok((single_source_solve(i, false)?, "single-source")),
        AlgoChoice::OutTree => Ok((out_tree::solve(i)?, "out-tree")),
        AlgoChoice::Tree => Ok((tree_framework::solve_tree(i, js)?, "tree")),
        AlgoChoice::Auto => match i.classify() {
            ShapeClass::SingleSourceTree { .. } => {
                Ok((single_source_solve(i, false)?, "single-source"))
            }
            ShapeClass::OutTree { .. } => Ok((out_tree::solve(i)?, "out-tree")),
            ShapeClass::Star { .. } => Ok((tree_framework::star_direct(i)?, "star")),
            ShapeClass::JunctionTree { .. } | ShapeClass::GeneralTree => {
                Ok((tree_framework::solve_tree(i, js)?, "tree"))
            }
            ShapeClass::NonTree => Err(SolveError::WrongShape {
                expected: "tree",
                found: ShapeClass::NonTree.to_string(),
            }),
        },
    }
}

fn single_source_solve(i: &Instance, with_certificate: bool) -> Result<SolveReport, SolveError> {
    mmspp_core::single_source::solve(i, with_certificate)
}

/// Arguments of the `solve` subcommand.
#[derive(Debug)]
pub struct SolveArgs {
    /// Instance file.
    pub file: PathBuf,
    /// Solver family.
    pub algo: AlgoChoice,
    /// Fixed degree target (single-source and out-tree only).
    pub target: Option<u32>,
    /// Attach a lower-bound certificate (single-source only).
    pub certificate: bool,
    /// Print the claw contraction trail to stderr (out-tree only).
    pub trace_contractions: bool,
    /// Junction solver (tree only; defaults to auto).
    pub junction: Option<JunctionChoice>,
}

/// `solve`: route an instance and print the report.
pub fn cmd_solve(args: &SolveArgs) -> Result<CmdOutput, CliError> {
    if args.target.is_some()
        && !matches!(args.algo, AlgoChoice::SingleSource | AlgoChoice::OutTree)
    {
        return Err(CliError::parse(
            "--target applies to --algo single-source or out-tree",
        ));
    }
    if args.certificate
        && !matches!(args.algo, AlgoChoice::SingleSource | AlgoChoice::Auto)
    {
        return Err(CliError::parse(
            "--certificate applies to single-source solves (--algo single-source or auto)",
        ));
    }
    if args.trace_contractions && args.algo != AlgoChoice::OutTree {
        return Err(CliError::parse(
            "--trace-contractions applies to --algo out-tree",
        ));
    }
    if args.junction.is_some() && args.algo != AlgoChoice::Tree {
        return Err(CliError::parse("--junction applies to --algo tree"));
    }

    let i = load_instance(&args.file)?;
    let js = junction_solver(args.junction.unwrap_or(JunctionChoice::Auto))?;

    let report = match (args.algo, args.target) {
        (AlgoChoice::SingleSource, Some(t)) => {
            match mmspp_core::single_source::solve_target(&i, t).map_err(solve_error)? {
                Some(sol) => SolveReport {
                    solution: Some(sol),
                    status: SolveStatus::FeasibleAtTarget,
                    certificate: None,
                    stats: SolveStats::default(),
                },
                None => {
                    // The optimality certificate proves a bound above the
                    // requested target, which is exactly the refutation the
                    // caller wants to see.
                    let full = mmspp_core::single_source::solve(&i, true).map_err(solve_error)?;
                    SolveReport {
                        solution: None,
                        status: SolveStatus::InfeasibleAtTarget,
                        certificate: full.certificate,
                        stats: full.stats,
                    }
                }
            }
        }
        (AlgoChoice::SingleSource, None) if args.certificate => {
            single_source_solve(&i, true).map_err(solve_error)?
        }
        (AlgoChoice::Auto, None) if args.certificate => match i.classify() {
            ShapeClass::SingleSourceTree { .. } => {
                single_source_solve(&i, true).map_err(solve_error)?
            }
            other => {
                return Err(CliError {
                    code: 3,
                    message: format!(
                        "--certificate needs a single-source instance; this one is {other} \
                         (witness bounds for other shapes come from `lb`)"
                    ),
                })
            }
        },
        (AlgoChoice::OutTree, Some(t)) => {
            let (outcome, records) =
                out_tree::solve_target_recorded(&i, t).map_err(solve_error)?;
            if args.trace_contractions {
                print_trace(&i, &records);
            }
            let stats = SolveStats {
                iterations: 1,
                contractions: records.len() as u64,
                levels: 0,
            };
            match outcome {
                OutTreeOutcome::Feasible(sol) => SolveReport {
                    solution: Some(sol),
                    status: SolveStatus::FeasibleAtTarget,
                    certificate: None,
                    stats,
                },
                OutTreeOutcome::Infeasible(cert) => SolveReport {
                    solution: None,
                    status: SolveStatus::InfeasibleAtTarget,
                    certificate: Some(cert),
                    stats,
                },
            }
        }
        (AlgoChoice::OutTree, None) if args.trace_contractions => {
            let report = out_tree::solve(&i).map_err(solve_error)?;
            let value = report
                .value()
                .expect("the full out-tree solve always routes the instance");
            let (_, records) =
                out_tree::solve_target_recorded(&i, value).map_err(solve_error)?;
            print_trace(&i, &records);
            report
        }
        (algo, None) => run_algo(&i, algo, js).map_err(solve_error)?.0,
        _ => unreachable!("target combinations validated above"),
    };

    eprintln!(
        "stats: iterations={} contractions={} levels={}",
        report.stats.iterations, report.stats.contractions, report.stats.levels
    );
    let code = if report.status == SolveStatus::InfeasibleAtTarget {
        4
    } else {
        0
    };
    Ok(CmdOutput {
        stdout: format::serialize_report(&i, &report),
        code,
    })
}

/// Prints one line per claw contraction, naming nodes in the original
/// instance's terms by composing the level node maps.
fn print_trace(i: &Instance, records: &[ContractionRecord]) {
    let mut to_root: Vec<u32> = (0..i.node_count() as u32).collect();
    for (idx, rec) in records.iter().enumerate() {
        let name = |u: u32| i.name(to_root[u as usize]);
        let kept: Vec<String> = rec
            .kept_arcs
            .iter()
            .zip(&rec.kept_blocking)
            .map(|(a, &b)| format!("{}->{} (blocking {})", name(a.tail), name(a.head), name(b)))
            .collect();
        let moved: Vec<String> = rec
            .moved_arcs
            .iter()
            .zip(&rec.replacement_arcs)
            .map(|(m, r)| {
                format!(
                    "{}->{} => {}->{}",
                    name(m.tail),
                    name(m.head),
                    name(r.tail),
                    name(r.head)
                )
            })
            .collect();
        eprintln!(
            "contraction {}: claw {} under {}",
            idx + 1,
            name(rec.node),
            name(rec.parent)
        );
        eprintln!(
            "  kept: {}",
            if kept.is_empty() { "-".into() } else { kept.join(", ") }
        );
        eprintln!(
            "  moved: {}",
            if moved.is_empty() { "-".into() } else { moved.join(", ") }
        );
        eprintln!(
            "  next level: {} nodes, {} commodities",
            rec.node_map.len(),
            rec.commodity_map.len()
        );
        to_root = rec.node_map.iter().map(|&p| to_root[p as usize]).collect();
    }
}

/// `verify`: re-check a solution file against its instance. Prints `verdict:
/// ok` (exit 0) or the violations found (exit 4).
pub fn cmd_verify(instance_path: &Path, solution_path: &Path) -> Result<CmdOutput, CliError> {
    let i = load_instance(instance_path)?;
    let text = read_file(solution_path)?;
    let parsed = format::parse_report(&text)?;

    let mut violations: Vec<String> = Vec::new();

    let solution = match parsed.solution(&i) {
        Ok(s) => s,
        Err(e) => {
            violations.push(e.message);
            None
        }
    };
    let certificate = match parsed.certificate(&i) {
        Ok(c) => c,
        Err(e) => {
            violations.push(e.message);
            None
        }
    };

    if parsed.status == SolveStatus::InfeasibleAtTarget {
        if parsed.arcs.is_some() {
            violations.push("status claims infeasibility yet a solution block is present".into());
        }
    } else if parsed.arcs.is_none() {
        violations.push(format!(
            "status {} requires a solution block",
            parsed.status
        ));
    }

    if let Some(sol) = &solution {
        for a in sol.arcs() {
            if i.closure_contains(a.tail, a.head) != Some(true) {
                violations.push(format!(
                    "arc {}->{} is not in the transitive closure of the network",
                    i.name(a.tail),
                    i.name(a.head)
                ));
            }
        }
        for k in 0..i.commodities().len() {
            if !routes_commodity(&i, sol, k) {
                let c = i.commodities()[k];
                violations.push(format!(
                    "commodity {k} ({} -> {}) has no monotone route in the solution",
                    i.name(c.source),
                    i.name(c.sink)
                ));
            }
        }
        if let Some(reported) = parsed.max_out_degree {
            let actual = sol.max_out_degree();
            if reported != actual {
                violations.push(format!(
                    "reported max_out_degree {reported} does not match the arc list ({actual})"
                ));
            }
        }
    }

    if let Some(cert) = &certificate {
        let conditions = match cert.kind {
            CertificateKind::Lb | CertificateKind::LbWeak => {
                witness::check_witness_conditions(&i, &cert.witness_nodes, &cert.commodities)
            }
            CertificateKind::SingleSourceLb => {
                witness::check_single_source_conditions(&i, &cert.witness_nodes)
            }
        };
        for v in conditions {
            violations.push(format!("certificate: {v}"));
        }
        let recomputed = match cert.kind {
            CertificateKind::Lb => witness::eval_lb(&i, &cert.witness_nodes, &cert.commodities),
            CertificateKind::LbWeak => {
                witness::eval_lb_weak(&i, &cert.witness_nodes, &cert.commodities)
            }
            CertificateKind::SingleSourceLb => {
                witness::eval_lb_single_source(&i, &cert.witness_nodes)
            }
        };
        if recomputed != cert.value {
            violations.push(format!(
                "certificate arithmetic mismatch: stored {}, recomputed {recomputed}",
                cert.value
            ));
        }
        if let Some(sol) = &solution {
            if cert.value > sol.max_out_degree() {
                violations.push(format!(
                    "certificate lower bound {} exceeds the solution degree {}",
                    cert.value,
                    sol.max_out_degree()
                ));
            }
        }
    }

    if violations.is_empty() {
        Ok(CmdOutput::ok("verdict: ok\n".into()))
    } else {
        let mut out = String::new();
        for v in &violations {
            let _ = writeln!(out, "violation: {v}");
        }
        let _ = writeln!(out, "verdict: invalid");
        Ok(CmdOutput { stdout: out, code: 4 })
    }
}

/// Checks one commodity against a solution: a hop sequence from source to
/// sink, over solution arcs, monotone along the commodity's network path.
/// Independent of the feasibility check in the solver crate.
fn routes_commodity(i: &Instance, sol: &Solution, k: usize) -> bool {
    let Some(path) = i.commodity_path(k) else {
        return false;
    };
    let pos: HashMap<u32, usize> = path.iter().enumerate().map(|(p, &u)| (u, p)).collect();
    let mut hops: Vec<Vec<usize>> = vec![Vec::new(); path.len()];
    for a in sol.arcs() {
        if let (Some(&from), Some(&to)) = (pos.get(&a.tail), pos.get(&a.head)) {
            if from < to {
                hops[from].push(to);
            }
        }
    }
    let mut reached = vec![false; path.len()];
    reached[0] = true;
    let mut stack = vec![0usize];
    while let Some(p) = stack.pop() {
        if p == path.len() - 1 {
            return true;
        }
        for &q in &hops[p] {
            if !reached[q] {
                reached[q] = true;
                stack.push(q);
            }
        }
    }
    false
}

/// `oracle`: exact reference solve (or a pruning self-check) under limits.
pub fn cmd_oracle(
    file: &Path,
    max_nodes: Option<u32>,
    self_check: bool,
) -> Result<CmdOutput, CliError> {
    let lim = oracle_limits(max_nodes)?;
    let i = load_instance(file)?;
    if self_check {
        let agree = oracle::self_check(&i, &lim).map_err(oracle_error)?;
        if agree {
            Ok(CmdOutput::ok("self-check: ok\n".into()))
        } else {
            Ok(CmdOutput {
                stdout: "self-check: mismatch\n".into(),
                code: 1,
            })
        }
    } else {
        let sol = oracle::exact_min_max_degree(&i, &lim).map_err(oracle_error)?;
        let report = SolveReport {
            solution: Some(sol),
            status: SolveStatus::Optimal,
            certificate: None,
            stats: SolveStats::default(),
        };
        Ok(CmdOutput::ok(format::serialize_report(&i, &report)))
    }
}

/// Arguments of the `lb` subcommand.
#[derive(Debug)]
pub struct LbArgs {
    /// Instance file.
    pub file: PathBuf,
    /// Witness node names (whitespace- or comma-separated).
    pub witness: Option<String>,
    /// Commodity indices (whitespace- or comma-separated); auto-selected
    /// when omitted.
    pub commodities: Option<String>,
    /// Maximize over all connected witness sets instead.
    pub exhaustive: bool,
    /// Cap on witness size for the exhaustive search.
    pub max_witness_size: Option<u32>,
}

fn split_list(raw: &str) -> impl Iterator<Item = &str> {
    raw.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|w| !w.is_empty())
}

/// `lb`: evaluate a witness lower bound, or maximize one exhaustively.
pub fn cmd_lb(args: &LbArgs) -> Result<CmdOutput, CliError> {
    let i = load_instance(&args.file)?;

    if args.exhaustive {
        if args.witness.is_some() || args.commodities.is_some() {
            return Err(CliError::parse(
                "--exhaustive replaces --witness/--commodities",
            ));
        }
        let lim = oracle_limits(None)?;
        let max_size = args.max_witness_size.unwrap_or(i.node_count() as u32);
        let rep = oracle::max_witness(&i, &lim, max_size).map_err(oracle_error)?;
        let mut out = String::new();
        let _ = writeln!(out, "kind: {}", rep.best.kind);
        let _ = writeln!(out, "value: {}", rep.best.value);
        let _ = writeln!(out, "witness_nodes: {}", names_line(&i, &rep.best.witness_nodes));
        let _ = writeln!(out, "witness_commodities: {}", ids_line(&rep.best.commodities));
        let _ = writeln!(out, "weak_max: {}", rep.weak_max);
        return Ok(CmdOutput::ok(out));
    }

    let Some(raw_witness) = &args.witness else {
        return Err(CliError::parse("--witness is required unless --exhaustive"));
    };
    if args.max_witness_size.is_some() {
        return Err(CliError::parse("--max-witness-size applies to --exhaustive"));
    }
    let mut witness_nodes = Vec::new();
    for name in split_list(raw_witness) {
        let Some(u) = i.node_index(name) else {
            return Err(CliError::parse(format!("unknown node {name:?}")));
        };
        witness_nodes.push(u);
    }
    witness_nodes.sort_unstable();
    witness_nodes.dedup();

    let commodities = match &args.commodities {
        Some(raw) => {
            let mut ks = Vec::new();
            for word in split_list(raw) {
                let k: u32 = word.parse().map_err(|_| {
                    CliError::parse(format!("commodity ids must be integers, got {word:?}"))
                })?;
                ks.push(k);
            }
            ks
        }
        None => witness::best_commodities_for(&i, &witness_nodes),
    };

    let violations = witness::check_witness_conditions(&i, &witness_nodes, &commodities);
    let value = witness::eval_lb(&i, &witness_nodes, &commodities);
    let weak = witness::eval_lb_weak(&i, &witness_nodes, &commodities);

    let mut out = String::new();
    let _ = writeln!(out, "kind: {}", CertificateKind::Lb);
    let _ = writeln!(out, "value: {value}");
    let _ = writeln!(out, "weak_value: {weak}");
    let _ = writeln!(out, "witness_nodes: {}", names_line(&i, &witness_nodes));
    let _ = writeln!(out, "witness_commodities: {}", ids_line(&commodities));
    for v in &violations {
        let _ = writeln!(out, "violation: {v}");
    }
    let code = if violations.is_empty() { 0 } else { 4 };
    Ok(CmdOutput { stdout: out, code })
}

fn names_line(i: &Instance, nodes: &[u32]) -> String {
    nodes
        .iter()
        .map(|&u| i.name(u))
        .collect::<Vec<_>>()
        .join(" ")
}

fn ids_line(ids: &[u32]) -> String {
    ids.iter()
        .map(u32::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

/// Arguments of the `gen` subcommand.
#[derive(Debug)]
pub enum GenArgs {
    /// Hitting-set decision reduction; prints the degree threshold to
    /// stderr.
    HittingSet {
        /// File with one set per line, elements whitespace-separated.
        sets: PathBuf,
        /// Maximum hitting-set size.
        budget: u32,
    },
    /// Signed-vector balanced-partition broom.
    Svbp {
        /// Comma-separated signed weights.
        weights: String,
        /// Degree threshold of the encoding.
        target: u32,
    },
    /// Star family whose best witness bound trails the optimum.
    StarGap {
        /// Sources per side.
        n: u32,
    },
    /// Seeded random instance.
    Random {
        /// Shape family name.
        shape: String,
        /// Node budget.
        n: u32,
        /// Source count.
        sources: u32,
        /// Commodity density in (0, 1].
        density: f64,
        /// RNG seed.
        seed: u64,
    },
}

/// `gen`: emit an instance file for a structured or random family.
pub fn cmd_gen(args: &GenArgs) -> Result<CmdOutput, CliError> {
    let instance = match args {
        GenArgs::HittingSet { sets, budget } => {
            let text = read_file(sets)?;
            let mut parsed: Vec<Vec<u32>> = Vec::new();
            for (lineno, raw) in text.lines().enumerate() {
                let line = match raw.find('#') {
                    Some(pos) => &raw[..pos],
                    None => raw,
                };
                if line.trim().is_empty() {
                    continue;
                }
                let mut set = Vec::new();
                for word in line.split_whitespace() {
                    let v: u32 = word.parse().map_err(|_| {
                        CliError::parse(format!(
                            "line {}: set elements must be positive integers, got {word:?}",
                            lineno + 1
                        ))
                    })?;
                    set.push(v);
                }
                parsed.push(set);
            }
            let input = HittingSetInput::new(parsed, *budget).map_err(generator_error)?;
            let (instance, threshold) = generators::from_hitting_set(&input);
            eprintln!("degree threshold: {threshold}");
            instance
        }
        GenArgs::Svbp { weights, target } => {
            let mut parsed = Vec::new();
            for word in split_list(weights) {
                let w: i64 = word.parse().map_err(|_| {
                    CliError::parse(format!("weights must be signed integers, got {word:?}"))
                })?;
                parsed.push(w);
            }
            let input = SvbpInput::new(parsed, *target).map_err(generator_error)?;
            eprintln!("degree threshold: {target}");
            generators::broom_from_svbp(&input).map_err(generator_error)?
        }
        GenArgs::StarGap { n } => generators::star_gap(*n).map_err(generator_error)?,
        GenArgs::Random {
            shape,
            n,
            sources,
            density,
            seed,
        } => {
            let Some(shape) = RandomShape::from_name(shape) else {
                return Err(CliError::parse(format!(
                    "unknown shape {shape:?}; expected one of single-source-tree, out-tree, star, tree"
                )));
            };
            generators::random_instance(shape, *n, *sources, *density, *seed)
                .map_err(generator_error)?
        }
    };
    Ok(CmdOutput::ok(format::serialize_instance(&instance)))
}

/// Arguments of the `bench` subcommand.
#[derive(Debug)]
pub struct BenchArgs {
    /// Shape family name.
    pub shape: String,
    /// Node budgets to sweep.
    pub sizes: Vec<u32>,
    /// Seeds 0..seeds per size.
    pub seeds: u64,
    /// Source count for the generator.
    pub sources: u32,
    /// Commodity density for the generator.
    pub density: f64,
    /// Solver family to time.
    pub algo: AlgoChoice,
    /// Also compute the exact optimum per row (within oracle limits).
    pub oracle: bool,
    /// Worker threads.
    pub threads: usize,
}

/// `bench`: CSV timing sweep over seeded random instances. Rows appear in
/// sweep order regardless of thread count; seeds whose parameters the
/// generator rejects are skipped.
pub fn cmd_bench(args: &BenchArgs) -> Result<CmdOutput, CliError> {
    let Some(shape) = RandomShape::from_name(&args.shape) else {
        return Err(CliError::parse(format!(
            "unknown shape {:?}; expected one of single-source-tree, out-tree, star, tree",
            args.shape
        )));
    };
    let lim = oracle_limits(None)?;

    let tasks: Vec<(u32, u64)> = args
        .sizes
        .iter()
        .flat_map(|&n| (0..args.seeds).map(move |seed| (n, seed)))
        .collect();
    let slots: Vec<OnceLock<String>> = (0..tasks.len()).map(|_| OnceLock::new()).collect();
    let next = AtomicUsize::new(0);
    let workers = args.threads.clamp(1, tasks.len().max(1));

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let idx = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(n, seed)) = tasks.get(idx) else {
                    break;
                };
                if let Some(row) = bench_row(shape, n, seed, args, &lim) {
                    let _ = slots[idx].set(row);
                }
            });
        }
    });

    let mut out = String::from("shape,n,seed,algorithm,value,optimum,millis\n");
    for slot in &slots {
        if let Some(row) = slot.get() {
            out.push_str(row);
            out.push('\n');
        }
    }
    Ok(CmdOutput::ok(out))
}

fn bench_row(
    shape: RandomShape,
    n: u32,
    seed: u64,
    args: &BenchArgs,
    lim: &OracleLimits,
) -> Option<String> {
    let i = generators::random_instance(shape, n, args.sources, args.density, seed).ok()?;
    let started = Instant::now();
    let solved = run_algo(&i, args.algo, JunctionSolver::Auto);
    let millis = started.elapsed().as_secs_f64() * 1e3;
    let (value, label) = match &solved {
        Ok((report, label)) => (
            report.value().map(|v| v.to_string()).unwrap_or_default(),
            *label,
        ),
        Err(_) => (String::new(), args.algo.label()),
    };
    let optimum = if args.oracle {
        oracle::exact_min_max_degree(&i, lim)
            .map(|s| s.max_out_degree().to_string())
            .unwrap_or_default()
    } else {
        String::new()
    };
    Some(format!(
        "{},{},{},{},{},{},{:.3}",
        shape.name(),
        n,
        seed,
        label,
        value,
        optimum,
        millis
    ))
}
