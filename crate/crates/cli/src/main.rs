//! `rbr`: exact red-blue reinforcement from the command line.
//!
//! Exit codes: 0 when the command ran (a "no" answer is still 0), 2 for
//! usage, input and solver-limit errors, 3 for an infeasible parameterization
//! and 4 when `difftest` finds a mismatch.

mod config;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context};
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use rbr_core::difftest::{self, Case, Mismatch, NamedSolver, Outcome};
use rbr_core::generate::{gen_cluster_plus_modulator, gen_er, gen_from_random_cw_expr, gen_modular, ColorParams, OpMix};
use rbr_core::oracle::ORACLE_MAX_N;
use rbr_core::solve::pick_solver;
use rbr_core::{
    gamma_rb, solve, solve_mpc, AutoConfig, Budgets, CwExpr, CwOptions, DominationTarget, MpcInstance, RedBlueGraph,
    Solver, SolverKind, UnionMode, VertexSet,
};

#[derive(Parser)]
#[command(name = "rbr", version, about = "Exact solvers for red-blue reinforcement")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether deleting at most k blue vertices brings γ_rb down to a budget.
    Solve(SolveArgs),
    /// Compute the red-blue domination number γ_rb.
    Gamma(GammaArgs),
    /// Write a seeded random instance in rbg format.
    Gen(GenArgs),
    /// Solve a Maximum Price Coverage instance.
    Mpc(MpcArgs),
    /// Compare solvers with brute force on random instances.
    Difftest(DifftestArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SolverArg {
    Auto,
    Bruteforce,
    Dc,
    Mw,
    Cw,
}

#[derive(Clone, Copy, ValueEnum)]
enum UnionArg {
    Naive,
    Fast,
}

#[derive(Args)]
struct SolverOpts {
    #[arg(long, value_enum, default_value_t = SolverArg::Auto)]
    solver: SolverArg,
    /// Clique-width expression of the graph; required by `--solver cw`.
    #[arg(long, value_name = "FILE")]
    cw_expr: Option<PathBuf>,
    /// Union-node algorithm of the clique-width solver.
    #[arg(long, value_enum, default_value_t = UnionArg::Naive)]
    cw_union: UnionArg,
    /// `key = value` file overriding bruteforce_max_n, dc_max_modulator, mw_max_width.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
}

#[derive(Args)]
#[command(group(ArgGroup::new("budget").required(true).args(["gamma", "alpha"])))]
struct SolveArgs {
    #[arg(long, value_name = "FILE")]
    graph: PathBuf,
    /// Deletion budget.
    #[arg(long)]
    k: usize,
    /// Domination budget.
    #[arg(long)]
    gamma: Option<usize>,
    /// Required decrease: the budget becomes γ_rb(G) − alpha.
    #[arg(long)]
    alpha: Option<usize>,
    #[command(flatten)]
    solver: SolverOpts,
    /// Emit one JSON object.
    #[arg(long)]
    json: bool,
    /// Report the deleted set S and the dominators D of a yes answer.
    #[arg(long)]
    witness: bool,
}

#[derive(Args)]
struct GammaArgs {
    #[arg(long, value_name = "FILE")]
    graph: PathBuf,
    #[command(flatten)]
    solver: SolverOpts,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct GenArgs {
    #[command(subcommand)]
    kind: GenKind,
}

#[derive(Args)]
struct GenCommon {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.6)]
    red_prob: f64,
    #[arg(long, default_value_t = 0.6)]
    blue_prob: f64,
    /// Graph output file; stdout when absent.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GenKind {
    /// Erdős–Rényi graph.
    Er {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.3)]
        edge_prob: f64,
        #[command(flatten)]
        common: GenCommon,
    },
    /// Disjoint cliques plus a randomly attached modulator.
    Cluster {
        #[arg(long)]
        cliques: usize,
        #[arg(long)]
        clique_size: usize,
        #[arg(long)]
        modulator: usize,
        #[arg(long, default_value_t = 0.3)]
        attach_prob: f64,
        #[command(flatten)]
        common: GenCommon,
    },
    /// Recursive modular composition with bounded fan-out.
    Modular {
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        fanout: usize,
        #[command(flatten)]
        common: GenCommon,
    },
    /// Graph of a random clique-width expression.
    Cw {
        /// Number of labels.
        #[arg(long)]
        cw: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.6)]
        join_prob: f64,
        #[arg(long, default_value_t = 0.3)]
        rename_prob: f64,
        /// Expression output file; defaults to the graph file with a `.cw` extension.
        #[arg(long, value_name = "FILE")]
        cw_out: Option<PathBuf>,
        #[command(flatten)]
        common: GenCommon,
    },
}

#[derive(Args)]
struct MpcArgs {
    #[arg(long, value_name = "FILE")]
    instance: PathBuf,
    /// Overrides the `k` line of the instance.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct DifftestArgs {
    #[arg(long, default_value_t = 100)]
    count: usize,
    #[arg(long, default_value_t = 8)]
    max_n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Comma-separated solvers out of dc, mw, cw, cw-fast, bruteforce.
    #[arg(long, value_delimiter = ',', default_value = "dc,mw,cw")]
    solvers: Vec<String>,
    /// Directory receiving `repro.rbg` and `repro.cw` on a mismatch.
    #[arg(long, value_name = "DIR")]
    repro_dir: Option<PathBuf>,
    /// Makes the named solver overstate every nonzero minimum by one, to
    /// check that the harness notices.
    #[arg(long, hide = true)]
    inject_fault: Option<String>,
}

enum Failure {
    Usage(anyhow::Error),
    Infeasible(String),
    Mismatch,
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Gamma(args) => cmd_gamma(args),
        Command::Gen(args) => cmd_gen(args),
        Command::Mpc(args) => cmd_mpc(args),
        Command::Difftest(args) => cmd_difftest(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Infeasible(msg)) => {
            eprintln!("infeasible: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Mismatch) => ExitCode::from(4),
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_graph(path: &Path) -> anyhow::Result<RedBlueGraph> {
    RedBlueGraph::parse_rbg(&read(path)?).with_context(|| format!("{}", path.display()))
}

/// Everything needed to run one solver on one graph.
struct Setup {
    graph: RedBlueGraph,
    expr: Option<CwExpr>,
    kind: SolverKind,
    cw_options: CwOptions,
}

impl Setup {
    fn new(graph_path: &Path, opts: &SolverOpts, witness: bool) -> anyhow::Result<Self> {
        let graph = load_graph(graph_path)?;
        let expr = match &opts.cw_expr {
            Some(path) => Some(CwExpr::parse(&read(path)?).with_context(|| format!("{}", path.display()))?),
            None => None,
        };
        let auto = match &opts.config {
            Some(path) => config::parse_auto_config(&read(path)?, AutoConfig::default())
                .with_context(|| format!("{}", path.display()))?,
            None => AutoConfig::default(),
        };
        let kind = match opts.solver {
            SolverArg::Auto => pick_solver(&graph, expr.is_some(), &auto).map_err(|e| anyhow!("{e}; pass --cw-expr FILE"))?,
            SolverArg::Bruteforce => SolverKind::BruteForce,
            SolverArg::Dc => SolverKind::DistanceToCluster,
            SolverArg::Mw => SolverKind::ModularWidth,
            SolverArg::Cw => SolverKind::CliqueWidth,
        };
        if kind == SolverKind::CliqueWidth && expr.is_none() {
            return Err(anyhow!("--solver cw needs --cw-expr FILE"));
        }
        let cw_options = CwOptions {
            union_mode: match opts.cw_union {
                UnionArg::Naive => UnionMode::Naive,
                UnionArg::Fast => UnionMode::Fast,
            },
            witness,
            ..CwOptions::default()
        };
        Ok(Self {
            graph,
            expr,
            kind,
            cw_options,
        })
    }

    fn gamma_rb(&self) -> anyhow::Result<Option<usize>> {
        Ok(gamma_rb(&self.graph, self.kind, self.expr.as_ref(), &self.cw_options)?)
    }
}

fn one_based(set: &VertexSet) -> Vec<usize> {
    set.iter().map(|v| v + 1).collect()
}

fn join_ids(ids: &[usize]) -> String {
    ids.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

#[derive(Serialize)]
struct SolveReport {
    answer: bool,
    s_min: Option<usize>,
    #[serde(rename = "S")]
    deleted: Option<Vec<usize>>,
    #[serde(rename = "D")]
    dominators: Option<Vec<usize>>,
    gamma_rb: Option<usize>,
    k: usize,
    gamma: usize,
    solver: &'static str,
    time_ms: f64,
}

fn cmd_solve(args: SolveArgs) -> CmdResult {
    let start = Instant::now();
    let setup = Setup::new(&args.graph, &args.solver, args.witness)?;
    let (gamma, gamma_rb) = match (args.gamma, args.alpha) {
        (Some(gamma), _) => (gamma, None),
        (None, Some(alpha)) => {
            let gamma_rb = setup.gamma_rb()?;
            let budgets = Budgets {
                k: args.k,
                target: DominationTarget::Alpha(alpha),
            };
            let gamma = budgets.resolve_gamma(gamma_rb).map_err(|e| Failure::Infeasible(e.to_string()))?;
            (gamma, gamma_rb)
        }
        (None, None) => unreachable!("clap requires --gamma or --alpha"),
    };
    let result = solve(
        &setup.graph,
        args.k,
        gamma,
        Solver::Fixed(setup.kind),
        setup.expr.as_ref(),
        &AutoConfig::default(),
        &setup.cw_options,
    )
    .map_err(anyhow::Error::from)?;
    let witness = result.witness.as_ref().filter(|_| args.witness && result.answer);
    let report = SolveReport {
        answer: result.answer,
        s_min: result.min_deletions,
        deleted: witness.map(|w| one_based(&w.deleted)),
        dominators: witness.map(|w| one_based(&w.dominators)),
        gamma_rb,
        k: args.k,
        gamma,
        solver: setup.kind.name(),
        time_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    if args.json {
        println!("{}", serde_json::to_string(&report).expect("serializable"));
        return Ok(());
    }
    let mut out = String::new();
    writeln!(out, "answer: {}", if report.answer { "yes" } else { "no" }).unwrap();
    writeln!(out, "s_min: {}", report.s_min.map_or("none".to_string(), |s| s.to_string())).unwrap();
    writeln!(out, "k: {}", report.k).unwrap();
    writeln!(out, "gamma: {}", report.gamma).unwrap();
    if let Some(g) = report.gamma_rb {
        writeln!(out, "gamma_rb: {g}").unwrap();
    }
    writeln!(out, "solver: {}", report.solver).unwrap();
    writeln!(out, "time_ms: {:.3}", report.time_ms).unwrap();
    if let (Some(s), Some(d)) = (&report.deleted, &report.dominators) {
        writeln!(out, "S: {}", join_ids(s)).unwrap();
        writeln!(out, "D: {}", join_ids(d)).unwrap();
    }
    print!("{out}");
    Ok(())
}

#[derive(Serialize)]
struct GammaReport {
    gamma_rb: Option<usize>,
    feasible: bool,
    solver: &'static str,
    time_ms: f64,
}

fn cmd_gamma(args: GammaArgs) -> CmdResult {
    let start = Instant::now();
    let setup = Setup::new(&args.graph, &args.solver, false)?;
    let gamma_rb = setup.gamma_rb()?;
    let report = GammaReport {
        gamma_rb,
        feasible: gamma_rb.is_some(),
        solver: setup.kind.name(),
        time_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    if args.json {
        println!("{}", serde_json::to_string(&report).expect("serializable"));
    } else {
        match gamma_rb {
            Some(g) => println!("gamma_rb: {g}"),
            None => println!("gamma_rb: INFEASIBLE"),
        }
        println!("solver: {}", report.solver);
        println!("time_ms: {:.3}", report.time_ms);
    }
    Ok(())
}

fn check_prob(name: &str, p: f64) -> anyhow::Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(anyhow!("--{name} must lie in [0, 1], got {p}"))
    }
}

fn write_or_print(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_gen(args: GenArgs) -> CmdResult {
    let common = match &args.kind {
        GenKind::Er { common, .. }
        | GenKind::Cluster { common, .. }
        | GenKind::Modular { common, .. }
        | GenKind::Cw { common, .. } => common,
    };
    check_prob("red-prob", common.red_prob)?;
    check_prob("blue-prob", common.blue_prob)?;
    if common.red_prob == 0.0 && common.blue_prob == 0.0 {
        return Err(anyhow!("--red-prob and --blue-prob cannot both be 0").into());
    }
    let colors = ColorParams {
        red_prob: common.red_prob,
        blue_prob: common.blue_prob,
    };
    let out = common.out.as_deref();
    let graph = match &args.kind {
        GenKind::Er { n, edge_prob, .. } => {
            check_prob("edge-prob", *edge_prob)?;
            gen_er(*n, *edge_prob, colors.red_prob, colors.blue_prob, common.seed)
        }
        GenKind::Cluster {
            cliques,
            clique_size,
            modulator,
            attach_prob,
            ..
        } => {
            check_prob("attach-prob", *attach_prob)?;
            gen_cluster_plus_modulator(*cliques, *clique_size, *modulator, *attach_prob, colors, common.seed)
        }
        GenKind::Modular { depth, fanout, .. } => gen_modular(*depth, *fanout, colors, common.seed),
        GenKind::Cw {
            cw,
            n,
            join_prob,
            rename_prob,
            cw_out,
            ..
        } => {
            check_prob("join-prob", *join_prob)?;
            check_prob("rename-prob", *rename_prob)?;
            if *cw == 0 || *n == 0 {
                return Err(anyhow!("--cw and --n must be positive").into());
            }
            let mix = OpMix {
                join_prob: *join_prob,
                rename_prob: *rename_prob,
            };
            let (graph, expr) = gen_from_random_cw_expr(*cw, *n, mix, colors, common.seed);
            let expr_path = cw_out.clone().or_else(|| out.map(|p| p.with_extension("cw")));
            if let Some(p) = expr_path {
                fs::write(&p, expr.to_text() + "\n").with_context(|| format!("cannot write {}", p.display()))?;
            }
            graph
        }
    };
    write_or_print(out, &graph.to_rbg())?;
    Ok(())
}

#[derive(Serialize)]
struct MpcReport {
    price: u64,
    chosen: Vec<usize>,
    time_ms: f64,
}

fn cmd_mpc(args: MpcArgs) -> CmdResult {
    let start = Instant::now();
    let mut inst = MpcInstance::parse(&read(&args.instance)?).with_context(|| format!("{}", args.instance.display()))?;
    if let Some(k) = args.k {
        inst.max_sets = k;
    }
    let solution = solve_mpc(&inst).map_err(anyhow::Error::from)?;
    let report = MpcReport {
        price: solution.price,
        chosen: solution.chosen.iter().map(|s| s + 1).collect(),
        time_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    if args.json {
        println!("{}", serde_json::to_string(&report).expect("serializable"));
    } else {
        println!("price: {}", report.price);
        println!("chosen: {}", join_ids(&report.chosen));
        println!("time_ms: {:.3}", report.time_ms);
    }
    Ok(())
}

fn difftest_solver(name: &str) -> anyhow::Result<NamedSolver> {
    let fast = CwOptions {
        union_mode: UnionMode::Fast,
        ..CwOptions::default()
    };
    Ok(match name {
        "cw-fast" => NamedSolver::standard(SolverKind::CliqueWidth, fast),
        other => {
            let kind = SolverKind::from_name(other).ok_or_else(|| anyhow!("unknown solver `{other}`"))?;
            NamedSolver::standard(kind, CwOptions::default())
        }
    })
}

fn faulty(inner: NamedSolver) -> NamedSolver {
    let name = inner.name.clone();
    NamedSolver::new(name, move |g, e, k, gamma| {
        let out = (inner.run)(g, e, k, gamma)?;
        let min = out.min_deletions.map(|m| if m > 0 { m + 1 } else { m });
        Ok(Outcome {
            answer: min.is_some_and(|m| m <= k),
            min_deletions: min,
        })
    })
}

fn describe(o: &Result<Outcome, String>) -> String {
    match o {
        Ok(o) => format!(
            "answer={} s_min={}",
            if o.answer { "yes" } else { "no" },
            o.min_deletions.map_or("none".to_string(), |m| m.to_string())
        ),
        Err(e) => format!("error: {e}"),
    }
}

fn repro_dump(m: &Mismatch, dir: Option<&Path>) -> anyhow::Result<String> {
    let Case { graph, expr, source } = &m.case;
    let mut out = String::new();
    writeln!(out, "minimized repro ({} vertices, from {source}):", graph.n()).unwrap();
    writeln!(out, "--- repro.rbg").unwrap();
    out.push_str(&graph.to_rbg());
    if let Some(e) = expr {
        writeln!(out, "--- repro.cw").unwrap();
        writeln!(out, "{}", e.to_text()).unwrap();
    }
    if let Some(dir) = dir {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
        fs::write(dir.join("repro.rbg"), graph.to_rbg()).context("cannot write repro.rbg")?;
        if let Some(e) = expr {
            fs::write(dir.join("repro.cw"), e.to_text() + "\n").context("cannot write repro.cw")?;
        }
    }
    let solver = if m.solver == "cw-fast" { "cw --cw-union fast" } else { m.solver.as_str() };
    let cw = if expr.is_some() { " --cw-expr repro.cw" } else { "" };
    writeln!(
        out,
        "rerun: rbr solve --graph repro.rbg{cw} --k {} --gamma {} --solver {solver}",
        m.k, m.gamma
    )
    .unwrap();
    Ok(out)
}

fn cmd_difftest(args: DifftestArgs) -> CmdResult {
    if args.max_n == 0 || args.max_n > ORACLE_MAX_N {
        return Err(anyhow!("--max-n must lie in 1..={ORACLE_MAX_N}, the brute-force limit").into());
    }
    let mut solvers = Vec::new();
    for name in &args.solvers {
        let solver = difftest_solver(name.trim())?;
        let solver = if args.inject_fault.as_deref() == Some(name.trim()) {
            faulty(solver)
        } else {
            solver
        };
        solvers.push(solver);
    }
    let cases: Vec<Case> = (0..args.count).map(|i| difftest::random_case(i, args.max_n, args.seed)).collect();
    let report = difftest::run(&cases, &solvers);
    println!(
        "cases: {}  checks: {}  mismatches: {}",
        report.cases,
        report.checks,
        report.mismatches.len()
    );
    let (Some(first), Some(small)) = (report.mismatches.first(), report.minimized.as_ref()) else {
        println!("all solvers agree with brute force");
        return Ok(());
    };
    println!(
        "first mismatch: {} on {} at k={} gamma={}: expected {}, got {}",
        first.solver,
        first.case.source,
        first.k,
        first.gamma,
        describe(&Ok(first.expected)),
        describe(&first.got)
    );
    println!(
        "after shrinking: expected {}, got {}",
        describe(&Ok(small.expected)),
        describe(&small.got)
    );
    print!("{}", repro_dump(small, args.repro_dir.as_deref())?);
    Err(Failure::Mismatch)
}
