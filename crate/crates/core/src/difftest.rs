//! Differential testing of the solvers against the brute-force oracle.

use rayon::prelude::*;

use crate::cw::{solve_cw, CwOptions};
use crate::dc::solve_dc;
use crate::decomp::cw_expr::CwExpr;
use crate::generate::{
    gen_cluster_plus_modulator, gen_er, gen_from_random_cw_expr, gen_modular, ColorParams, InstanceRng, OpMix,
};
use crate::graph::RedBlueGraph;
use crate::mw::solve_mw;
use crate::oracle::{gamma_rb_bruteforce, solve_rbr_bruteforce, SearchMode, ORACLE_MAX_N};
use crate::solve::SolverKind;

/// A test graph with a clique-width expression for it (absent only for the
/// empty graph).
#[derive(Clone, Debug)]
pub struct Case {
    pub graph: RedBlueGraph,
    pub expr: Option<CwExpr>,
    pub source: String,
}

impl Case {
    /// Wraps a graph with its linear expression.
    pub fn from_graph(graph: RedBlueGraph, source: impl Into<String>) -> Self {
        let expr = CwExpr::linear_from_graph(&graph);
        Self {
            graph,
            expr,
            source: source.into(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub answer: bool,
    pub min_deletions: Option<usize>,
}

type RunFn = dyn Fn(&RedBlueGraph, Option<&CwExpr>, usize, usize) -> Result<Outcome, String> + Send + Sync;

pub struct NamedSolver {
    pub name: String,
    pub run: Box<RunFn>,
}

impl NamedSolver {
    pub fn new(
        name: impl Into<String>,
        run: impl Fn(&RedBlueGraph, Option<&CwExpr>, usize, usize) -> Result<Outcome, String> + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            run: Box::new(run),
        }
    }

    /// The library solver of the given kind. The clique-width solver skips the
    /// empty graph, which has no expression.
    pub fn standard(kind: SolverKind, cw_options: CwOptions) -> Self {
        let name = match (kind, cw_options.union_mode) {
            (SolverKind::CliqueWidth, crate::cw::UnionMode::Fast) => "cw-fast".to_string(),
            _ => kind.name().to_string(),
        };
        Self::new(name, move |g, expr, k, gamma| {
            let result = match kind {
                SolverKind::BruteForce => solve_rbr_bruteforce(g, k, gamma, SearchMode::Minimum).map_err(|e| e.to_string()),
                SolverKind::DistanceToCluster => solve_dc(g, k, gamma).map_err(|e| e.to_string()),
                SolverKind::ModularWidth => solve_mw(g, k, gamma).map_err(|e| e.to_string()),
                SolverKind::CliqueWidth => match expr {
                    None => return Ok(oracle_outcome(g, k, gamma)),
                    Some(e) => solve_cw(g, e, k, gamma, &cw_options).map_err(|e| e.to_string()),
                },
            }?;
            Ok(Outcome {
                answer: result.answer,
                min_deletions: result.min_deletions,
            })
        })
    }
}

fn oracle_outcome(g: &RedBlueGraph, k: usize, gamma: usize) -> Outcome {
    let r = solve_rbr_bruteforce(g, k, gamma, SearchMode::Minimum).expect("difftest graphs fit the oracle");
    Outcome {
        answer: r.answer,
        min_deletions: r.min_deletions,
    }
}

/// The `(k, γ)` pairs checked on each graph: `k ∈ {0, 1, 2, n}` crossed with
/// `γ ∈ {0, 1, γ_rb(G)}`, deduplicated.
pub fn queries(g: &RedBlueGraph) -> Vec<(usize, usize)> {
    let gamma_rb = gamma_rb_bruteforce(g).expect("difftest graphs fit the oracle");
    let mut gammas = vec![0, 1];
    gammas.extend(gamma_rb);
    let mut out = Vec::new();
    for k in [0, 1, 2, g.n()] {
        for &gamma in &gammas {
            if !out.contains(&(k, gamma)) {
                out.push((k, gamma));
            }
        }
    }
    out
}

/// The `index`-th case of a mixed random corpus with at most `max_n`
/// vertices, cycling through the four generators.
pub fn random_case(index: usize, max_n: usize, seed: u64) -> Case {
    let max_n = max_n.clamp(1, ORACLE_MAX_N);
    let case_seed = seed ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    let mut rng = InstanceRng::new(case_seed);
    let colors = ColorParams {
        red_prob: 0.3 + 0.6 * rng.unit(),
        blue_prob: 0.3 + 0.6 * rng.unit(),
    };
    let inner = rng.next_u64();
    match index % 4 {
        0 => {
            let n = rng.between(1, max_n);
            let p = 0.15 + 0.6 * rng.unit();
            let g = gen_er(n, p, colors.red_prob, colors.blue_prob, inner);
            Case::from_graph(g, format!("er n={n} p={p:.2} seed={inner}"))
        }
        1 => {
            let size = rng.between(1, 3.min(max_n));
            let modulator = rng.between(0, 2.min(max_n - size));
            let cliques = rng.between(1, ((max_n - modulator) / size).max(1));
            let attach = 0.2 + 0.5 * rng.unit();
            let g = gen_cluster_plus_modulator(cliques, size, modulator, attach, colors, inner);
            Case::from_graph(g, format!("cluster {cliques}x{size}+{modulator} seed={inner}"))
        }
        2 => {
            let mut g = gen_modular(2, 3, colors, inner);
            if g.n() > max_n {
                let keep = g.set_of(0..max_n);
                g = g.induced_subgraph(&keep).expect("in range").graph;
            }
            Case::from_graph(g, format!("modular depth=2 fanout=3 seed={inner}"))
        }
        _ => {
            let cw = rng.between(1, 4);
            let n = rng.between(1, max_n);
            let (graph, expr) = gen_from_random_cw_expr(cw, n, OpMix::default(), colors, inner);
            Case {
                graph,
                expr: Some(expr),
                source: format!("cw-expr cw={cw} n={n} seed={inner}"),
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct Mismatch {
    pub solver: String,
    pub case: Case,
    pub k: usize,
    pub gamma: usize,
    pub expected: Outcome,
    pub got: Result<Outcome, String>,
}

#[derive(Debug, Default)]
pub struct Report {
    pub cases: usize,
    pub checks: usize,
    pub mismatches: Vec<Mismatch>,
    /// The first mismatch shrunk by greedy vertex deletion.
    pub minimized: Option<Mismatch>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

fn check(solver: &NamedSolver, case: &Case, k: usize, gamma: usize) -> Option<Mismatch> {
    let expected = oracle_outcome(&case.graph, k, gamma);
    let got = (solver.run)(&case.graph, case.expr.as_ref(), k, gamma);
    if got.as_ref() == Ok(&expected) {
        return None;
    }
    Some(Mismatch {
        solver: solver.name.clone(),
        case: case.clone(),
        k,
        gamma,
        expected,
        got,
    })
}

/// Runs every solver on every case and query, in parallel over cases.
pub fn run(cases: &[Case], solvers: &[NamedSolver]) -> Report {
    let per_case: Vec<(usize, Vec<Mismatch>)> = cases
        .par_iter()
        .map(|case| {
            let qs = queries(&case.graph);
            let mut found = Vec::new();
            for &(k, gamma) in &qs {
                for solver in solvers {
                    found.extend(check(solver, case, k, gamma));
                }
            }
            (qs.len() * solvers.len(), found)
        })
        .collect();
    let mut report = Report {
        cases: cases.len(),
        ..Report::default()
    };
    for (checks, found) in per_case {
        report.checks += checks;
        report.mismatches.extend(found);
    }
    if let Some(first) = report.mismatches.first() {
        let solver = solvers.iter().find(|s| s.name == first.solver).expect("known solver");
        report.minimized = Some(minimize(first, solver));
    }
    report
}

/// Deletes vertices one at a time while the solver still disagrees with the
/// oracle at the same `(k, γ)`.
pub fn minimize(mismatch: &Mismatch, solver: &NamedSolver) -> Mismatch {
    let mut current = mismatch.clone();
    'shrink: loop {
        let g = &current.case.graph;
        for v in g.vertices() {
            let mut keep = g.all_vertices();
            keep.remove(v);
            let smaller = g.induced_subgraph(&keep).expect("in range").graph;
            let case = Case::from_graph(smaller, format!("{}, shrunk", mismatch.case.source));
            if let Some(m) = check(solver, &case, current.k, current.gamma) {
                current = m;
                continue 'shrink;
            }
        }
        return current;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn queries_are_deduplicated() {
        let g = gen_er(2, 0.0, 1.0, 0.0, 1);
        assert_eq!(queries(&g), vec![(0, 0), (0, 1), (1, 0), (1, 1), (2, 0), (2, 1)]);
    }

    #[test]
    fn corpus_is_deterministic_and_bounded() {
        for i in 0..40 {
            let a = random_case(i, 9, 5);
            let b = random_case(i, 9, 5);
            assert_eq!(a.graph, b.graph);
            assert!(a.graph.n() >= 1 && a.graph.n() <= 9, "{}", a.source);
            assert!(a.expr.as_ref().unwrap().validate(&a.graph), "{}", a.source);
        }
    }

    #[test]
    fn solvers_agree_on_small_corpus() {
        let cases: Vec<Case> = (0..24).map(|i| random_case(i, 8, 99)).collect();
        let solvers: Vec<NamedSolver> = [SolverKind::DistanceToCluster, SolverKind::ModularWidth, SolverKind::CliqueWidth]
            .into_iter()
            .map(|k| NamedSolver::standard(k, CwOptions::default()))
            .collect();
        let report = run(&cases, &solvers);
        assert!(report.passed(), "{:?}", report.mismatches.first());
        assert_eq!(report.cases, 24);
    }

    #[test]
    fn off_by_one_solver_is_caught_and_minimized() {
        let broken = NamedSolver::new("broken", |g, _, k, gamma| {
            let r = solve_mw(g, k, gamma).map_err(|e| e.to_string())?;
            let min = r.min_deletions.map(|m| if m > 0 { m + 1 } else { m });
            Ok(Outcome {
                answer: min.is_some_and(|m| m <= k),
                min_deletions: min,
            })
        });
        let cases: Vec<Case> = (0..16).map(|i| random_case(i, 8, 3)).collect();
        let report = run(&cases, &[broken]);
        assert!(!report.passed());
        let small = report.minimized.unwrap();
        assert!(small.case.graph.n() <= report.mismatches[0].case.graph.n());
        assert!(small.expected.min_deletions.is_some_and(|m| m >= 1));
    }
}
