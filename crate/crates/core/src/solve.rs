//! Solver-independent result type and solver dispatch.

use std::fmt;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::cw::{solve_cw, CwOptions, CwSolveError};
use crate::dc::solve_dc;
use crate::decomp::cluster::find_cluster_deletion_set_bounded;
use crate::decomp::cw_expr::CwExpr;
use crate::decomp::modular::modular_decomposition;
use crate::graph::{Certificate, RedBlueGraph};
use crate::mpc::MpcError;
use crate::mw::{solve_mw, MwError};
use crate::oracle::{self, OracleTooLarge, SearchMode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SolverKind {
    BruteForce,
    DistanceToCluster,
    ModularWidth,
    CliqueWidth,
}

impl SolverKind {
    pub fn name(self) -> &'static str {
        match self {
            SolverKind::BruteForce => "bruteforce",
            SolverKind::DistanceToCluster => "dc",
            SolverKind::ModularWidth => "mw",
            SolverKind::CliqueWidth => "cw",
        }
    }

    pub fn from_name(name: &str) -> Option<SolverKind> {
        match name {
            "bruteforce" | "oracle" => Some(SolverKind::BruteForce),
            "dc" => Some(SolverKind::DistanceToCluster),
            "mw" => Some(SolverKind::ModularWidth),
            "cw" => Some(SolverKind::CliqueWidth),
            _ => None,
        }
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Outcome of a red-blue reinforcement query `(G, k, γ)`.
#[derive(Clone, Debug)]
pub struct SolveResult {
    /// Whether some `S ⊆ B` with `|S| ≤ k` leaves `γ_rb(G − S) ≤ γ`.
    pub answer: bool,
    /// Smallest such `|S|` regardless of `k`, when the solver determined it.
    pub min_deletions: Option<usize>,
    pub witness: Option<Certificate>,
    pub solver: SolverKind,
    pub elapsed: Duration,
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error(transparent)]
    Oracle(#[from] OracleTooLarge),
    #[error(transparent)]
    DistanceToCluster(#[from] MpcError),
    #[error(transparent)]
    ModularWidth(#[from] MwError),
    #[error(transparent)]
    CliqueWidth(#[from] CwSolveError),
    #[error("the clique-width solver needs an expression")]
    MissingExpression,
    #[error("no solver applies: {0}")]
    NoApplicableSolver(String),
}

/// Thresholds used by [`Solver::Auto`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AutoConfig {
    /// Use brute force up to this many vertices.
    pub bruteforce_max_n: usize,
    /// Use the distance-to-cluster solver if a cluster deletion set of at most
    /// this size exists.
    pub dc_max_modulator: usize,
    /// Use the modular-width solver if the modular width is at most this.
    pub mw_max_width: usize,
}

impl Default for AutoConfig {
    fn default() -> Self {
        Self {
            bruteforce_max_n: 12,
            dc_max_modulator: 12,
            mw_max_width: 20,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Solver {
    Auto,
    Fixed(SolverKind),
}

/// Runs one solver on `(G, k, γ)`. `expr` is needed only by the clique-width
/// solver (and by [`Solver::Auto`] when nothing else applies).
pub fn solve(
    g: &RedBlueGraph,
    k: usize,
    gamma: usize,
    solver: Solver,
    expr: Option<&CwExpr>,
    auto: &AutoConfig,
    cw_options: &CwOptions,
) -> Result<SolveResult, SolveError> {
    let kind = match solver {
        Solver::Fixed(kind) => kind,
        Solver::Auto => pick_solver(g, expr.is_some(), auto)?,
    };
    run(g, k, gamma, kind, expr, cw_options)
}

fn run(
    g: &RedBlueGraph,
    k: usize,
    gamma: usize,
    kind: SolverKind,
    expr: Option<&CwExpr>,
    cw_options: &CwOptions,
) -> Result<SolveResult, SolveError> {
    Ok(match kind {
        SolverKind::BruteForce => oracle::solve_rbr_bruteforce(g, k, gamma, SearchMode::Minimum)?,
        SolverKind::DistanceToCluster => solve_dc(g, k, gamma)?,
        SolverKind::ModularWidth => solve_mw(g, k, gamma)?,
        SolverKind::CliqueWidth => {
            let expr = expr.ok_or(SolveError::MissingExpression)?;
            solve_cw(g, expr, k, gamma, cw_options)?
        }
    })
}

pub fn pick_solver(g: &RedBlueGraph, have_expr: bool, auto: &AutoConfig) -> Result<SolverKind, SolveError> {
    if g.n() <= auto.bruteforce_max_n.min(oracle::ORACLE_MAX_N) {
        return Ok(SolverKind::BruteForce);
    }
    if find_cluster_deletion_set_bounded(g, auto.dc_max_modulator).is_some() {
        return Ok(SolverKind::DistanceToCluster);
    }
    let width = modular_decomposition(g).binarized().width();
    if width <= auto.mw_max_width {
        return Ok(SolverKind::ModularWidth);
    }
    if have_expr {
        return Ok(SolverKind::CliqueWidth);
    }
    Err(SolveError::NoApplicableSolver(format!(
        "n = {}, no cluster deletion set of size <= {}, modular width {} > {}, and no clique-width expression",
        g.n(),
        auto.dc_max_modulator,
        width,
        auto.mw_max_width
    )))
}

/// `γ_rb(G)` computed with the given solver: the least `γ` admitting a yes
/// answer at `k = 0`, found by binary search. `None` when infeasible.
pub fn gamma_rb(
    g: &RedBlueGraph,
    kind: SolverKind,
    expr: Option<&CwExpr>,
    cw_options: &CwOptions,
) -> Result<Option<usize>, SolveError> {
    if kind == SolverKind::BruteForce {
        return Ok(oracle::gamma_rb_bruteforce(g)?);
    }
    let yes = |gamma: usize| -> Result<bool, SolveError> { Ok(run(g, 0, gamma, kind, expr, cw_options)?.answer) };
    let n = g.n();
    if !yes(n)? {
        return Ok(None);
    }
    let (mut lo, mut hi) = (0usize, n);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if yes(mid)? {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(Some(lo))
}

/// Times a closure, for solvers that fill in `elapsed` last.
pub(crate) fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::c4_all;
    use crate::graph::Color;

    #[test]
    fn auto_prefers_bruteforce_on_small_graphs() {
        let g = c4_all();
        assert_eq!(pick_solver(&g, false, &AutoConfig::default()).unwrap(), SolverKind::BruteForce);
        let strict = AutoConfig {
            bruteforce_max_n: 0,
            ..AutoConfig::default()
        };
        assert_eq!(pick_solver(&g, false, &strict).unwrap(), SolverKind::DistanceToCluster);
        let nothing = AutoConfig {
            bruteforce_max_n: 0,
            dc_max_modulator: 0,
            mw_max_width: 0,
        };
        assert_eq!(pick_solver(&g, true, &nothing).unwrap(), SolverKind::CliqueWidth);
        assert!(matches!(pick_solver(&g, false, &nothing), Err(SolveError::NoApplicableSolver(_))));
    }

    #[test]
    fn every_solver_answers_c4() {
        let g = c4_all();
        let expr = CwExpr::linear_from_graph(&g).unwrap();
        for kind in [
            SolverKind::BruteForce,
            SolverKind::DistanceToCluster,
            SolverKind::ModularWidth,
            SolverKind::CliqueWidth,
        ] {
            let run = |k| {
                solve(&g, k, 1, Solver::Fixed(kind), Some(&expr), &AutoConfig::default(), &CwOptions::default()).unwrap()
            };
            assert!(run(1).answer, "{kind}");
            assert!(!run(0).answer, "{kind}");
            assert_eq!(run(0).min_deletions, Some(1));
            assert_eq!(gamma_rb(&g, kind, Some(&expr), &CwOptions::default()).unwrap(), Some(2));
        }
        let missing = solve(&g, 0, 1, Solver::Fixed(SolverKind::CliqueWidth), None, &AutoConfig::default(), &CwOptions::default());
        assert!(matches!(missing, Err(SolveError::MissingExpression)));
    }

    #[test]
    fn infeasible_gamma() {
        let g = RedBlueGraph::new(&[Color::Blue], &[]).unwrap();
        for kind in [SolverKind::BruteForce, SolverKind::DistanceToCluster, SolverKind::ModularWidth] {
            assert_eq!(gamma_rb(&g, kind, None, &CwOptions::default()).unwrap(), None);
        }
    }

    #[test]
    fn names_round_trip() {
        for kind in [
            SolverKind::BruteForce,
            SolverKind::DistanceToCluster,
            SolverKind::ModularWidth,
            SolverKind::CliqueWidth,
        ] {
            assert_eq!(SolverKind::from_name(kind.name()), Some(kind));
        }
        assert_eq!(SolverKind::from_name("fastest"), None);
    }
}
