//! Exhaustive reference solvers.
//!
//! Nothing here prunes. These are the ground truth for every differential
//! test, so they trade speed for obviousness and refuse graphs with more than
//! [`ORACLE_MAX_N`] vertices.

use std::time::Instant;

use itertools::Itertools;
use thiserror::Error;

use crate::graph::{Certificate, RedBlueGraph};
use crate::mpc::{MpcInstance, MpcSolution};
use crate::solve::{SolveResult, SolverKind};

pub const ORACLE_MAX_N: usize = 16;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("graph has {0} vertices; the brute-force oracle is limited to {ORACLE_MAX_N}")]
pub struct OracleTooLarge(pub usize);

/// Whether [`solve_rbr_bruteforce`] stops at the deletion budget or searches
/// all the way to the minimum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    Decision,
    Minimum,
}

struct Masks {
    closed: Vec<u32>,
    red: u32,
    blue: u32,
}

impl Masks {
    fn new(g: &RedBlueGraph) -> Result<Self, OracleTooLarge> {
        if g.n() > ORACLE_MAX_N {
            return Err(OracleTooLarge(g.n()));
        }
        let to_mask = |s: &crate::vertex_set::VertexSet| s.iter().fold(0u32, |m, v| m | 1 << v);
        Ok(Self {
            closed: g.vertices().map(|v| to_mask(g.neighbors(v)) | 1 << v).collect(),
            red: to_mask(g.red()),
            blue: to_mask(g.blue()),
        })
    }

    fn bits(mask: u32) -> Vec<usize> {
        (0..32).filter(|&v| mask >> v & 1 == 1).collect()
    }

    /// Lexicographically first smallest `D ⊆ allowed` with `|D| ≤ limit`
    /// dominating `targets`.
    fn dominator(&self, targets: u32, allowed: u32, limit: usize) -> Option<u32> {
        let candidates = Self::bits(allowed);
        for size in 0..=limit.min(candidates.len()) {
            for combo in candidates.iter().combinations(size) {
                let covered = combo.iter().fold(0u32, |m, &&v| m | self.closed[v]);
                if targets & !covered == 0 {
                    return Some(combo.iter().fold(0u32, |m, &&v| m | 1 << v));
                }
            }
        }
        None
    }
}

fn to_set(g: &RedBlueGraph, mask: u32) -> crate::vertex_set::VertexSet {
    g.set_of(Masks::bits(mask))
}

/// `γ_rb(G)` by enumerating dominator sets in order of size; `None` when some
/// blue vertex has no red vertex in its closed neighborhood.
pub fn gamma_rb_bruteforce(g: &RedBlueGraph) -> Result<Option<usize>, OracleTooLarge> {
    let masks = Masks::new(g)?;
    Ok(masks
        .dominator(masks.blue, masks.red, g.n())
        .map(|d| d.count_ones() as usize))
}

/// Decides red-blue reinforcement by enumerating deletion sets `S ⊆ B` in
/// order of size, and within a size in lexicographic order.
///
/// The witness is the lexicographically first `S` of minimum size together
/// with the lexicographically first smallest dominator set for it. In
/// [`SearchMode::Minimum`] the search continues past `k` so that
/// `min_deletions` is always reported.
pub fn solve_rbr_bruteforce(
    g: &RedBlueGraph,
    k: usize,
    gamma: usize,
    mode: SearchMode,
) -> Result<SolveResult, OracleTooLarge> {
    let start = Instant::now();
    let masks = Masks::new(g)?;
    let blues = Masks::bits(masks.blue);
    let limit = match mode {
        SearchMode::Decision => k.min(blues.len()),
        SearchMode::Minimum => blues.len(),
    };
    for size in 0..=limit {
        for combo in blues.iter().combinations(size) {
            let s = combo.iter().fold(0u32, |m, &&v| m | 1 << v);
            if let Some(d) = masks.dominator(masks.blue & !s, masks.red & !s, gamma) {
                return Ok(SolveResult {
                    answer: size <= k,
                    min_deletions: Some(size),
                    witness: Some(Certificate {
                        deleted: to_set(g, s),
                        dominators: to_set(g, d),
                    }),
                    solver: SolverKind::BruteForce,
                    elapsed: start.elapsed(),
                });
            }
        }
    }
    Ok(SolveResult {
        answer: false,
        min_deletions: None,
        witness: None,
        solver: SolverKind::BruteForce,
        elapsed: start.elapsed(),
    })
}

/// Maximum Price Coverage by enumerating every selection of at most `K` sets.
/// Among maximizers the smallest selection wins, then the lexicographically
/// first.
pub fn solve_mpc_bruteforce(inst: &MpcInstance) -> MpcSolution {
    let mu = inst.sets.len();
    let mut best = MpcSolution {
        chosen: Vec::new(),
        price: 0,
    };
    for size in 1..=inst.max_sets.min(mu) {
        for combo in (0..mu).combinations(size) {
            let price = inst.price_of(&combo);
            if price > best.price {
                best = MpcSolution { chosen: combo, price };
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::{c4_all, uniform};
    use crate::graph::Color;

    fn star_center_red() -> RedBlueGraph {
        let mut colors = vec![Color::Blue; 4];
        colors[0] = Color::Red;
        RedBlueGraph::new(&colors, &[(0, 1), (0, 2), (0, 3)]).unwrap()
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma_rb_bruteforce(&star_center_red()), Ok(Some(1)));
        assert_eq!(gamma_rb_bruteforce(&c4_all()), Ok(Some(2)));
        let lonely = uniform(1, Color::Blue, &[]);
        assert_eq!(gamma_rb_bruteforce(&lonely), Ok(None));
        assert_eq!(gamma_rb_bruteforce(&uniform(3, Color::Red, &[])), Ok(Some(0)));
    }

    #[test]
    fn c4_reinforcement() {
        let g = c4_all();
        let yes = solve_rbr_bruteforce(&g, 1, 1, SearchMode::Decision).unwrap();
        assert!(yes.answer);
        assert_eq!(yes.min_deletions, Some(1));
        let cert = yes.witness.unwrap();
        assert_eq!(cert.deleted.to_vec(), vec![0]);
        assert_eq!(cert.dominators.to_vec(), vec![2]);
        assert_eq!(g.verify_certificate(&cert, 1, 1), Ok(()));

        let no = solve_rbr_bruteforce(&g, 0, 1, SearchMode::Decision).unwrap();
        assert!(!no.answer);
        assert_eq!(no.min_deletions, None);
        let min = solve_rbr_bruteforce(&g, 0, 1, SearchMode::Minimum).unwrap();
        assert!(!min.answer);
        assert_eq!(min.min_deletions, Some(1));
    }

    #[test]
    fn no_blue_is_trivially_yes() {
        let g = uniform(3, Color::Red, &[(0, 1)]);
        let r = solve_rbr_bruteforce(&g, 2, 0, SearchMode::Decision).unwrap();
        assert!(r.answer);
        assert!(r.witness.unwrap().deleted.is_empty());
    }

    #[test]
    fn refuses_large_graphs() {
        let g = uniform(17, Color::Red, &[]);
        assert_eq!(gamma_rb_bruteforce(&g), Err(OracleTooLarge(17)));
    }

    #[test]
    fn mpc_examples() {
        let inst = MpcInstance {
            universe_size: 2,
            sets: vec![vec![0], vec![1], vec![0, 1]],
            classes: vec![vec![0, 1], vec![2]],
            element_price: vec![1, 1],
            class_price: vec![5, 1],
            max_sets: 0,
        };
        assert_eq!(solve_mpc_bruteforce(&inst), MpcSolution { chosen: vec![], price: 0 });
        let k1 = MpcInstance { max_sets: 1, ..inst.clone() };
        assert_eq!(solve_mpc_bruteforce(&k1), MpcSolution { chosen: vec![0], price: 6 });
        let k2 = MpcInstance { max_sets: 2, ..inst };
        assert_eq!(solve_mpc_bruteforce(&k2), MpcSolution { chosen: vec![0, 2], price: 8 });
    }
}
