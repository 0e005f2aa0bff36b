//! Red-blue reinforcement parameterized by distance to cluster.
//!
//! With a minimum cluster deletion set `M`, every guess `D_M ⊆ M ∩ R` of the
//! dominators inside `M` reduces the instance to one where `M` holds only
//! blue vertices and every remaining clique has a red vertex. Choosing the
//! remaining dominators is then a Maximum Price Coverage instance: modulator
//! vertices are elements, clique reds are sets, and cliques are classes.

use rayon::prelude::*;

use crate::decomp::cluster::find_cluster_deletion_set;
use crate::graph::{Certificate, RedBlueGraph, Vertex};
use crate::mpc::{solve_mpc_with_cap, MpcError, MpcInstance, DEFAULT_MAX_UNIVERSE};
use crate::solve::{timed, SolveResult, SolverKind};
use crate::vertex_set::VertexSet;

/// The instance left after fixing `D_M`. Sets use the numbering of the input
/// graph; `graph` is the residual graph with `original` mapping back.
#[derive(Clone, Debug)]
pub struct ReducedInstance {
    pub graph: RedBlueGraph,
    pub original: Vec<Vertex>,
    /// `M′`, all blue and none red.
    pub modulator: VertexSet,
    /// Cliques of `G′ − M′`, each containing a red vertex, ordered by least vertex.
    pub cliques: Vec<VertexSet>,
    /// Vertices of red-free cliques, deleted outright.
    pub pruned: VertexSet,
    /// `k − |pruned|`, or `None` when the pruning alone exceeds `k`.
    pub deletion_budget: Option<usize>,
    /// `γ − |D_M|`.
    pub domination_budget: usize,
    /// `R′` and `B′` in the numbering of the input graph.
    pub red: VertexSet,
    pub blue: VertexSet,
}

impl ReducedInstance {
    /// Blue vertices that must still be dominated or deleted.
    pub fn blue_total(&self) -> usize {
        self.modulator.len() + self.cliques.iter().map(|q| q.intersection_len(&self.blue)).sum::<usize>()
    }
}

/// Applies the reduction for one guess. Returns `None` if `|D_M| > γ`.
pub fn reduce_with_guess(
    g: &RedBlueGraph,
    modulator: &VertexSet,
    guess: &VertexSet,
    k: usize,
    gamma: usize,
) -> Option<ReducedInstance> {
    debug_assert!(guess.is_subset(modulator) && guess.is_subset(g.red()));
    let domination_budget = gamma.checked_sub(guess.len())?;
    let mut dominated = guess.clone();
    for d in guess.iter() {
        dominated.union_with(g.neighbors(d));
    }
    let red_only = g.red().difference(g.blue());
    let blue_only = g.blue().difference(g.red());
    let rest_of_m = modulator.difference(guess);

    let mut alive = g.all_vertices();
    // Modulator vertices outside D_M that D_M already dominates need nothing
    // further: they are not dominators under this guess.
    alive.difference_with(&rest_of_m.intersection(&dominated));
    alive.difference_with(&blue_only.intersection(&dominated));
    alive.difference_with(&rest_of_m.intersection(&red_only));
    let mut red = g.red().clone();
    red.difference_with(&rest_of_m);
    let mut blue = g.blue().clone();
    blue.difference_with(&g.red().difference(modulator).intersection(&dominated));
    alive.difference_with(guess);

    let m_alive = rest_of_m.intersection(&alive);
    let outside = alive.difference(&m_alive);
    let mut pruned = g.empty_set();
    let mut cliques = Vec::new();
    let mut seen = g.empty_set();
    for v in outside.iter() {
        if seen.contains(v) {
            continue;
        }
        let mut clique = g.neighbors(v).intersection(&outside);
        clique.insert(v);
        seen.union_with(&clique);
        if clique.intersects(&red) {
            cliques.push(clique);
        } else {
            debug_assert!(clique.is_subset(&blue_only));
            pruned.union_with(&clique);
        }
    }
    alive.difference_with(&pruned);
    red.intersect_with(&alive);
    blue.intersect_with(&alive);

    let induced = g.induced_subgraph(&alive).expect("subset of the graph");
    let original = induced.original;
    let local = |set: &VertexSet| {
        let members = original.iter().enumerate().filter(|(_, &v)| set.contains(v)).map(|(i, _)| i);
        VertexSet::from_iter_with_capacity(original.len(), members)
    };
    let edges: Vec<_> = induced.graph.edges().collect();
    let graph = RedBlueGraph::from_sets(local(&red), local(&blue), &edges).expect("every kept vertex stays colored");
    Some(ReducedInstance {
        graph,
        original,
        modulator: m_alive,
        cliques,
        deletion_budget: k.checked_sub(pruned.len()),
        pruned,
        domination_budget,
        red,
        blue,
    })
}

/// The MPC instance of a reduced instance, with the vertex behind every
/// element and every set.
#[derive(Clone, Debug)]
pub struct DcMpc {
    pub instance: MpcInstance,
    pub elements: Vec<Vertex>,
    pub set_vertices: Vec<Vertex>,
}

pub fn build_mpc_instance(g: &RedBlueGraph, reduced: &ReducedInstance) -> DcMpc {
    let elements: Vec<Vertex> = reduced.modulator.iter().collect();
    let mut sets = Vec::new();
    let mut classes = Vec::new();
    let mut class_price = Vec::new();
    let mut set_vertices = Vec::new();
    for clique in &reduced.cliques {
        let mut class = Vec::new();
        for v in clique.intersection(&reduced.red).iter() {
            class.push(sets.len());
            sets.push(
                elements
                    .iter()
                    .enumerate()
                    .filter(|(_, &u)| g.has_edge(u, v))
                    .map(|(e, _)| e)
                    .collect(),
            );
            set_vertices.push(v);
        }
        classes.push(class);
        class_price.push(clique.intersection_len(&reduced.blue) as u64);
    }
    DcMpc {
        instance: MpcInstance {
            universe_size: elements.len(),
            sets,
            classes,
            element_price: vec![1; elements.len()],
            class_price,
            max_sets: reduced.domination_budget,
        },
        elements,
        set_vertices,
    }
}

/// Work counters for one run of [`solve_dc`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DcStats {
    pub modulator_size: usize,
    /// Guesses `D_M ⊆ M ∩ R` considered.
    pub guesses: usize,
    /// Guesses skipped because `|D_M| > γ`.
    pub skipped: usize,
    /// Sum over solved guesses of `2^|M′|`.
    pub subset_work: u128,
}

struct GuessOutcome {
    cost: usize,
    certificate: Certificate,
    universe: usize,
}

fn solve_guess(
    g: &RedBlueGraph,
    modulator: &VertexSet,
    guess: &VertexSet,
    k: usize,
    gamma: usize,
) -> Result<Option<GuessOutcome>, MpcError> {
    let Some(reduced) = reduce_with_guess(g, modulator, guess, k, gamma) else {
        return Ok(None);
    };
    let mpc = build_mpc_instance(g, &reduced);
    let solution = solve_mpc_with_cap(&mpc.instance, DEFAULT_MAX_UNIVERSE)?;
    let cost = reduced.pruned.len() + reduced.blue_total() - solution.price as usize;

    let mut dominators = guess.clone();
    let mut covered = g.empty_set();
    let mut touched = vec![false; reduced.cliques.len()];
    let class_of = mpc.instance.class_of();
    for &s in &solution.chosen {
        dominators.insert(mpc.set_vertices[s]);
        touched[class_of[s]] = true;
        for &e in &mpc.instance.sets[s] {
            covered.insert(mpc.elements[e]);
        }
    }
    let mut deleted = reduced.pruned.clone();
    deleted.union_with(&reduced.modulator.difference(&covered));
    for (q, clique) in reduced.cliques.iter().enumerate() {
        if !touched[q] {
            deleted.union_with(&clique.intersection(&reduced.blue));
        }
    }
    debug_assert_eq!(deleted.len(), cost);
    Ok(Some(GuessOutcome {
        cost,
        certificate: Certificate { deleted, dominators },
        universe: reduced.modulator.len(),
    }))
}

pub fn solve_dc(g: &RedBlueGraph, k: usize, gamma: usize) -> Result<SolveResult, MpcError> {
    solve_dc_with_stats(g, k, gamma).map(|(result, _)| result)
}

pub fn solve_dc_with_stats(g: &RedBlueGraph, k: usize, gamma: usize) -> Result<(SolveResult, DcStats), MpcError> {
    let (outcome, elapsed) = timed(|| -> Result<_, MpcError> {
        let modulator = find_cluster_deletion_set(g);
        solve_with_modulator(g, &modulator, k, gamma)
    });
    let (best, stats) = outcome?;
    let result = match best {
        Some(best) => SolveResult {
            answer: best.cost <= k,
            min_deletions: Some(best.cost),
            witness: Some(best.certificate),
            solver: SolverKind::DistanceToCluster,
            elapsed,
        },
        None => SolveResult {
            answer: false,
            min_deletions: None,
            witness: None,
            solver: SolverKind::DistanceToCluster,
            elapsed,
        },
    };
    Ok((result, stats))
}

fn solve_with_modulator(
    g: &RedBlueGraph,
    modulator: &VertexSet,
    k: usize,
    gamma: usize,
) -> Result<(Option<GuessOutcome>, DcStats), MpcError> {
    let candidates: Vec<Vertex> = modulator.intersection(g.red()).iter().collect();
    assert!(candidates.len() < 64, "modulator too large to enumerate");
    let guesses = 1u64 << candidates.len();
    let outcomes: Vec<Option<GuessOutcome>> = (0..guesses)
        .into_par_iter()
        .map(|mask| {
            let guess = g.set_of(candidates.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v));
            solve_guess(g, modulator, &guess, k, gamma)
        })
        .collect::<Result<_, _>>()?;
    let mut stats = DcStats {
        modulator_size: modulator.len(),
        guesses: guesses as usize,
        ..DcStats::default()
    };
    let mut best: Option<GuessOutcome> = None;
    for outcome in outcomes {
        match outcome {
            None => stats.skipped += 1,
            Some(o) => {
                stats.subset_work += 1u128 << o.universe;
                if best.as_ref().is_none_or(|b| o.cost < b.cost) {
                    best = Some(o);
                }
            }
        }
    }
    Ok((best, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::{c4_all, uniform};
    use crate::graph::Color;
    use crate::oracle::{solve_rbr_bruteforce, SearchMode};

    #[test]
    fn cluster_input() {
        let g = RedBlueGraph::new(&[Color::Red, Color::Blue], &[(0, 1)]).unwrap();
        let r = solve_dc(&g, 0, 1).unwrap();
        assert!(r.answer);
        let w = r.witness.unwrap();
        assert!(w.deleted.is_empty());
        assert_eq!(w.dominators.to_vec(), vec![0]);
    }

    #[test]
    fn c4_matches_oracle() {
        let g = c4_all();
        for (k, gamma) in [(1, 1), (0, 1), (0, 2), (2, 0)] {
            let dc = solve_dc(&g, k, gamma).unwrap();
            let bf = solve_rbr_bruteforce(&g, k, gamma, SearchMode::Minimum).unwrap();
            assert_eq!(dc.answer, bf.answer, "k={k} gamma={gamma}");
            assert_eq!(dc.min_deletions, bf.min_deletions);
            g.verify_certificate(&dc.witness.unwrap(), dc.min_deletions.unwrap(), gamma).unwrap();
        }
    }

    #[test]
    fn star_center_guess_clears_leaves() {
        let mut colors = vec![Color::Blue; 5];
        colors[0] = Color::Red;
        let g = RedBlueGraph::new(&colors, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        let m = g.set_of([0]);
        let r = reduce_with_guess(&g, &m, &g.set_of([0]), 2, 3).unwrap();
        assert_eq!(r.graph.n(), 0);
        assert_eq!(r.deletion_budget, Some(2));
        assert_eq!(r.domination_budget, 2);
    }

    #[test]
    fn empty_guess_prunes_red_free_clique() {
        // isolated blue vertex 0, P3 1-2-3 with modulator {2}
        let g = RedBlueGraph::new(&[Color::Blue, Color::Red, Color::RedBlue, Color::Blue], &[(1, 2), (2, 3)]).unwrap();
        let m = g.set_of([2]);
        let r = reduce_with_guess(&g, &m, &g.empty_set(), 3, 1).unwrap();
        assert_eq!(r.pruned.to_vec(), vec![0, 3]);
        assert_eq!(r.deletion_budget, Some(1));
        assert!(r.modulator.contains(2));
        assert!(!r.graph.red().contains(r.original.iter().position(|&v| v == 2).unwrap()));
        assert!(reduce_with_guess(&g, &m, &g.set_of([2]), 3, 0).is_none());
    }

    #[test]
    fn mpc_shape() {
        // blue modulator vertex 0 adjacent to reds 1 and 2 in different cliques
        let g = RedBlueGraph::new(&[Color::Blue, Color::Red, Color::Red, Color::Blue], &[(0, 1), (0, 2), (2, 3)]).unwrap();
        let m = g.set_of([0]);
        let r = reduce_with_guess(&g, &m, &g.empty_set(), 5, 2).unwrap();
        let mpc = build_mpc_instance(&g, &r);
        assert_eq!(mpc.instance.universe_size, 1);
        assert_eq!(mpc.instance.sets, vec![vec![0], vec![0]]);
        assert_eq!(mpc.instance.classes, vec![vec![0], vec![1]]);
        assert_eq!(mpc.instance.class_price, vec![0, 1]);
        assert_eq!(mpc.instance.max_sets, 2);
    }

    #[test]
    fn guess_count_is_three_to_the_dc() {
        let g = uniform(5, Color::RedBlue, &[(0, 1), (1, 2), (2, 3), (3, 4)]);
        let (_, stats) = solve_dc_with_stats(&g, 5, 5).unwrap();
        let dc = stats.modulator_size as u32;
        assert_eq!(stats.guesses, 1 << dc);
        assert_eq!(stats.subset_work, 3u128.pow(dc));
    }
}
