//! Seeded instance generators.
//!
//! All randomness comes from xoshiro256** seeded through SplitMix64 (the
//! `seed_from_u64` of `rand_xoshiro`), so a `(parameters, seed)` pair gives
//! the same instance on every platform. Probabilities are compared against
//! `(next_u64 >> 11) · 2⁻⁵³`, and bounded integers are drawn by rejection
//! from the low bits of `next_u64`.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

use crate::decomp::cw_expr::{CwExpr, Label};
use crate::graph::{Color, RedBlueGraph, Vertex};

pub struct InstanceRng(Xoshiro256StarStar);

impl InstanceRng {
    pub fn new(seed: u64) -> Self {
        Self(Xoshiro256StarStar::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform in `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.unit() < p
    }

    /// Uniform in `0..n`; `n` must be positive.
    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0);
        let n = n as u64;
        let zone = u64::MAX - u64::MAX % n;
        loop {
            let x = self.0.next_u64();
            if x < zone {
                return (x % n) as usize;
            }
        }
    }

    /// Uniform in `lo..=hi`.
    pub fn between(&mut self, lo: usize, hi: usize) -> usize {
        lo + self.below(hi - lo + 1)
    }
}

/// Independent per-vertex color probabilities. A vertex that draws neither
/// color draws again.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ColorParams {
    pub red_prob: f64,
    pub blue_prob: f64,
}

impl Default for ColorParams {
    fn default() -> Self {
        Self {
            red_prob: 0.6,
            blue_prob: 0.6,
        }
    }
}

impl ColorParams {
    pub fn draw(&self, rng: &mut InstanceRng) -> Color {
        assert!(self.red_prob > 0.0 || self.blue_prob > 0.0, "some color must be possible");
        loop {
            let red = rng.chance(self.red_prob);
            let blue = rng.chance(self.blue_prob);
            if let Some(c) = Color::from_flags(red, blue) {
                return c;
            }
        }
    }
}

/// Erdős–Rényi graph: colors for vertices in order, then each pair `u < v`
/// in lexicographic order.
pub fn gen_er(n: usize, edge_prob: f64, red_prob: f64, blue_prob: f64, seed: u64) -> RedBlueGraph {
    let mut rng = InstanceRng::new(seed);
    let params = ColorParams { red_prob, blue_prob };
    let colors: Vec<Color> = (0..n).map(|_| params.draw(&mut rng)).collect();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.chance(edge_prob) {
                edges.push((u, v));
            }
        }
    }
    RedBlueGraph::new(&colors, &edges).expect("valid edges")
}

/// Disjoint cliques (vertices `0..num_cliques·clique_size`) followed by a
/// modulator whose vertices attach to each clique vertex, and to each other,
/// with probability `attach_prob`.
pub fn gen_cluster_plus_modulator(
    num_cliques: usize,
    clique_size: usize,
    modulator_size: usize,
    attach_prob: f64,
    colors: ColorParams,
    seed: u64,
) -> RedBlueGraph {
    let mut rng = InstanceRng::new(seed);
    let body = num_cliques * clique_size;
    let n = body + modulator_size;
    let vertex_colors: Vec<Color> = (0..n).map(|_| colors.draw(&mut rng)).collect();
    let mut edges = Vec::new();
    for q in 0..num_cliques {
        let base = q * clique_size;
        for u in base..base + clique_size {
            for v in u + 1..base + clique_size {
                edges.push((u, v));
            }
        }
    }
    for m in body..n {
        for u in 0..m {
            if rng.chance(attach_prob) {
                edges.push((u, m));
            }
        }
    }
    RedBlueGraph::new(&vertex_colors, &edges).expect("valid edges")
}

/// How often each random union is followed by a join and by a rename.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OpMix {
    pub join_prob: f64,
    pub rename_prob: f64,
}

impl OpMix {
    pub const NONE: OpMix = OpMix {
        join_prob: 0.0,
        rename_prob: 0.0,
    };
    pub const DENSE: OpMix = OpMix {
        join_prob: 0.9,
        rename_prob: 0.2,
    };
}

impl Default for OpMix {
    fn default() -> Self {
        Self {
            join_prob: 0.6,
            rename_prob: 0.3,
        }
    }
}

/// A random expression over labels `1..=cw` with vertex ids `1..=n`, and the
/// graph it evaluates to.
///
/// Leaves get uniform labels and start in a pool. Two random pool members are
/// repeatedly replaced by their union, after which up to two rounds of
/// "join with probability `join_prob`, rename with probability `rename_prob`"
/// are applied on random distinct labels.
pub fn gen_from_random_cw_expr(
    cw: usize,
    n: usize,
    op_mix: OpMix,
    colors: ColorParams,
    seed: u64,
) -> (RedBlueGraph, CwExpr) {
    assert!(cw >= 1 && n >= 1);
    let mut rng = InstanceRng::new(seed);
    let mut pool: Vec<CwExpr> = (1..=n)
        .map(|id| {
            let label = rng.between(1, cw) as Label;
            CwExpr::vertex(id, label, colors.draw(&mut rng))
        })
        .collect();
    let pair = |rng: &mut InstanceRng| -> (Label, Label) {
        let a = rng.between(1, cw);
        let b = (a + rng.between(1, cw - 1) - 1) % cw + 1;
        (a as Label, b as Label)
    };
    while pool.len() > 1 {
        let i = rng.below(pool.len());
        let left = pool.swap_remove(i);
        let j = rng.below(pool.len());
        let right = pool.swap_remove(j);
        let mut e = CwExpr::union(left, right);
        if cw >= 2 {
            for _ in 0..2 {
                if rng.chance(op_mix.join_prob) {
                    let (a, b) = pair(&mut rng);
                    e = CwExpr::join(a, b, e);
                }
                if rng.chance(op_mix.rename_prob) {
                    let (a, b) = pair(&mut rng);
                    e = CwExpr::rename(a, b, e);
                }
            }
        }
        pool.push(e);
    }
    let expr = pool.pop().expect("n >= 1");
    let graph = expr.evaluate().expect("generated expressions are well formed").graph;
    (graph, expr)
}

/// Recursive modular composition: each internal module has between 2 and
/// `fanout` children joined by a random quotient graph (edge probability ½),
/// down to `depth` levels of single vertices. Vertices are numbered in
/// depth-first order. A `fanout` below 2 yields a single vertex.
pub fn gen_modular(depth: usize, fanout: usize, colors: ColorParams, seed: u64) -> RedBlueGraph {
    let mut rng = InstanceRng::new(seed);
    let mut vertex_colors = Vec::new();
    let mut edges = Vec::new();
    let depth = if fanout < 2 { 0 } else { depth };
    build_module(&mut rng, depth, fanout, colors, &mut vertex_colors, &mut edges);
    RedBlueGraph::new(&vertex_colors, &edges).expect("valid edges")
}

fn build_module(
    rng: &mut InstanceRng,
    depth: usize,
    fanout: usize,
    colors: ColorParams,
    vertex_colors: &mut Vec<Color>,
    edges: &mut Vec<(Vertex, Vertex)>,
) -> Vec<Vertex> {
    if depth == 0 {
        vertex_colors.push(colors.draw(rng));
        return vec![vertex_colors.len() - 1];
    }
    let c = rng.between(2, fanout);
    let mut quotient = Vec::new();
    for i in 0..c {
        for j in i + 1..c {
            if rng.chance(0.5) {
                quotient.push((i, j));
            }
        }
    }
    let parts: Vec<Vec<Vertex>> = (0..c)
        .map(|_| build_module(rng, depth - 1, fanout, colors, vertex_colors, edges))
        .collect();
    for (i, j) in quotient {
        for &u in &parts[i] {
            for &v in &parts[j] {
                edges.push((u, v));
            }
        }
    }
    parts.concat()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::{find_cluster_deletion_set, is_cluster, modular_decomposition};

    #[test]
    fn er_extremes() {
        let g = gen_er(4, 0.0, 1.0, 1.0, 7);
        assert_eq!(g.edge_count(), 0);
        assert!(g.vertices().all(|v| g.color(v) == Color::RedBlue));
        let k4 = gen_er(4, 1.0, 1.0, 0.0, 7);
        assert_eq!(k4.edge_count(), 6);
        assert!(k4.blue().is_empty());
        assert_eq!(gen_er(9, 0.4, 0.5, 0.5, 11), gen_er(9, 0.4, 0.5, 0.5, 11));
        assert_eq!(gen_er(0, 0.5, 0.5, 0.5, 1).n(), 0);
    }

    #[test]
    fn cluster_generator() {
        let g = gen_cluster_plus_modulator(3, 3, 0, 0.5, ColorParams::default(), 1);
        assert!(is_cluster(&g));
        let apex = gen_cluster_plus_modulator(2, 3, 1, 1.0, ColorParams::default(), 1);
        assert_eq!(apex.neighbors(6).len(), 6);
        assert!(find_cluster_deletion_set(&apex).len() <= 1);
        for seed in 0..10 {
            let g = gen_cluster_plus_modulator(4, 3, 2, 0.4, ColorParams::default(), seed);
            assert!(find_cluster_deletion_set(&g).len() <= 2);
        }
    }

    #[test]
    fn cw_generator() {
        let (g, e) = gen_from_random_cw_expr(1, 3, OpMix::NONE, ColorParams::default(), 3);
        assert_eq!((g.n(), g.edge_count()), (3, 0));
        assert!(e.validate(&g));
        for seed in 0..20 {
            let (g, e) = gen_from_random_cw_expr(3, 8, OpMix::DENSE, ColorParams::default(), seed);
            assert!(e.validate(&g));
            assert!(e.width() <= 3);
        }
    }

    #[test]
    fn modular_generator() {
        for seed in 0..20 {
            let g = gen_modular(2, 4, ColorParams::default(), seed);
            assert!(modular_decomposition(&g).binarized().width() <= 4);
            assert_eq!(g, gen_modular(2, 4, ColorParams::default(), seed));
        }
        let k2_or_2k1 = gen_modular(1, 2, ColorParams::default(), 5);
        assert_eq!(k2_or_2k1.n(), 2);
        // some seed draws the complete quotient on two children
        let k2 = (0..).map(|s| gen_modular(1, 2, ColorParams::default(), s)).find(|g| g.edge_count() == 1).unwrap();
        assert!(k2.has_edge(0, 1));
        assert_eq!(gen_modular(4, 1, ColorParams::default(), 0).n(), 1);
    }

    #[test]
    fn dense_two_label_expressions() {
        for seed in 0..20 {
            let (g, e) = gen_from_random_cw_expr(2, 10, OpMix::DENSE, ColorParams::default(), seed);
            assert!(e.validate(&g));
            assert!(e.width() <= 2);
            assert!(g.edge_count() > 0);
        }
    }
}
