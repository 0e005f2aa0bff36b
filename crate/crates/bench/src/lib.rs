//! Fixed, seeded instances shared by the benchmarks.

use rbr_core::generate::{gen_cluster_plus_modulator, gen_from_random_cw_expr, gen_modular, ColorParams, InstanceRng};
use rbr_core::{CwExpr, MpcInstance, RedBlueGraph};

pub const SEED: u64 = 17;

/// 20 cliques of 10 vertices plus a modulator of the given size.
pub fn cluster_instance(modulator: usize) -> RedBlueGraph {
    gen_cluster_plus_modulator(20, 10, modulator, 0.3, ColorParams::default(), SEED)
}

/// A modular graph of depth 3 with fan-out up to 8 and 150 to 260 vertices.
pub fn modular_instance() -> RedBlueGraph {
    (SEED..)
        .map(|seed| gen_modular(3, 8, ColorParams::default(), seed))
        .find(|g| (150..=260).contains(&g.n()))
        .expect("some seed lands in range")
}

pub fn cw_instance(cw: usize, n: usize) -> (RedBlueGraph, CwExpr) {
    gen_from_random_cw_expr(cw, n, Default::default(), ColorParams::default(), SEED)
}

/// Random coverage instance with `universe` elements and `sets` sets in
/// `sets / 2` classes.
pub fn mpc_instance(universe: usize, sets: usize, max_sets: usize) -> MpcInstance {
    let mut rng = InstanceRng::new(SEED);
    let classes = (sets / 2).max(1);
    MpcInstance {
        universe_size: universe,
        sets: (0..sets).map(|_| (0..universe).filter(|_| rng.chance(0.3)).collect()).collect(),
        classes: (0..classes).map(|c| (c..sets).step_by(classes).collect()).collect(),
        element_price: (0..universe).map(|_| rng.between(1, 5) as u64).collect(),
        class_price: (0..classes).map(|_| rng.between(0, 3) as u64).collect(),
        max_sets,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instances_are_well_formed() {
        assert_eq!(cluster_instance(4).n(), 204);
        assert!((150..=260).contains(&modular_instance().n()));
        let (g, e) = cw_instance(4, 30);
        assert!(e.validate(&g));
        assert_eq!(mpc_instance(12, 9, 4).validate(), Ok(()));
    }
}
