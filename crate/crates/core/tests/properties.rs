use proptest::prelude::*;

use rbr_core::generate::{gen_er, gen_from_random_cw_expr, ColorParams, OpMix};
use rbr_core::{
    gamma_rb, gamma_rb_bruteforce, solve_cw, solve_dc, solve_mw, solve_rbr_bruteforce, CwExpr, CwOptions, RedBlueGraph,
    SearchMode, SolverKind, UnionMode,
};

fn small_graph() -> impl Strategy<Value = RedBlueGraph> {
    (1usize..=9, 0.0f64..1.0, 0.2f64..1.0, 0.2f64..1.0, any::<u64>())
        .prop_map(|(n, p, red, blue, seed)| gen_er(n, p, red, blue, seed))
}

fn expression_instance() -> impl Strategy<Value = (RedBlueGraph, CwExpr)> {
    (1usize..=4, 1usize..=9, 0.0f64..1.0, 0.0f64..1.0, any::<u64>()).prop_map(|(cw, n, join, rename, seed)| {
        let mix = OpMix {
            join_prob: join,
            rename_prob: rename,
        };
        gen_from_random_cw_expr(cw, n, mix, ColorParams::default(), seed)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn rbg_text_round_trips(g in small_graph()) {
        let text = g.to_rbg();
        let parsed = RedBlueGraph::parse_rbg(&text).unwrap();
        prop_assert_eq!(&parsed, &g);
        prop_assert_eq!(parsed.to_rbg(), text);
    }

    #[test]
    fn expression_text_round_trips((g, e) in expression_instance()) {
        let parsed = CwExpr::parse(&e.to_text()).unwrap();
        prop_assert_eq!(&parsed, &e);
        prop_assert!(parsed.validate(&g));
    }

    #[test]
    fn linear_expression_evaluates_to_graph(g in small_graph()) {
        let e = CwExpr::linear_from_graph(&g).unwrap();
        prop_assert!(e.validate(&g));
        prop_assert!(e.width() <= g.n() + 1);
    }

    #[test]
    fn witnesses_certify_yes_answers(g in small_graph(), k in 0usize..4, gamma in 0usize..4) {
        let expr = CwExpr::linear_from_graph(&g).unwrap();
        let with_witness = CwOptions { witness: true, ..CwOptions::default() };
        let results = [
            solve_dc(&g, k, gamma).unwrap(),
            solve_mw(&g, k, gamma).unwrap(),
            solve_cw(&g, &expr, k, gamma, &with_witness).unwrap(),
        ];
        for r in results {
            if r.answer {
                let cert = r.witness.expect("yes answers carry a witness");
                prop_assert_eq!(g.verify_certificate(&cert, k, gamma), Ok(()), "{}", r.solver);
            }
        }
    }

    #[test]
    fn fast_union_matches_naive((g, e) in expression_instance(), k in 0usize..3, gamma in 0usize..4) {
        let naive = solve_cw(&g, &e, k, gamma, &CwOptions::default()).unwrap();
        let fast = solve_cw(&g, &e, k, gamma, &CwOptions { union_mode: UnionMode::Fast, ..CwOptions::default() }).unwrap();
        prop_assert_eq!(naive.min_deletions, fast.min_deletions);
        let oracle = solve_rbr_bruteforce(&g, k, gamma, SearchMode::Minimum).unwrap();
        prop_assert_eq!(naive.min_deletions, oracle.min_deletions);
    }

    #[test]
    fn minimum_deletions_fall_as_gamma_grows(g in small_graph()) {
        let mut previous = None;
        for gamma in 0..=g.n() {
            let m = solve_mw(&g, 0, gamma).unwrap().min_deletions;
            if let (Some(p), Some(m)) = (previous, m) {
                prop_assert!(m <= p);
            }
            previous = m;
        }
    }

    #[test]
    fn gamma_via_solvers_matches_oracle(g in small_graph()) {
        let want = gamma_rb_bruteforce(&g).unwrap();
        let expr = CwExpr::linear_from_graph(&g).unwrap();
        for kind in [SolverKind::DistanceToCluster, SolverKind::ModularWidth, SolverKind::CliqueWidth] {
            let got = gamma_rb(&g, kind, Some(&expr), &CwOptions::default()).unwrap();
            prop_assert_eq!(got, want, "{}", kind);
        }
    }
}
