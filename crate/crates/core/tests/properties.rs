use proptest::prelude::*;

use kmult::gen::{gen_random, gen_uca};
use kmult::io::{parse_model, serialize_model};
use kmult::labeling::{make_labels, Distance};
use kmult::model::nav_brute;
use kmult::oracle::{digraph_distances, power_represents, verify_k_multiplicative};
use kmult::power::digraph;
use kmult::solver::{solve_fixed, SolveOutcome};
use kmult::*;

fn model(max_n: usize) -> impl Strategy<Value = PcaModel> {
    (1..=max_n, any::<bool>(), any::<u64>()).prop_filter_map("generator gave up", |(n, spca, seed)| {
        gen_random(n, spca, seed).ok()
    })
}

fn connected(max_n: usize) -> impl Strategy<Value = PcaModel> {
    model(max_n).prop_filter("disconnected", |m| m.is_connected())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn nav_matches_definitions(m in model(14)) {
        prop_assert_eq!(m.nav(), &nav_brute(&m));
    }

    #[test]
    fn io_round_trip(m in model(14)) {
        let text = serialize_model(&m);
        let back = parse_model(&text).unwrap();
        prop_assert_eq!(&back, &m);
        prop_assert_eq!(serialize_model(&back), text);
    }

    #[test]
    fn powers_represent_digraph_powers(m in model(10), k in 0usize..12) {
        prop_assume!(k < m.omega());
        prop_assert!(power_represents(&m, k).unwrap());
        let pw = power(&m, k).unwrap();
        let w = {
            use kmult::power::ArcFamily;
            pw.word()
        };
        // Extremes of a power are pairwise distinct.
        prop_assert_eq!(w.len(), 2 * m.len());
        if k == 1 {
            prop_assert!(equivalent(&m, &pw) || !m.is_connected());
        }
    }

    #[test]
    fn equivalence_is_stable_under_transforms(m in model(12)) {
        prop_assert!(equivalent(&m, &m));
        prop_assert!(equivalent(&m, &m.to_even()));
        prop_assert!(equivalent(&m.to_even(), &m.to_even().to_even()));
    }

    #[test]
    fn unroll_copies_each_arc(m in model(10), lambda in 1usize..5) {
        prop_assume!(!m.is_pig());
        let (u, map) = m.unroll(lambda).unwrap();
        prop_assert_eq!(u.len(), lambda * m.len());
        prop_assert_eq!(u.circle(), lambda as i128 * m.circle());
        let mut count = vec![0usize; m.len()];
        for &(id, copy) in &map {
            prop_assert!(copy < lambda);
            count[id] += 1;
        }
        prop_assert!(count.iter().all(|&c| c == lambda));
        for (i, &(id, copy)) in map.iter().enumerate() {
            prop_assert_eq!(u.arc_len(i), m.arc_len(id));
            let _ = copy;
        }
    }

    #[test]
    fn incremental_equals_direct(m in connected(12)) {
        for k in 0..m.omega().min(12) {
            prop_assert_eq!(build_syn_incremental(&m, k).unwrap(), build_syn(&m, k).unwrap(), "k = {}", k);
        }
    }

    #[test]
    fn decisions_are_certified(m in model(10)) {
        for k in 1..m.omega() {
            match decide(&m, k).unwrap() {
                Decision::Yes { .. } => {
                    let out = construct(&m, k).unwrap();
                    prop_assert!(verify_k_multiplicative(&out.model, &m, k).is_ok());
                }
                Decision::No { cert, .. } => prop_assert!(authenticate_negative(&m, &cert)),
            }
        }
    }

    #[test]
    fn feasible_solutions_verify(m in connected(8), k in 1usize..4, c in 1i128..60, ell in 1i128..20) {
        prop_assume!(k < m.omega());
        let (c, ell) = (2 * c, 2 * ell);
        if let SolveOutcome::Feasible { model, .. } = solve_fixed(&m, k, c, ell).unwrap() {
            prop_assert!(verify_k_multiplicative(&model, &m, k).is_ok());
        }
    }

    #[test]
    fn labels_agree_with_bfs(m in model(9)) {
        let k = m.omega() - 1;
        prop_assume!(k >= 1);
        prop_assume!(decide(&m, k).unwrap().is_yes());
        let u = construct(&m, k).unwrap().model;
        let ls = make_labels(&u, k).unwrap();
        let d = digraph(&m);
        for a in 0..m.len() {
            let dist = digraph_distances(&d, a);
            for b in 0..m.len() {
                let want = match dist[b] {
                    Some(0) => Distance::Zero,
                    Some(x) if x <= k => Distance::Within(x),
                    _ => Distance::MoreThanK,
                };
                prop_assert_eq!(ls.query(a, b), want, "{} -> {}", a, b);
            }
        }
    }

    #[test]
    fn uniform_models_are_one_multiplicative(n in 2usize..40, seed in any::<u64>()) {
        let m = gen_uca(n, seed);
        prop_assert!(m.uniform_length().is_some());
        prop_assert!(verify_k_multiplicative(&m, &m, 1).is_ok());
        prop_assert!(decide(&m, 1).unwrap().is_yes());
    }
}
