use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use relengine_core::bat::reliability_bat;
use relengine_core::decomposition::decompose;
use relengine_core::generate::random_network;
use relengine_core::paths::{min_cut_partition, shortest_path};
use relengine_core::quick_bat::{quick_bat_trace, SuperVector};
use relengine_core::stm::{qb2_trace, stm_convolve, tabulate_stage, MainBat, SourceTargetMatrix};
use relengine_core::weights::ld_weights;
use relengine_core::{
    first_connected, is_connected, last_disconnected, reliability_oracle, reliability_qb2,
    reliability_quick_bat, vector_probability, ArcStateVector, Network,
};

fn network(seed: u64, n: usize, m: usize) -> Network {
    random_network(&mut ChaCha8Rng::seed_from_u64(seed), n, m)
}

fn arb_network(max_m: usize) -> impl Strategy<Value = Network> {
    (any::<u64>(), 4usize..=8, 5usize..=max_m).prop_map(|(s, n, m)| network(s, n, m))
}

fn arb_matrix(rows: usize, cols: usize) -> impl Strategy<Value = SourceTargetMatrix> {
    proptest::collection::vec(proptest::collection::vec(0u8..=1, cols), rows)
        .prop_map(|r| SourceTargetMatrix::from_rows(&r))
}

fn arb_chain() -> impl Strategy<Value = (SourceTargetMatrix, SourceTargetMatrix, SourceTargetMatrix)>
{
    (1usize..=6, 1usize..=6, 1usize..=6, 1usize..=6)
        .prop_flat_map(|(a, b, c, d)| (arb_matrix(a, b), arb_matrix(b, c), arb_matrix(c, d)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn backends_match_the_oracle(net in arb_network(14)) {
        let oracle = reliability_oracle(&net).unwrap();
        prop_assert!((reliability_bat(&net).unwrap() - oracle).abs() <= 1e-10);
        prop_assert!((reliability_quick_bat(&net).unwrap() - oracle).abs() <= 1e-10);
        prop_assert!((reliability_qb2(&net).unwrap() - oracle).abs() <= 1e-10);
    }

    #[test]
    fn raising_an_arc_probability_never_hurts(net in arb_network(12), pick in any::<prop::sample::Index>(), bump in 0.0f64..1.0) {
        let k = pick.index(net.arc_count());
        let mut ps: Vec<f64> = net.arcs().iter().map(|a| a.p).collect();
        ps[k] += (1.0 - ps[k]) * bump;
        let raised = net.with_probabilities(&ps).unwrap();
        prop_assert!(reliability_qb2(&raised).unwrap() >= reliability_qb2(&net).unwrap() - 1e-12);
    }

    #[test]
    fn vector_probabilities_sum_to_one(net in arb_network(10)) {
        let m = net.arc_count();
        let total: f64 = (0..1u64 << m)
            .map(|i| vector_probability(&net, &ArcStateVector::from_index(m, i).unwrap()))
            .sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn landmarks_bound_the_connected_vectors(net in arb_network(14)) {
        let m = net.arc_count();
        let fc = first_connected(&net).unwrap();
        let ld = last_disconnected(&net).unwrap();
        prop_assert!(is_connected(&net, &fc));
        prop_assert!(!is_connected(&net, &ld));
        for i in 0..1u64 << m {
            let x = ArcStateVector::from_index(m, i).unwrap();
            if i < fc.bat_index() {
                prop_assert!(!is_connected(&net, &x));
            }
            if i > ld.bat_index() {
                prop_assert!(is_connected(&net, &x));
            }
        }
    }

    #[test]
    fn power_of_two_weights_pick_unique_extremes(net in arb_network(12)) {
        // Distinct powers of two make every arc subset's weight distinct, so
        // the optimum is unique and equals the brute-force extreme index.
        let m = net.arc_count();
        let w = ld_weights(&net);
        let path = shortest_path(&net, &w).unwrap();
        let path_index: u64 = path.iter().map(|&id| 1u64 << (id - 1)).sum();
        let cut = min_cut_partition(&net, &w, &[1]).unwrap();
        let cut_index: u64 = cut.arcs.iter().map(|&id| 1u64 << (id - 1)).sum();
        let all = (1u64 << m) - 1;
        let first = (0..=all).find(|&i| is_connected(&net, &ArcStateVector::from_index(m, i).unwrap()));
        let last = (0..=all).rev().find(|&i| !is_connected(&net, &ArcStateVector::from_index(m, i).unwrap()));
        prop_assert_eq!(Some(path_index), first);
        prop_assert_eq!(Some(all & !cut_index), last);
    }

    #[test]
    fn quick_bat_never_probes_more_than_the_bat(net in arb_network(14)) {
        let trace = quick_bat_trace(&net).unwrap();
        prop_assert!(trace.outcome.counters.connectivity_checks <= 1u64 << net.arc_count());
        let m = net.arc_count();
        // Accepted super vectors are connected and pairwise disjoint.
        let mut covered = 0u64;
        for i in 0..1u64 << m {
            let x = ArcStateVector::from_index(m, i).unwrap();
            let hits = trace.accepted.iter().filter(|s: &&SuperVector| s.covers(&x)).count();
            prop_assert!(hits <= 1);
            if hits == 1 {
                prop_assert!(is_connected(&net, &x));
                covered += 1;
            }
        }
        prop_assert!(covered <= 1u64 << m);
    }

    #[test]
    fn convolution_is_associative((a, b, c) in arb_chain()) {
        let left = stm_convolve(&stm_convolve(&a, &b).unwrap(), &c).unwrap();
        let right = stm_convolve(&a, &stm_convolve(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn convolution_is_monotone((a, b, _c) in arb_chain(), r in 0usize..6, col in 0usize..6, on_left in any::<bool>()) {
        let before = stm_convolve(&a, &b).unwrap();
        let (mut a2, mut b2) = (a.clone(), b.clone());
        if on_left {
            a2.set(r % a.row_count(), col % a.col_count(), true);
        } else {
            b2.set(r % b.row_count(), col % b.col_count(), true);
        }
        let after = stm_convolve(&a2, &b2).unwrap();
        for i in 0..before.row_count() {
            for j in 0..before.col_count() {
                prop_assert!(!before.get(i, j) || after.get(i, j));
            }
        }
    }

    #[test]
    fn decomposition_invariants(net in arb_network(14)) {
        let d = decompose(&net).unwrap();
        let mut seen = vec![0usize; net.arc_count() + 1];
        for s in &d.stages {
            for &a in &s.arc_ids {
                seen[a] += 1;
            }
        }
        prop_assert!(seen[1..].iter().all(|&c| c == 1));
        for c in &d.cuts {
            let on_path = c.arcs.iter().filter(|a| d.shortest_path_arcs.contains(a)).count();
            prop_assert_eq!(on_path, 1);
            prop_assert!(c.arcs.contains(&c.path_arc));
        }
        for pair in d.cuts.windows(2) {
            prop_assert!(pair[1].target_side.iter().all(|v| pair[0].target_side.contains(v)));
        }
        let eta = d.stages.len();
        prop_assert_eq!(&d.stages[0].source_nodes, &vec![1]);
        prop_assert_eq!(&d.stages[eta - 1].target_nodes, &vec![net.node_count()]);
        for pair in d.stages.windows(2) {
            prop_assert_eq!(&pair[0].target_nodes, &pair[1].source_nodes);
        }
    }

    #[test]
    fn stage_mass_is_conserved(net in arb_network(14)) {
        let d = decompose(&net).unwrap();
        let main = MainBat::for_stages(&d.stages).unwrap();
        for s in &d.stages {
            let set = tabulate_stage(&net, s, &main).unwrap();
            prop_assert!((set.mass() + set.discarded_mass() - 1.0).abs() <= 1e-12);
        }
        for t in qb2_trace(&net).unwrap().stage_tables {
            prop_assert!((t.mass + t.discarded_mass - 1.0).abs() <= 1e-12);
        }
    }
}

#[test]
fn repeated_runs_are_bit_identical() {
    for seed in 0..20 {
        let net = network(seed, 8, 14);
        assert_eq!(
            reliability_qb2(&net).unwrap().to_bits(),
            reliability_qb2(&net).unwrap().to_bits()
        );
        assert_eq!(
            reliability_oracle(&net).unwrap().to_bits(),
            reliability_oracle(&net).unwrap().to_bits()
        );
    }
}
