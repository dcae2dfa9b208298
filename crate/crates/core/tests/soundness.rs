//! Separable inputs must never be flagged; entangled references must be.

mod common;

use genwitness::criteria::{bipartite_test, genuine_multi_pair, genuine_single_pair, CriterionKind};
use genwitness::operators::presets::{
    conjugate_six_pair_four_mode, two_pair_three_mode, van_loock_furusawa,
};
use genwitness::operators::relabel_modes;
use genwitness::states::{example_state, random::RandomGaussian};
use genwitness::{NamedPair, Pair, QuadratureConfig, Side, State};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const KINDS: [CriterionKind; 3] = [
    CriterionKind::SumVariance,
    CriterionKind::ProductVariance,
    CriterionKind::ShannonEntropic,
];

/// A pair whose mirrored partner across `bp` is conjugate (`ḡ = h`).
fn conjugate_pair_for(h: &[f64], bp: &genwitness::Bipartition) -> Pair {
    let g = h
        .iter()
        .enumerate()
        .map(|(j, &x)| if bp.is_transposed(j + 1, Side::A) { -x } else { x })
        .collect();
    Pair::new(h.to_vec(), g).unwrap()
}

#[test]
fn product_states_pass_bipartite_tests() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let sampler = RandomGaussian {
        max_squeezing: 1.5,
        ..RandomGaussian::default()
    };
    let cfg = QuadratureConfig::default();
    let renyi = CriterionKind::renyi(2.0).unwrap();
    for i in 0..80 {
        let n = 2 + i % 4;
        let bp = common::random_bipartition(&mut rng, n);
        let state = if i % 3 == 0 {
            State::from_weighted(vec![
                (0.3, common::product_across(&mut rng, &bp, &sampler)),
                (0.7, common::product_across(&mut rng, &bp, &sampler)),
            ])
            .unwrap()
        } else {
            State::pure(common::product_across(&mut rng, &bp, &sampler))
        };
        let pair = common::random_pair(&mut rng, n);
        for kind in KINDS {
            let rep = bipartite_test(&state, &pair, &bp, kind, &cfg).unwrap();
            assert!(!rep.is_violated(), "state {i} {kind} across {bp}: {}", rep.violation);
        }
        let conj = conjugate_pair_for(pair.h(), &bp);
        let rep = bipartite_test(&state, &conj, &bp, renyi, &cfg).unwrap();
        assert!(!rep.is_violated(), "state {i} renyi across {bp}: {}", rep.violation);
    }
}

fn full_coverage_set(n: usize) -> Vec<NamedPair> {
    let base: Pair = van_loock_furusawa(n).unwrap();
    let mut order: Vec<usize> = (1..=n).collect();
    order.swap(0, 1);
    vec![
        common::labeled("vlf", base.clone()),
        common::labeled("vlf swapped", relabel_modes(&base, &order).unwrap()),
    ]
}

#[test]
fn biseparable_mixtures_pass_genuine_tests() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let sampler = RandomGaussian::default();
    let cfg = QuadratureConfig::default();
    for i in 0..120 {
        let n = 3 + i % 2;
        let state = common::biseparable_mixture(&mut rng, n, &sampler);
        let single = van_loock_furusawa::<f64>(n).unwrap();
        for kind in KINDS {
            let rep = genuine_single_pair(&state, &single, kind, &cfg).unwrap();
            assert!(!rep.is_violated(), "mixture {i} single {kind}: {}", rep.violation);
            let rep = genuine_multi_pair(&state, &full_coverage_set(n), kind, &cfg).unwrap();
            assert!(!rep.is_violated(), "mixture {i} multi {kind}: {}", rep.violation);
        }
        let gapped: Vec<NamedPair> = if n == 3 {
            two_pair_three_mode()
        } else {
            conjugate_six_pair_four_mode()
        };
        for kind in [CriterionKind::SumVariance, CriterionKind::ProductVariance] {
            let rep = genuine_multi_pair(&state, &gapped, kind, &cfg).unwrap();
            assert!(!rep.is_violated(), "mixture {i} gapped {kind}: {}", rep.violation);
        }
    }
}

#[test]
fn random_family_members_never_flag_biseparable_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let cfg = QuadratureConfig::default();
    for _ in 0..60 {
        let n = rng.gen_range(3..=4);
        let state = common::biseparable_mixture(&mut rng, n, &RandomGaussian::default());
        let mut draw = || {
            let x: f64 = rng.gen_range(0.2..2.0);
            if rng.gen_bool(0.5) { x } else { -x }
        };
        let pair = genwitness::operators::single_pair_family(n, draw(), draw(), draw()).unwrap();
        let rep = genuine_single_pair(&state, &pair, CriterionKind::ShannonEntropic, &cfg).unwrap();
        assert!(!rep.is_violated(), "{}", rep.violation);
    }
}

#[test]
fn entangled_references_are_detected() {
    let cfg = QuadratureConfig::default();
    let state = example_state(2.0, 0.0).unwrap();
    let pairs = genwitness::operators::presets::example_pairs::<f64>();
    let rep = genuine_multi_pair(&state, &pairs, CriterionKind::SumVariance, &cfg).unwrap();
    assert!(rep.is_violated());

    let tms = State::pure(genwitness::states::two_mode_squeezed(1.0));
    let epr = Pair::new(vec![1.0, -1.0], vec![1.0, 1.0]).unwrap();
    let bp = genwitness::Bipartition::new(2, &[1]).unwrap();
    for kind in KINDS {
        assert!(bipartite_test(&tms, &epr, &bp, kind, &cfg).unwrap().is_violated(), "{kind}");
    }
}
