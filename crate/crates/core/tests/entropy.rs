mod common;

use genwitness::criteria::{bound_value, CriterionKind};
use genwitness::entropy::{
    gaussian_renyi, gaussian_shannon, renyi_entropy, renyi_entropy_numeric, shannon_entropy,
    shannon_entropy_numeric,
};
use genwitness::states::{marginal, random::RandomGaussian};
use genwitness::{Marginal, QuadratureConfig, Quadrature, State};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn mixture() -> impl Strategy<Value = Marginal> {
    (1usize..=4)
        .prop_flat_map(|k| {
            (
                proptest::collection::vec(0.05..1.0f64, k),
                proptest::collection::vec(-5.0..5.0f64, k),
                proptest::collection::vec(-3.0..2.0f64, k),
            )
        })
        .prop_map(|(w, m, logv)| {
            let total: f64 = w.iter().sum();
            Marginal::new(
                w.iter().map(|x| x / total).collect(),
                m,
                logv.iter().map(|l| 10f64.powf(*l)).collect(),
            )
            .unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn quadrature_matches_closed_form(log_var in -6.0..6.0f64, mean in -100.0..100.0f64) {
        let var = 10f64.powf(log_var);
        let m = Marginal::gaussian(mean, var).unwrap();
        let cfg = QuadratureConfig::default();
        let numeric = shannon_entropy_numeric(&m, &cfg).unwrap();
        prop_assert!((numeric - gaussian_shannon(var)).abs() < 1e-8, "var {var}: {numeric}");
    }

    #[test]
    fn renyi_quadrature_matches_closed_form(log_var in -4.0..4.0f64, alpha in 0.6..4.0f64) {
        prop_assume!((alpha - 1.0).abs() > 1e-3);
        let var = 10f64.powf(log_var);
        let m = Marginal::gaussian(0.3, var).unwrap();
        let numeric = renyi_entropy_numeric(&m, alpha, &QuadratureConfig::default()).unwrap();
        prop_assert!((numeric - gaussian_renyi(var, alpha)).abs() < 1e-8);
    }

    #[test]
    fn entropy_is_concave(m in mixture()) {
        let cfg = QuadratureConfig::default();
        let whole = shannon_entropy(&m, &cfg).unwrap();
        let parts: f64 = m.weights.iter().zip(&m.variances)
            .map(|(w, v)| w * gaussian_shannon(*v))
            .sum();
        prop_assert!(whole >= parts - 1e-9, "{whole} < {parts}");
    }

    #[test]
    fn gaussian_maximizes_entropy(m in mixture()) {
        let h = shannon_entropy(&m, &QuadratureConfig::default()).unwrap();
        prop_assert!(h <= gaussian_shannon(m.variance()) + 1e-9);
    }
}

/// Any canonical pair obeys the Rényi relation with unit commutator.
#[test]
fn renyi_relation_on_random_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let cfg = QuadratureConfig::default();
    let sampler = RandomGaussian::default();
    for i in 0..100 {
        let n = 1 + i % 4;
        let state = if i % 2 == 0 {
            State::pure(sampler.sample(&mut rng, n))
        } else {
            State::from_weighted(vec![
                (0.5, sampler.sample(&mut rng, n)),
                (0.5, sampler.sample(&mut rng, n)),
            ])
            .unwrap()
        };
        let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let norm = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
        let u: Vec<f64> = raw.iter().map(|x| x / norm).collect();
        let alpha = rng.gen_range(0.6..3.0);
        let kind = CriterionKind::renyi(alpha).unwrap();
        let CriterionKind::Renyi { beta, .. } = kind else { unreachable!() };
        let px = marginal(&state, &u, Quadrature::Position).unwrap();
        let pp = marginal(&state, &u, Quadrature::Momentum).unwrap();
        let total = renyi_entropy(&px, alpha, &cfg).unwrap() + renyi_entropy(&pp, beta, &cfg).unwrap();
        assert!(total >= bound_value(kind, 1.0) - 1e-8, "state {i}: {total}");
    }
}

#[test]
fn vacuum_saturates_renyi_and_shannon() {
    let vac = Marginal::gaussian(0.0, 0.5).unwrap();
    let cfg = QuadratureConfig::default();
    for alpha in [0.75, 2.0, 5.0] {
        let kind = CriterionKind::renyi(alpha).unwrap();
        let CriterionKind::Renyi { beta, .. } = kind else { unreachable!() };
        let total = renyi_entropy(&vac, alpha, &cfg).unwrap() + renyi_entropy(&vac, beta, &cfg).unwrap();
        assert!((total - bound_value(kind, 1.0)).abs() < 1e-12);
    }
    let h = 2.0 * shannon_entropy(&vac, &cfg).unwrap();
    assert!((h - bound_value(CriterionKind::ShannonEntropic, 1.0)).abs() < 1e-12);
}
