#![allow(dead_code)]

use genwitness::states::random::RandomGaussian;
use genwitness::{Bipartition, Component, NamedPair, Pair, State};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn random_pair<R: Rng>(rng: &mut R, n: usize) -> Pair {
    loop {
        let h: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let g: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
        if let Ok(p) = Pair::new(h, g) {
            return p;
        }
    }
}

pub fn random_bipartition<R: Rng>(rng: &mut R, n: usize) -> Bipartition {
    let all = genwitness::enumerate_bipartitions(n).unwrap();
    all.choose(rng).unwrap().clone()
}

/// Random Gaussian state that factorizes across `bp`.
pub fn product_across<R: Rng>(rng: &mut R, bp: &Bipartition, sampler: &RandomGaussian) -> Component {
    let alpha = bp.alpha().to_vec();
    let beta = bp.beta();
    let a: Component = sampler.sample(rng, alpha.len());
    let b: Component = sampler.sample(rng, beta.len());
    let joint = a.tensor(&b);
    let placed: Vec<usize> = alpha.iter().chain(&beta).copied().collect();
    let order: Vec<usize> = (1..=bp.n())
        .map(|m| placed.iter().position(|&x| x == m).unwrap() + 1)
        .collect();
    joint.permute_modes(&order).unwrap()
}

/// Mixture of 1–3 product states, each across an independently drawn bipartition.
pub fn biseparable_mixture<R: Rng>(rng: &mut R, n: usize, sampler: &RandomGaussian) -> State {
    let k = rng.gen_range(1..=3);
    let mut raw: Vec<f64> = (0..k).map(|_| rng.gen_range(0.1..1.0)).collect();
    let total: f64 = raw.iter().sum();
    raw.iter_mut().for_each(|w| *w /= total);
    let parts = raw
        .into_iter()
        .map(|w| {
            let bp = random_bipartition(rng, n);
            (w, product_across(rng, &bp, sampler))
        })
        .collect();
    State::from_weighted(parts).unwrap()
}

pub fn labeled(label: &str, pair: Pair) -> NamedPair {
    NamedPair {
        label: label.into(),
        pair,
    }
}
