//! Named operator sets from the continuous-variable entanglement literature,
//! written in the `[x_j, p_k] = i δ_jk` convention.

use super::{single_pair_family, NonLocalPair};
use crate::error::Result;
use crate::scalar::Real;

/// A pair together with a human-readable label.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledPair<T> {
    pub label: String,
    pub pair: NonLocalPair<T>,
}

fn labeled<T: Real>(label: impl Into<String>, h: &[f64], g: &[f64]) -> LabeledPair<T> {
    LabeledPair {
        label: label.into(),
        pair: NonLocalPair::new(
            h.iter().map(|&x| T::lit(x)).collect(),
            g.iter().map(|&x| T::lit(x)).collect(),
        )
        .expect("preset coefficients are valid"),
    }
}

/// Two-mode bipartite criteria expressed as (measured) pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TwoModePreset {
    /// Sum-of-variances pair `μ = |a| x_1 + x_2/a`, `ν = |a| p_1 − p_2/a`.
    Dgcz { a: f64 },
    /// Product-of-variances pair `x_1 + x_2`, `p_1 − p_2`.
    Mgvt,
    /// Entropic pairs `x_1 ± x_2`, `p_1 ∓ p_2`.
    Entropic { plus: bool },
}

impl TwoModePreset {
    pub fn pair<T: Real>(self) -> LabeledPair<T> {
        match self {
            TwoModePreset::Dgcz { a } => labeled(
                format!("dgcz(a={a})"),
                &[a.abs(), 1.0 / a],
                &[a.abs(), -1.0 / a],
            ),
            TwoModePreset::Mgvt => labeled("mgvt", &[1.0, 1.0], &[1.0, -1.0]),
            TwoModePreset::Entropic { plus } => {
                let s = if plus { 1.0 } else { -1.0 };
                labeled(format!("entropic({})", if plus { "+" } else { "-" }), &[1.0, s], &[1.0, -s])
            }
        }
    }
}

/// van Loock–Furusawa single pair: the family with `h′ = 1`,
/// `h = −1/√(n−1)`, `γ = 2/(n−1)`, relabelled so the distinguished mode is 1.
pub fn van_loock_furusawa<T: Real>(n: usize) -> Result<NonLocalPair<T>> {
    let m = T::from_usize_lossy(n.saturating_sub(1));
    let fam = single_pair_family(n, -T::one() / m.sqrt(), T::one(), T::lit(2.0) / m)?;
    let order: Vec<usize> = std::iter::once(n).chain(2..n).chain(std::iter::once(1)).collect();
    super::relabel_modes(&fam, &order)
}

/// Three-mode pair `μ = x_1 − (x_2+x_3)/√2`, `ν = p_1 + (p_2+p_3)/√2`.
pub fn armstrong_three_mode<T: Real>() -> NonLocalPair<T> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    labeled("armstrong", &[1.0, -s, -s], &[1.0, s, s]).pair
}

/// The six relative-position / partial-total-momentum pairs on four modes.
/// `free` supplies the off-support momentum coefficients
/// `(g13, g14), (g21, g24), (g32, g34), (g41, g42), (g51, g53), (g62, g63)`.
pub fn six_pair_four_mode<T: Real>(free: [(f64, f64); 6]) -> Vec<LabeledPair<T>> {
    let [(g13, g14), (g21, g24), (g32, g34), (g41, g42), (g51, g53), (g62, g63)] = free;
    vec![
        labeled("x1-x2", &[1.0, -1.0, 0.0, 0.0], &[1.0, 1.0, g13, g14]),
        labeled("x2-x3", &[0.0, 1.0, -1.0, 0.0], &[g21, 1.0, 1.0, g24]),
        labeled("x1-x3", &[1.0, 0.0, -1.0, 0.0], &[1.0, g32, 1.0, g34]),
        labeled("x3-x4", &[0.0, 0.0, 1.0, -1.0], &[g41, g42, 1.0, 1.0]),
        labeled("x2-x4", &[0.0, 1.0, 0.0, -1.0], &[g51, 1.0, g53, 1.0]),
        labeled("x1-x4", &[1.0, 0.0, 0.0, -1.0], &[1.0, g62, g63, 1.0]),
    ]
}

/// Same supports as [`six_pair_four_mode`] with 1/√2 normalization; every
/// mirrored pair is conjugate and every `|γ_{m,α}| = 1`.
pub fn conjugate_six_pair_four_mode<T: Real>() -> Vec<LabeledPair<T>> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    vec![
        labeled("(x1-x2)/sqrt2", &[s, -s, 0.0, 0.0], &[s, s, 0.0, 0.0]),
        labeled("(x2-x3)/sqrt2", &[0.0, s, -s, 0.0], &[0.0, s, s, 0.0]),
        labeled("(x1-x3)/sqrt2", &[s, 0.0, -s, 0.0], &[s, 0.0, s, 0.0]),
        labeled("(x3-x4)/sqrt2", &[0.0, 0.0, s, -s], &[0.0, 0.0, s, s]),
        labeled("(x2-x4)/sqrt2", &[0.0, s, 0.0, -s], &[0.0, s, 0.0, s]),
        labeled("(x1-x4)/sqrt2", &[s, 0.0, 0.0, -s], &[s, 0.0, 0.0, s]),
    ]
}

/// `μ_1 = x_1 − x_4 − (x_2+x_3)`, `ν_1 = p_1 − p_4 + p_2 + p_3`, plus the
/// `x_2 − x_3` pair of the six-pair set (free coefficients zero).
pub fn two_pair_four_mode<T: Real>() -> Vec<LabeledPair<T>> {
    vec![
        labeled("x1-x4-(x2+x3)", &[1.0, -1.0, -1.0, -1.0], &[1.0, 1.0, 1.0, -1.0]),
        labeled("x2-x3", &[0.0, 1.0, -1.0, 0.0], &[0.0, 1.0, 1.0, 0.0]),
    ]
}

/// `(x_1 − x_2, p_1+p_2+p_3)` and `(x_1 − x_3, p_1+p_2+p_3)`.
pub fn two_pair_three_mode<T: Real>() -> Vec<LabeledPair<T>> {
    vec![
        labeled("x1-x2", &[1.0, -1.0, 0.0], &[1.0, 1.0, 1.0]),
        labeled("x1-x3", &[1.0, 0.0, -1.0], &[1.0, 1.0, 1.0]),
    ]
}

/// The probe pairs for the four-mode squeezed/beamsplitter example state:
/// `μ_1 = x_1 − (x_2+x_3)/√2`, `ν_1 = p_1 + (p_2+p_3)/√2`,
/// `μ_2 = (x_3−x_2)/√2 − x_4`, `ν_2 = (p_3−p_2)/√2 + p_4`.
pub fn example_pairs<T: Real>() -> Vec<LabeledPair<T>> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    vec![
        labeled("mu1/nu1", &[1.0, -s, -s, 0.0], &[1.0, s, s, 0.0]),
        labeled("mu2/nu2", &[0.0, -s, s, -1.0], &[0.0, -s, s, 1.0]),
    ]
}
