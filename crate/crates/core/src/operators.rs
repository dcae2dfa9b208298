//! Non-local linear observables `μ = Σ h_j x_j`, `ν = Σ g_j p_j`, their
//! commutators before and after partial transposition, and the x/p matrix
//! construction that realizes the mirrored pair.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::modes::{Bipartition, Side};
use crate::scalar::{dot, norm, Real};

pub mod presets;

#[derive(Debug, Clone, PartialEq)]
pub struct NonLocalPair<T> {
    h: Vec<T>,
    g: Vec<T>,
}

impl<T: Real> NonLocalPair<T> {
    pub fn new(h: Vec<T>, g: Vec<T>) -> Result<Self> {
        if h.len() != g.len() {
            return Err(Error::invalid(format!(
                "h has {} entries but g has {}",
                h.len(),
                g.len()
            )));
        }
        if h.len() < 2 {
            return Err(Error::invalid("a non-local pair needs at least 2 modes"));
        }
        if h.iter().chain(&g).any(|x| !x.is_finite()) {
            return Err(Error::invalid("coefficients must be finite"));
        }
        if h.iter().all(|x| x.is_zero()) || g.iter().all(|x| x.is_zero()) {
            return Err(Error::invalid("coefficient vectors must not be all zero"));
        }
        Ok(Self { h, g })
    }

    pub fn n(&self) -> usize {
        self.h.len()
    }

    /// Position coefficients of `μ`.
    pub fn h(&self) -> &[T] {
        &self.h
    }

    /// Momentum coefficients of `ν`.
    pub fn g(&self) -> &[T] {
        &self.g
    }

    /// `‖h‖·‖g‖`, the natural scale of both commutators.
    pub fn scale(&self) -> T {
        norm(&self.h) * norm(&self.g)
    }

    /// Relative threshold below which a commutator counts as zero:
    /// [`ZERO_REL_TOL`], widened to `64 ε` for scalars coarser than `f64`.
    pub fn zero_tolerance(&self) -> T {
        let rel = T::lit(ZERO_REL_TOL).max(T::lit(64.0) * T::epsilon());
        rel * T::one().max(self.scale())
    }

    pub fn is_commuting(&self) -> bool {
        commutator_delta(self).abs() < self.zero_tolerance()
    }
}

/// Relative epsilon for treating δ or γ_α as zero.
pub const ZERO_REL_TOL: f64 = 1e-12;

/// `|γ|` below this fraction of `‖h‖‖g‖` is reported as suspiciously small.
pub const TINY_GAMMA_REL: f64 = 1e-6;

/// `δ = Σ h_j g_j`, summed in index order.
pub fn commutator_delta<T: Real>(pair: &NonLocalPair<T>) -> T {
    dot(&pair.h, &pair.g)
}

fn check_dims<T: Real>(pair: &NonLocalPair<T>, bp: &Bipartition) -> Result<()> {
    if pair.n() != bp.n() {
        return Err(Error::DimensionMismatch {
            expected: pair.n(),
            found: bp.n(),
        });
    }
    Ok(())
}

/// Momentum coefficients with the sign flipped on every transposed mode.
fn flipped_g<T: Real>(pair: &NonLocalPair<T>, bp: &Bipartition, side: Side) -> Vec<T> {
    pair.g
        .iter()
        .enumerate()
        .map(|(j, &g)| if bp.is_transposed(j + 1, side) { -g } else { g })
        .collect()
}

/// `γ_t = Σ h_j ḡ_j`; `γ_B = −γ_A`.
pub fn commutator_gamma<T: Real>(pair: &NonLocalPair<T>, bp: &Bipartition, side: Side) -> Result<T> {
    check_dims(pair, bp)?;
    Ok(dot(&pair.h, &flipped_g(pair, bp, side)))
}

/// `|δ̄| = max(|γ_α|, |δ|)`.
pub fn bound_delta_bar<T: Real>(pair: &NonLocalPair<T>, bp: &Bipartition) -> Result<T> {
    let gamma = commutator_gamma(pair, bp, Side::A)?;
    Ok(gamma.abs().max(commutator_delta(pair).abs()))
}

/// `Σ_j |h_j g_j|`. Equals [`bound_delta_bar`] for two modes but can exceed
/// it for larger systems; reports use it only to flag the disagreement.
pub fn delta_bar_abs_sum<T: Real>(pair: &NonLocalPair<T>) -> T {
    pair.h
        .iter()
        .zip(&pair.g)
        .map(|(&h, &g)| (h * g).abs())
        .sum()
}

/// Coefficients of the mirrored observables `u = μ`, `v = Σ ḡ_j p_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct MirroredPair<T> {
    pub h: Vec<T>,
    pub g_bar: Vec<T>,
}

impl<T: Real> MirroredPair<T> {
    /// `[u, v] = i Σ h_j ḡ_j`.
    pub fn commutator(&self) -> T {
        dot(&self.h, &self.g_bar)
    }

    /// Whether `u` and `v` are conjugate up to rescaling: `ḡ ∥ h` with a
    /// nonzero commutator. Rescaled by `1/‖h‖` and `1/‖ḡ‖`, the pair is then
    /// a canonical `(x, p)` pair in a rotated mode basis.
    pub fn is_conjugate(&self) -> bool {
        let gamma = self.commutator();
        let (nh, ng) = (norm(&self.h), norm(&self.g_bar));
        if gamma.is_zero() || nh.is_zero() || ng.is_zero() {
            return false;
        }
        // |cos| of the angle between h and ḡ.
        (gamma.abs() / (nh * ng) - T::one()).abs() <= T::lit(1e-9)
    }

    /// The stricter normalization `h = γ ḡ`, under which the x- and
    /// p-matrices can be chosen equal up to the factor γ.
    pub fn is_normalized_conjugate(&self) -> bool {
        let gamma = self.commutator();
        if gamma.is_zero() {
            return false;
        }
        let resid: Vec<T> = self
            .h
            .iter()
            .zip(&self.g_bar)
            .map(|(&h, &g)| h - gamma * g)
            .collect();
        norm(&resid) <= T::lit(1e-9) * T::one().max(norm(&self.h))
    }
}

pub fn mirrored_pair<T: Real>(
    pair: &NonLocalPair<T>,
    bp: &Bipartition,
    side: Side,
) -> Result<MirroredPair<T>> {
    check_dims(pair, bp)?;
    Ok(MirroredPair {
        h: pair.h.clone(),
        g_bar: flipped_g(pair, bp, side),
    })
}

/// Seed x- and p-matrices of a bipartition class.
///
/// The first row of `m_p` holds the mirrored momentum coefficients ḡ of the
/// seed split `{1..n_A}|{n_A+1..n}` and the first row of `m_x` holds `h`;
/// the two matrices satisfy `m_p m_xᵀ = γ·1`.
#[derive(Debug, Clone)]
pub struct SeedMatrices<T> {
    pub m_p: Matrix<T>,
    pub m_x: Matrix<T>,
    pub gamma: T,
    /// Measured momentum coefficients `g` after solving for `g_1`, `g_n`.
    pub g: Vec<T>,
    /// Internal slot order used for the solve: `mode_order[k]` is the
    /// 1-indexed mode placed in slot `k + 1`. Identity unless `h_1` or
    /// `h_n` vanished and a swap within the same part was needed.
    pub mode_order: Vec<usize>,
}

impl<T: Real> SeedMatrices<T> {
    /// Frobenius norm of `m_p m_xᵀ − γ·1`.
    pub fn residual(&self) -> T {
        let prod = self
            .m_p
            .matmul(&self.m_x.transpose())
            .expect("square matrices of equal size");
        prod.sub(&Matrix::identity(self.m_p.rows()).scale(self.gamma))
            .frobenius_norm()
    }
}

/// Determinant threshold (relative to the row-scale product) for declaring
/// the completed p-matrix singular.
const SEED_SINGULAR_REL: f64 = 1e-12;
const SEED_JITTER: f64 = 1e-6;

/// Builds seed matrices for class `(n_A, n − n_A)` whose first rows realize
/// the commutators `Σ ḡ_j h_j = γ` and `Σ g_j h_j = δ`.
///
/// Entries `g_2..g_{n−1}` are taken from `g`; `g_1` and `g_n` are solved for.
/// Rows 2..n of the p-matrix are completed so that each is orthogonal to
/// `h`, which pins the first row of `(m_p⁻¹)ᵀ` to `h/γ`.
pub fn seed_matrices<T: Real>(
    h: &[T],
    g: &[T],
    n_a: usize,
    gamma_target: T,
    delta_target: T,
) -> Result<SeedMatrices<T>> {
    let n = h.len();
    if g.len() != n {
        return Err(Error::invalid(format!(
            "h has {n} entries but g has {}",
            g.len()
        )));
    }
    if n < 2 {
        return Err(Error::invalid("seed matrices need n >= 2"));
    }
    if n_a == 0 || n_a >= n {
        return Err(Error::invalid(format!("n_A must be in 1..{n}, got {n_a}")));
    }
    if gamma_target.is_zero() || !gamma_target.is_finite() {
        return Err(Error::invalid("gamma must be finite and non-zero"));
    }

    // Slots 1 and n need non-zero h; swap within the same part if necessary
    // so the seed split is unchanged.
    let mut order: Vec<usize> = (0..n).collect();
    if h[0].is_zero() {
        let k = (1..n_a).find(|&k| !h[k].is_zero()).ok_or_else(|| {
            Error::DegenerateCoefficient("h vanishes on every mode of part A".into())
        })?;
        order.swap(0, k);
    }
    if h[n - 1].is_zero() {
        let k = (n_a..n - 1).find(|&k| !h[k].is_zero()).ok_or_else(|| {
            Error::DegenerateCoefficient("h vanishes on every mode of part B".into())
        })?;
        order.swap(n - 1, k);
    }
    let hs: Vec<T> = order.iter().map(|&k| h[k]).collect();
    let mut gs: Vec<T> = order.iter().map(|&k| g[k]).collect();

    let two = T::lit(2.0);
    let sum_a: T = (1..n_a).map(|l| gs[l] * hs[l]).sum();
    let sum_b: T = (n_a..n - 1).map(|l| gs[l] * hs[l]).sum();
    gs[0] = ((delta_target - gamma_target) / two - sum_a) / hs[0];
    gs[n - 1] = ((delta_target + gamma_target) / two - sum_b) / hs[n - 1];

    let first_row: Vec<T> = gs
        .iter()
        .enumerate()
        .map(|(j, &x)| if j < n_a { -x } else { x })
        .collect();

    let build = |jitter: T| -> Matrix<T> {
        let mut m = Matrix::zeros(n, n);
        for (j, &x) in first_row.iter().enumerate() {
            m[(0, j)] = x;
        }
        for i in 1..n {
            for j in 0..n - 1 {
                let base = if j == i - 1 { T::one() } else { T::zero() };
                // Deterministic perturbation pattern for the retry.
                let wiggle = jitter * T::from_usize_lossy(1 + (i * 7 + j * 3) % 11);
                m[(i, j)] = base + wiggle;
            }
            let s: T = (0..n - 1).map(|l| hs[l] * m[(i, l)]).sum();
            m[(i, n - 1)] = -s / hs[n - 1];
        }
        m
    };

    let is_singular = |m: &Matrix<T>| -> bool {
        let row_scale: T = (0..n)
            .map(|i| {
                let r = m.row(i);
                dot(r, r).sqrt()
            })
            .fold(T::one(), |acc, x| acc * x);
        m.determinant().abs() < T::lit(SEED_SINGULAR_REL) * row_scale
    };

    let mut m_p = build(T::zero());
    if is_singular(&m_p) {
        m_p = build(T::lit(SEED_JITTER));
        if is_singular(&m_p) {
            return Err(Error::SingularMatrix(
                "completed p-matrix is singular even after perturbing Q".into(),
            ));
        }
    }
    let m_x = m_p.inverse(T::lit(1e-14))?.transpose().scale(gamma_target);

    // Back to the caller's mode order: permuting columns of both matrices
    // leaves m_p m_xᵀ unchanged.
    let mut inv = vec![0usize; n];
    for (slot, &mode) in order.iter().enumerate() {
        inv[mode] = slot;
    }
    let unpermute = |m: &Matrix<T>| Matrix::from_fn(n, n, |r, c| m[(r, inv[c])]);
    let g_out: Vec<T> = (0..n).map(|c| gs[inv[c]]).collect();

    Ok(SeedMatrices {
        m_p: unpermute(&m_p),
        m_x: unpermute(&m_x),
        gamma: gamma_target,
        g: g_out,
        mode_order: order.iter().map(|k| k + 1).collect(),
    })
}

/// Commuting pair `μ = h(x_1+…+x_{n−1}) + h′x_n`,
/// `ν = (γ/2)(−(p_1+…+p_{n−1})/h + (n−1)p_n/h′)`, whose mirrored commutator
/// is `n_A γ` or `−(n−n_A) γ` on every bipartition.
pub fn single_pair_family<T: Real>(n: usize, h: T, h_prime: T, gamma: T) -> Result<NonLocalPair<T>> {
    if n < 3 {
        return Err(Error::invalid(format!("single-pair family needs n >= 3, got {n}")));
    }
    if h.is_zero() || h_prime.is_zero() || gamma.is_zero() {
        return Err(Error::invalid("h, h' and gamma must all be non-zero"));
    }
    let half = gamma / T::lit(2.0);
    let mut hv = vec![h; n];
    hv[n - 1] = h_prime;
    let mut gv = vec![-half / h; n];
    gv[n - 1] = half * T::from_usize_lossy(n - 1) / h_prime;
    NonLocalPair::new(hv, gv)
}

/// Reorders the modes of a pair: `order[k]` is the (1-indexed) source mode
/// for new mode `k + 1`.
pub fn relabel_modes<T: Real>(pair: &NonLocalPair<T>, order: &[usize]) -> Result<NonLocalPair<T>> {
    let n = pair.n();
    let mut seen = vec![false; n];
    for &m in order {
        if m == 0 || m > n || std::mem::replace(&mut seen[m - 1], true) {
            return Err(Error::invalid("relabeling must be a permutation of 1..=n"));
        }
    }
    if order.len() != n {
        return Err(Error::invalid("relabeling must be a permutation of 1..=n"));
    }
    NonLocalPair::new(
        order.iter().map(|&m| pair.h[m - 1]).collect(),
        order.iter().map(|&m| pair.g[m - 1]).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modes::enumerate_bipartitions;

    fn pair(h: &[f64], g: &[f64]) -> NonLocalPair<f64> {
        NonLocalPair::new(h.to_vec(), g.to_vec()).unwrap()
    }

    fn bp(n: usize, a: &[usize]) -> Bipartition {
        Bipartition::new(n, a).unwrap()
    }

    #[test]
    fn rejects_bad_pairs() {
        assert!(NonLocalPair::new(vec![1.0, 0.0], vec![1.0]).is_err());
        assert!(NonLocalPair::new(vec![0.0, 0.0], vec![1.0, 1.0]).is_err());
        assert!(NonLocalPair::new(vec![1.0], vec![1.0]).is_err());
        assert!(NonLocalPair::new(vec![1.0, f64::NAN], vec![1.0, 1.0]).is_err());
    }

    #[test]
    fn delta_examples() {
        for (g13, g14) in [(0.0, 0.0), (3.5, -1.25), (-7.0, 2.0)] {
            assert_eq!(commutator_delta(&pair(&[1.0, -1.0, 0.0, 0.0], &[1.0, 1.0, g13, g14])), 0.0);
        }
        assert_eq!(commutator_delta(&pair(&[1.0, 1.0], &[1.0, -1.0])), 0.0);
        assert_eq!(commutator_delta(&pair(&[2.0, 3.0], &[1.0, 1.0])), 5.0);
    }

    #[test]
    fn gamma_examples() {
        let p = pair(&[1.0, -1.0, 0.0, 0.0], &[1.0, 1.0, 0.0, 0.0]);
        assert_eq!(commutator_gamma(&p, &bp(4, &[1]), Side::A).unwrap(), -2.0);
        assert_eq!(commutator_gamma(&p, &bp(4, &[1]), Side::B).unwrap(), 2.0);

        // Flip only where h_j g_j = 0: no effect.
        let p = pair(&[1.0, 1.0, 0.0], &[1.0, -1.0, 5.0]);
        assert_eq!(
            commutator_gamma(&p, &bp(3, &[1, 2]), Side::B).unwrap(),
            commutator_delta(&p)
        );

        let p = pair(&[1.0; 5], &[1.0; 5]);
        // Brute force: −1 −1 +1 +1 +1.
        let oracle: f64 = (1..=5).map(|j| if j <= 2 { -1.0 } else { 1.0 }).sum();
        assert_eq!(commutator_gamma(&p, &bp(5, &[1, 2]), Side::A).unwrap(), oracle);
        assert_eq!(oracle, 1.0);

        assert!(matches!(
            commutator_gamma(&p, &bp(4, &[1]), Side::A),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn delta_bar_examples() {
        // Two modes: max(|γ|,|δ|) = |h1 g1| + |h2 g2|.
        for (h, g) in [([1.0, 2.0], [3.0, -0.5]), ([-1.5, 0.7], [2.0, 4.0]), ([1.0, 1.0], [1.0, -1.0])] {
            let p = pair(&h, &g);
            let want = (h[0] * g[0]).abs() + (h[1] * g[1]).abs();
            assert!((bound_delta_bar(&p, &bp(2, &[1])).unwrap() - want).abs() < 1e-15);
        }
        // Commuting pair: |γ_α|.
        let p = pair(&[1.0, -1.0, 0.0, 0.0], &[1.0, 1.0, 0.0, 0.0]);
        assert_eq!(bound_delta_bar(&p, &bp(4, &[1])).unwrap(), 2.0);
        // δ = 1, γ_A = −1 + 1 − 1 = −1.
        let p = pair(&[1.0, 1.0, 1.0], &[1.0, 1.0, -1.0]);
        assert_eq!(commutator_delta(&p), 1.0);
        assert_eq!(commutator_gamma(&p, &bp(3, &[1]), Side::A).unwrap(), -1.0);
        assert_eq!(bound_delta_bar(&p, &bp(3, &[1])).unwrap(), 1.0);
        // Here the absolute-sum closed form disagrees.
        assert_eq!(delta_bar_abs_sum(&p), 3.0);
    }

    #[test]
    fn mirrored_examples() {
        let p = pair(&[1.0, 1.0], &[1.0, -1.0]);
        let m = mirrored_pair(&p, &bp(2, &[1]), Side::B).unwrap();
        assert_eq!(m.h, vec![1.0, 1.0]);
        assert_eq!(m.g_bar, vec![1.0, 1.0]);

        let p = pair(&[1.0, 0.0, 1.0], &[0.0, 2.0, 3.0]);
        let m = mirrored_pair(&p, &bp(3, &[1]), Side::A).unwrap();
        assert_eq!(m.g_bar, p.g().to_vec());

        let p = pair(&[1.0, -1.0, 0.0, 0.0], &[1.0, 1.0, 0.0, 0.0]);
        let m = mirrored_pair(&p, &bp(4, &[1, 3]), Side::A).unwrap();
        assert_eq!(m.g_bar, vec![-1.0, 1.0, -0.0, 0.0]);
        assert_eq!(m.commutator(), commutator_gamma(&p, &bp(4, &[1, 3]), Side::A).unwrap());
    }

    #[test]
    fn conjugacy_detection() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let p = pair(&[s, -s, 0.0, 0.0], &[s, s, 0.0, 0.0]);
        let m = mirrored_pair(&p, &bp(4, &[1]), Side::A).unwrap();
        assert!(m.is_conjugate() && m.is_normalized_conjugate());
        // Unnormalized EPR pair: conjugate up to scale only.
        let p = pair(&[1.0, -1.0, 0.0, 0.0], &[1.0, 1.0, 0.0, 0.0]);
        let m = mirrored_pair(&p, &bp(4, &[1]), Side::A).unwrap();
        assert!(m.is_conjugate() && !m.is_normalized_conjugate());
        // Not proportional on a cut that leaves one momentum unflipped.
        let p = pair(&[1.0, -1.0, 0.0, 0.0], &[1.0, 1.0, 1.0, 0.0]);
        let m = mirrored_pair(&p, &bp(4, &[1]), Side::A).unwrap();
        assert!(!m.is_conjugate());
        // Uncovered cut: zero commutator is never conjugate.
        let p = pair(&[1.0, -1.0, 0.0, 0.0], &[1.0, 1.0, 0.0, 0.0]);
        let m = mirrored_pair(&p, &bp(4, &[1, 2]), Side::A).unwrap();
        assert!(!m.is_conjugate());
    }

    #[test]
    fn seed_two_mode_hand_solution() {
        // Σ g h = 0 and −g1 h1 + g2 h2 = 2 with h = (1,1) give g = (−1, 1),
        // so the first row of m_p is ḡ = (1, 1).
        let s: SeedMatrices<f64> = seed_matrices(&[1.0, 1.0], &[0.0, 0.0], 1, 2.0, 0.0).unwrap();
        assert_eq!(s.g, vec![-1.0, 1.0]);
        assert_eq!(s.m_p.row(0), &[1.0, 1.0]);
        assert!((s.m_x.row(0)[0] - 1.0).abs() < 1e-14);
        assert!((s.m_x.row(0)[1] - 1.0).abs() < 1e-14);
        assert!(s.residual() < 1e-12);
    }

    #[test]
    fn seed_recovers_van_loock_first_row() {
        let c = -1.0 / 3f64.sqrt();
        let h = [c, c, c, 1.0];
        let fam = single_pair_family(4, c, 1.0, 2.0 / 3.0).unwrap();
        let s = seed_matrices(&h, fam.g(), 1, 2.0 / 3.0, 0.0).unwrap();
        for (a, b) in s.m_x.row(0).iter().zip(&h) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(s.residual() < 1e-10);
        // Solved g reproduces the family.
        for (a, b) in s.g.iter().zip(fam.g()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn seed_reorders_zero_end_coefficients() {
        let h = [0.0, 2.0, 1.0, 0.0];
        let s = seed_matrices(&h, &[0.3, 0.1, -0.4, 0.2], 2, 1.5, 0.25).unwrap();
        assert_eq!(s.mode_order, vec![2, 1, 4, 3]);
        assert!(s.residual() < 1e-10);
        let gbar: Vec<f64> = s.g.iter().enumerate().map(|(j, &g)| if j < 2 { -g } else { g }).collect();
        assert!((dot(&gbar, &h) - 1.5).abs() < 1e-12);
        assert!((dot(&s.g, &h) - 0.25).abs() < 1e-12);
        assert_eq!(s.m_p.row(0), gbar.as_slice());

        assert!(matches!(
            seed_matrices(&[0.0, 1.0, 1.0], &[1.0, 1.0, 1.0], 1, 1.0, 0.0),
            Err(Error::DegenerateCoefficient(_))
        ));
    }

    #[test]
    fn family_examples() {
        let p = single_pair_family(4, 1.0f64, 1.0, 1.0).unwrap();
        assert_eq!(p.h(), &[1.0, 1.0, 1.0, 1.0]);
        assert_eq!(p.g(), &[-0.5, -0.5, -0.5, 1.5]);
        assert_eq!(commutator_delta(&p), 0.0);
        let min = enumerate_bipartitions(4)
            .unwrap()
            .iter()
            .map(|b| commutator_gamma(&p, b, Side::A).unwrap().abs())
            .fold(f64::INFINITY, f64::min);
        assert_eq!(min, 1.0);

        assert!(single_pair_family(4, 0.0, 1.0, 1.0).is_err());
        assert!(single_pair_family(2, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn family_maps_to_three_mode_preset() {
        let h = -std::f64::consts::FRAC_1_SQRT_2;
        let p = single_pair_family(3, h, 1.0, 1.0).unwrap();
        let mapped = relabel_modes(&p, &[3, 2, 1]).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let want_h = [1.0, -s, -s];
        let want_g = [1.0, s, s];
        for j in 0..3 {
            assert!((mapped.h()[j] - want_h[j]).abs() < 1e-15);
            assert!((mapped.g()[j] - want_g[j]).abs() < 1e-15);
        }
    }
}
