//! Gaussian states and convex mixtures of them.
//!
//! Phase-space ordering is `(x_1..x_n, p_1..p_n)` with `[x_j, p_k] = i δ_jk`,
//! so the vacuum covariance is `1/2 · 1`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Real;

pub mod random;

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianComponent<T> {
    n: usize,
    mean: Vec<T>,
    cov: Matrix<T>,
}

/// Which sector a linear observable lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quadrature {
    Position,
    Momentum,
}

const SYMMETRY_TOL: f64 = 1e-12;

impl<T: Real> GaussianComponent<T> {
    pub fn new(n: usize, mean: Vec<T>, cov: Matrix<T>) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("a Gaussian component needs at least one mode"));
        }
        if mean.len() != 2 * n || cov.rows() != 2 * n || cov.cols() != 2 * n {
            return Err(Error::invalid(format!(
                "{n} modes need a length-{} mean and {}x{} covariance",
                2 * n,
                2 * n,
                2 * n
            )));
        }
        let scale = T::one().max(cov.frobenius_norm());
        if !cov.is_symmetric(T::lit(SYMMETRY_TOL) * scale) {
            return Err(Error::invalid("covariance matrix is not symmetric"));
        }
        if mean.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("mean must be finite"));
        }
        Ok(Self { n, mean, cov })
    }

    pub fn vacuum(n: usize) -> Self {
        Self {
            n,
            mean: vec![T::zero(); 2 * n],
            cov: Matrix::identity(2 * n).scale(T::lit(0.5)),
        }
    }

    /// Thermal state with the given mean photon numbers per mode.
    pub fn thermal(nbar: &[T]) -> Self {
        let n = nbar.len();
        let half = T::lit(0.5);
        let diag: Vec<T> = (0..2 * n).map(|k| nbar[k % n] + half).collect();
        Self {
            n,
            mean: vec![T::zero(); 2 * n],
            cov: Matrix::from_diagonal(&diag),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mean(&self) -> &[T] {
        &self.mean
    }

    pub fn cov(&self) -> &Matrix<T> {
        &self.cov
    }

    /// Applies the linear map `z ↦ S z` (S must be symplectic for the output
    /// to be physical).
    pub fn transform(&self, s: &Matrix<T>) -> Self {
        let cov = s
            .matmul(&self.cov)
            .and_then(|m| m.matmul(&s.transpose()))
            .expect("transform must be 2n x 2n");
        Self {
            n: self.n,
            mean: s.mul_vec(&self.mean),
            cov,
        }
    }

    pub fn displace(&self, d: &[T]) -> Result<Self> {
        if d.len() != 2 * self.n {
            return Err(Error::invalid("displacement must have length 2n"));
        }
        let mut out = self.clone();
        for (m, &x) in out.mean.iter_mut().zip(d) {
            *m += x;
        }
        Ok(out)
    }

    /// Tensor product: modes of `other` follow the modes of `self`.
    pub fn tensor(&self, other: &Self) -> Self {
        let (a, b) = (self.n, other.n);
        let n = a + b;
        // Source index of each output phase-space coordinate.
        let src = |k: usize| -> (bool, usize) {
            let (mode, is_p) = (k % n, k >= n);
            let off = if is_p { 1 } else { 0 };
            if mode < a {
                (true, mode + off * a)
            } else {
                (false, mode - a + off * b)
            }
        };
        let mean = (0..2 * n)
            .map(|k| match src(k) {
                (true, i) => self.mean[i],
                (false, i) => other.mean[i],
            })
            .collect();
        let cov = Matrix::from_fn(2 * n, 2 * n, |r, c| match (src(r), src(c)) {
            ((true, i), (true, j)) => self.cov[(i, j)],
            ((false, i), (false, j)) => other.cov[(i, j)],
            _ => T::zero(),
        });
        Self { n, mean, cov }
    }

    /// Reorders modes: new mode `k + 1` is old mode `order[k]` (1-indexed).
    pub fn permute_modes(&self, order: &[usize]) -> Result<Self> {
        let n = self.n;
        let mut sorted = order.to_vec();
        sorted.sort_unstable();
        if sorted != (1..=n).collect::<Vec<_>>() {
            return Err(Error::invalid("mode order must be a permutation of 1..=n"));
        }
        let src = |k: usize| -> usize {
            let (mode, is_p) = (k % n, k >= n);
            order[mode] - 1 + if is_p { n } else { 0 }
        };
        Ok(Self {
            n,
            mean: (0..2 * n).map(|k| self.mean[src(k)]).collect(),
            cov: Matrix::from_fn(2 * n, 2 * n, |r, c| self.cov[(src(r), src(c))]),
        })
    }

    fn check_mode(&self, m: usize) -> Result<()> {
        if m == 0 || m > self.n {
            return Err(Error::invalid(format!("mode {m} outside 1..={}", self.n)));
        }
        Ok(())
    }

    /// Orthogonal rotation of `(x_i, x_j)` and `(p_i, p_j)` by `theta`:
    /// `x_i ↦ cos θ x_i − sin θ x_j`, `x_j ↦ sin θ x_i + cos θ x_j`.
    pub fn beamsplitter(&self, i: usize, j: usize, theta: T) -> Result<Self> {
        self.check_mode(i)?;
        self.check_mode(j)?;
        if i == j {
            return Err(Error::invalid("beamsplitter needs two distinct modes"));
        }
        let n = self.n;
        let (c, s) = (theta.cos(), theta.sin());
        let mut sm = Matrix::identity(2 * n);
        for off in [0, n] {
            let (a, b) = (i - 1 + off, j - 1 + off);
            sm[(a, a)] = c;
            sm[(a, b)] = -s;
            sm[(b, a)] = s;
            sm[(b, b)] = c;
        }
        Ok(self.transform(&sm))
    }

    /// Single-mode squeezer: `x ↦ e^{−r} x`, `p ↦ e^{r} p`.
    pub fn squeeze(&self, mode: usize, r: T) -> Result<Self> {
        self.check_mode(mode)?;
        let mut sm = Matrix::identity(2 * self.n);
        sm[(mode - 1, mode - 1)] = (-r).exp();
        sm[(mode - 1 + self.n, mode - 1 + self.n)] = r.exp();
        Ok(self.transform(&sm))
    }

    /// Phase rotation of one mode: `x ↦ cos φ x + sin φ p`, `p ↦ −sin φ x + cos φ p`.
    pub fn rotate(&self, mode: usize, phi: T) -> Result<Self> {
        self.check_mode(mode)?;
        let (x, p) = (mode - 1, mode - 1 + self.n);
        let (c, s) = (phi.cos(), phi.sin());
        let mut sm = Matrix::identity(2 * self.n);
        sm[(x, x)] = c;
        sm[(x, p)] = s;
        sm[(p, x)] = -s;
        sm[(p, p)] = c;
        Ok(self.transform(&sm))
    }

    /// Flips the momentum sign of the given (1-indexed) modes.
    pub fn partial_transpose(&self, modes: &[usize]) -> Result<Self> {
        let mut out = self.clone();
        for &m in modes {
            self.check_mode(m)?;
            let k = m - 1 + self.n;
            out.mean[k] = -out.mean[k];
            for c in 0..2 * self.n {
                if c != k {
                    out.cov[(k, c)] = -out.cov[(k, c)];
                    out.cov[(c, k)] = -out.cov[(c, k)];
                }
            }
        }
        Ok(out)
    }

    /// Mean and variance of `Σ c_j x_j` (or `Σ c_j p_j`).
    pub fn linear_moments(&self, coeffs: &[T], quadrature: Quadrature) -> (T, T) {
        let off = match quadrature {
            Quadrature::Position => 0,
            Quadrature::Momentum => self.n,
        };
        let mean = coeffs
            .iter()
            .enumerate()
            .map(|(j, &c)| c * self.mean[off + j])
            .sum();
        let mut var = T::zero();
        for (j, &cj) in coeffs.iter().enumerate() {
            if cj.is_zero() {
                continue;
            }
            for (k, &ck) in coeffs.iter().enumerate() {
                var += cj * ck * self.cov[(off + j, off + k)];
            }
        }
        (mean, var)
    }

    /// Smallest eigenvalue of the Hermitian matrix `cov + (i/2)Ω`, computed
    /// through its real 4n×4n embedding. Non-negative for physical states.
    pub fn min_uncertainty_eigenvalue(&self) -> T {
        let n = self.n;
        let d = 2 * n;
        let half = T::lit(0.5);
        // Ω = [[0, 1], [−1, 0]] in (x.., p..) ordering.
        let omega = |r: usize, c: usize| -> T {
            if r < n && c == r + n {
                T::one()
            } else if r >= n && c + n == r {
                -T::one()
            } else {
                T::zero()
            }
        };
        let emb = Matrix::from_fn(2 * d, 2 * d, |r, c| {
            let (rb, cb) = (r / d, c / d);
            let (ri, ci) = (r % d, c % d);
            match (rb, cb) {
                (0, 0) | (1, 1) => self.cov[(ri, ci)],
                (0, 1) => -half * omega(ri, ci),
                _ => half * omega(ri, ci),
            }
        });
        emb.symmetric_eigenvalues()[0]
    }

    pub fn is_physical(&self, tol: T) -> bool {
        self.min_uncertainty_eigenvalue() >= -tol
    }

    /// `det(2·cov)`, equal to 1 for pure states.
    pub fn purity_determinant(&self) -> T {
        self.cov.scale(T::lit(2.0)).determinant()
    }

    /// Two-mode squeezed vacuum: `Δ²(x_1 − x_2) = Δ²(p_1 + p_2) = e^{−2r}`.
    pub fn two_mode_squeezed(r: T) -> Self {
        let two_r = T::lit(2.0) * r;
        let (c, s) = (two_r.cosh() * T::lit(0.5), two_r.sinh() * T::lit(0.5));
        let mut cov = Matrix::zeros(4, 4);
        cov[(0, 0)] = c;
        cov[(1, 1)] = c;
        cov[(0, 1)] = s;
        cov[(1, 0)] = s;
        cov[(2, 2)] = c;
        cov[(3, 3)] = c;
        cov[(2, 3)] = -s;
        cov[(3, 2)] = -s;
        Self {
            n: 2,
            mean: vec![T::zero(); 4],
            cov,
        }
    }
}

/// A component with its mixing weight.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedComponent<T> {
    pub weight: T,
    pub state: GaussianComponent<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianMixtureState<T> {
    n: usize,
    components: Vec<WeightedComponent<T>>,
}

const WEIGHT_SUM_TOL: f64 = 1e-12;

impl<T: Real> GaussianMixtureState<T> {
    pub fn new(components: Vec<WeightedComponent<T>>) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| Error::invalid("a mixture needs at least one component"))?;
        let n = first.state.n;
        if components.iter().any(|c| c.state.n != n) {
            return Err(Error::invalid("mixture components must share the mode count"));
        }
        if components
            .iter()
            .any(|c| !(c.weight > T::zero() && c.weight <= T::one()))
        {
            return Err(Error::invalid("mixture weights must lie in (0, 1]"));
        }
        let total: T = components.iter().map(|c| c.weight).sum();
        if (total - T::one()).abs() > T::lit(WEIGHT_SUM_TOL) {
            return Err(Error::invalid(format!(
                "mixture weights sum to {total}, not 1"
            )));
        }
        Ok(Self { n, components })
    }

    /// Builds a mixture from `(weight, component)` pairs, dropping zero weights.
    pub fn from_weighted(parts: Vec<(T, GaussianComponent<T>)>) -> Result<Self> {
        Self::new(
            parts
                .into_iter()
                .filter(|(w, _)| !w.is_zero())
                .map(|(weight, state)| WeightedComponent { weight, state })
                .collect(),
        )
    }

    pub fn pure(state: GaussianComponent<T>) -> Self {
        Self {
            n: state.n,
            components: vec![WeightedComponent {
                weight: T::one(),
                state,
            }],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn components(&self) -> &[WeightedComponent<T>] {
        &self.components
    }

    pub fn map_components(&self, f: impl Fn(&GaussianComponent<T>) -> Result<GaussianComponent<T>>) -> Result<Self> {
        Ok(Self {
            n: self.n,
            components: self
                .components
                .iter()
                .map(|c| {
                    Ok(WeightedComponent {
                        weight: c.weight,
                        state: f(&c.state)?,
                    })
                })
                .collect::<Result<_>>()?,
        })
    }

    pub fn beamsplitter(&self, i: usize, j: usize, theta: T) -> Result<Self> {
        self.map_components(|c| c.beamsplitter(i, j, theta))
    }

    pub fn partial_transpose(&self, modes: &[usize]) -> Result<Self> {
        self.map_components(|c| c.partial_transpose(modes))
    }

    pub fn is_physical(&self, tol: T) -> bool {
        self.components.iter().all(|c| c.state.is_physical(tol))
    }
}

pub fn vacuum<T: Real>(n: usize) -> Result<GaussianComponent<T>> {
    if n == 0 {
        return Err(Error::invalid("vacuum needs n >= 1"));
    }
    Ok(GaussianComponent::vacuum(n))
}

pub fn two_mode_squeezed<T: Real>(r: T) -> GaussianComponent<T> {
    GaussianComponent::two_mode_squeezed(r)
}

/// Two two-mode squeezed vacua on modes (1,2) and (3,4), then a 50/50
/// beamsplitter on modes 2 and 3.
pub fn squeezed_cluster<T: Real>(r: T) -> GaussianComponent<T> {
    let tms = GaussianComponent::two_mode_squeezed(r);
    tms.tensor(&tms)
        .beamsplitter(2, 3, T::FRAC_PI_4())
        .expect("modes 2 and 3 exist")
}

/// `(1 − b)|ψ⟩⟨ψ| + b|vac⟩⟨vac|` with `|ψ⟩` the squeezed four-mode cluster.
pub fn example_state<T: Real>(r: T, b: T) -> Result<GaussianMixtureState<T>> {
    if !(b >= T::zero() && b <= T::one()) {
        return Err(Error::invalid(format!("mixing parameter b = {b} outside [0, 1]")));
    }
    GaussianMixtureState::from_weighted(vec![
        (T::one() - b, squeezed_cluster(r)),
        (b, GaussianComponent::vacuum(4)),
    ])
}

/// One-dimensional Gaussian-mixture density of a linear observable.
#[derive(Debug, Clone, PartialEq)]
pub struct Marginal1D<T> {
    pub weights: Vec<T>,
    pub means: Vec<T>,
    pub variances: Vec<T>,
}

impl<T: Real> Marginal1D<T> {
    pub fn new(weights: Vec<T>, means: Vec<T>, variances: Vec<T>) -> Result<Self> {
        if weights.is_empty() || weights.len() != means.len() || weights.len() != variances.len() {
            return Err(Error::invalid("marginal needs equal-length, non-empty lists"));
        }
        if variances.iter().any(|&v| !(v > T::zero()) || !v.is_finite()) {
            return Err(Error::invalid("marginal variances must be positive and finite"));
        }
        let total: T = weights.iter().copied().sum();
        if weights.iter().any(|&w| w < T::zero())
            || (total - T::one()).abs() > T::lit(1e-9)
        {
            return Err(Error::invalid("marginal weights must be non-negative and sum to 1"));
        }
        Ok(Self {
            weights,
            means,
            variances,
        })
    }

    pub fn gaussian(mean: T, variance: T) -> Result<Self> {
        Self::new(vec![T::one()], vec![mean], vec![variance])
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn mean(&self) -> T {
        self.weights
            .iter()
            .zip(&self.means)
            .map(|(&w, &m)| w * m)
            .sum()
    }

    /// Law of total variance.
    pub fn variance(&self) -> T {
        let m = self.mean();
        let second: T = self
            .weights
            .iter()
            .zip(self.means.iter().zip(&self.variances))
            .map(|(&w, (&mu, &v))| w * (v + mu * mu))
            .sum();
        second - m * m
    }

    pub fn density(&self, x: T) -> T {
        let two_pi = T::lit(2.0) * T::PI();
        self.weights
            .iter()
            .zip(self.means.iter().zip(&self.variances))
            .map(|(&w, (&mu, &v))| {
                let d = x - mu;
                w * (-(d * d) / (T::lit(2.0) * v)).exp() / (two_pi * v).sqrt()
            })
            .sum()
    }

    /// Collapses identical components and drops zero weights. Returns a
    /// single Gaussian when every component coincides.
    pub fn simplified(&self) -> Self {
        let mut out: Vec<(T, T, T)> = Vec::new();
        for ((&w, &m), &v) in self.weights.iter().zip(&self.means).zip(&self.variances) {
            if w.is_zero() {
                continue;
            }
            match out.iter_mut().find(|(_, om, ov)| *om == m && *ov == v) {
                Some(slot) => slot.0 += w,
                None => out.push((w, m, v)),
            }
        }
        Self {
            weights: out.iter().map(|t| t.0).collect(),
            means: out.iter().map(|t| t.1).collect(),
            variances: out.iter().map(|t| t.2).collect(),
        }
    }
}

/// Distribution of `Σ c_j x_j` (or `Σ c_j p_j`) on a mixture state.
pub fn marginal<T: Real>(
    state: &GaussianMixtureState<T>,
    coeffs: &[T],
    quadrature: Quadrature,
) -> Result<Marginal1D<T>> {
    if coeffs.len() != state.n {
        return Err(Error::DimensionMismatch {
            expected: state.n,
            found: coeffs.len(),
        });
    }
    if coeffs.iter().all(|c| c.is_zero()) {
        return Err(Error::invalid("marginal of the zero observable"));
    }
    let mut weights = Vec::with_capacity(state.components.len());
    let mut means = Vec::with_capacity(state.components.len());
    let mut variances = Vec::with_capacity(state.components.len());
    for c in &state.components {
        let (m, v) = c.state.linear_moments(coeffs, quadrature);
        weights.push(c.weight);
        means.push(m);
        variances.push(v);
    }
    Marginal1D::new(weights, means, variances)
}

/// Random physical Gaussian component; see [`random::RandomGaussian`].
pub fn random_component<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> GaussianComponent<T> {
    random::RandomGaussian::default().sample(rng, n)
}
