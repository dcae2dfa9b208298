//! Differential Shannon and Rényi entropies of one-dimensional Gaussian
//! mixtures. Single Gaussians use closed forms; genuine mixtures are
//! integrated numerically in `f64` regardless of the scalar type.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::integrate;
use crate::scalar::Real;
use crate::states::Marginal1D;

/// Densities below this are treated as exactly zero (so `0 ln 0 = 0`).
pub const DENSITY_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub range_sigmas: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-9,
            range_sigmas: 12.0,
            max_subdivisions: 2000,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) {
            return Err(Error::invalid("quadrature abs_tol must be positive"));
        }
        if !(self.range_sigmas >= 6.0) {
            return Err(Error::invalid("quadrature range_sigmas must be at least 6"));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::invalid("quadrature needs at least one subdivision"));
        }
        Ok(())
    }

    pub fn with_abs_tol(self, abs_tol: f64) -> Self {
        Self { abs_tol, ..self }
    }
}

/// `½ ln(2πe σ²)`.
pub fn gaussian_shannon<T: Real>(variance: T) -> T {
    let two_pi_e = T::lit(2.0) * T::PI() * T::E();
    T::lit(0.5) * (two_pi_e * variance).ln()
}

/// `½ ln(2πσ²) + ln α / (2(α − 1))`.
pub fn gaussian_renyi<T: Real>(variance: T, alpha: T) -> T {
    let two_pi = T::lit(2.0) * T::PI();
    T::lit(0.5) * (two_pi * variance).ln() + alpha.ln() / (T::lit(2.0) * (alpha - T::one()))
}

fn check_alpha<T: Real>(alpha: T) -> Result<()> {
    if !(alpha > T::zero()) || !alpha.is_finite() || alpha == T::one() {
        return Err(Error::invalid(format!(
            "Rényi order must be positive, finite and not 1 (got {alpha})"
        )));
    }
    Ok(())
}

struct Mixture {
    w: Vec<f64>,
    m: Vec<f64>,
    inv_two_var: Vec<f64>,
    norm: Vec<f64>,
    sigma: Vec<f64>,
}

impl Mixture {
    fn new<T: Real>(m: &Marginal1D<T>) -> Self {
        let var: Vec<f64> = m.variances.iter().map(|v| v.as_f64()).collect();
        let two_pi = 2.0 * std::f64::consts::PI;
        Self {
            w: m.weights.iter().map(|x| x.as_f64()).collect(),
            m: m.means.iter().map(|x| x.as_f64()).collect(),
            inv_two_var: var.iter().map(|v| 0.5 / v).collect(),
            norm: var.iter().map(|v| 1.0 / (two_pi * v).sqrt()).collect(),
            sigma: var.iter().map(|v| v.sqrt()).collect(),
        }
    }

    fn density(&self, x: f64) -> f64 {
        let mut p = 0.0;
        for k in 0..self.w.len() {
            let d = x - self.m[k];
            p += self.w[k] * self.norm[k] * (-d * d * self.inv_two_var[k]).exp();
        }
        if p < DENSITY_FLOOR {
            0.0
        } else {
            p
        }
    }

    /// Integration window plus breakpoints around every component.
    fn breakpoints(&self, range_sigmas: f64) -> Vec<f64> {
        let smax = self.sigma.iter().copied().fold(0.0, f64::max);
        let lo = self.m.iter().copied().fold(f64::INFINITY, f64::min) - range_sigmas * smax;
        let hi = self.m.iter().copied().fold(f64::NEG_INFINITY, f64::max) + range_sigmas * smax;
        let mut pts = vec![lo, hi];
        for (&mu, &s) in self.m.iter().zip(&self.sigma) {
            for k in [0.0, 1.0, 3.0, 6.0] {
                for x in [mu - k * s, mu + k * s] {
                    if x > lo && x < hi {
                        pts.push(x);
                    }
                }
            }
        }
        pts
    }
}

/// Shannon entropy by quadrature, even for a single component.
pub fn shannon_entropy_numeric<T: Real>(m: &Marginal1D<T>, cfg: &QuadratureConfig) -> Result<T> {
    cfg.validate()?;
    let mix = Mixture::new(m);
    let f = |x: f64| {
        let p = mix.density(x);
        if p > 0.0 {
            -p * p.ln()
        } else {
            0.0
        }
    };
    let tol = cfg.abs_tol;
    let r = integrate(f, &mix.breakpoints(cfg.range_sigmas), cfg.max_subdivisions, |_, e| {
        e <= tol
    })?;
    Ok(T::lit(r.value))
}

/// Rényi entropy by quadrature of `∫ P^α`, even for a single component.
pub fn renyi_entropy_numeric<T: Real>(
    m: &Marginal1D<T>,
    alpha: T,
    cfg: &QuadratureConfig,
) -> Result<T> {
    check_alpha(alpha)?;
    cfg.validate()?;
    let a = alpha.as_f64();
    let mix = Mixture::new(m);
    let f = |x: f64| {
        let p = mix.density(x);
        if p > 0.0 {
            p.powf(a)
        } else {
            0.0
        }
    };
    // An error e on the integral I moves the entropy by about e / (|1 − α| I).
    let scale = cfg.abs_tol * (1.0 - a).abs();
    let r = integrate(f, &mix.breakpoints(cfg.range_sigmas), cfg.max_subdivisions, |v, e| {
        e <= scale * v.abs()
    })?;
    if !(r.value > 0.0) {
        return Err(Error::NumericFailure {
            estimate: r.value,
            error_bound: r.error,
        });
    }
    Ok(T::lit(r.value.ln() / (1.0 - a)))
}

pub fn shannon_entropy<T: Real>(m: &Marginal1D<T>, cfg: &QuadratureConfig) -> Result<T> {
    let s = m.simplified();
    if s.len() == 1 {
        return Ok(gaussian_shannon(s.variances[0]));
    }
    shannon_entropy_numeric(&s, cfg)
}

pub fn renyi_entropy<T: Real>(m: &Marginal1D<T>, alpha: T, cfg: &QuadratureConfig) -> Result<T> {
    check_alpha(alpha)?;
    let s = m.simplified();
    if s.len() == 1 {
        return Ok(gaussian_renyi(s.variances[0], alpha));
    }
    renyi_entropy_numeric(&s, alpha, cfg)
}
