//! Searching operator coefficients for the most negative violation margin of
//! a genuine single-pair criterion on a fixed state.
//!
//! A search only ever certifies: finding no violation says nothing about
//! separability.

use serde::{Deserialize, Serialize};

use crate::criteria::{genuine_single_pair, CriterionKind, CriterionReport};
use crate::entropy::QuadratureConfig;
use crate::error::{Error, Result};
use crate::operators::{single_pair_family, NonLocalPair};
use crate::scalar::Real;
use crate::states::GaussianMixtureState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// Parameters `(h, h′, γ)`.
    SinglePairFamily(usize),
    /// Parameters `(h_1..h_n, g_1..g_{n−1})`; `g_n` is fixed by `δ = 0`.
    FreeCommutingPair(usize),
}

impl Family {
    pub fn n(&self) -> usize {
        match *self {
            Family::SinglePairFamily(n) | Family::FreeCommutingPair(n) => n,
        }
    }

    pub fn dimension(&self) -> usize {
        match *self {
            Family::SinglePairFamily(_) => 3,
            Family::FreeCommutingPair(n) => 2 * n - 1,
        }
    }

    /// Builds the pair for a parameter vector.
    pub fn pair<T: Real>(&self, params: &[f64]) -> Result<NonLocalPair<T>> {
        if params.len() != self.dimension() {
            return Err(Error::invalid(format!(
                "family expects {} parameters, got {}",
                self.dimension(),
                params.len()
            )));
        }
        match *self {
            Family::SinglePairFamily(n) => {
                single_pair_family(n, T::lit(params[0]), T::lit(params[1]), T::lit(params[2]))
            }
            Family::FreeCommutingPair(n) => {
                let h: Vec<T> = params[..n].iter().map(|&x| T::lit(x)).collect();
                let mut g: Vec<T> = params[n..].iter().map(|&x| T::lit(x)).collect();
                let hn = h[n - 1];
                if hn.is_zero() {
                    return Err(Error::DegenerateCoefficient(
                        "the free commuting pair needs h_n != 0".into(),
                    ));
                }
                let partial: T = h[..n - 1].iter().zip(&g).map(|(&a, &b)| a * b).sum();
                g.push(-partial / hn);
                NonLocalPair::new(h, g)
            }
        }
    }
}

/// One axis of the grid. A single step requires `lo == hi` and freezes the
/// parameter (it is also left untouched by refinement).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamRange {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl ParamRange {
    pub fn new(lo: f64, hi: f64, steps: usize) -> Result<Self> {
        let r = Self { lo, hi, steps };
        r.validate()?;
        Ok(r)
    }

    pub fn fixed(value: f64) -> Self {
        Self {
            lo: value,
            hi: value,
            steps: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.lo.is_finite() || !self.hi.is_finite() {
            return Err(Error::invalid("grid bounds must be finite"));
        }
        match self.steps {
            0 => Err(Error::invalid("grid axis needs at least one step")),
            1 if self.lo != self.hi => Err(Error::invalid(
                "a one-step grid axis must have lo == hi",
            )),
            1 => Ok(()),
            _ if !(self.lo < self.hi) => Err(Error::invalid("grid axis needs lo < hi")),
            _ => Ok(()),
        }
    }

    pub fn value(&self, i: usize) -> f64 {
        if self.steps == 1 {
            self.lo
        } else {
            self.lo + (self.hi - self.lo) * i as f64 / (self.steps - 1) as f64
        }
    }

    pub fn spacing(&self) -> f64 {
        if self.steps == 1 {
            0.0
        } else {
            (self.hi - self.lo) / (self.steps - 1) as f64
        }
    }

    pub fn is_frozen(&self) -> bool {
        self.steps == 1
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchSpec {
    pub family: Family,
    pub criterion: CriterionKind,
    pub grid: Vec<ParamRange>,
    #[serde(default)]
    pub refine: bool,
}

impl SearchSpec {
    pub fn validate(&self) -> Result<()> {
        if self.grid.len() != self.family.dimension() {
            return Err(Error::invalid(format!(
                "grid has {} axes but the family has {} parameters",
                self.grid.len(),
                self.family.dimension()
            )));
        }
        let min_n = match self.family {
            Family::SinglePairFamily(_) => 3,
            Family::FreeCommutingPair(_) => 2,
        };
        if self.family.n() < min_n {
            return Err(Error::invalid(format!(
                "family needs at least {min_n} modes"
            )));
        }
        if self.criterion.is_renyi() {
            return Err(Error::Unsupported(
                "searches run genuine criteria, which do not accept Rényi functionals".into(),
            ));
        }
        self.grid.iter().try_for_each(ParamRange::validate)
    }

    pub fn grid_size(&self) -> usize {
        self.grid.iter().map(|r| r.steps).product()
    }

    /// Parameters of the grid point with the given row-major index (first
    /// axis slowest).
    pub fn grid_point(&self, mut index: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.grid.len()];
        for (k, axis) in self.grid.iter().enumerate().rev() {
            out[k] = axis.value(index % axis.steps);
            index /= axis.steps;
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchResult {
    pub params: Vec<f64>,
    /// Row-major grid index of the starting point.
    pub grid_index: usize,
    pub evaluated: usize,
    pub skipped: usize,
    pub refined: bool,
    pub report: CriterionReport,
    pub note: String,
}

/// Evaluates one parameter point. `Ok(None)` marks an infeasible point
/// (degenerate coefficients or a coverage gap).
pub fn evaluate_point<T: Real>(
    state: &GaussianMixtureState<T>,
    spec: &SearchSpec,
    params: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Option<CriterionReport>> {
    let pair = match spec.family.pair::<T>(params) {
        Ok(p) => p,
        Err(Error::InvalidArgument(_) | Error::DegenerateCoefficient(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    match genuine_single_pair(state, &pair, spec.criterion, cfg) {
        Ok(r) => Ok(Some(r)),
        Err(Error::CoverageGap { .. } | Error::NotCommuting { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

fn check_state<T: Real>(state: &GaussianMixtureState<T>, spec: &SearchSpec) -> Result<()> {
    spec.validate()?;
    if state.n() != spec.family.n() {
        return Err(Error::DimensionMismatch {
            expected: spec.family.n(),
            found: state.n(),
        });
    }
    Ok(())
}

fn note_for(report: &CriterionReport) -> String {
    if report.is_violated() {
        "witness found: genuine multipartite entanglement certified".into()
    } else {
        "no witness found in the searched family".into()
    }
}

/// Exhaustive grid evaluation. The best point has the most negative margin;
/// ties go to the earliest grid index.
pub fn grid_search<T: Real>(
    state: &GaussianMixtureState<T>,
    spec: &SearchSpec,
    cfg: &QuadratureConfig,
) -> Result<SearchResult> {
    check_state(state, spec)?;
    let mut best: Option<(usize, Vec<f64>, CriterionReport)> = None;
    let (mut evaluated, mut skipped) = (0, 0);
    for idx in 0..spec.grid_size() {
        let params = spec.grid_point(idx);
        match evaluate_point(state, spec, &params, cfg)? {
            None => skipped += 1,
            Some(rep) => {
                evaluated += 1;
                let better = best
                    .as_ref()
                    .is_none_or(|(_, _, b)| rep.violation < b.violation);
                if better {
                    best = Some((idx, params, rep));
                }
            }
        }
    }
    let (grid_index, params, report) = best.ok_or(Error::NoCandidate)?;
    let mut result = SearchResult {
        note: note_for(&report),
        params,
        grid_index,
        evaluated,
        skipped,
        refined: false,
        report,
    };
    if spec.refine {
        let (params, report) = simplex_refine(state, spec, &result.params, cfg)?;
        result.note = note_for(&report);
        result.params = params;
        result.report = report;
        result.refined = true;
    }
    Ok(result)
}

pub const REFINE_MAX_ITER: usize = 500;
pub const REFINE_DIAMETER: f64 = 1e-6;

/// Downhill-simplex minimization of the margin over the non-frozen axes,
/// starting from a feasible point. Infeasible vertices score `+∞`; the
/// `δ = 0` constraint holds by construction of each family.
pub fn simplex_refine<T: Real>(
    state: &GaussianMixtureState<T>,
    spec: &SearchSpec,
    init: &[f64],
    cfg: &QuadratureConfig,
) -> Result<(Vec<f64>, CriterionReport)> {
    check_state(state, spec)?;
    let init_report = evaluate_point(state, spec, init, cfg)?
        .ok_or_else(|| Error::invalid("simplex refinement needs a feasible starting point"))?;

    let free: Vec<usize> = (0..spec.grid.len())
        .filter(|&k| !spec.grid[k].is_frozen())
        .collect();
    if free.is_empty() {
        return Ok((init.to_vec(), init_report));
    }
    let embed = |y: &[f64]| -> Vec<f64> {
        let mut p = init.to_vec();
        for (slot, &k) in free.iter().enumerate() {
            p[k] = y[slot];
        }
        p
    };
    let objective = |y: &[f64]| -> Result<f64> {
        Ok(evaluate_point(state, spec, &embed(y), cfg)?
            .map_or(f64::INFINITY, |r| r.violation))
    };

    let d = free.len();
    let start: Vec<f64> = free.iter().map(|&k| init[k]).collect();
    let mut simplex: Vec<(Vec<f64>, f64)> = vec![(start.clone(), init_report.violation)];
    for (slot, &k) in free.iter().enumerate() {
        let step = {
            let s = 0.5 * spec.grid[k].spacing();
            if s > 0.0 {
                s
            } else {
                0.1 * start[slot].abs().max(1.0)
            }
        };
        let mut v = start.clone();
        v[slot] += step;
        let f = objective(&v)?;
        simplex.push((v, f));
    }

    for _ in 0..REFINE_MAX_ITER {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let diameter = simplex[1..]
            .iter()
            .map(|(v, _)| {
                v.iter()
                    .zip(&simplex[0].0)
                    .map(|(a, b)| (a - b).powi(2))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max);
        if diameter < REFINE_DIAMETER {
            break;
        }
        let centroid: Vec<f64> = (0..d)
            .map(|i| simplex[..d].iter().map(|(v, _)| v[i]).sum::<f64>() / d as f64)
            .collect();
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[d].0)
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };
        let (f_best, f_second_worst, f_worst) = (simplex[0].1, simplex[d - 1].1, simplex[d].1);

        let xr = along(1.0);
        let fr = objective(&xr)?;
        if fr < f_best {
            let xe = along(2.0);
            let fe = objective(&xe)?;
            simplex[d] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < f_second_worst {
            simplex[d] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr < f_worst {
            let x = along(0.5);
            let f = objective(&x)?;
            (x, f)
        } else {
            let x = along(-0.5);
            let f = objective(&x)?;
            (x, f)
        };
        if fc < f_worst.min(fr) {
            simplex[d] = (xc, fc);
            continue;
        }
        let best = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            let v: Vec<f64> = best
                .iter()
                .zip(&vertex.0)
                .map(|(b, x)| b + 0.5 * (x - b))
                .collect();
            let f = objective(&v)?;
            *vertex = (v, f);
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (best_y, best_f) = &simplex[0];
    if !(*best_f < init_report.violation) {
        return Ok((init.to_vec(), init_report));
    }
    let params = embed(best_y);
    let report = evaluate_point(state, spec, &params, cfg)?
        .expect("the best vertex has a finite margin, so it is feasible");
    Ok((params, report))
}
