//! Violation margins of the three example criteria along the mixing line
//! `(1 − b)|ψ⟩⟨ψ| + b|vac⟩⟨vac|`.

use std::fmt::Write as _;
use std::io::Write;

use crate::criteria::{functional_value, CriterionKind};
use crate::entropy::QuadratureConfig;
use crate::error::{Error, Result};
use crate::operators::presets::example_pairs;
use crate::states::{example_state, marginal, Quadrature};

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub r: f64,
    pub b_lo: f64,
    pub b_hi: f64,
    pub steps: usize,
    pub criteria: Vec<CriterionKind>,
}

impl SweepConfig {
    pub fn new(r: f64, b_lo: f64, b_hi: f64, steps: usize) -> Result<Self> {
        let cfg = Self {
            r,
            b_lo,
            b_hi,
            steps,
            criteria: vec![
                CriterionKind::SumVariance,
                CriterionKind::ProductVariance,
                CriterionKind::ShannonEntropic,
            ],
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.r.is_finite() {
            return Err(Error::invalid("squeezing r must be finite"));
        }
        if !(0.0..=1.0).contains(&self.b_lo) || !(0.0..=1.0).contains(&self.b_hi) {
            return Err(Error::invalid("b range must lie in [0, 1]"));
        }
        if !(self.b_lo < self.b_hi) {
            return Err(Error::invalid("b range needs lo < hi"));
        }
        if self.steps < 2 {
            return Err(Error::invalid("a sweep needs at least 2 steps"));
        }
        if self.criteria.is_empty() || self.criteria.iter().any(|k| k.is_renyi()) {
            return Err(Error::invalid(
                "sweep criteria must be a non-empty subset of linear, product, entropic",
            ));
        }
        Ok(())
    }

    pub fn b_values(&self) -> Vec<f64> {
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.b_hi
                } else {
                    self.b_lo + (self.b_hi - self.b_lo) * i as f64 / last
                }
            })
            .collect()
    }
}

fn column_name(kind: CriterionKind) -> &'static str {
    match kind {
        CriterionKind::SumVariance => "linear_violation",
        CriterionKind::ProductVariance => "product_violation",
        CriterionKind::ShannonEntropic => "entropic_violation",
        CriterionKind::Renyi { .. } => unreachable!("rejected by validation"),
    }
}

/// Margin of one criterion at one mixing value:
/// linear `Σ Var − 1`, product `Σ_m 2 Δμ_m Δν_m − 1`, entropic `Σ h − ln(πe)`.
pub fn example_margin(kind: CriterionKind, r: f64, b: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let state = example_state(r, b)?;
    let mut total = 0.0;
    for lp in example_pairs::<f64>() {
        let mu = marginal(&state, lp.pair.h(), Quadrature::Position)?;
        let nu = marginal(&state, lp.pair.g(), Quadrature::Momentum)?;
        total += match kind {
            CriterionKind::ProductVariance => 2.0 * (mu.variance() * nu.variance()).sqrt(),
            CriterionKind::SumVariance | CriterionKind::ShannonEntropic => {
                functional_value(kind, &mu, &nu, cfg)?
            }
            CriterionKind::Renyi { .. } => {
                return Err(Error::Unsupported("the example sweep has no Rényi column".into()))
            }
        };
    }
    let threshold = match kind {
        CriterionKind::ShannonEntropic => (std::f64::consts::PI * std::f64::consts::E).ln(),
        _ => 1.0,
    };
    Ok(total - threshold)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub b: f64,
    /// One entry per configured criterion; `None` marks a quadrature failure.
    pub margins: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutput {
    pub criteria: Vec<CriterionKind>,
    pub rows: Vec<SweepRow>,
    pub failures: Vec<String>,
}

pub fn run_sweep(cfg: &SweepConfig, quad: &QuadratureConfig) -> Result<SweepOutput> {
    cfg.validate()?;
    let mut rows = Vec::with_capacity(cfg.steps);
    let mut failures = Vec::new();
    for b in cfg.b_values() {
        let mut margins = Vec::with_capacity(cfg.criteria.len());
        for &kind in &cfg.criteria {
            match example_margin(kind, cfg.r, b, quad) {
                Ok(m) => margins.push(Some(m)),
                Err(e @ Error::NumericFailure { .. }) => {
                    failures.push(format!("b = {b}, {kind}: {e}"));
                    margins.push(None);
                }
                Err(e) => return Err(e),
            }
        }
        rows.push(SweepRow { b, margins });
    }
    Ok(SweepOutput {
        criteria: cfg.criteria.clone(),
        rows,
        failures,
    })
}

impl SweepOutput {
    pub fn header(&self) -> String {
        std::iter::once("b")
            .chain(self.criteria.iter().map(|&k| column_name(k)))
            .collect::<Vec<_>>()
            .join(",")
    }

    /// CSV with 12 significant digits in scientific notation; failed cells
    /// are written as `nan`.
    pub fn write_csv(&self, mut out: impl Write) -> std::io::Result<()> {
        writeln!(out, "{}", self.header())?;
        for row in &self.rows {
            let mut line = format!("{:.11e}", row.b);
            for m in &row.margins {
                match m {
                    Some(v) => write!(line, ",{v:.11e}").expect("writing to a String"),
                    None => line.push_str(",nan"),
                }
            }
            writeln!(out, "{line}")?;
        }
        Ok(())
    }

    /// Largest `b` at which the given column is still negative.
    pub fn last_negative(&self, kind: CriterionKind) -> Option<f64> {
        let col = self.criteria.iter().position(|&k| k == kind)?;
        self.rows
            .iter()
            .rev()
            .find(|r| r.margins[col].is_some_and(|m| m < 0.0))
            .map(|r| r.b)
    }

    /// A minimal line chart: one polyline per criterion and a zero line.
    pub fn to_svg(&self) -> String {
        const W: f64 = 640.0;
        const H: f64 = 400.0;
        const PAD: f64 = 50.0;
        let values: Vec<f64> = self
            .rows
            .iter()
            .flat_map(|r| r.margins.iter().flatten().copied())
            .collect();
        let ymin = values.iter().copied().fold(0.0, f64::min);
        let ymax = values.iter().copied().fold(0.0, f64::max);
        let yspan = if ymax > ymin { ymax - ymin } else { 1.0 };
        let (blo, bhi) = (
            self.rows.first().map_or(0.0, |r| r.b),
            self.rows.last().map_or(1.0, |r| r.b),
        );
        let bspan = if bhi > blo { bhi - blo } else { 1.0 };
        let px = |b: f64| PAD + (b - blo) / bspan * (W - 2.0 * PAD);
        let py = |y: f64| H - PAD - (y - ymin) / yspan * (H - 2.0 * PAD);

        let mut svg = String::new();
        let _ = writeln!(
            svg,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
        );
        let _ = writeln!(svg, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
        let _ = writeln!(
            svg,
            r#"<line x1="{PAD}" y1="{y0:.2}" x2="{x2}" y2="{y0:.2}" stroke="black" stroke-dasharray="4 3"/>"#,
            y0 = py(0.0),
            x2 = W - PAD
        );
        let colors = ["#1f77b4", "#d62728", "#2ca02c"];
        for (c, kind) in self.criteria.iter().enumerate() {
            let points: Vec<String> = self
                .rows
                .iter()
                .filter_map(|r| r.margins[c].map(|m| format!("{:.2},{:.2}", px(r.b), py(m))))
                .collect();
            let color = colors[c % colors.len()];
            let _ = writeln!(
                svg,
                r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
                points.join(" ")
            );
            let _ = writeln!(
                svg,
                r#"<text x="{x:.2}" y="{y:.2}" font-family="sans-serif" font-size="12" fill="{color}">{kind}</text>"#,
                x = W - PAD - 80.0,
                y = PAD + 16.0 * c as f64
            );
        }
        let _ = writeln!(
            svg,
            r#"<text x="{x:.2}" y="{y:.2}" font-family="sans-serif" font-size="12">b</text>"#,
            x = W / 2.0,
            y = H - 15.0
        );
        svg.push_str("</svg>\n");
        svg
    }
}
