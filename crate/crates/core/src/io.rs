//! JSON formats for operator sets and states.
//!
//! Operator files hold one pair `{"h": [...], "g": [...], "label": "..."}`,
//! an array of them, or `{"pairs": [...]}`; `n` is optional and checked when
//! present. State files are either explicit mixtures
//! `{"n": 2, "components": [{"weight": 1, "mean": [...], "cov": [[...]]}]}`
//! or presets such as `{"preset": "example", "r": 2, "b": 0.1}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::operators::presets::LabeledPair;
use crate::operators::NonLocalPair;
use crate::states::{
    example_state, two_mode_squeezed, GaussianComponent, GaussianMixtureState, WeightedComponent,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub h: Vec<f64>,
    pub g: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum OperatorFile {
    Many(Vec<PairSpec>),
    Wrapped { pairs: Vec<PairSpec> },
    One(PairSpec),
}

fn json_err(what: &str, e: serde_json::Error) -> Error {
    Error::InvalidArgument(format!("malformed {what}: {e}"))
}

pub fn parse_pairs(text: &str) -> Result<Vec<LabeledPair<f64>>> {
    let file: OperatorFile = serde_json::from_str(text).map_err(|e| json_err("operator file", e))?;
    let specs = match file {
        OperatorFile::Many(v) | OperatorFile::Wrapped { pairs: v } => v,
        OperatorFile::One(p) => vec![p],
    };
    if specs.is_empty() {
        return Err(Error::invalid("operator file contains no pairs"));
    }
    specs
        .into_iter()
        .enumerate()
        .map(|(i, s)| {
            let label = s.label.unwrap_or_else(|| format!("pair {}", i + 1));
            if let Some(n) = s.n {
                if s.h.len() != n || s.g.len() != n {
                    return Err(Error::invalid(format!(
                        "pair '{label}' declares n = {n} but has {} h and {} g coefficients",
                        s.h.len(),
                        s.g.len()
                    )));
                }
            }
            let pair = NonLocalPair::new(s.h, s.g)
                .map_err(|e| Error::invalid(format!("pair '{label}': {e}")))?;
            Ok(LabeledPair { label, pair })
        })
        .collect()
}

pub fn pairs_to_json(pairs: &[LabeledPair<f64>]) -> serde_json::Value {
    let specs: Vec<PairSpec> = pairs
        .iter()
        .map(|lp| PairSpec {
            n: Some(lp.pair.n()),
            h: lp.pair.h().to_vec(),
            g: lp.pair.g().to_vec(),
            label: Some(lp.label.clone()),
        })
        .collect();
    serde_json::to_value(specs).expect("plain data serializes")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentSpec {
    pub weight: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean: Option<Vec<f64>>,
    pub cov: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateSpec {
    pub n: usize,
    pub components: Vec<ComponentSpec>,
}

#[derive(Deserialize)]
#[serde(tag = "preset", rename_all = "snake_case", deny_unknown_fields)]
enum PresetState {
    Example { r: f64, b: f64 },
    Vacuum { n: usize },
    TwoModeSqueezed { r: f64 },
}

#[derive(Deserialize)]
#[serde(untagged)]
enum StateFile {
    Preset(PresetState),
    Explicit(StateSpec),
}

pub fn parse_state(text: &str) -> Result<GaussianMixtureState<f64>> {
    let file: StateFile = serde_json::from_str(text).map_err(|e| json_err("state file", e))?;
    match file {
        StateFile::Preset(PresetState::Example { r, b }) => example_state(r, b),
        StateFile::Preset(PresetState::Vacuum { n }) => Ok(GaussianMixtureState::pure(
            crate::states::vacuum(n)?,
        )),
        StateFile::Preset(PresetState::TwoModeSqueezed { r }) => {
            Ok(GaussianMixtureState::pure(two_mode_squeezed(r)))
        }
        StateFile::Explicit(spec) => state_from_spec(spec),
    }
}

pub fn state_from_spec(spec: StateSpec) -> Result<GaussianMixtureState<f64>> {
    let n = spec.n;
    let comps = spec
        .components
        .into_iter()
        .map(|c| {
            let cov = Matrix::from_rows(&c.cov)?;
            let mean = c.mean.unwrap_or_else(|| vec![0.0; 2 * n]);
            Ok(WeightedComponent {
                weight: c.weight,
                state: GaussianComponent::new(n, mean, cov)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    GaussianMixtureState::new(comps)
}

pub fn state_to_spec(state: &GaussianMixtureState<f64>) -> StateSpec {
    StateSpec {
        n: state.n(),
        components: state
            .components()
            .iter()
            .map(|c| ComponentSpec {
                weight: c.weight,
                mean: Some(c.state.mean().to_vec()),
                cov: c.state.cov().to_rows(),
            })
            .collect(),
    }
}

pub fn state_to_json(state: &GaussianMixtureState<f64>) -> serde_json::Value {
    serde_json::to_value(state_to_spec(state)).expect("plain data serializes")
}
