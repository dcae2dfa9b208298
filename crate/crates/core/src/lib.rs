//! Entanglement witnesses for continuous-variable Gaussian-mixture states
//! built from uncertainty relations of non-local linear observables.
//!
//! Numerical types are generic over [`scalar::Real`] (`f32` or `f64`); the
//! aliases below fix the scalar to `f64`.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod criteria;
pub mod entropy;
pub mod error;
pub mod io;
pub mod linalg;
pub mod modes;
pub mod operators;
pub mod quadrature;
pub mod scalar;
pub mod search;
pub mod states;
pub mod sweep;

pub use criteria::{
    analyze_coverage, bipartite_test, bound_value, functional_value, genuine_multi_pair,
    genuine_single_pair, CoverageAnalysis, CriterionKind, CriterionReport, Verdict,
};
pub use entropy::{renyi_entropy, shannon_entropy, QuadratureConfig};
pub use error::{Error, Result};
pub use modes::{enumerate_bipartitions, Bipartition, Side};
pub use operators::presets::LabeledPair;
pub use operators::NonLocalPair;
pub use scalar::Real;
pub use search::{grid_search, simplex_refine, Family, ParamRange, SearchSpec};
pub use states::{GaussianComponent, GaussianMixtureState, Marginal1D, Quadrature};

pub type Pair = operators::NonLocalPair<f64>;
pub type NamedPair = operators::presets::LabeledPair<f64>;
pub type Component = states::GaussianComponent<f64>;
pub type State = states::GaussianMixtureState<f64>;
pub type Marginal = states::Marginal1D<f64>;
pub type Seeds = operators::SeedMatrices<f64>;
pub type RealMatrix = linalg::Matrix<f64>;
