//! Generalized Sugeno-type integrals over monotone measures and Jensen-type
//! bounds for them.
//!
//! The crate is organized bottom-up:
//!
//! - [`extreal`]: `[0, ∞]` and `[−∞, ∞]` arithmetic with `∞·0 = 0`.
//! - [`measure`]: finite ground spaces, monotone set functions, and 1-D
//!   closed-form measures (Lebesgue, `λ^q`, counting).
//! - [`binops`]: the nondecreasing binary operations `∘` and the mixed-sign
//!   operations `⋆`, with a sampled flag checker.
//! - [`transforms`]: piecewise-monotone maps `H` with exact one-sided limits,
//!   interval extrema, preimages and support lines.
//! - [`profile`] and [`integrals`]: the integral `sup_t t∘μ(A∩{f≥t})`, exact on
//!   finite spaces and by certified-from-below search on level-set profiles.
//! - [`bounds`]: every lower/upper Jensen-type bound as a closed form, a
//!   hypothesis checker, and [`bounds::check_bound`].
//! - [`symmetric`]: positive/negative parts, `⋆`-symmetric and asymmetric
//!   integrals, and the signed upper bound.
//! - [`verify`]: measure predicates, random instances, a brute-force oracle,
//!   attainability witnesses, and a shrinking fuzzer.
//! - [`instance`] and [`cli`]: JSON formats, reproduction fixtures and the
//!   command-line front end.

// `!(x >= 0.0)` comparisons deliberately reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod binops;
pub mod bounds;
pub mod cli;
pub mod extreal;
pub mod instance;
pub mod integrals;
pub mod interval_set;
pub mod measure;
pub mod profile;
pub mod symmetric;
pub mod transforms;
pub mod verify;

pub use binops::{BinaryOpSpec, MixedOpSpec, OpFlags};
pub use bounds::{check_bound, BoundId, BoundReport, Direction};
pub use extreal::{ExtReal, SignedExtReal};
pub use integrals::{IntegralResult, Mode};
pub use interval_set::IntervalSet;
pub use measure::{DiscreteMeasure, FiniteSpace, IntervalMeasure, MonotoneMeasure, StorageMode, Subset};
pub use profile::{Instance, SurvivalProfile};
pub use transforms::PiecewiseMap;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid value: {0}")]
    InvalidValue(String),
    #[error("space size {0} is outside 1..=24")]
    SpaceSize(usize),
    #[error("subset {mask:#b} does not fit a space of {n} elements")]
    MalformedSubset { mask: u64, n: usize },
    #[error("strict measure has no value for subset {{{0}}}")]
    MissingSubset(String),
    #[error("operation requires a measure on a finite space")]
    NotEnumerable,
    #[error("{0} is outside the domain")]
    Domain(String),
    #[error("hypothesis not met: {0}")]
    Hypothesis(String),
    #[error("unknown operation {0:?}")]
    UnknownOp(String),
    #[error("invalid operation: {0}")]
    InvalidOp(String),
    #[error("invalid transform: {0}")]
    InvalidTransform(String),
    #[error("integral is not finite: {0}")]
    NotFinite(String),
    #[error("{0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
