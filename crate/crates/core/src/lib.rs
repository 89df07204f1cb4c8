//! Reversed supervision as a search problem.
//!
//! A small trusted set `A` (labeled) and a pool `B` of `n` unlabeled points
//! are given. Every one of the `2^n` labelings of `B` is a candidate training
//! set; a cheap learner is fit on it and scored by its 0-1 error `mu` on `A`.
//! This crate enumerates that space (Gray-code order with O(d) incremental
//! learner updates), explores it heuristically, runs the conventional and
//! self-training baselines, and models how hardware speedups rescale the
//! exponential runtime without changing its shape.
//!
//! Data-facing types are generic over the coordinate scalar (see [`Scalar`]);
//! the cost model is generic over a float type (see [`Real`]). Concrete
//! aliases for the common instantiations live at the crate root.

pub mod cost;
pub mod domain;
pub mod error;
pub mod harness;
pub mod io;
pub mod learners;
pub mod scalar;
pub mod search;
pub mod stats;

pub use domain::{
    evaluate_mu, labeling_from_word, EvalResult, FeatureVector, Labeling, SearchOutcome, Task,
    TrustedSet, UnlabeledPool,
};
pub use error::{Error, Result};
pub use learners::{LearnerKind, LearnerState, Model, Prediction};
pub use scalar::{Real, Scalar};

/// Exact rational coordinates; used where incremental and refit paths must agree bit for bit.
pub type Rational = num_rational::Rational64;

pub type Task64 = Task<f64>;
pub type Task32 = Task<f32>;
pub type ExactTask = Task<Rational>;

pub type LearnerState64 = LearnerState<f64>;
pub type ExactLearnerState = LearnerState<Rational>;

pub type SpeedupRegime64 = cost::SpeedupRegime<f64>;
pub type CostLedger64 = cost::CostLedger<f64>;
pub type ScalingRow64 = cost::ScalingRow<f64>;
pub type LinearFit64 = stats::LinearFit<f64>;
