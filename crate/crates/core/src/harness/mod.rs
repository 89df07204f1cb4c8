//! Synthetic tasks, baselines, scaling runs and report output.

pub mod baselines;
pub mod scaling;
pub mod tasks;

use std::path::Path;

use serde::Serialize;

use crate::error::Result;
use crate::io::write_atomic;

pub use baselines::{
    conventional_pipeline, holdout_split, joint_report, self_training_baseline, ConventionalResult, JointReport,
    SelfTrainingConfig, SelfTrainingResult,
};
pub use scaling::{scaling_experiment, ScalingConfig, ScalingReport, ScalingRow};
pub use tasks::{generate_task, TaskSpec};

/// JSON summary envelope: `{"spec": ..., "results": ..., "slope": ...}`.
#[derive(Clone, Debug, Serialize)]
pub struct Summary<S, R> {
    pub spec: S,
    pub results: R,
    pub slope: Option<SlopeSummary>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SlopeSummary {
    pub fitted: f64,
    pub stderr: f64,
}

impl<S: Serialize, R: Serialize> Summary<S, R> {
    pub fn new(spec: S, results: R) -> Self {
        Self {
            spec,
            results,
            slope: None,
        }
    }

    pub fn with_slope(mut self, fitted: f64, stderr: f64) -> Self {
        self.slope = Some(SlopeSummary { fitted, stderr });
        self
    }

    pub fn to_json(&self) -> Result<String> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        Ok(text)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_atomic(path, self.to_json()?.as_bytes())
    }
}
