//! Task file format and atomic file output.
//!
//! A task file is one JSON document:
//!
//! ```json
//! {"d": 2, "A": [{"x": [0.1, 0.2], "y": 1}], "B": [[0.3, 0.4]], "ground_truth_B": [0], "seed": 1}
//! ```
//!
//! `ground_truth_B` is optional.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::domain::{FeatureVector, Labeling, Task, TrustedSet, UnlabeledPool};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrustedExample {
    pub x: Vec<f64>,
    pub y: u8,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskFile {
    pub d: usize,
    #[serde(rename = "A")]
    pub a: Vec<TrustedExample>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<f64>>,
    #[serde(rename = "ground_truth_B", default, skip_serializing_if = "Option::is_none")]
    pub ground_truth_b: Option<Vec<u8>>,
    pub seed: u64,
}

fn bit(v: u8) -> Result<bool> {
    match v {
        0 => Ok(false),
        1 => Ok(true),
        other => Err(Error::InvalidConfig(format!("label must be 0 or 1, got {other}"))),
    }
}

impl TaskFile {
    pub fn into_task<T: Scalar>(self) -> Result<Task<T>> {
        let vector = |v: &[f64]| -> Result<FeatureVector<T>> {
            if v.len() != self.d {
                return Err(Error::DimensionMismatch {
                    expected: self.d,
                    got: v.len(),
                });
            }
            let converted = v
                .iter()
                .enumerate()
                .map(|(i, &c)| T::from_f64(c).ok_or(Error::NonFinite(i)))
                .collect::<Result<Vec<_>>>()?;
            FeatureVector::new(converted)
        };
        let trusted = TrustedSet::new(
            self.a.iter().map(|e| vector(&e.x)).collect::<Result<_>>()?,
            self.a.iter().map(|e| bit(e.y)).collect::<Result<_>>()?,
        )?;
        let pool = UnlabeledPool::new(self.b.iter().map(|v| vector(v)).collect::<Result<_>>()?)?;
        let ground_truth = match &self.ground_truth_b {
            Some(g) => Some(Labeling::from_labels(&g.iter().map(|&v| bit(v)).collect::<Result<Vec<_>>>()?)?),
            None => None,
        };
        Task::new(trusted, pool, ground_truth, self.seed)
    }

    pub fn from_task<T: Scalar>(task: &Task<T>) -> Self {
        let to_f64 = |v: &FeatureVector<T>| v.coords().iter().map(|c| c.to_f64().expect("finite")).collect();
        Self {
            d: task.dim(),
            a: task
                .trusted
                .points()
                .iter()
                .zip(task.trusted.labels())
                .map(|(p, &y)| TrustedExample { x: to_f64(p), y: y as u8 })
                .collect(),
            b: task.pool.items().iter().map(to_f64).collect(),
            ground_truth_b: task.ground_truth.map(|g| g.labels().into_iter().map(u8::from).collect()),
            seed: task.seed,
        }
    }
}

pub fn task_to_json<T: Scalar>(task: &Task<T>) -> Result<String> {
    Ok(serde_json::to_string(&TaskFile::from_task(task))?)
}

pub fn task_from_json<T: Scalar>(text: &str) -> Result<Task<T>> {
    serde_json::from_str::<TaskFile>(text)?.into_task()
}

pub fn read_task<T: Scalar>(path: &Path) -> Result<Task<T>> {
    task_from_json(&fs::read_to_string(path)?)
}

pub fn write_task<T: Scalar>(task: &Task<T>, path: &Path) -> Result<()> {
    let mut text = task_to_json(task)?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}
