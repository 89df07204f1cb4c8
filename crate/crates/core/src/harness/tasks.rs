use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::domain::{FeatureVector, Labeling, Task, TrustedSet, UnlabeledPool, MAX_POOL};
use crate::error::{Error, Result};

/// Parameters of a synthetic two-class task.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TaskSpec {
    pub m: usize,
    pub n: usize,
    pub d: usize,
    /// Distance between the two class means.
    pub separation: f64,
    pub noise_sigma: f64,
    pub seed: u64,
}

impl TaskSpec {
    pub fn validate(&self) -> Result<()> {
        if self.m == 0 || self.n == 0 || self.d == 0 {
            return Err(Error::InvalidConfig("m, n and d must all be >= 1".into()));
        }
        if self.n > MAX_POOL {
            return Err(Error::PoolTooLarge(self.n));
        }
        if !(self.separation >= 0.0 && self.separation.is_finite()) {
            return Err(Error::InvalidConfig(format!("separation must be >= 0, got {}", self.separation)));
        }
        if !(self.noise_sigma > 0.0 && self.noise_sigma.is_finite()) {
            return Err(Error::InvalidConfig(format!("noise sigma must be > 0, got {}", self.noise_sigma)));
        }
        Ok(())
    }

    pub fn with_n(self, n: usize) -> Self {
        Self { n, ..self }
    }
}

fn balanced_labels(count: usize, rng: &mut ChaCha8Rng) -> Vec<bool> {
    let mut labels: Vec<bool> = (0..count).map(|i| i % 2 == 1).collect();
    labels.shuffle(rng);
    labels
}

fn sample(label: bool, spec: &TaskSpec, noise: &Normal<f64>, rng: &mut ChaCha8Rng) -> Result<FeatureVector<f64>> {
    let offset = if label { spec.separation / 2.0 } else { -spec.separation / 2.0 };
    let coords = (0..spec.d)
        .map(|k| noise.sample(rng) + if k == 0 { offset } else { 0.0 })
        .collect();
    FeatureVector::new(coords)
}

/// Two spherical Gaussian classes with means `separation` apart along the
/// first axis. Trusted set and pool come from the same mixture, with class
/// counts balanced to within one. The pool's true labels are recorded.
pub fn generate_task(spec: &TaskSpec) -> Result<Task<f64>> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let noise = Normal::new(0.0, spec.noise_sigma).map_err(|e| Error::InvalidConfig(e.to_string()))?;

    let a_labels = balanced_labels(spec.m, &mut rng);
    let a_points = a_labels
        .iter()
        .map(|&l| sample(l, spec, &noise, &mut rng))
        .collect::<Result<Vec<_>>>()?;
    let b_labels = balanced_labels(spec.n, &mut rng);
    let b_points = b_labels
        .iter()
        .map(|&l| sample(l, spec, &noise, &mut rng))
        .collect::<Result<Vec<_>>>()?;

    Task::new(
        TrustedSet::new(a_points, a_labels)?,
        UnlabeledPool::new(b_points)?,
        Some(Labeling::from_labels(&b_labels)?),
        spec.seed,
    )
}
