use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::domain::{mask, Labeling, Task};
use crate::error::{Error, Result};
use crate::learners::{LearnerKind, LearnerState};
use crate::scalar::Scalar;

use super::exhaustive::{exhaustive_search, ExhaustiveConfig};

/// How often a uniformly random labeling lands on a global optimum.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChanceHit {
    pub n: u32,
    pub best_mu: f64,
    pub k_opt: u64,
    pub trials: u64,
    pub hits: u64,
    pub empirical_rate: f64,
    /// `k_opt / 2^n`.
    pub predicted_rate: f64,
    /// Binomial standard deviation of the empirical rate under the prediction.
    pub std_error: f64,
}

impl ChanceHit {
    /// Distance between empirical and predicted rate in standard errors.
    pub fn z_score(&self) -> f64 {
        let diff = (self.empirical_rate - self.predicted_rate).abs();
        if self.std_error == 0.0 {
            if diff == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            diff / self.std_error
        }
    }
}

pub fn chance_hit_experiment<T: Scalar>(
    task: &Task<T>,
    kind: LearnerKind,
    trials: u64,
    rng_seed: u64,
    exhaustive: ExhaustiveConfig,
) -> Result<ChanceHit> {
    if trials == 0 {
        return Err(Error::InvalidConfig("trials must be >= 1".into()));
    }
    let optimum = exhaustive_search(task, kind, exhaustive)?;
    let n = task.n() as u32;
    let word_mask = mask(n);
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut hits = 0u64;
    for _ in 0..trials {
        let labeling = Labeling::new(rng.random::<u64>() & word_mask, n)?;
        let state = LearnerState::fit(kind, &task.pool, labeling, &task.trusted)?;
        if state.correct_count(&task.trusted) == optimum.best_correct {
            hits += 1;
        }
    }
    let predicted_rate = optimum.k_opt as f64 / (1u64 << n) as f64;
    Ok(ChanceHit {
        n,
        best_mu: optimum.best_mu,
        k_opt: optimum.k_opt,
        trials,
        hits,
        empirical_rate: hits as f64 / trials as f64,
        predicted_rate,
        std_error: (predicted_rate * (1.0 - predicted_rate) / trials as f64).sqrt(),
    })
}
