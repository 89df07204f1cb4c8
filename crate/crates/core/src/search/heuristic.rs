use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::domain::{mask, Labeling, SearchOutcome, Task};
use crate::error::{Error, Result};
use crate::learners::{LearnerKind, LearnerState};
use crate::scalar::Scalar;

use super::Best;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HeuristicKind {
    /// Uniform sampling with replacement.
    Random,
    /// First-improvement single-flip hill climbing with random restarts.
    GreedyFlip,
    /// Single-flip simulated annealing.
    Anneal,
}

impl fmt::Display for HeuristicKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HeuristicKind::Random => "random",
            HeuristicKind::GreedyFlip => "greedy",
            HeuristicKind::Anneal => "anneal",
        })
    }
}

impl FromStr for HeuristicKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(Self::Random),
            "greedy" | "greedy-flip" => Ok(Self::GreedyFlip),
            "anneal" => Ok(Self::Anneal),
            other => Err(Error::InvalidConfig(format!("unknown heuristic `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeuristicConfig {
    pub kind: HeuristicKind,
    pub budget: u64,
    pub restarts: u32,
    /// Initial annealing temperature, in units of trusted-set errors.
    pub t0: f64,
    /// Per-step temperature decay, `0 < gamma < 1`.
    pub gamma: f64,
    pub rng_seed: u64,
}

impl HeuristicConfig {
    pub fn new(kind: HeuristicKind, budget: u64, rng_seed: u64) -> Self {
        Self {
            kind,
            budget,
            restarts: 4,
            t0: 2.0,
            gamma: 0.995,
            rng_seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.budget == 0 {
            return Err(Error::InvalidConfig("budget must be >= 1".into()));
        }
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return Err(Error::InvalidConfig(format!("gamma must lie in (0, 1), got {}", self.gamma)));
        }
        if !(self.t0 > 0.0 && self.t0.is_finite()) {
            return Err(Error::InvalidConfig(format!("t0 must be positive, got {}", self.t0)));
        }
        Ok(())
    }
}

struct Run<'a, T> {
    task: &'a Task<T>,
    kind: LearnerKind,
    best: Best,
    evaluations: u64,
    budget: u64,
}

impl<'a, T: Scalar> Run<'a, T> {
    fn exhausted(&self) -> bool {
        self.evaluations >= self.budget
    }

    fn fit(&mut self, word: u64) -> Result<(LearnerState<T>, usize)> {
        let labeling = Labeling::new(word, self.task.n() as u32)?;
        let state = LearnerState::fit(self.kind, &self.task.pool, labeling, &self.task.trusted)?;
        let correct = self.record(&state);
        Ok((state, correct))
    }

    fn flip(&mut self, state: &mut LearnerState<T>, i: usize) -> usize {
        state.flip(&self.task.pool, i);
        self.record(state)
    }

    fn record(&mut self, state: &LearnerState<T>) -> usize {
        let c = state.correct_count(&self.task.trusted);
        self.evaluations += 1;
        self.best.offer(state.labeling().bits(), c);
        c
    }
}

/// Budgeted search; never better than the exhaustive optimum, reproducible from the seed.
pub fn heuristic_search<T: Scalar>(
    task: &Task<T>,
    kind: LearnerKind,
    config: &HeuristicConfig,
) -> Result<SearchOutcome> {
    config.validate()?;
    let n = task.n();
    let word_mask = mask(n as u32);
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let started = Instant::now();
    let mut run = Run {
        task,
        kind,
        best: Best::default(),
        evaluations: 0,
        budget: config.budget,
    };

    match config.kind {
        HeuristicKind::Random => {
            while !run.exhausted() {
                let word = rng.random::<u64>() & word_mask;
                run.fit(word)?;
            }
        }
        HeuristicKind::GreedyFlip => {
            'climbs: for climb in 0..=config.restarts {
                if run.exhausted() {
                    break;
                }
                let start = if climb == 0 { 0 } else { rng.random::<u64>() & word_mask };
                let (mut state, mut current) = run.fit(start)?;
                loop {
                    let mut improved = false;
                    for i in 0..n {
                        if run.exhausted() {
                            break 'climbs;
                        }
                        let c = run.flip(&mut state, i);
                        if c > current {
                            current = c;
                            improved = true;
                            break;
                        }
                        state.flip(&task.pool, i);
                    }
                    if !improved {
                        break;
                    }
                }
            }
        }
        HeuristicKind::Anneal => {
            let runs = u64::from(config.restarts) + 1;
            for r in 0..runs {
                if run.exhausted() {
                    break;
                }
                let share = config.budget / runs + u64::from(r < config.budget % runs);
                let stop = (run.evaluations + share).min(config.budget);
                let start = rng.random::<u64>() & word_mask;
                let (mut state, mut current) = run.fit(start)?;
                let mut temperature = config.t0;
                while run.evaluations < stop {
                    let i = rng.random_range(0..n);
                    let c = run.flip(&mut state, i);
                    // error-count change, independent of m
                    let delta = current as f64 - c as f64;
                    let accept = delta <= 0.0 || rng.random::<f64>() < (-delta / temperature).exp();
                    if accept {
                        current = c;
                    } else {
                        state.flip(&task.pool, i);
                    }
                    temperature *= config.gamma;
                }
            }
        }
    }

    let evaluations = run.evaluations;
    Ok(run.best.into_outcome(task.m(), evaluations, started.elapsed()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{FeatureVector, TrustedSet, UnlabeledPool};

    fn line_task(n: usize, a_labels: &[bool]) -> Task<f64> {
        let pool = UnlabeledPool::new((0..n).map(|i| FeatureVector::new(vec![i as f64]).unwrap()).collect()).unwrap();
        let a = TrustedSet::new(
            (0..a_labels.len()).map(|j| FeatureVector::new(vec![j as f64 * 2.0]).unwrap()).collect(),
            a_labels.to_vec(),
        )
        .unwrap();
        Task::new(a, pool, None, 0).unwrap()
    }

    #[test]
    fn greedy_stops_at_local_optimum() {
        // every trusted label is 0, so all-zeros is already optimal
        let task = line_task(6, &[false, false, false]);
        let mut cfg = HeuristicConfig::new(HeuristicKind::GreedyFlip, 1000, 1);
        cfg.restarts = 0;
        let out = heuristic_search(&task, LearnerKind::Centroid, &cfg).unwrap();
        assert_eq!(out.best_mu, 0.0);
        assert!(out.evaluations <= 6 + 1);
    }

    #[test]
    fn budget_is_respected_and_seed_reproduces() {
        let task = line_task(10, &[false, true, false, true]);
        for kind in [HeuristicKind::Random, HeuristicKind::GreedyFlip, HeuristicKind::Anneal] {
            let cfg = HeuristicConfig::new(kind, 137, 42);
            let a = heuristic_search(&task, LearnerKind::Centroid, &cfg).unwrap();
            let b = heuristic_search(&task, LearnerKind::Centroid, &cfg).unwrap();
            assert!(a.evaluations <= 137);
            assert_eq!((a.best_mu, a.argmin, a.evaluations), (b.best_mu, b.argmin, b.evaluations));
        }
    }

    #[test]
    fn rejects_bad_configs() {
        let task = line_task(4, &[true]);
        let mut cfg = HeuristicConfig::new(HeuristicKind::Anneal, 0, 1);
        assert!(heuristic_search(&task, LearnerKind::Centroid, &cfg).is_err());
        cfg.budget = 10;
        cfg.gamma = 1.0;
        assert!(heuristic_search(&task, LearnerKind::Centroid, &cfg).is_err());
        assert!("tabu".parse::<HeuristicKind>().is_err());
    }
}
