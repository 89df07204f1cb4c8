use std::thread;
use std::time::Instant;

use crate::domain::{Labeling, SearchOutcome, Task};
use crate::error::{Error, Result};
use crate::learners::{LearnerKind, LearnerState};
use crate::scalar::Scalar;

use super::gray::MAX_GRAY_BITS;
use super::Best;

pub const DEFAULT_CAP: u32 = 24;
pub const HARD_CAP: u32 = MAX_GRAY_BITS;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExhaustiveConfig {
    pub workers: usize,
    /// Largest pool the search will accept; at most [`HARD_CAP`].
    pub cap: u32,
}

impl Default for ExhaustiveConfig {
    fn default() -> Self {
        Self {
            workers: 1,
            cap: DEFAULT_CAP,
        }
    }
}

impl ExhaustiveConfig {
    pub fn with_workers(workers: usize) -> Self {
        Self {
            workers,
            ..Self::default()
        }
    }

    pub fn check(&self, n: usize) -> Result<()> {
        if self.cap > HARD_CAP {
            return Err(Error::InvalidConfig(format!(
                "exhaustive cap {} exceeds the hard cap {HARD_CAP}",
                self.cap
            )));
        }
        if self.workers == 0 {
            return Err(Error::InvalidConfig("workers must be >= 1".into()));
        }
        if n > self.cap as usize {
            return Err(Error::OverCap {
                n: n as u32,
                cap: self.cap,
            });
        }
        Ok(())
    }
}

/// Gray sweep over the subcube whose top `n - free` bits equal `prefix`.
fn sweep_subcube<T: Scalar>(task: &Task<T>, kind: LearnerKind, prefix: u64, free: u32) -> Result<Best> {
    let n = task.n() as u32;
    let start = Labeling::new(prefix << free, n)?;
    let mut state = LearnerState::fit(kind, &task.pool, start, &task.trusted)?;
    let mut best = Best::default();
    best.offer(start.bits(), state.correct_count(&task.trusted));
    let len = 1u64 << free;
    for step in 1..len {
        let bit = step.trailing_zeros() as usize;
        state.flip(&task.pool, bit);
        best.offer(state.labeling().bits(), state.correct_count(&task.trusted));
    }
    Ok(best)
}

/// Evaluates every labeling of the pool and returns the exact optimum.
///
/// The top `ceil(log2(workers))` bits split the cube into subcubes, each swept
/// independently from a fresh fit; results are merged in subcube order, so
/// the outcome does not depend on the worker count.
pub fn exhaustive_search<T: Scalar>(
    task: &Task<T>,
    kind: LearnerKind,
    config: ExhaustiveConfig,
) -> Result<SearchOutcome> {
    let n = task.n();
    config.check(n)?;
    let n = n as u32;
    let split = (config.workers.next_power_of_two().trailing_zeros()).min(n);
    let free = n - split;
    let subcubes = 1usize << split;
    let threads = config.workers.min(subcubes);

    let started = Instant::now();
    let mut parts: Vec<Option<Result<Best>>> = (0..subcubes).map(|_| None).collect();
    if threads == 1 {
        for (prefix, slot) in parts.iter_mut().enumerate() {
            *slot = Some(sweep_subcube(task, kind, prefix as u64, free));
        }
    } else {
        let results: Vec<Vec<(usize, Result<Best>)>> = thread::scope(|scope| {
            let handles: Vec<_> = (0..threads)
                .map(|w| {
                    scope.spawn(move || {
                        (w..subcubes)
                            .step_by(threads)
                            .map(|prefix| (prefix, sweep_subcube(task, kind, prefix as u64, free)))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("search worker panicked"))
                .collect()
        });
        for (prefix, r) in results.into_iter().flatten() {
            parts[prefix] = Some(r);
        }
    }
    let mut best = Best::default();
    for part in parts {
        best = best.merge(part.expect("every subcube swept")?);
    }
    let elapsed = started.elapsed();
    Ok(best.into_outcome(task.m(), 1u64 << n, elapsed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{FeatureVector, TrustedSet, UnlabeledPool};

    fn separable(n: usize) -> Task<f64> {
        let items = (0..n)
            .map(|i| {
                let x = if i % 2 == 0 { 0.0 } else { 10.0 };
                FeatureVector::new(vec![x + 0.1 * (i as f64).sqrt(), 0.3]).unwrap()
            })
            .collect();
        let truth: Vec<bool> = (0..n).map(|i| i % 2 == 1).collect();
        let a = TrustedSet::new(
            vec![
                FeatureVector::new(vec![0.0, 0.0]).unwrap(),
                FeatureVector::new(vec![10.0, 0.0]).unwrap(),
                FeatureVector::new(vec![0.5, 1.0]).unwrap(),
                FeatureVector::new(vec![9.5, 1.0]).unwrap(),
            ],
            vec![false, true, false, true],
        )
        .unwrap();
        Task::new(a, UnlabeledPool::new(items).unwrap(), Some(Labeling::from_labels(&truth).unwrap()), 0).unwrap()
    }

    #[test]
    fn separable_truth_is_optimal() {
        let task = separable(4);
        for kind in [LearnerKind::Centroid, LearnerKind::OneNn] {
            let out = exhaustive_search(&task, kind, ExhaustiveConfig::default()).unwrap();
            assert_eq!(out.evaluations, 16);
            assert_eq!(out.best_mu, 0.0);
            assert!(out.argmin.contains(&task.ground_truth.unwrap().bits()));
            assert!(out.argmin.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn worker_count_does_not_change_the_answer() {
        let task = separable(9);
        let one = exhaustive_search(&task, LearnerKind::Centroid, ExhaustiveConfig::with_workers(1)).unwrap();
        for workers in [2, 3, 4, 8, 64, 1000] {
            let many = exhaustive_search(&task, LearnerKind::Centroid, ExhaustiveConfig::with_workers(workers)).unwrap();
            assert_eq!((many.best_mu, &many.argmin, many.k_opt, many.evaluations), (one.best_mu, &one.argmin, one.k_opt, one.evaluations));
        }
    }

    #[test]
    fn refuses_over_cap() {
        let task = separable(9);
        let cfg = ExhaustiveConfig { workers: 1, cap: 8 };
        let err = exhaustive_search(&task, LearnerKind::Centroid, cfg).unwrap_err();
        assert!(err.to_string().contains("cap of 8"));
        let cfg = ExhaustiveConfig { workers: 1, cap: 40 };
        assert!(matches!(exhaustive_search(&task, LearnerKind::Centroid, cfg), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn listed_optima_reevaluate_to_best_mu() {
        let task = separable(6);
        let out = exhaustive_search(&task, LearnerKind::Centroid, ExhaustiveConfig::with_workers(4)).unwrap();
        for &w in &out.argmin {
            let s = LearnerState::fit(LearnerKind::Centroid, &task.pool, Labeling::new(w, 6).unwrap(), &task.trusted).unwrap();
            assert_eq!(s.evaluate(&task.trusted).mu, out.best_mu);
        }
        assert_eq!(out.argmin.len() as u64, out.k_opt);
    }

    #[test]
    fn exact_scalars_keep_exact_centroid_ties() {
        use crate::Rational;
        // labeling 0b1100 puts both centroids at exactly 21/4; only exact
        // running sums keep that tie through a Gray sweep
        let r = |n: i64| Rational::new(n, 10);
        let xs = [r(0), r(101), r(2), r(103), r(4), r(105)];
        let pool = UnlabeledPool::new(xs.iter().map(|&x| FeatureVector::new(vec![x, r(3)]).unwrap()).collect()).unwrap();
        let a = TrustedSet::new(
            vec![
                FeatureVector::new(vec![r(0), r(0)]).unwrap(),
                FeatureVector::new(vec![r(100), r(0)]).unwrap(),
            ],
            vec![false, true],
        )
        .unwrap();
        let task = Task::new(a, pool, None, 0).unwrap();
        let tied = LearnerState::fit(LearnerKind::Centroid, &task.pool, Labeling::new(0b1100, 6).unwrap(), &task.trusted).unwrap();
        assert_eq!(tied.centroid(false), tied.centroid(true));
        assert_eq!(tied.evaluate(&task.trusted).mu, 0.5);
        for workers in [1, 4] {
            let out = exhaustive_search(&task, LearnerKind::Centroid, ExhaustiveConfig::with_workers(workers)).unwrap();
            assert!(!out.argmin.contains(&0b1100));
            for w in 0..64u64 {
                let s = LearnerState::fit(LearnerKind::Centroid, &task.pool, Labeling::new(w, 6).unwrap(), &task.trusted).unwrap();
                assert_eq!(out.argmin.contains(&w), s.correct_count(&task.trusted) == out.best_correct);
            }
        }
    }
}
