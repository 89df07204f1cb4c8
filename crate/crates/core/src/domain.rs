//! Datasets, labelings and evaluation results shared by every module.

use std::time::Duration;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Largest pool that still fits a labeling into one machine word.
pub const MAX_POOL: usize = 63;

/// A point with `d >= 1` finite coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureVector<T>(Vec<T>);

impl<T: Scalar> FeatureVector<T> {
    pub fn new(coords: Vec<T>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Empty("feature vector"));
        }
        if let Some(pos) = coords.iter().position(|c| !c.is_finite_value()) {
            return Err(Error::NonFinite(pos));
        }
        Ok(Self(coords))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[T] {
        &self.0
    }

    /// Converts every coordinate through `f64`.
    pub fn cast<U: Scalar>(&self) -> Result<FeatureVector<U>> {
        let coords = self
            .0
            .iter()
            .enumerate()
            .map(|(i, c)| c.to_f64().and_then(U::from_f64).ok_or(Error::NonFinite(i)))
            .collect::<Result<Vec<_>>>()?;
        FeatureVector::new(coords)
    }
}

fn common_dim<T: Scalar>(points: &[FeatureVector<T>], what: &'static str) -> Result<usize> {
    let first = points.first().ok_or(Error::Empty(what))?.dim();
    for p in points {
        if p.dim() != first {
            return Err(Error::DimensionMismatch {
                expected: first,
                got: p.dim(),
            });
        }
    }
    Ok(first)
}

/// The small labeled set `A`. It may hold a single class.
#[derive(Clone, Debug, PartialEq)]
pub struct TrustedSet<T> {
    points: Vec<FeatureVector<T>>,
    labels: Vec<bool>,
    dim: usize,
}

impl<T: Scalar> TrustedSet<T> {
    pub fn new(points: Vec<FeatureVector<T>>, labels: Vec<bool>) -> Result<Self> {
        let dim = common_dim(&points, "trusted set")?;
        if labels.len() != points.len() {
            return Err(Error::LengthMismatch {
                expected: points.len(),
                got: labels.len(),
            });
        }
        Ok(Self { points, labels, dim })
    }

    pub fn m(&self) -> usize {
        self.points.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[FeatureVector<T>] {
        &self.points
    }

    pub fn labels(&self) -> &[bool] {
        &self.labels
    }

    /// Keeps the examples at `indices`, in that order.
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        let points = indices.iter().map(|&i| self.points[i].clone()).collect();
        let labels = indices.iter().map(|&i| self.labels[i]).collect();
        Self::new(points, labels)
    }
}

/// The unlabeled pool `B`; its labels are the decision variable.
#[derive(Clone, Debug, PartialEq)]
pub struct UnlabeledPool<T> {
    items: Vec<FeatureVector<T>>,
    dim: usize,
}

impl<T: Scalar> UnlabeledPool<T> {
    pub fn new(items: Vec<FeatureVector<T>>) -> Result<Self> {
        let dim = common_dim(&items, "unlabeled pool")?;
        if items.len() > MAX_POOL {
            return Err(Error::PoolTooLarge(items.len()));
        }
        Ok(Self { items, dim })
    }

    pub fn n(&self) -> usize {
        self.items.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn items(&self) -> &[FeatureVector<T>] {
        &self.items
    }
}

/// One assignment `B -> {0,1}` packed into a word; bit `i` labels pool item `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Labeling {
    bits: u64,
    n: u32,
}

pub(crate) fn mask(n: u32) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl Labeling {
    pub fn new(bits: u64, n: u32) -> Result<Self> {
        if n as usize > MAX_POOL || bits & !mask(n) != 0 {
            return Err(Error::LabelOutOfRange { bits, n });
        }
        Ok(Self { bits, n })
    }

    pub fn zeros(n: u32) -> Result<Self> {
        Self::new(0, n)
    }

    pub fn from_labels(labels: &[bool]) -> Result<Self> {
        if labels.len() > MAX_POOL {
            return Err(Error::PoolTooLarge(labels.len()));
        }
        let bits = labels
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &l)| acc | (u64::from(l) << i));
        Ok(Self {
            bits,
            n: labels.len() as u32,
        })
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.n as usize);
        (self.bits >> i) & 1 == 1
    }

    #[inline]
    pub fn flipped(self, i: usize) -> Self {
        debug_assert!(i < self.n as usize);
        Self {
            bits: self.bits ^ (1u64 << i),
            n: self.n,
        }
    }

    pub fn labels(&self) -> Vec<bool> {
        (0..self.n as usize).map(|i| self.get(i)).collect()
    }
}

/// `labeling_from_word(0b101, 3)` yields labels `[1, 0, 1]`.
pub fn labeling_from_word(bits: u64, n: u32) -> Result<Labeling> {
    Labeling::new(bits, n)
}

/// 0-1 error on the trusted set.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalResult {
    pub mu: f64,
    pub correct_count: usize,
    pub m: usize,
}

impl EvalResult {
    pub fn from_counts(correct_count: usize, m: usize) -> Self {
        debug_assert!(correct_count <= m && m > 0);
        Self {
            mu: (m - correct_count) as f64 / m as f64,
            correct_count,
            m,
        }
    }

    pub fn errors(&self) -> usize {
        self.m - self.correct_count
    }
}

pub fn evaluate_mu<T: Scalar>(predictions: &[bool], trusted: &TrustedSet<T>) -> Result<EvalResult> {
    if predictions.len() != trusted.m() {
        return Err(Error::LengthMismatch {
            expected: trusted.m(),
            got: predictions.len(),
        });
    }
    let correct = predictions
        .iter()
        .zip(trusted.labels())
        .filter(|(p, y)| p == y)
        .count();
    Ok(EvalResult::from_counts(correct, trusted.m()))
}

/// A trusted set, a pool, and optionally the pool's hidden true labels.
#[derive(Clone, Debug, PartialEq)]
pub struct Task<T> {
    pub trusted: TrustedSet<T>,
    pub pool: UnlabeledPool<T>,
    pub ground_truth: Option<Labeling>,
    pub seed: u64,
}

impl<T: Scalar> Task<T> {
    pub fn new(
        trusted: TrustedSet<T>,
        pool: UnlabeledPool<T>,
        ground_truth: Option<Labeling>,
        seed: u64,
    ) -> Result<Self> {
        if trusted.dim() != pool.dim() {
            return Err(Error::DimensionMismatch {
                expected: trusted.dim(),
                got: pool.dim(),
            });
        }
        if let Some(gt) = ground_truth {
            if gt.n() as usize != pool.n() {
                return Err(Error::LengthMismatch {
                    expected: pool.n(),
                    got: gt.n() as usize,
                });
            }
        }
        Ok(Self {
            trusted,
            pool,
            ground_truth,
            seed,
        })
    }

    pub fn n(&self) -> usize {
        self.pool.n()
    }

    pub fn m(&self) -> usize {
        self.trusted.m()
    }

    pub fn dim(&self) -> usize {
        self.pool.dim()
    }

    pub fn cast<U: Scalar>(&self) -> Result<Task<U>> {
        let cast_all = |v: &[FeatureVector<T>]| v.iter().map(|p| p.cast()).collect::<Result<Vec<_>>>();
        Task::new(
            TrustedSet::new(cast_all(self.trusted.points())?, self.trusted.labels().to_vec())?,
            UnlabeledPool::new(cast_all(self.pool.items())?)?,
            self.ground_truth,
            self.seed,
        )
    }
}

/// Result of a search over labelings.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchOutcome {
    pub best_mu: f64,
    pub best_correct: usize,
    /// Smallest optimal words, ascending, at most [`crate::search::ARGMIN_CAP`].
    pub argmin: Vec<u64>,
    /// Exact number of optimal labelings seen (not capped).
    pub k_opt: u64,
    pub evaluations: u64,
    pub elapsed: Duration,
    pub mean_eval_time: Duration,
}
