//! Cheap classifiers trained on a labeled pool and scored on the trusted set.
//!
//! Both learners support exact single-item relabeling so a Gray-code sweep
//! never retrains from scratch:
//!
//! * nearest centroid keeps per-class running sums and counts; a flip moves
//!   one vector between the two sums in O(d);
//! * one-nearest-neighbor precomputes, for every trusted point, the index of
//!   its nearest pool item; a flip touches only the trusted points mapped to
//!   that item.
//!
//! Distance ties resolve to class 0. Under nearest centroid an empty class
//! means every query gets the nonempty class. One-NN ties between pool items
//! resolve to the lowest pool index.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::domain::{EvalResult, FeatureVector, Labeling, TrustedSet, UnlabeledPool};
use crate::error::{Error, Result};
use crate::scalar::{squared_distance, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LearnerKind {
    Centroid,
    #[serde(alias = "nn", alias = "1nn")]
    OneNn,
}

impl fmt::Display for LearnerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LearnerKind::Centroid => "centroid",
            LearnerKind::OneNn => "one-nn",
        })
    }
}

impl FromStr for LearnerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "centroid" | "nearest-centroid" => Ok(Self::Centroid),
            "nn" | "1nn" | "one-nn" | "one-nearest-neighbor" => Ok(Self::OneNn),
            other => Err(Error::InvalidConfig(format!("unknown learner `{other}`"))),
        }
    }
}

/// Predicted labels over the trusted set, in its order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prediction {
    pub labels: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq)]
struct Centroids<T> {
    sums: [Vec<T>; 2],
    counts: [usize; 2],
}

impl<T: Scalar> Centroids<T> {
    fn fit<'a>(dim: usize, labeled: impl Iterator<Item = (&'a FeatureVector<T>, bool)>) -> Self {
        let mut c = Self {
            sums: [vec![T::zero(); dim], vec![T::zero(); dim]],
            counts: [0, 0],
        };
        for (x, label) in labeled {
            c.add(x.coords(), label);
        }
        c
    }

    #[inline]
    fn add(&mut self, x: &[T], label: bool) {
        let c = label as usize;
        for (s, &v) in self.sums[c].iter_mut().zip(x) {
            *s = *s + v;
        }
        self.counts[c] += 1;
    }

    #[inline]
    fn remove(&mut self, x: &[T], label: bool) {
        let c = label as usize;
        for (s, &v) in self.sums[c].iter_mut().zip(x) {
            *s = *s - v;
        }
        self.counts[c] -= 1;
    }

    /// Squared distance from `x` to the centroid of class `c`; `None` if empty.
    #[inline]
    fn distance(&self, x: &[T], c: usize) -> Option<T> {
        if self.counts[c] == 0 {
            return None;
        }
        let count = T::from_count(self.counts[c]);
        Some(self.sums[c].iter().zip(x).fold(T::zero(), |acc, (&s, &v)| {
            let diff = v - s / count;
            acc + diff * diff
        }))
    }

    #[inline]
    fn classify(&self, x: &[T]) -> bool {
        match (self.distance(x, 0), self.distance(x, 1)) {
            (Some(d0), Some(d1)) => d1 < d0,
            (None, _) => true,
            (_, None) => false,
        }
    }

    fn centroid(&self, c: usize) -> Option<Vec<T>> {
        if self.counts[c] == 0 {
            return None;
        }
        let count = T::from_count(self.counts[c]);
        Some(self.sums[c].iter().map(|&s| s / count).collect())
    }
}

#[derive(Clone, Debug, PartialEq)]
struct NearestIndex<T> {
    nn_index: Vec<usize>,
    nn_dist: Vec<T>,
    /// Pool item -> trusted points whose nearest item it is.
    mapped: Vec<Vec<usize>>,
    predictions: Vec<bool>,
    targets: Vec<bool>,
    correct: usize,
}

#[derive(Clone, Debug, PartialEq)]
enum Inner<T> {
    Centroid(Centroids<T>),
    OneNn(NearestIndex<T>),
}

/// A learner fitted on the pool under one labeling, bound to a trusted set.
#[derive(Clone, Debug, PartialEq)]
pub struct LearnerState<T> {
    labeling: Labeling,
    inner: Inner<T>,
}

fn check_dims<T: Scalar>(pool: &UnlabeledPool<T>, trusted: &TrustedSet<T>) -> Result<()> {
    if pool.dim() != trusted.dim() {
        return Err(Error::DimensionMismatch {
            expected: pool.dim(),
            got: trusted.dim(),
        });
    }
    Ok(())
}

impl<T: Scalar> LearnerState<T> {
    /// Trains on `{(x_i, labeling(i))}`. One-NN also indexes `trusted` here,
    /// so the state must later be scored against the same set.
    pub fn fit(
        kind: LearnerKind,
        pool: &UnlabeledPool<T>,
        labeling: Labeling,
        trusted: &TrustedSet<T>,
    ) -> Result<Self> {
        check_dims(pool, trusted)?;
        if labeling.n() as usize != pool.n() {
            return Err(Error::LengthMismatch {
                expected: pool.n(),
                got: labeling.n() as usize,
            });
        }
        let inner = match kind {
            LearnerKind::Centroid => Inner::Centroid(Centroids::fit(
                pool.dim(),
                pool.items().iter().enumerate().map(|(i, x)| (x, labeling.get(i))),
            )),
            LearnerKind::OneNn => {
                let m = trusted.m();
                let mut nn_index = Vec::with_capacity(m);
                let mut nn_dist = Vec::with_capacity(m);
                let mut mapped = vec![Vec::new(); pool.n()];
                for (j, a) in trusted.points().iter().enumerate() {
                    let (best, dist) = nearest(pool.items(), a.coords());
                    nn_index.push(best);
                    nn_dist.push(dist);
                    mapped[best].push(j);
                }
                let predictions: Vec<bool> = nn_index.iter().map(|&i| labeling.get(i)).collect();
                let targets = trusted.labels().to_vec();
                let correct = predictions.iter().zip(&targets).filter(|(p, y)| p == y).count();
                Inner::OneNn(NearestIndex {
                    nn_index,
                    nn_dist,
                    mapped,
                    predictions,
                    targets,
                    correct,
                })
            }
        };
        Ok(Self { labeling, inner })
    }

    pub fn kind(&self) -> LearnerKind {
        match self.inner {
            Inner::Centroid(_) => LearnerKind::Centroid,
            Inner::OneNn(_) => LearnerKind::OneNn,
        }
    }

    pub fn labeling(&self) -> Labeling {
        self.labeling
    }

    /// Relabels pool item `index` to `new_label` in place.
    pub fn flip_update(&mut self, pool: &UnlabeledPool<T>, index: usize, new_label: bool) -> Result<()> {
        let n = self.labeling.n() as usize;
        if index >= n {
            return Err(Error::IndexOutOfRange { index, len: n });
        }
        let old = self.labeling.get(index);
        if old == new_label {
            return Err(Error::SameLabelFlip {
                index,
                label: old as u8,
            });
        }
        self.flip(pool, index);
        Ok(())
    }

    /// Unchecked flip of item `index`; the hot path of every sweep.
    #[inline]
    pub(crate) fn flip(&mut self, pool: &UnlabeledPool<T>, index: usize) {
        let old = self.labeling.get(index);
        self.labeling = self.labeling.flipped(index);
        match &mut self.inner {
            Inner::Centroid(c) => {
                let x = pool.items()[index].coords();
                c.remove(x, old);
                c.add(x, !old);
            }
            Inner::OneNn(nn) => {
                for &j in &nn.mapped[index] {
                    let was_right = nn.predictions[j] == nn.targets[j];
                    nn.predictions[j] = !old;
                    if was_right {
                        nn.correct -= 1;
                    } else {
                        nn.correct += 1;
                    }
                }
            }
        }
    }

    pub fn predict(&self, trusted: &TrustedSet<T>) -> Result<Prediction> {
        let labels = match &self.inner {
            Inner::Centroid(c) => {
                if trusted.dim() != c.sums[0].len() {
                    return Err(Error::DimensionMismatch {
                        expected: c.sums[0].len(),
                        got: trusted.dim(),
                    });
                }
                trusted.points().iter().map(|a| c.classify(a.coords())).collect()
            }
            Inner::OneNn(nn) => {
                if trusted.m() != nn.predictions.len() {
                    return Err(Error::LengthMismatch {
                        expected: nn.predictions.len(),
                        got: trusted.m(),
                    });
                }
                nn.predictions.clone()
            }
        };
        Ok(Prediction { labels })
    }

    /// Number of trusted points classified correctly.
    #[inline]
    pub fn correct_count(&self, trusted: &TrustedSet<T>) -> usize {
        match &self.inner {
            Inner::Centroid(c) => trusted
                .points()
                .iter()
                .zip(trusted.labels())
                .filter(|(a, &y)| c.classify(a.coords()) == y)
                .count(),
            Inner::OneNn(nn) => nn.correct,
        }
    }

    pub fn evaluate(&self, trusted: &TrustedSet<T>) -> EvalResult {
        EvalResult::from_counts(self.correct_count(trusted), trusted.m())
    }

    pub fn class_counts(&self) -> [usize; 2] {
        match &self.inner {
            Inner::Centroid(c) => c.counts,
            Inner::OneNn(_) => {
                let ones = self.labeling.bits().count_ones() as usize;
                [self.labeling.n() as usize - ones, ones]
            }
        }
    }

    /// Running per-class sums (nearest centroid only).
    pub fn class_sums(&self) -> Option<&[Vec<T>; 2]> {
        match &self.inner {
            Inner::Centroid(c) => Some(&c.sums),
            Inner::OneNn(_) => None,
        }
    }

    /// Mean of the pool items currently labeled `class` (nearest centroid only).
    pub fn centroid(&self, class: bool) -> Option<Vec<T>> {
        match &self.inner {
            Inner::Centroid(c) => c.centroid(class as usize),
            Inner::OneNn(_) => None,
        }
    }

    /// For each trusted point, its nearest pool item and squared distance (one-NN only).
    pub fn nn_index(&self) -> Option<(&[usize], &[T])> {
        match &self.inner {
            Inner::OneNn(nn) => Some((&nn.nn_index, &nn.nn_dist)),
            Inner::Centroid(_) => None,
        }
    }
}

fn nearest<T: Scalar>(items: &[FeatureVector<T>], x: &[T]) -> (usize, T) {
    let mut best = 0;
    let mut best_dist = squared_distance(items[0].coords(), x);
    for (i, item) in items.iter().enumerate().skip(1) {
        let d = squared_distance(item.coords(), x);
        if d < best_dist {
            best = i;
            best_dist = d;
        }
    }
    (best, best_dist)
}

/// A free-standing classifier over an arbitrary labeled training set, used
/// by the baselines where the training set is not a pool labeling.
#[derive(Clone, Debug)]
pub enum Model<T> {
    Centroid(CentroidModel<T>),
    OneNn { points: Vec<FeatureVector<T>>, labels: Vec<bool> },
}

#[derive(Clone, Debug)]
pub struct CentroidModel<T>(Centroids<T>);

impl<T: Scalar> Model<T> {
    pub fn fit(kind: LearnerKind, points: &[FeatureVector<T>], labels: &[bool]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Empty("training set"));
        }
        if points.len() != labels.len() {
            return Err(Error::LengthMismatch {
                expected: points.len(),
                got: labels.len(),
            });
        }
        let dim = points[0].dim();
        if let Some(p) = points.iter().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: p.dim(),
            });
        }
        Ok(match kind {
            LearnerKind::Centroid => Model::Centroid(CentroidModel(Centroids::fit(
                dim,
                points.iter().zip(labels.iter().copied()),
            ))),
            LearnerKind::OneNn => Model::OneNn {
                points: points.to_vec(),
                labels: labels.to_vec(),
            },
        })
    }

    pub fn predict_one(&self, x: &FeatureVector<T>) -> bool {
        self.classify(x).0
    }

    /// Label plus confidence. Confidence is the Euclidean margin `|d0 - d1|`
    /// between centroids, or for one-NN the gap between the nearest point of
    /// the other class and the nearest point overall. Infinite when only one
    /// class is present.
    pub fn classify(&self, x: &FeatureVector<T>) -> (bool, f64) {
        let sqrt = |v: T| v.to_f64().unwrap_or(f64::INFINITY).sqrt();
        match self {
            Model::Centroid(CentroidModel(c)) => {
                let label = c.classify(x.coords());
                match (c.distance(x.coords(), 0), c.distance(x.coords(), 1)) {
                    (Some(d0), Some(d1)) => (label, (sqrt(d0) - sqrt(d1)).abs()),
                    _ => (label, f64::INFINITY),
                }
            }
            Model::OneNn { points, labels } => {
                let (best, best_dist) = nearest(points, x.coords());
                let label = labels[best];
                let other = points
                    .iter()
                    .zip(labels)
                    .filter(|(_, &l)| l != label)
                    .map(|(p, _)| squared_distance(p.coords(), x.coords()))
                    .fold(None, |acc: Option<T>, d| match acc {
                        Some(a) if a <= d => Some(a),
                        _ => Some(d),
                    });
                match other {
                    Some(d) => (label, sqrt(d) - sqrt(best_dist)),
                    None => (label, f64::INFINITY),
                }
            }
        }
    }

    pub fn predict(&self, points: &[FeatureVector<T>]) -> Vec<bool> {
        points.iter().map(|p| self.predict_one(p)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn fv(c: &[f64]) -> FeatureVector<f64> {
        FeatureVector::new(c.to_vec()).unwrap()
    }

    fn pool(pts: &[&[f64]]) -> UnlabeledPool<f64> {
        UnlabeledPool::new(pts.iter().map(|p| fv(p)).collect()).unwrap()
    }

    fn trusted(pts: &[&[f64]], labels: &[bool]) -> TrustedSet<f64> {
        TrustedSet::new(pts.iter().map(|p| fv(p)).collect(), labels.to_vec()).unwrap()
    }

    #[test]
    fn one_point_per_class() {
        let b = pool(&[&[0.0, 0.0], &[2.0, 2.0]]);
        let a = trusted(&[&[0.0, 0.0]], &[false]);
        let s = LearnerState::fit(LearnerKind::Centroid, &b, Labeling::new(0b10, 2).unwrap(), &a).unwrap();
        assert_eq!(s.centroid(false).unwrap(), vec![0.0, 0.0]);
        assert_eq!(s.centroid(true).unwrap(), vec![2.0, 2.0]);
    }

    #[test]
    fn all_zero_labeling_is_degenerate_but_valid() {
        let b = pool(&[&[0.0], &[1.0], &[5.0]]);
        let a = trusted(&[&[0.0], &[5.0]], &[false, true]);
        let s = LearnerState::fit(LearnerKind::Centroid, &b, Labeling::zeros(3).unwrap(), &a).unwrap();
        assert_eq!(s.class_counts(), [3, 0]);
        assert_eq!(s.predict(&a).unwrap().labels, vec![false, false]);
    }

    #[test]
    fn four_point_means_by_hand() {
        let b = pool(&[&[1.0, 2.0], &[3.0, -1.0], &[0.5, 0.5], &[-2.0, 4.0]]);
        let a = trusted(&[&[0.0, 0.0]], &[true]);
        // bits 0 and 1 -> class 1
        let s = LearnerState::fit(LearnerKind::Centroid, &b, Labeling::new(0b0011, 4).unwrap(), &a).unwrap();
        assert_eq!(s.centroid(true).unwrap(), vec![(1.0 + 3.0) / 2.0, (2.0 - 1.0) / 2.0]);
        assert_eq!(s.centroid(false).unwrap(), vec![(0.5 - 2.0) / 2.0, (0.5 + 4.0) / 2.0]);
        assert_eq!(s.class_counts(), [2, 2]);
    }

    #[test]
    fn emptying_a_class() {
        let b = pool(&[&[0.0], &[1.0], &[2.0]]);
        let a = trusted(&[&[0.0]], &[false]);
        let mut s = LearnerState::fit(LearnerKind::Centroid, &b, Labeling::new(0b010, 3).unwrap(), &a).unwrap();
        s.flip_update(&b, 1, false).unwrap();
        assert_eq!(s.class_counts(), [3, 0]);
        assert!(s.centroid(true).is_none());
    }

    #[test]
    fn same_label_flip_is_rejected() {
        let b = pool(&[&[0.0], &[1.0]]);
        let a = trusted(&[&[0.0]], &[false]);
        for kind in [LearnerKind::Centroid, LearnerKind::OneNn] {
            let mut s = LearnerState::fit(kind, &b, Labeling::new(0b01, 2).unwrap(), &a).unwrap();
            assert!(matches!(s.flip_update(&b, 0, true), Err(Error::SameLabelFlip { index: 0, label: 1 })));
            assert!(matches!(s.flip_update(&b, 5, true), Err(Error::IndexOutOfRange { .. })));
        }
    }

    #[test]
    fn flip_then_flip_back() {
        let b = pool(&[&[0.0, 1.0], &[1.0, 3.0], &[2.0, -1.0], &[4.0, 0.5]]);
        let a = trusted(&[&[0.0, 0.0], &[3.0, 1.0], &[1.0, 1.0]], &[false, true, true]);
        for kind in [LearnerKind::Centroid, LearnerKind::OneNn] {
            let start = Labeling::new(0b0110, 4).unwrap();
            let mut s = LearnerState::fit(kind, &b, start, &a).unwrap();
            let before = s.predict(&a).unwrap();
            s.flip_update(&b, 2, false).unwrap();
            s.flip_update(&b, 2, true).unwrap();
            assert_eq!(s.predict(&a).unwrap(), before);
            assert_eq!(s.labeling(), start);
        }
    }

    #[test]
    fn equidistant_goes_to_class_zero() {
        let b = pool(&[&[-1.0], &[1.0]]);
        let a = trusted(&[&[0.0]], &[true]);
        for word in [0b01, 0b10] {
            let s = LearnerState::fit(LearnerKind::Centroid, &b, Labeling::new(word, 2).unwrap(), &a).unwrap();
            assert_eq!(s.predict(&a).unwrap().labels, vec![false]);
        }
    }

    #[test]
    fn empty_class_predicts_other_class() {
        let b = pool(&[&[-1.0], &[1.0]]);
        let a = trusted(&[&[-5.0], &[5.0]], &[false, true]);
        let s = LearnerState::fit(LearnerKind::Centroid, &b, Labeling::new(0b11, 2).unwrap(), &a).unwrap();
        assert_eq!(s.predict(&a).unwrap().labels, vec![true, true]);
    }

    #[test]
    fn separable_blobs_ground_truth_is_perfect() {
        // blob radius 0.5, centers 10 apart: margin far exceeds twice the radius
        let b = pool(&[&[0.0, 0.5], &[0.5, 0.0], &[-0.5, 0.0], &[10.0, 0.5], &[10.5, 0.0], &[9.5, 0.0]]);
        let a = trusted(&[&[0.0, -0.5], &[10.0, -0.5]], &[false, true]);
        let truth = Labeling::new(0b111000, 6).unwrap();
        for kind in [LearnerKind::Centroid, LearnerKind::OneNn] {
            let s = LearnerState::fit(kind, &b, truth, &a).unwrap();
            assert_eq!(s.evaluate(&a).mu, 0.0);
        }
    }

    #[test]
    fn one_nn_flip_touches_only_mapped_points() {
        let b = pool(&[&[0.0], &[10.0], &[20.0]]);
        let a = trusted(&[&[1.0], &[9.0], &[11.0], &[19.0]], &[true, true, true, true]);
        let mut s = LearnerState::fit(LearnerKind::OneNn, &b, Labeling::zeros(3).unwrap(), &a).unwrap();
        assert_eq!(s.nn_index().unwrap().0, &[0, 1, 1, 2]);
        s.flip_update(&b, 1, true).unwrap();
        assert_eq!(s.predict(&a).unwrap().labels, vec![false, true, true, false]);
        assert_eq!(s.correct_count(&a), 2);
    }

    #[test]
    fn one_nn_ties_take_lowest_index() {
        let b = pool(&[&[-1.0], &[1.0]]);
        let a = trusted(&[&[0.0]], &[true]);
        let s = LearnerState::fit(LearnerKind::OneNn, &b, Labeling::new(0b10, 2).unwrap(), &a).unwrap();
        assert_eq!(s.nn_index().unwrap().0, &[0]);
        assert_eq!(s.predict(&a).unwrap().labels, vec![false]);
    }

    #[test]
    fn exact_rational_flips_match_refit_bit_for_bit() {
        let r = |n: i64, d: i64| Rational::new(n, d);
        let items = [[r(1, 3), r(2, 1)], [r(-7, 5), r(1, 9)], [r(5, 2), r(-3, 4)], [r(0, 1), r(11, 7)]];
        let b = UnlabeledPool::new(items.iter().map(|c| FeatureVector::new(c.to_vec()).unwrap()).collect()).unwrap();
        let a = TrustedSet::new(vec![FeatureVector::new(vec![r(1, 1), r(1, 1)]).unwrap()], vec![true]).unwrap();
        let mut s = LearnerState::fit(LearnerKind::Centroid, &b, Labeling::zeros(4).unwrap(), &a).unwrap();
        for &i in &[0usize, 2, 1, 2, 3, 0, 1] {
            let new = !s.labeling().get(i);
            s.flip_update(&b, i, new).unwrap();
            let refit = LearnerState::fit(LearnerKind::Centroid, &b, s.labeling(), &a).unwrap();
            assert_eq!(s, refit);
        }
    }

    #[test]
    fn model_confidence() {
        let pts = vec![fv(&[0.0]), fv(&[4.0])];
        let m = Model::fit(LearnerKind::Centroid, &pts, &[false, true]).unwrap();
        let (l, c) = m.classify(&fv(&[1.0]));
        assert!(!l);
        assert!((c - 2.0).abs() < 1e-12);
        let nn = Model::fit(LearnerKind::OneNn, &pts, &[false, true]).unwrap();
        let (l, c) = nn.classify(&fv(&[3.0]));
        assert!(l);
        assert!((c - 2.0).abs() < 1e-12);
        let single = Model::fit(LearnerKind::OneNn, &pts, &[true, true]).unwrap();
        assert_eq!(single.classify(&fv(&[3.0])), (true, f64::INFINITY));
    }

    #[test]
    fn learner_kind_parsing() {
        assert_eq!("centroid".parse::<LearnerKind>().unwrap(), LearnerKind::Centroid);
        assert_eq!("nn".parse::<LearnerKind>().unwrap(), LearnerKind::OneNn);
        assert!("svm".parse::<LearnerKind>().is_err());
    }
}
