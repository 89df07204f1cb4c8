//! Conventional (train on the trusted set) and self-training baselines.

use serde::{Deserialize, Serialize};

use crate::domain::{evaluate_mu, FeatureVector, Labeling, Task};
use crate::error::{Error, Result};
use crate::learners::{LearnerKind, LearnerState, Model};
use crate::scalar::Scalar;
use crate::search::{exhaustive_search, ExhaustiveConfig};

/// Splits trusted-set indices into a fitting half and a holdout half,
/// alternating through the examples ordered by (label, index) so both halves
/// see both classes whenever possible.
pub fn holdout_split(labels: &[bool]) -> (Vec<usize>, Vec<usize>) {
    let mut order: Vec<usize> = (0..labels.len()).collect();
    order.sort_by_key(|&i| (labels[i], i));
    let mut fit: Vec<usize> = order.iter().copied().step_by(2).collect();
    let mut hold: Vec<usize> = order.iter().copied().skip(1).step_by(2).collect();
    fit.sort_unstable();
    hold.sort_unstable();
    (fit, hold)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConventionalResult {
    /// Error on the holdout half of `A` of a model fit on the other half.
    pub mu_on_a_holdout: Option<f64>,
    /// Accuracy on the pool's true labels of a model fit on all of `A`.
    pub accuracy_on_b_truth: Option<f64>,
}

fn gather<T: Scalar>(task: &Task<T>, indices: &[usize]) -> (Vec<FeatureVector<T>>, Vec<bool>) {
    indices
        .iter()
        .map(|&i| (task.trusted.points()[i].clone(), task.trusted.labels()[i]))
        .unzip()
}

fn holdout_mu<T: Scalar>(model: &Model<T>, task: &Task<T>, holdout: &[usize]) -> Result<f64> {
    let subset = task.trusted.subset(holdout)?;
    evaluate_mu(&model.predict(subset.points()), &subset).map(|r| r.mu)
}

/// Train on `A`, test on `B`. Either half is `None` when undefined
/// (no ground truth, or a trusted set too small to hold out).
pub fn conventional_pipeline<T: Scalar>(task: &Task<T>, kind: LearnerKind) -> Result<ConventionalResult> {
    let full = Model::fit(kind, task.trusted.points(), task.trusted.labels())?;
    let accuracy_on_b_truth = task.ground_truth.map(|truth| {
        let preds = full.predict(task.pool.items());
        let hits = preds.iter().zip(truth.labels()).filter(|(p, t)| *p == t).count();
        hits as f64 / task.n() as f64
    });
    let (fit_idx, hold_idx) = holdout_split(task.trusted.labels());
    let mu_on_a_holdout = if hold_idx.is_empty() {
        None
    } else {
        let (pts, labels) = gather(task, &fit_idx);
        Some(holdout_mu(&Model::fit(kind, &pts, &labels)?, task, &hold_idx)?)
    };
    Ok(ConventionalResult {
        mu_on_a_holdout,
        accuracy_on_b_truth,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelfTrainingConfig {
    /// Fraction of the still-unlabeled pool pseudo-labeled per round, in `(0, 1]`.
    pub confidence_quantile: f64,
    pub max_rounds: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SelfTrainingResult {
    /// Error on the holdout half of `A`.
    pub final_mu: f64,
    pub rounds: usize,
    /// Fraction of the pool carrying a pseudo-label after each round.
    pub labeled_fraction_per_round: Vec<f64>,
    /// Pseudo-labels, with any item never reached filled in by the final model.
    pub induced_labeling: u64,
    /// Search objective (error on all of `A`) of the induced labeling.
    pub induced_mu: f64,
    pub holdout_size: usize,
    /// True when no holdout example entered any fit.
    pub holdout_clean: bool,
}

/// Pseudo-labeling loop. Starts from a model fit on the fitting half of `A`;
/// each round labels the most confident `confidence_quantile` share of the
/// still-unlabeled pool (ties by pool index) and refits on the fitting half
/// plus every pseudo-labeled item.
pub fn self_training_baseline<T: Scalar>(
    task: &Task<T>,
    kind: LearnerKind,
    config: &SelfTrainingConfig,
) -> Result<SelfTrainingResult> {
    let q = config.confidence_quantile;
    if !(q > 0.0 && q <= 1.0) {
        return Err(Error::InvalidConfig(format!("confidence quantile must lie in (0, 1], got {q}")));
    }
    if config.max_rounds == 0 {
        return Err(Error::InvalidConfig("max_rounds must be >= 1".into()));
    }
    let (fit_idx, hold_idx) = holdout_split(task.trusted.labels());
    if hold_idx.is_empty() {
        return Err(Error::InvalidConfig("self-training needs m >= 2 to hold out half of A".into()));
    }
    let (base_pts, base_labels) = gather(task, &fit_idx);
    let holdout_clean = fit_idx.iter().all(|i| !hold_idx.contains(i));

    let n = task.n();
    let items = task.pool.items();
    let mut pseudo: Vec<Option<bool>> = vec![None; n];
    let mut model = Model::fit(kind, &base_pts, &base_labels)?;
    let mut fractions = Vec::new();

    for _ in 0..config.max_rounds {
        let mut scored: Vec<(usize, bool, f64)> = (0..n)
            .filter(|&i| pseudo[i].is_none())
            .map(|i| {
                let (label, conf) = model.classify(&items[i]);
                (i, label, conf)
            })
            .collect();
        if scored.is_empty() {
            break;
        }
        scored.sort_by(|a, b| b.2.total_cmp(&a.2).then(a.0.cmp(&b.0)));
        let take = ((q * scored.len() as f64).ceil() as usize).clamp(1, scored.len());
        for &(i, label, _) in &scored[..take] {
            pseudo[i] = Some(label);
        }
        let labeled = pseudo.iter().filter(|p| p.is_some()).count();
        fractions.push(labeled as f64 / n as f64);

        let mut pts = base_pts.clone();
        let mut labels = base_labels.clone();
        for (i, p) in pseudo.iter().enumerate() {
            if let Some(l) = p {
                pts.push(items[i].clone());
                labels.push(*l);
            }
        }
        model = Model::fit(kind, &pts, &labels)?;
    }

    let induced: Vec<bool> = pseudo
        .iter()
        .zip(items)
        .map(|(p, x)| p.unwrap_or_else(|| model.predict_one(x)))
        .collect();
    let induced = Labeling::from_labels(&induced)?;
    let induced_mu = LearnerState::fit(kind, &task.pool, induced, &task.trusted)?
        .evaluate(&task.trusted)
        .mu;

    Ok(SelfTrainingResult {
        final_mu: holdout_mu(&model, task, &hold_idx)?,
        rounds: fractions.len(),
        labeled_fraction_per_round: fractions,
        induced_labeling: induced.bits(),
        induced_mu,
        holdout_size: hold_idx.len(),
        holdout_clean,
    })
}

/// All three approaches on one task. `exhaustive_mu` and `truth_mu` are left
/// empty when the pool exceeds the search cap or carries no ground truth.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JointReport {
    pub conventional: ConventionalResult,
    pub self_training: SelfTrainingResult,
    pub exhaustive_mu: Option<f64>,
    pub truth_mu: Option<f64>,
    /// Exhaustive optimum no worse than the self-training labeling and the
    /// ground truth. `None` when the search was skipped.
    pub dominance_holds: Option<bool>,
}

pub fn joint_report<T: Scalar>(
    task: &Task<T>,
    kind: LearnerKind,
    self_training: &SelfTrainingConfig,
    search: ExhaustiveConfig,
) -> Result<JointReport> {
    let conventional = conventional_pipeline(task, kind)?;
    let self_training = self_training_baseline(task, kind, self_training)?;
    let truth_mu = match task.ground_truth {
        Some(truth) => Some(LearnerState::fit(kind, &task.pool, truth, &task.trusted)?.evaluate(&task.trusted).mu),
        None => None,
    };
    let exhaustive_mu = match exhaustive_search(task, kind, search) {
        Ok(out) => Some(out.best_mu),
        Err(Error::OverCap { .. }) => None,
        Err(e) => return Err(e),
    };
    let dominance_holds =
        exhaustive_mu.map(|mu| mu <= self_training.induced_mu && truth_mu.is_none_or(|t| mu <= t));
    Ok(JointReport {
        conventional,
        self_training,
        exhaustive_mu,
        truth_mu,
        dominance_holds,
    })
}
