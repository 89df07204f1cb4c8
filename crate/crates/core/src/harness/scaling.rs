use std::io::Write;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::learners::LearnerKind;
use crate::search::{exhaustive_search, ExhaustiveConfig};
use crate::stats::log2_slope;

use super::tasks::{generate_task, TaskSpec};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingConfig {
    pub n_values: Vec<u32>,
    /// Task template; its `n` is replaced by each entry of `n_values`.
    pub template: TaskSpec,
    pub learner: LearnerKind,
    pub workers: usize,
    /// Sweeps per `n`; the fastest is kept.
    pub repeats: usize,
    pub cap: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingRow {
    pub n: u32,
    /// Seconds per labeling evaluated.
    pub mean_eval_time: f64,
    /// Seconds for the full sweep.
    pub total_time: f64,
    pub best_mu: f64,
    pub evaluations: u64,
    pub k_opt: u64,
    pub argmin: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingReport {
    pub rows: Vec<ScalingRow>,
    /// Least-squares slope of `log2(total_time)` against `n`.
    pub fitted_slope: f64,
    pub slope_stderr: f64,
    pub workers: usize,
}

impl ScalingReport {
    pub fn total_wall_clock(&self) -> f64 {
        self.rows.iter().map(|r| r.total_time).sum()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["n", "mean_eval_time", "total_time", "best_mu", "evaluations", "k_opt"])?;
        for r in &self.rows {
            w.write_record([
                r.n.to_string(),
                r.mean_eval_time.to_string(),
                r.total_time.to_string(),
                r.best_mu.to_string(),
                r.evaluations.to_string(),
                r.k_opt.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Times a full exhaustive sweep at each `n` and fits the exponent.
///
/// One sweep at the smallest `n` runs first and is discarded as warm-up.
pub fn scaling_experiment(config: &ScalingConfig) -> Result<ScalingReport> {
    if config.n_values.len() < 2 {
        return Err(Error::InvalidConfig("scaling needs at least two n values".into()));
    }
    if config.n_values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidConfig("n values must be strictly ascending".into()));
    }
    if config.repeats == 0 {
        return Err(Error::InvalidConfig("repeats must be >= 1".into()));
    }
    let search = ExhaustiveConfig {
        workers: config.workers,
        cap: config.cap,
    };
    let tasks = config
        .n_values
        .iter()
        .map(|&n| {
            search.check(n as usize)?;
            generate_task(&config.template.with_n(n as usize))
        })
        .collect::<Result<Vec<_>>>()?;

    exhaustive_search(&tasks[0], config.learner, search)?;

    let mut rows = Vec::with_capacity(tasks.len());
    for (task, &n) in tasks.iter().zip(&config.n_values) {
        let mut fastest: Option<Duration> = None;
        let mut outcome = None;
        for _ in 0..config.repeats {
            let out = exhaustive_search(task, config.learner, search)?;
            if fastest.is_none_or(|f| out.elapsed < f) {
                fastest = Some(out.elapsed);
            }
            outcome = Some(out);
        }
        let out = outcome.expect("repeats >= 1");
        let total = fastest.expect("repeats >= 1").as_secs_f64().max(1e-9);
        rows.push(ScalingRow {
            n,
            mean_eval_time: total / out.evaluations as f64,
            total_time: total,
            best_mu: out.best_mu,
            evaluations: out.evaluations,
            k_opt: out.k_opt,
            argmin: out.argmin,
        });
    }
    let totals: Vec<f64> = rows.iter().map(|r| r.total_time).collect();
    let fit = log2_slope(&config.n_values, &totals)?;
    Ok(ScalingReport {
        rows,
        fitted_slope: fit.slope,
        slope_stderr: fit.slope_stderr,
        workers: config.workers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(workers: usize) -> ScalingConfig {
        ScalingConfig {
            n_values: (8..=13).collect(),
            template: TaskSpec {
                m: 16,
                n: 0,
                d: 4,
                separation: 2.0,
                noise_sigma: 1.0,
                seed: 11,
            },
            learner: LearnerKind::Centroid,
            workers,
            repeats: 1,
            cap: 24,
        }
    }

    #[test]
    fn rows_are_ascending_and_deterministic() {
        let a = scaling_experiment(&config(1)).unwrap();
        let b = scaling_experiment(&config(2)).unwrap();
        assert_eq!(a.rows.len(), 6);
        assert!(a.rows.windows(2).all(|w| w[0].n < w[1].n));
        for (x, y) in a.rows.iter().zip(&b.rows) {
            assert_eq!((x.best_mu, &x.argmin, x.evaluations), (y.best_mu, &y.argmin, y.evaluations));
            assert_eq!(x.evaluations, 1 << x.n);
        }
        assert!(a.fitted_slope.is_finite());
    }

    #[test]
    fn cap_violation_is_refused() {
        let mut c = config(1);
        c.n_values = vec![10, 30];
        assert!(matches!(scaling_experiment(&c), Err(Error::OverCap { n: 30, cap: 24 })));
        c.n_values = vec![12, 11];
        assert!(scaling_experiment(&c).is_err());
    }

    #[test]
    fn csv_has_one_line_per_row() {
        let r = scaling_experiment(&config(1)).unwrap();
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 7);
        assert!(text.starts_with("n,mean_eval_time,total_time,best_mu,evaluations,k_opt\n"));
    }
}
