//! Test-only oracle: naive brute force over labelings in plain binary order,
//! refitting both learners from scratch with its own arithmetic. Shares no
//! code with the library's learners or search.

#![allow(dead_code)]

use labelsearch::{LearnerKind, Task};

pub struct Brute {
    pub best_correct: usize,
    pub best_mu: f64,
    pub k_opt: u64,
    /// Optimal words ascending, truncated to the first 1024.
    pub argmin: Vec<u64>,
}

fn coords(task: &Task<f64>) -> (Vec<Vec<f64>>, Vec<Vec<f64>>, Vec<bool>) {
    let b = task.pool.items().iter().map(|p| p.coords().to_vec()).collect();
    let a = task.trusted.points().iter().map(|p| p.coords().to_vec()).collect();
    (b, a, task.trusted.labels().to_vec())
}

fn sq(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = 0.0;
    for k in 0..a.len() {
        let diff = a[k] - b[k];
        acc += diff * diff;
    }
    acc
}

/// Correct count on `A` of the learner trained on the pool labeled by `word`.
pub fn refit_correct(task: &Task<f64>, kind: LearnerKind, word: u64) -> usize {
    let (b, a, y) = coords(task);
    let label = |i: usize| (word >> i) & 1 == 1;
    let preds: Vec<bool> = match kind {
        LearnerKind::Centroid => {
            let d = b[0].len();
            let mut sums = [vec![0.0; d], vec![0.0; d]];
            let mut counts = [0usize; 2];
            for (i, x) in b.iter().enumerate() {
                let c = label(i) as usize;
                for k in 0..d {
                    sums[c][k] += x[k];
                }
                counts[c] += 1;
            }
            a.iter()
                .map(|x| {
                    if counts[0] == 0 {
                        return true;
                    }
                    if counts[1] == 0 {
                        return false;
                    }
                    let mut dist = [0.0; 2];
                    for c in 0..2 {
                        for k in 0..d {
                            let diff = x[k] - sums[c][k] / counts[c] as f64;
                            dist[c] += diff * diff;
                        }
                    }
                    dist[1] < dist[0]
                })
                .collect()
        }
        LearnerKind::OneNn => a
            .iter()
            .map(|x| {
                let mut best = 0;
                for i in 1..b.len() {
                    if sq(&b[i], x) < sq(&b[best], x) {
                        best = i;
                    }
                }
                label(best)
            })
            .collect(),
    };
    preds.iter().zip(&y).filter(|(p, t)| p == t).count()
}

pub fn brute_force(task: &Task<f64>, kind: LearnerKind) -> Brute {
    let n = task.n() as u32;
    let mut best_correct = 0;
    let mut words: Vec<u64> = Vec::new();
    for word in 0..(1u64 << n) {
        let c = refit_correct(task, kind, word);
        if c > best_correct || words.is_empty() {
            best_correct = c;
            words.clear();
        }
        if c == best_correct {
            words.push(word);
        }
    }
    let k_opt = words.len() as u64;
    words.truncate(1024);
    let m = task.m();
    Brute {
        best_correct,
        best_mu: (m - best_correct) as f64 / m as f64,
        k_opt,
        argmin: words,
    }
}

/// Deterministic parameter stream for building many small random tasks.
pub struct Lcg(pub u64);

impl Lcg {
    pub fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        self.0 >> 33
    }

    pub fn range(&mut self, lo: u64, hi: u64) -> u64 {
        lo + self.next() % (hi - lo + 1)
    }

    pub fn unit(&mut self) -> f64 {
        (self.next() % 1_000_000) as f64 / 1_000_000.0
    }
}
