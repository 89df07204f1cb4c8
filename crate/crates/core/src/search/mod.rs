//! Exhaustive and heuristic exploration of the labeling space.

mod chance;
mod exhaustive;
mod gray;
mod heuristic;

use std::collections::BinaryHeap;
use std::time::Duration;

pub use chance::{chance_hit_experiment, ChanceHit};
pub use exhaustive::{exhaustive_search, ExhaustiveConfig, DEFAULT_CAP, HARD_CAP};
pub use gray::{gray, gray_sequence, GrayCursor, GraySequence, GrayStep, MAX_GRAY_BITS};
pub use heuristic::{heuristic_search, HeuristicConfig, HeuristicKind};

use crate::domain::{EvalResult, SearchOutcome};

/// Longest argmin list kept; the optimum count itself is never capped.
pub const ARGMIN_CAP: usize = 1024;

/// Running optimum: best correct count, exact tie count, and the
/// [`ARGMIN_CAP`] smallest words achieving it.
#[derive(Clone, Debug, Default)]
pub(crate) struct Best {
    correct: Option<usize>,
    k_opt: u64,
    words: BinaryHeap<u64>,
}

impl Best {
    #[inline]
    pub(crate) fn offer(&mut self, word: u64, correct: usize) {
        match self.correct {
            Some(c) if correct < c => {}
            Some(c) if correct == c => {
                self.k_opt += 1;
                self.push(word);
            }
            _ => {
                self.correct = Some(correct);
                self.k_opt = 1;
                self.words.clear();
                self.words.push(word);
            }
        }
    }

    #[inline]
    fn push(&mut self, word: u64) {
        if self.words.len() < ARGMIN_CAP {
            self.words.push(word);
        } else if let Some(&top) = self.words.peek() {
            if word < top {
                self.words.pop();
                self.words.push(word);
            }
        }
    }

    /// Associative merge: higher correct count wins, ties pool their words.
    pub(crate) fn merge(mut self, other: Best) -> Best {
        match (self.correct, other.correct) {
            (_, None) => self,
            (None, _) => other,
            (Some(a), Some(b)) if a > b => self,
            (Some(a), Some(b)) if a < b => other,
            _ => {
                self.k_opt += other.k_opt;
                for w in other.words {
                    self.push(w);
                }
                self
            }
        }
    }

    pub(crate) fn into_outcome(self, m: usize, evaluations: u64, elapsed: Duration) -> SearchOutcome {
        let correct = self.correct.expect("at least one evaluation");
        let argmin = self.words.into_sorted_vec();
        SearchOutcome {
            best_mu: EvalResult::from_counts(correct, m).mu,
            best_correct: correct,
            argmin,
            k_opt: self.k_opt,
            evaluations,
            elapsed,
            mean_eval_time: elapsed.div_f64(evaluations.max(1) as f64),
        }
    }
}
