use crate::domain::{mask, Labeling};
use crate::error::{Error, Result};

pub const MAX_GRAY_BITS: u32 = 32;

#[inline]
pub fn gray(step: u64) -> u64 {
    step ^ (step >> 1)
}

/// Position in a reflected Gray sweep of `n` bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GrayCursor {
    step: u64,
    current_word: u64,
    n: u32,
}

impl GrayCursor {
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 || n > MAX_GRAY_BITS {
            return Err(Error::Domain(format!(
                "gray sweep needs 1 <= n <= {MAX_GRAY_BITS}, got {n}"
            )));
        }
        Ok(Self {
            step: 0,
            current_word: 0,
            n,
        })
    }

    pub fn step(&self) -> u64 {
        self.step
    }

    pub fn word(&self) -> u64 {
        self.current_word
    }

    pub fn len(&self) -> u64 {
        1u64 << self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Moves to the next word and returns the bit that flipped, or `None`
    /// once all `2^n` words have been visited.
    #[inline]
    pub fn advance(&mut self) -> Option<u32> {
        let next = self.step + 1;
        if next >= self.len() {
            return None;
        }
        let bit = next.trailing_zeros();
        self.step = next;
        self.current_word ^= 1u64 << bit;
        debug_assert_eq!(self.current_word, gray(next) & mask(self.n));
        Some(bit)
    }
}

/// One element of a Gray sweep. `flip` is `None` only for the starting all-zeros word.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GrayStep {
    pub flip: Option<u32>,
    pub labeling: Labeling,
}

pub struct GraySequence {
    cursor: GrayCursor,
    started: bool,
}

impl Iterator for GraySequence {
    type Item = GrayStep;

    fn next(&mut self) -> Option<GrayStep> {
        let flip = if self.started {
            Some(self.cursor.advance()?)
        } else {
            self.started = true;
            None
        };
        Some(GrayStep {
            flip,
            labeling: Labeling::new(self.cursor.word(), self.cursor.n).expect("word within n bits"),
        })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let remaining = (self.cursor.len() - self.cursor.step - 1 + u64::from(!self.started)) as usize;
        (remaining, Some(remaining))
    }
}

impl ExactSizeIterator for GraySequence {}

/// All `2^n` labelings, starting at all-zeros, consecutive words one bit apart.
pub fn gray_sequence(n: u32) -> Result<GraySequence> {
    Ok(GraySequence {
        cursor: GrayCursor::new(n)?,
        started: false,
    })
}
