//! Deterministic pairwise summation.
//!
//! Terms are summed naively in blocks of [`BLOCK`], and block totals are merged
//! as a binary tree. The result depends only on the order in which terms are
//! pushed, so lattice sums are reproducible bit for bit.

const BLOCK: usize = 128;

#[derive(Debug, Clone, Default)]
pub struct PairwiseSum {
    block: f64,
    block_len: usize,
    // (level, partial) pairs; levels strictly decrease from bottom to top.
    stack: Vec<(u32, f64)>,
}

impl PairwiseSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn push(&mut self, x: f64) {
        self.block += x;
        self.block_len += 1;
        if self.block_len == BLOCK {
            self.flush_block();
        }
    }

    fn flush_block(&mut self) {
        let mut level = 0u32;
        let mut value = self.block;
        self.block = 0.0;
        self.block_len = 0;
        while let Some(&(top_level, top)) = self.stack.last() {
            if top_level != level {
                break;
            }
            self.stack.pop();
            value += top;
            level += 1;
        }
        self.stack.push((level, value));
    }

    pub fn total(&self) -> f64 {
        let mut acc = self.block;
        for &(_, v) in self.stack.iter().rev() {
            acc += v;
        }
        acc
    }
}

impl Extend<f64> for PairwiseSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for x in iter {
            self.push(x);
        }
    }
}

/// Pairwise sum of an iterator.
pub fn pairwise_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    let mut acc = PairwiseSum::new();
    acc.extend(iter);
    acc.total()
}
