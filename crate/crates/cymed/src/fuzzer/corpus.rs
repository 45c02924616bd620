//! Retained inputs and the scheduling weights between them.

use super::coverage::CoverageMap;
use super::rng::Rng;
use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub input: Vec<u8>,
    /// `(bucket, class)` signature of the run that earned this entry its
    /// place.
    pub signature: Vec<(u16, u8)>,
    /// Execution cost when discovered (VM steps or wall micros).
    pub cost: u64,
    /// Execution index at which the entry was inserted.
    pub found_at_exec: u64,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("corpus is empty")]
pub struct EmptyCorpus;

/// Fuzzing state: kept inputs plus the global coverage map.
#[derive(Debug, Default)]
pub struct Corpus {
    entries: Vec<CorpusEntry>,
    pub map: CoverageMap,
    pub total_execs: u64,
}

impl Corpus {
    pub fn new() -> Self {
        Self::default()
    }

    /// Insert an entry the campaign already judged novel.
    pub fn insert(&mut self, entry: CorpusEntry) {
        self.entries.push(entry);
    }

    pub fn entries(&self) -> &[CorpusEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Weighted scheduling choice: energy favors fast, small entries while
    /// every entry keeps a nonzero probability.
    ///
    /// Energy is `1 / (cost_norm * len_norm)` with both factors clamped, so
    /// a pathological entry can be at most 16x less likely than average.
    pub fn select_next(&self, rng: &mut Rng) -> Result<usize, EmptyCorpus> {
        if self.entries.is_empty() {
            return Err(EmptyCorpus);
        }
        if self.entries.len() == 1 {
            return Ok(0);
        }
        let avg_cost = self.entries.iter().map(|e| e.cost.max(1)).sum::<u64>() as f64
            / self.entries.len() as f64;
        let avg_len = self
            .entries
            .iter()
            .map(|e| e.input.len().max(1))
            .sum::<usize>() as f64
            / self.entries.len() as f64;

        // Integer weights in thousandths keep the draw portable and exact.
        let weights: Vec<u64> = self
            .entries
            .iter()
            .map(|e| {
                let cost_norm = (e.cost.max(1) as f64 / avg_cost).clamp(0.25, 4.0);
                let len_norm = (e.input.len().max(1) as f64 / avg_len).clamp(0.25, 4.0);
                let energy = 1.0 / (cost_norm * len_norm);
                (energy * 1000.0) as u64 + 1
            })
            .collect();
        let total: u64 = weights.iter().sum();
        let mut roll = rng.below(total);
        for (i, w) in weights.iter().enumerate() {
            if roll < *w {
                return Ok(i);
            }
            roll -= w;
        }
        Ok(self.entries.len() - 1)
    }

    /// Stable digest over inputs and coverage signatures; two corpora with
    /// equal signatures saw the same retained behavior.
    pub fn signature(&self) -> String {
        let mut hasher = Sha256::new();
        for e in &self.entries {
            hasher.update((e.input.len() as u64).to_le_bytes());
            hasher.update(&e.input);
            for (bucket, class) in &e.signature {
                hasher.update(bucket.to_le_bytes());
                hasher.update([*class]);
            }
        }
        let digest = hasher.finalize();
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}
