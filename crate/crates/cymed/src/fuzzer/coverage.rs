//! AFL-style bucketed edge coverage.
//!
//! Edges hash into a fixed 64 Ki map; raw hit counts collapse into
//! logarithmic classes so "same edge, wildly more iterations" still reads as
//! novelty while small count jitter does not. Class-wise max makes merging
//! idempotent and commutative.

use std::collections::BTreeMap;

pub const MAP_SIZE: usize = 1 << 16;

/// Hash a control-flow edge to its bucket.
pub fn edge_id(from: usize, to: usize) -> u16 {
    let mut z = (from as u64).wrapping_mul(0x9E3779B97F4A7C15)
        ^ (to as u64).wrapping_mul(0xBF58476D1CE4E5B9);
    z ^= z >> 29;
    z = z.wrapping_mul(0x94D049BB133111EB);
    (z >> 48) as u16
}

/// Map a raw hit count to its class: 1, 2, 3, 4–7, 8–15, 16–31, 32–127, 128+.
pub fn bucket_class(count: u64) -> u8 {
    match count {
        0 => 0,
        1 => 1,
        2 => 2,
        3 => 3,
        4..=7 => 4,
        8..=15 => 5,
        16..=31 => 6,
        32..=127 => 7,
        _ => 8,
    }
}

/// One run's coverage: bucket -> raw hit count.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunCoverage {
    counts: BTreeMap<u16, u64>,
}

impl RunCoverage {
    pub fn from_edge_counts<'a, I>(edges: I) -> Self
    where
        I: IntoIterator<Item = (&'a (usize, usize), &'a u64)>,
    {
        let mut counts: BTreeMap<u16, u64> = BTreeMap::new();
        for (&(from, to), &n) in edges {
            *counts.entry(edge_id(from, to)).or_insert(0) += n;
        }
        Self { counts }
    }

    pub fn from_bucket_counts(counts: BTreeMap<u16, u64>) -> Self {
        Self { counts }
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Stable `(bucket, class)` signature for corpus bookkeeping.
    pub fn signature(&self) -> Vec<(u16, u8)> {
        self.counts
            .iter()
            .map(|(&b, &c)| (b, bucket_class(c)))
            .collect()
    }
}

/// Global campaign coverage: the highest class seen per bucket.
#[derive(Debug, Clone)]
pub struct CoverageMap {
    classes: Box<[u8; MAP_SIZE]>,
}

impl Default for CoverageMap {
    fn default() -> Self {
        Self::new()
    }
}

impl CoverageMap {
    pub fn new() -> Self {
        Self {
            classes: Box::new([0u8; MAP_SIZE]),
        }
    }

    /// Would this run contribute a new bucket class?
    pub fn is_novel(&self, run: &RunCoverage) -> bool {
        run.counts
            .iter()
            .any(|(&bucket, &count)| bucket_class(count) > self.classes[bucket as usize])
    }

    /// Check for novelty and merge by class-wise max in one step.
    pub fn classify_and_merge(&mut self, run: &RunCoverage) -> bool {
        let mut novel = false;
        for (&bucket, &count) in &run.counts {
            let class = bucket_class(count);
            let slot = &mut self.classes[bucket as usize];
            if class > *slot {
                *slot = class;
                novel = true;
            }
        }
        novel
    }

    /// Number of buckets with any coverage.
    pub fn filled(&self) -> usize {
        self.classes.iter().filter(|&&c| c > 0).count()
    }
}
