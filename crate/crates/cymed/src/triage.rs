//! Crash deduplication and exploitability ranking.
//!
//! Groups are keyed by `(crash kind, location id)`. The VM has no call
//! stack and black-box targets expose only a termination cause, so this key
//! is deliberately coarser than stack hashing.

use crate::crash::CrashKind;
use crate::fuzzer::CrashRecord;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SeverityClass {
    Unknown,
    NotExploitable,
    ProbablyExploitable,
    Exploitable,
}

impl SeverityClass {
    /// Numeric rank, 3 (worst) down to 0.
    pub fn rank(&self) -> u8 {
        match self {
            SeverityClass::Exploitable => 3,
            SeverityClass::ProbablyExploitable => 2,
            SeverityClass::NotExploitable => 1,
            SeverityClass::Unknown => 0,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            SeverityClass::Exploitable => "exploitable",
            SeverityClass::ProbablyExploitable => "probably-exploitable",
            SeverityClass::NotExploitable => "not-exploitable",
            SeverityClass::Unknown => "unknown",
        }
    }
}

/// Exploitability table, with optional per-kind overrides on top of the
/// built-in classification.
#[derive(Debug, Clone, Default)]
pub struct SeverityTable {
    overrides: BTreeMap<CrashKind, SeverityClass>,
}

impl SeverityTable {
    pub fn with_override(mut self, kind: CrashKind, class: SeverityClass) -> Self {
        self.overrides.insert(kind, class);
        self
    }

    pub fn class_of(&self, kind: CrashKind) -> SeverityClass {
        if let Some(&class) = self.overrides.get(&kind) {
            return class;
        }
        default_severity(kind)
    }
}

/// Built-in exploitability classification: control-flow hijacks and memory
/// writes are exploitable, wild reads probably, controlled aborts not, and
/// anything unmapped is unknown.
fn default_severity(kind: CrashKind) -> SeverityClass {
    match kind {
        CrashKind::IndirectJumpOutOfRange
        | CrashKind::WriteViolation
        | CrashKind::IllegalInstruction
        | CrashKind::SegmentationWrite => SeverityClass::Exploitable,
        CrashKind::SegmentationRead => SeverityClass::ProbablyExploitable,
        CrashKind::DivByZero | CrashKind::AssertFailure | CrashKind::Explicit(_) => {
            SeverityClass::NotExploitable
        }
        CrashKind::Other(_) => SeverityClass::Unknown,
    }
}

/// Table-driven exploitability estimate for one crash kind.
pub fn severity_of(kind: CrashKind) -> SeverityClass {
    default_severity(kind)
}

/// One deduplicated crash group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriagedGroup {
    pub kind: CrashKind,
    pub location: u64,
    pub severity: SeverityClass,
    /// Every member, earliest discovery first.
    pub representatives: Vec<CrashRecord>,
    pub count: usize,
}

impl TriagedGroup {
    /// First-found representative.
    pub fn representative(&self) -> &CrashRecord {
        &self.representatives[0]
    }
}

/// Group crashes by `(kind, location)` and rank by severity.
///
/// Output order: severity rank descending, then count descending, then key.
/// Representatives are ordered by discovery index, so any permutation of the
/// input produces identical output.
pub fn triage_crashes(crashes: &[CrashRecord]) -> Vec<TriagedGroup> {
    triage_crashes_with(crashes, &SeverityTable::default())
}

pub fn triage_crashes_with(crashes: &[CrashRecord], table: &SeverityTable) -> Vec<TriagedGroup> {
    let mut buckets: BTreeMap<(CrashKind, u64), Vec<CrashRecord>> = BTreeMap::new();
    for crash in crashes {
        buckets
            .entry((crash.kind, crash.location))
            .or_default()
            .push(crash.clone());
    }
    let mut groups: Vec<TriagedGroup> = buckets
        .into_iter()
        .map(|((kind, location), mut members)| {
            members.sort_by(|a, b| {
                (a.discovered_at_exec, &a.input).cmp(&(b.discovered_at_exec, &b.input))
            });
            let count = members.len();
            TriagedGroup {
                kind,
                location,
                severity: table.class_of(kind),
                representatives: members,
                count,
            }
        })
        .collect();
    groups.sort_by(|a, b| {
        b.severity
            .rank()
            .cmp(&a.severity.rank())
            .then_with(|| b.count.cmp(&a.count))
            .then_with(|| (a.kind.label(), a.location).cmp(&(b.kind.label(), b.location)))
    });
    groups
}
