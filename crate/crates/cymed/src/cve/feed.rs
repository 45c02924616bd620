//! Advisory feed loading and validation.
//!
//! The schema is a minimal NVD-like subset:
//!
//! ```json
//! {"advisories":[{"id":"CVE-2020-0001","summary":"...","cvss":9.8,
//!   "affected":[{"product":"libfoo",
//!     "ranges":[{"introduced":"1.0.0","fixed":"1.2.5"}]}]}]}
//! ```
//!
//! `introduced` is inclusive, `fixed` exclusive; a missing `fixed` means
//! "everything from `introduced` on". Invariants are verified at load and
//! violating advisories are rejected record by record, keeping the rest.

use super::version::{compare_versions, Version};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RawFeed {
    advisories: Vec<RawAdvisory>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RawAdvisory {
    id: String,
    #[serde(default)]
    summary: String,
    cvss: f64,
    #[serde(default)]
    affected: Vec<RawAffected>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RawAffected {
    product: String,
    #[serde(default)]
    ranges: Vec<RawRange>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RawRange {
    introduced: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    fixed: Option<String>,
}

/// `[introduced, fixed)` half-open version range.
#[derive(Debug, Clone, PartialEq)]
pub struct VersionRange {
    pub introduced: Version,
    pub fixed: Option<Version>,
}

impl VersionRange {
    pub fn describe(&self) -> String {
        match &self.fixed {
            Some(f) => format!("[{}, {})", self.introduced, f),
            None => format!("[{}, ∞)", self.introduced),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Affected {
    /// Lowercase product name.
    pub product: String,
    pub ranges: Vec<VersionRange>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Advisory {
    pub id: String,
    pub summary: String,
    pub cvss: f64,
    pub affected: Vec<Affected>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct VulnFeed {
    pub advisories: Vec<Advisory>,
}

/// A rejected record and why.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeedDiag {
    pub advisory_id: String,
    pub reason: String,
}

#[derive(Debug, Error)]
pub enum FeedError {
    #[error("malformed feed document: {0}")]
    MalformedDocument(String),
}

/// Parse and validate a feed document.
pub fn load_feed(document: &[u8]) -> Result<(VulnFeed, Vec<FeedDiag>), FeedError> {
    let raw: RawFeed = serde_json::from_slice(document)
        .map_err(|e| FeedError::MalformedDocument(e.to_string()))?;

    let mut feed = VulnFeed::default();
    let mut diags = Vec::new();
    let mut seen_ids = BTreeSet::new();

    'advisories: for adv in raw.advisories {
        let reject = |reason: String, diags: &mut Vec<FeedDiag>| {
            diags.push(FeedDiag {
                advisory_id: adv_id_label(&adv.id),
                reason,
            });
        };
        if adv.id.trim().is_empty() {
            reject("empty advisory id".into(), &mut diags);
            continue;
        }
        if !seen_ids.insert(adv.id.clone()) {
            reject("duplicate advisory id".into(), &mut diags);
            continue;
        }
        if !(0.0..=10.0).contains(&adv.cvss) || adv.cvss.is_nan() {
            reject(format!("cvss {} outside [0, 10]", adv.cvss), &mut diags);
            continue;
        }
        let mut affected = Vec::with_capacity(adv.affected.len());
        for aff in &adv.affected {
            if aff.product.trim().is_empty() {
                reject("empty product name".into(), &mut diags);
                continue 'advisories;
            }
            let mut ranges = Vec::with_capacity(aff.ranges.len());
            for r in &aff.ranges {
                let introduced = match Version::parse(&r.introduced) {
                    Ok(v) => v,
                    Err(e) => {
                        reject(
                            format!("bad introduced version {:?}: {e}", r.introduced),
                            &mut diags,
                        );
                        continue 'advisories;
                    }
                };
                let fixed = match &r.fixed {
                    Some(f) => match Version::parse(f) {
                        Ok(v) => Some(v),
                        Err(e) => {
                            reject(format!("bad fixed version {f:?}: {e}"), &mut diags);
                            continue 'advisories;
                        }
                    },
                    None => None,
                };
                if let Some(f) = &fixed {
                    if compare_versions(&introduced, f) != Ordering::Less {
                        reject(
                            format!("range [{introduced}, {f}) is empty or inverted"),
                            &mut diags,
                        );
                        continue 'advisories;
                    }
                }
                ranges.push(VersionRange { introduced, fixed });
            }
            affected.push(Affected {
                product: aff.product.trim().to_lowercase(),
                ranges,
            });
        }
        feed.advisories.push(Advisory {
            id: adv.id.clone(),
            summary: adv.summary.clone(),
            cvss: adv.cvss,
            affected,
        });
    }
    Ok((feed, diags))
}

fn adv_id_label(id: &str) -> String {
    if id.trim().is_empty() {
        "<missing id>".to_string()
    } else {
        id.to_string()
    }
}

/// Render a validated feed back to canonical JSON. `load(render(load(d)))`
/// equals `load(d)`.
pub fn render_feed(feed: &VulnFeed) -> Vec<u8> {
    let raw = RawFeed {
        advisories: feed
            .advisories
            .iter()
            .map(|a| RawAdvisory {
                id: a.id.clone(),
                summary: a.summary.clone(),
                cvss: a.cvss,
                affected: a
                    .affected
                    .iter()
                    .map(|aff| RawAffected {
                        product: aff.product.clone(),
                        ranges: aff
                            .ranges
                            .iter()
                            .map(|r| RawRange {
                                introduced: r.introduced.to_string(),
                                fixed: r.fixed.as_ref().map(|f| f.to_string()),
                            })
                            .collect(),
                    })
                    .collect(),
            })
            .collect(),
    };
    serde_json::to_vec_pretty(&raw).expect("feed serialization cannot fail")
}
