//! Match detected components against advisory version ranges.

use super::detect::DetectedComponent;
use super::feed::{VersionRange, VulnFeed};
use super::version::compare_versions_with;
use std::cmp::Ordering;

/// One (component, advisory) hit: the component's version falls inside an
/// affected range.
#[derive(Debug, Clone, PartialEq)]
pub struct VulnMatch {
    pub component: DetectedComponent,
    pub advisory_id: String,
    pub summary: String,
    pub cvss: f64,
    pub range: VersionRange,
}

/// Exactly the set of (component, advisory, range) triples with matching
/// product and `introduced <= version < fixed` (missing `fixed` means
/// unbounded). Output sorted by cvss descending, then advisory id, then
/// component file/product/version for full determinism.
pub fn match_vulnerabilities(components: &[DetectedComponent], feed: &VulnFeed) -> Vec<VulnMatch> {
    let mut matches = Vec::new();
    for component in components {
        for advisory in &feed.advisories {
            for affected in &advisory.affected {
                if affected.product != component.product {
                    continue;
                }
                for range in &affected.ranges {
                    if version_in_range(component, range) {
                        matches.push(VulnMatch {
                            component: component.clone(),
                            advisory_id: advisory.id.clone(),
                            summary: advisory.summary.clone(),
                            cvss: advisory.cvss,
                            range: range.clone(),
                        });
                    }
                }
            }
        }
    }
    matches.sort_by(|a, b| {
        b.cvss
            .partial_cmp(&a.cvss)
            .unwrap_or(Ordering::Equal)
            .then_with(|| a.advisory_id.cmp(&b.advisory_id))
            .then_with(|| a.component.file.cmp(&b.component.file))
            .then_with(|| a.component.product.cmp(&b.component.product))
            .then_with(|| {
                a.component
                    .version
                    .to_string()
                    .cmp(&b.component.version.to_string())
            })
            .then_with(|| a.range.describe().cmp(&b.range.describe()))
    });
    matches
}

/// `introduced <= v` and (`fixed` absent or `v < fixed`), compared under the
/// component's suffix rule so OpenSSL-style letters order correctly.
pub fn version_in_range(component: &DetectedComponent, range: &VersionRange) -> bool {
    let rule = component.suffix_rule;
    if compare_versions_with(&range.introduced, &component.version, rule) == Ordering::Greater {
        return false;
    }
    match &range.fixed {
        Some(fixed) => compare_versions_with(&component.version, fixed, rule) == Ordering::Less,
        None => true,
    }
}
