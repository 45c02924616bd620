//! Known-vulnerability search: feed ingestion, component detection and
//! version-range matching.

pub mod detect;
pub mod feed;
pub mod fetch;
pub mod matching;
pub mod version;

pub use detect::{
    detect_components, DetectDiag, DetectedComponent, DetectorRule, RuleError, RuleSet, RuleSource,
};
pub use feed::{
    load_feed, render_feed, Advisory, Affected, FeedDiag, FeedError, VersionRange, VulnFeed,
};
pub use fetch::{fetch_feed, FeedSource, FetchConfig, FetchError};
pub use matching::{match_vulnerabilities, version_in_range, VulnMatch};
pub use version::{
    compare_versions, compare_versions_with, SuffixRule, Version, VersionParseError,
};
