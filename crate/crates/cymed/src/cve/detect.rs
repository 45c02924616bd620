//! Third-party component detection from extracted strings and file names.

use super::version::{SuffixRule, Version};
use crate::inspector::strings::FoundString;
use regex::Regex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RuleSource {
    Strings,
    Filename,
}

/// One detector rule as configured: a product, a pattern with exactly one
/// version capture group, and where to apply it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DetectorRule {
    #[serde(default)]
    pub id: Option<String>,
    pub product: String,
    pub pattern: String,
    pub source: RuleSource,
    /// `additive` for product families whose trailing letters are patch
    /// increments rather than prereleases.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub letter_suffix: Option<String>,
}

#[derive(Debug, Error)]
pub enum RuleError {
    #[error("rule {product:?}: bad pattern: {error}")]
    BadPattern { product: String, error: String },
    #[error("rule {product:?}: pattern must have exactly one capture group, has {groups}")]
    WrongCaptureCount { product: String, groups: usize },
    #[error("rule {product:?}: unknown letter_suffix {value:?} (expected \"additive\")")]
    BadSuffixFlag { product: String, value: String },
    #[error("rules document is not valid JSON: {0}")]
    MalformedDocument(String),
}

#[derive(Debug, Clone)]
pub struct CompiledRule {
    pub id: String,
    pub product: String,
    pub regex: Regex,
    pub source: RuleSource,
    pub suffix_rule: SuffixRule,
}

#[derive(Debug, Clone, Default)]
pub struct RuleSet {
    pub rules: Vec<CompiledRule>,
}

impl RuleSet {
    /// Compile a JSON list of [`DetectorRule`]s.
    pub fn from_json(document: &[u8]) -> Result<Self, RuleError> {
        let raw: Vec<DetectorRule> = serde_json::from_slice(document)
            .map_err(|e| RuleError::MalformedDocument(e.to_string()))?;
        Self::compile(raw)
    }

    pub fn compile(raw: Vec<DetectorRule>) -> Result<Self, RuleError> {
        let mut rules = Vec::with_capacity(raw.len());
        for r in raw {
            let regex = Regex::new(&r.pattern).map_err(|e| RuleError::BadPattern {
                product: r.product.clone(),
                error: e.to_string(),
            })?;
            // captures_len counts the implicit whole-match group.
            let groups = regex.captures_len() - 1;
            if groups != 1 {
                return Err(RuleError::WrongCaptureCount {
                    product: r.product.clone(),
                    groups,
                });
            }
            let suffix_rule = match r.letter_suffix.as_deref() {
                None => SuffixRule::Prerelease,
                Some("additive") => SuffixRule::Additive,
                Some(other) => {
                    return Err(RuleError::BadSuffixFlag {
                        product: r.product.clone(),
                        value: other.to_string(),
                    })
                }
            };
            rules.push(CompiledRule {
                id: r
                    .id
                    .unwrap_or_else(|| format!("{}-{}", r.product, source_label(r.source))),
                product: r.product.to_lowercase(),
                regex,
                source: r.source,
                suffix_rule,
            });
        }
        Ok(Self { rules })
    }

    /// Built-in rules for components common in embedded Linux firmware.
    pub fn default_rules() -> Self {
        let raw = vec![
            rule(
                "openssl",
                r"OpenSSL (\d+\.\d+\.\d+[a-z]?)",
                RuleSource::Strings,
                Some("additive"),
            ),
            rule(
                "busybox",
                r"BusyBox v(\d+\.\d+\.\d+)",
                RuleSource::Strings,
                None,
            ),
            rule(
                "zlib",
                r"zlib[ /-](\d+\.\d+\.\d+)",
                RuleSource::Strings,
                None,
            ),
            rule(
                "dropbear",
                r"[Dd]ropbear[ _]v?(\d+\.\d+(?:\.\d+)?)",
                RuleSource::Strings,
                None,
            ),
            rule(
                "curl",
                r"curl[ /](\d+\.\d+\.\d+)",
                RuleSource::Strings,
                None,
            ),
            rule(
                "dnsmasq",
                r"[Dd]nsmasq[- ]v?(\d+\.\d+(?:\.\d+)?)",
                RuleSource::Strings,
                None,
            ),
            rule(
                "lighttpd",
                r"lighttpd[ /-](\d+\.\d+\.\d+)",
                RuleSource::Strings,
                None,
            ),
            rule(
                "linux_kernel",
                r"Linux version (\d+\.\d+\.\d+)",
                RuleSource::Strings,
                None,
            ),
            rule(
                "libpng",
                r"libpng-(\d+\.\d+\.\d+)",
                RuleSource::Filename,
                None,
            ),
            rule(
                "libxml2",
                r"libxml2[-.]so[.-](\d+\.\d+\.\d+)",
                RuleSource::Filename,
                None,
            ),
        ];
        Self::compile(raw).expect("built-in rules compile")
    }
}

fn rule(
    product: &str,
    pattern: &str,
    source: RuleSource,
    letter_suffix: Option<&str>,
) -> DetectorRule {
    DetectorRule {
        id: None,
        product: product.to_string(),
        pattern: pattern.to_string(),
        source,
        letter_suffix: letter_suffix.map(str::to_string),
    }
}

fn source_label(s: RuleSource) -> &'static str {
    match s {
        RuleSource::Strings => "strings",
        RuleSource::Filename => "filename",
    }
}

/// A (product, version) sighting in one file.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectedComponent {
    pub product: String,
    pub version: Version,
    pub suffix_rule: SuffixRule,
    pub file: String,
    /// The matched string, verbatim.
    pub evidence: String,
    pub detector: String,
    /// Set when several products claim the same evidence; all candidates are
    /// reported rather than picking one.
    pub ambiguous: bool,
}

/// A version capture that failed to parse; the hit is dropped but recorded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetectDiag {
    pub file: String,
    pub rule: String,
    pub capture: String,
    pub reason: String,
}

/// Apply the rule set to one file's extracted strings and name.
///
/// Duplicates collapse to one component per (product, version, file). A
/// version capture that does not parse drops the hit with a diagnostic.
pub fn detect_components(
    strings: &[FoundString],
    filename: &str,
    rules: &RuleSet,
) -> (Vec<DetectedComponent>, Vec<DetectDiag>) {
    let mut components: Vec<DetectedComponent> = Vec::new();
    let mut diags = Vec::new();

    let consider = |rule: &CompiledRule,
                    haystack: &str,
                    components: &mut Vec<DetectedComponent>,
                    diags: &mut Vec<DetectDiag>| {
        for caps in rule.regex.captures_iter(haystack) {
            let whole = caps.get(0).expect("match exists").as_str().to_string();
            let capture = caps.get(1).expect("one capture group").as_str();
            match Version::parse(capture) {
                Ok(version) => {
                    let duplicate = components.iter().any(|c| {
                        c.product == rule.product && c.version == version && c.file == filename
                    });
                    if !duplicate {
                        components.push(DetectedComponent {
                            product: rule.product.clone(),
                            version,
                            suffix_rule: rule.suffix_rule,
                            file: filename.to_string(),
                            evidence: whole,
                            detector: rule.id.clone(),
                            ambiguous: false,
                        });
                    }
                }
                Err(e) => diags.push(DetectDiag {
                    file: filename.to_string(),
                    rule: rule.id.clone(),
                    capture: capture.to_string(),
                    reason: e.to_string(),
                }),
            }
        }
    };

    for rule in &rules.rules {
        match rule.source {
            RuleSource::Strings => {
                for s in strings {
                    consider(rule, &s.text, &mut components, &mut diags);
                }
            }
            RuleSource::Filename => consider(rule, filename, &mut components, &mut diags),
        }
    }

    // Identical evidence claimed by different products cannot be resolved
    // automatically; mark every candidate.
    for i in 0..components.len() {
        let clash = components.iter().enumerate().any(|(j, other)| {
            j != i
                && other.evidence == components[i].evidence
                && other.product != components[i].product
        });
        if clash {
            components[i].ambiguous = true;
        }
    }

    (components, diags)
}
