//! Version parsing and total-order comparison for advisory range matching.

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Dotted numeric version with an optional ASCII suffix.
///
/// The suffix slot holds both prerelease tags (`2.0.0-rc1`) and attached
/// letters (`1.0.2k`); which way a suffix *compares* against the bare
/// version is decided by [`SuffixRule`] at comparison time, because OpenSSL
/// letters are patch increments while `-rc1` is a prerelease.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Version {
    pub components: Vec<u64>,
    pub suffix: Option<String>,
}

/// How a suffixed version relates to the bare version with equal numerics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum SuffixRule {
    /// `2.0.0-rc1 < 2.0.0` (the default).
    #[default]
    Prerelease,
    /// `1.0.2k > 1.0.2` (OpenSSL-style patch letters).
    Additive,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VersionParseError {
    #[error("empty version string")]
    Empty,
    #[error("version component {0:?} is not a non-negative integer")]
    BadComponent(String),
    #[error("version suffix {0:?} contains unsupported characters")]
    BadSuffix(String),
}

impl Version {
    pub fn new(components: Vec<u64>) -> Self {
        Self {
            components,
            suffix: None,
        }
    }

    pub fn parse(raw: &str) -> Result<Self, VersionParseError> {
        let s = raw.trim();
        // A single leading `v` is tolerated ("v2.1").
        let s = s.strip_prefix('v').unwrap_or(s);
        if s.is_empty() {
            return Err(VersionParseError::Empty);
        }

        let (numeric, mut suffix) = match s.split_once('-') {
            Some((n, suf)) => (n, Some(suf.to_string())),
            None => (s, None),
        };

        let mut parts: Vec<&str> = numeric.split('.').collect();
        // Attached trailing letters on the last component ("1.0.2k").
        let last = parts.pop().ok_or(VersionParseError::Empty)?;
        let digit_end = last.bytes().take_while(|b| b.is_ascii_digit()).count();
        let (last_digits, attached) = last.split_at(digit_end);
        if !attached.is_empty() {
            if let Some(existing) = &suffix {
                return Err(VersionParseError::BadSuffix(format!(
                    "{attached}-{existing}"
                )));
            }
            if !attached.bytes().all(|b| b.is_ascii_alphabetic()) {
                return Err(VersionParseError::BadComponent(last.to_string()));
            }
            suffix = Some(attached.to_string());
        }
        parts.push(last_digits);

        let mut components = Vec::with_capacity(parts.len());
        for p in parts {
            if p.is_empty() || !p.bytes().all(|b| b.is_ascii_digit()) {
                return Err(VersionParseError::BadComponent(p.to_string()));
            }
            components.push(
                p.parse::<u64>()
                    .map_err(|_| VersionParseError::BadComponent(p.to_string()))?,
            );
        }
        if components.is_empty() {
            return Err(VersionParseError::Empty);
        }

        if let Some(suf) = &suffix {
            if suf.is_empty()
                || !suf
                    .bytes()
                    .all(|b| b.is_ascii_alphanumeric() || b == b'.' || b == b'_')
            {
                return Err(VersionParseError::BadSuffix(suf.clone()));
            }
        }

        Ok(Self { components, suffix })
    }
}

impl FromStr for Version {
    type Err = VersionParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Version::parse(s)
    }
}

impl fmt::Display for Version {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nums: Vec<String> = self.components.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", nums.join("."))?;
        if let Some(s) = &self.suffix {
            write!(f, "-{s}")?;
        }
        Ok(())
    }
}

/// Component-wise numeric comparison with zero padding; ties broken by the
/// default prerelease suffix rule.
pub fn compare_versions(a: &Version, b: &Version) -> Ordering {
    compare_versions_with(a, b, SuffixRule::Prerelease)
}

pub fn compare_versions_with(a: &Version, b: &Version, rule: SuffixRule) -> Ordering {
    let width = a.components.len().max(b.components.len());
    for i in 0..width {
        let x = a.components.get(i).copied().unwrap_or(0);
        let y = b.components.get(i).copied().unwrap_or(0);
        match x.cmp(&y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    match (&a.suffix, &b.suffix) {
        (None, None) => Ordering::Equal,
        (Some(x), Some(y)) => x.cmp(y),
        (Some(_), None) => match rule {
            SuffixRule::Prerelease => Ordering::Less,
            SuffixRule::Additive => Ordering::Greater,
        },
        (None, Some(_)) => match rule {
            SuffixRule::Prerelease => Ordering::Greater,
            SuffixRule::Additive => Ordering::Less,
        },
    }
}
