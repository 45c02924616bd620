//! Unified finding and report model consumed by the CI gate and renderers.

use crate::cve::VulnMatch;
use crate::inspector::{SecretKind, WeakCategory};
use crate::triage::SeverityClass;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Severity {
    Info,
    Low,
    Medium,
    High,
    Critical,
}

impl Severity {
    pub fn rank(&self) -> u8 {
        match self {
            Severity::Critical => 4,
            Severity::High => 3,
            Severity::Medium => 2,
            Severity::Low => 1,
            Severity::Info => 0,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Severity::Critical => "CRITICAL",
            Severity::High => "HIGH",
            Severity::Medium => "MEDIUM",
            Severity::Low => "LOW",
            Severity::Info => "INFO",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "critical" => Some(Severity::Critical),
            "high" => Some(Severity::High),
            "medium" => Some(Severity::Medium),
            "low" => Some(Severity::Low),
            "info" => Some(Severity::Info),
            _ => None,
        }
    }
}

/// CVSS-to-severity mapping: >= 9 critical, >= 7 high, >= 4 medium,
/// > 0 low, 0 info.
pub fn severity_from_cvss(cvss: f64) -> Severity {
    if cvss >= 9.0 {
        Severity::Critical
    } else if cvss >= 7.0 {
        Severity::High
    } else if cvss >= 4.0 {
        Severity::Medium
    } else if cvss > 0.0 {
        Severity::Low
    } else {
        Severity::Info
    }
}

/// Triage-class mapping: exploitable crashes gate a release.
pub fn severity_from_triage(class: SeverityClass) -> Severity {
    match class {
        SeverityClass::Exploitable => Severity::Critical,
        SeverityClass::ProbablyExploitable => Severity::High,
        SeverityClass::NotExploitable => Severity::Medium,
        SeverityClass::Unknown => Severity::Medium,
    }
}

pub fn severity_from_weak_category(category: WeakCategory) -> Severity {
    match category {
        WeakCategory::Forbidden => Severity::High,
        WeakCategory::Dangerous => Severity::Medium,
        WeakCategory::CautionRequired => Severity::Low,
    }
}

pub fn severity_from_secret_kind(kind: SecretKind) -> Severity {
    match kind {
        SecretKind::EmptyPassword => Severity::Critical,
        SecretKind::DefaultCredential => Severity::High,
        SecretKind::PrivateKeyMaterial => Severity::High,
        SecretKind::HighEntropyToken => Severity::Medium,
        SecretKind::WorldWritableFile => Severity::Medium,
        SecretKind::SetuidExecutable => Severity::Low,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FindingCategory {
    KnownVuln,
    WeakFunction,
    Secret,
    Permission,
    Crash,
    SymFinding,
    ExtractionIssue,
}

impl FindingCategory {
    pub fn label(&self) -> &'static str {
        match self {
            FindingCategory::KnownVuln => "known-vuln",
            FindingCategory::WeakFunction => "weak-function",
            FindingCategory::Secret => "secret",
            FindingCategory::Permission => "permission",
            FindingCategory::Crash => "crash",
            FindingCategory::SymFinding => "sym-finding",
            FindingCategory::ExtractionIssue => "extraction-issue",
        }
    }

    fn remediation(&self) -> &'static str {
        match self {
            FindingCategory::KnownVuln => {
                "update the affected component, or isolate the device in its own network segment until a fixed build ships"
            }
            FindingCategory::WeakFunction => {
                "replace the function with a bounded alternative and audit every call site for overflow"
            }
            FindingCategory::Secret => {
                "remove embedded credentials and key material from the image and rotate anything already shipped"
            }
            FindingCategory::Permission => "tighten file modes before building the production image",
            FindingCategory::Crash => {
                "reproduce with the stored artifact, fix the defect, and keep the input as a regression test"
            }
            FindingCategory::SymFinding => {
                "never derive control flow from unvalidated input; bound and check every computed jump"
            }
            FindingCategory::ExtractionIssue => "verify the firmware image is complete and uncorrupted",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Finding {
    /// Stable hash of (category, file, locator, detail).
    pub id: String,
    pub category: FindingCategory,
    pub severity: Severity,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub locator: Option<String>,
    pub detail: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evidence: Option<String>,
    pub remediation: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub advisory_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cvss: Option<f64>,
}

impl Finding {
    pub fn new(
        category: FindingCategory,
        severity: Severity,
        file: Option<String>,
        locator: Option<String>,
        detail: String,
    ) -> Self {
        let id = finding_id(category, file.as_deref(), locator.as_deref(), &detail);
        Self {
            id,
            category,
            severity,
            file,
            locator,
            detail,
            evidence: None,
            remediation: category.remediation().to_string(),
            advisory_id: None,
            cvss: None,
        }
    }

    pub fn with_evidence(mut self, evidence: String) -> Self {
        self.evidence = Some(evidence);
        self
    }

    pub fn from_vuln_match(m: &VulnMatch) -> Self {
        let detail = format!(
            "{} {} matches {} range {}: {}",
            m.component.product,
            m.component.version,
            m.advisory_id,
            m.range.describe(),
            truncate(&m.summary, 120),
        );
        let mut finding = Finding::new(
            FindingCategory::KnownVuln,
            severity_from_cvss(m.cvss),
            Some(m.component.file.clone()),
            None,
            detail,
        )
        .with_evidence(m.component.evidence.clone());
        finding.advisory_id = Some(m.advisory_id.clone());
        finding.cvss = Some(m.cvss);
        finding
    }
}

fn truncate(s: &str, max: usize) -> String {
    if s.chars().count() <= max {
        s.to_string()
    } else {
        let cut: String = s.chars().take(max).collect();
        format!("{cut}…")
    }
}

fn finding_id(
    category: FindingCategory,
    file: Option<&str>,
    locator: Option<&str>,
    detail: &str,
) -> String {
    let mut hasher = Sha256::new();
    hasher.update(category.label());
    hasher.update([0]);
    hasher.update(file.unwrap_or(""));
    hasher.update([0]);
    hasher.update(locator.unwrap_or(""));
    hasher.update([0]);
    hasher.update(detail);
    let digest = hasher.finalize();
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "state", rename_all = "snake_case")]
pub enum StageStatus {
    Ran,
    Skipped { reason: String },
    Failed { error: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageSummary {
    pub name: String,
    #[serde(flatten)]
    pub status: StageStatus,
    pub findings: usize,
    /// Wall-clock duration; omitted in deterministic runs so reports stay
    /// byte-reproducible.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duration_ms: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputDescriptor {
    pub path: String,
    pub sha256: String,
}

/// Completeness flags: how much of the search space was actually covered.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Exhaustiveness {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symex_exhaustive: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fuzz_executions: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fuzz_max_executions: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fuzz_corpus_size: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool_version: String,
    pub input: InputDescriptor,
    pub stages: Vec<StageSummary>,
    pub findings: Vec<Finding>,
    pub exhaustiveness: Exhaustiveness,
}

impl Report {
    /// Canonical finding order: severity rank descending, then category,
    /// then id.
    pub fn sort_findings(&mut self) {
        self.findings.sort_by(|a, b| {
            b.severity
                .rank()
                .cmp(&a.severity.rank())
                .then_with(|| a.category.cmp(&b.category))
                .then_with(|| a.id.cmp(&b.id))
        });
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self, RenderError> {
        serde_json::from_slice(bytes).map_err(|e| RenderError::Parse(e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Text,
}

#[derive(Debug, Error)]
pub enum RenderError {
    #[error("cannot parse report: {0}")]
    Parse(String),
}

/// Render a report; both formats are deterministic functions of the report.
pub fn render_report(report: &Report, format: ReportFormat) -> Vec<u8> {
    match format {
        ReportFormat::Json => {
            let mut out = serde_json::to_vec_pretty(report).expect("report serializes");
            out.push(b'\n');
            out
        }
        ReportFormat::Text => {
            let mut out = String::new();
            out.push_str(&format!(
                "# firmware security report (tool v{})\n",
                report.tool_version
            ));
            out.push_str(&format!(
                "input: {} sha256={}\n",
                report.input.path, report.input.sha256
            ));
            for stage in &report.stages {
                let status = match &stage.status {
                    StageStatus::Ran => "ran".to_string(),
                    StageStatus::Skipped { reason } => format!("skipped ({reason})"),
                    StageStatus::Failed { error } => format!("failed ({error})"),
                };
                out.push_str(&format!(
                    "stage {:<12} {:<30} findings={}\n",
                    stage.name, status, stage.findings
                ));
            }
            if let Some(ex) = report.exhaustiveness.symex_exhaustive {
                out.push_str(&format!("symex exhaustive: {ex}\n"));
            }
            if let Some(execs) = report.exhaustiveness.fuzz_executions {
                out.push_str(&format!(
                    "fuzz budget spent: {execs}/{} execs, corpus {}\n",
                    report.exhaustiveness.fuzz_max_executions.unwrap_or(0),
                    report.exhaustiveness.fuzz_corpus_size.unwrap_or(0),
                ));
            }
            out.push_str(&format!("findings: {}\n", report.findings.len()));
            for f in &report.findings {
                let location = match (&f.file, &f.locator) {
                    (Some(file), Some(loc)) => format!("{file}:{loc}"),
                    (Some(file), None) => file.clone(),
                    _ => "-".to_string(),
                };
                out.push_str(&format!(
                    "{} {} {} {}\n",
                    f.severity.label(),
                    f.category.label(),
                    location,
                    f.detail
                ));
            }
            out.into_bytes()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_report() -> Report {
        let mut report = Report {
            tool_version: "0.1.0".to_string(),
            input: InputDescriptor {
                path: "fw.bin".into(),
                sha256: "ab".repeat(32),
            },
            stages: vec![
                StageSummary {
                    name: "extract".into(),
                    status: StageStatus::Ran,
                    findings: 0,
                    duration_ms: None,
                },
                StageSummary {
                    name: "cve-match".into(),
                    status: StageStatus::Skipped {
                        reason: "no feed configured".into(),
                    },
                    findings: 0,
                    duration_ms: None,
                },
            ],
            findings: vec![
                Finding::new(
                    FindingCategory::Secret,
                    Severity::High,
                    Some("etc/shadow".into()),
                    Some("line 1".into()),
                    "empty password for root".into(),
                ),
                Finding::new(
                    FindingCategory::Crash,
                    Severity::Critical,
                    Some("prog.asm".into()),
                    Some("insn 16".into()),
                    "write violation".into(),
                ),
            ],
            exhaustiveness: Exhaustiveness {
                symex_exhaustive: Some(true),
                ..Default::default()
            },
        };
        report.sort_findings();
        report
    }

    #[test]
    fn severity_mappings_match_documented_table() {
        assert_eq!(severity_from_cvss(9.8), Severity::Critical);
        assert_eq!(severity_from_cvss(9.0), Severity::Critical);
        assert_eq!(severity_from_cvss(7.5), Severity::High);
        assert_eq!(severity_from_cvss(5.0), Severity::Medium);
        assert_eq!(severity_from_cvss(1.2), Severity::Low);
        assert_eq!(severity_from_cvss(0.0), Severity::Info);

        assert_eq!(
            severity_from_triage(SeverityClass::Exploitable),
            Severity::Critical
        );
        assert_eq!(
            severity_from_triage(SeverityClass::ProbablyExploitable),
            Severity::High
        );
        assert_eq!(
            severity_from_triage(SeverityClass::NotExploitable),
            Severity::Medium
        );
        assert_eq!(
            severity_from_triage(SeverityClass::Unknown),
            Severity::Medium
        );
    }

    #[test]
    fn finding_ids_are_stable_and_distinct() {
        let a = Finding::new(
            FindingCategory::Secret,
            Severity::High,
            Some("f".into()),
            None,
            "x".into(),
        );
        let b = Finding::new(
            FindingCategory::Secret,
            Severity::High,
            Some("f".into()),
            None,
            "x".into(),
        );
        let c = Finding::new(
            FindingCategory::Secret,
            Severity::High,
            Some("f".into()),
            None,
            "y".into(),
        );
        assert_eq!(a.id, b.id);
        assert_ne!(a.id, c.id);
        assert_eq!(a.id.len(), 16);
    }

    #[test]
    fn findings_sort_severity_desc_then_category_then_id() {
        let report = sample_report();
        assert_eq!(report.findings[0].severity, Severity::Critical);
        assert_eq!(report.findings[1].severity, Severity::High);
    }

    #[test]
    fn json_render_is_deterministic_and_round_trips() {
        let report = sample_report();
        let one = render_report(&report, ReportFormat::Json);
        let two = render_report(&report, ReportFormat::Json);
        assert_eq!(one, two);

        let parsed = Report::from_json(&one).unwrap();
        assert_eq!(parsed, report);
        let re_rendered = render_report(&parsed, ReportFormat::Json);
        assert_eq!(
            re_rendered, one,
            "render -> parse -> render must be byte-identical"
        );
    }

    #[test]
    fn empty_report_renders_empty_findings_array() {
        let report = Report {
            tool_version: "0.1.0".into(),
            input: InputDescriptor {
                path: "x".into(),
                sha256: "0".repeat(64),
            },
            stages: vec![],
            findings: vec![],
            exhaustiveness: Exhaustiveness::default(),
        };
        let json = String::from_utf8(render_report(&report, ReportFormat::Json)).unwrap();
        assert!(json.contains("\"findings\": []"));
    }

    #[test]
    fn text_render_has_one_line_per_finding() {
        let report = sample_report();
        let text = String::from_utf8(render_report(&report, ReportFormat::Text)).unwrap();
        assert!(text.contains("CRITICAL crash prog.asm:insn 16 write violation"));
        assert!(text.contains("HIGH secret etc/shadow:line 1 empty password for root"));
    }
}
