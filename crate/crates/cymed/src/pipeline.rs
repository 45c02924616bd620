//! End-to-end pipeline: extract, search for known and unknown
//! vulnerabilities, triage, report, gate.
//!
//! Two start points: a raw firmware blob (carved first) or an extracted
//! tree (the vendor/source-available case). A VM program entry point drives
//! the unknown-vulnerability stages instead. Stage failures degrade into
//! findings — later stages still run on whatever is available — and every
//! skipped stage is visible in the report.

use crate::carver::{self, ExtractLimits, FileTree};
use crate::cve::{self, FeedSource, FetchConfig, RuleSet};
use crate::fuzzer::{self, CampaignConfig, VmTarget};
use crate::inspector::{self, SecretsConfig, WeakFunctionTable};
use crate::minivm;
use crate::report::{
    render_report, severity_from_secret_kind, severity_from_triage, severity_from_weak_category,
    Exhaustiveness, Finding, FindingCategory, InputDescriptor, Report, ReportFormat, Severity,
    StageStatus, StageSummary,
};
use crate::symex::{self, SymFindingKind, SymLimits};
use crate::triage;
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};
use thiserror::Error;

pub use crate::report::ReportFormat as OutputFormat;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PipelineEntry {
    /// Raw firmware image: carve first.
    FirmwareBlob(PathBuf),
    /// Already-extracted root directory: skip carving.
    ExtractedTree(PathBuf),
    /// VM assembly program: fuzz and symbolically execute it.
    VmProgram(PathBuf),
}

/// What fails the gate and which stages run at all.
#[derive(Debug, Clone)]
pub struct GatePolicy {
    /// Minimum severity that fails the gate.
    pub fail_at: Severity,
    pub run_cve: bool,
    pub run_inspect: bool,
    pub run_fuzz: bool,
    pub run_symex: bool,
    /// Wall-clock budget for the fuzzing stage.
    pub fuzz_time_budget: Option<Duration>,
}

impl Default for GatePolicy {
    fn default() -> Self {
        Self {
            fail_at: Severity::High,
            run_cve: true,
            run_inspect: true,
            run_fuzz: true,
            run_symex: true,
            fuzz_time_budget: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub entry: PipelineEntry,
    /// URL or path of the advisory feed; `None` skips CVE matching.
    pub feed_source: Option<String>,
    /// Detector rules file; `None` uses the built-in rules.
    pub rules_path: Option<PathBuf>,
    /// Weak-function table file; `None` uses the built-in table.
    pub weak_table_path: Option<PathBuf>,
    pub offline: bool,
    pub cache_dir: PathBuf,
    pub policy: GatePolicy,
    pub fuzz_max_execs: u64,
    pub stop_on_crash: bool,
    pub rng_seed: u64,
    /// Exclude wall-clock durations from the report so repeated seeded runs
    /// are byte-identical.
    pub deterministic: bool,
    /// Black-box subprocess fuzz target: command template with `@@`
    /// replaced by the input file path. Drives the fuzz stage for non-VM
    /// entry points.
    pub subprocess_cmd: Option<Vec<String>>,
    pub artifacts_dir: Option<PathBuf>,
    pub extract_limits: ExtractLimits,
    pub secrets_config: SecretsConfig,
    pub symex_limits: SymLimits,
    pub vm_step_limit: u64,
}

impl PipelineConfig {
    pub fn new(entry: PipelineEntry) -> Self {
        Self {
            entry,
            feed_source: None,
            rules_path: None,
            weak_table_path: None,
            offline: false,
            cache_dir: default_cache_dir(),
            policy: GatePolicy::default(),
            fuzz_max_execs: 1_000_000,
            stop_on_crash: false,
            rng_seed: 0,
            deterministic: false,
            subprocess_cmd: None,
            artifacts_dir: None,
            extract_limits: ExtractLimits::default(),
            secrets_config: SecretsConfig::default(),
            symex_limits: SymLimits::default(),
            vm_step_limit: 100_000,
        }
    }
}

pub fn default_cache_dir() -> PathBuf {
    if let Ok(dir) = std::env::var("CYMED_CACHE_DIR") {
        return PathBuf::from(dir);
    }
    std::env::temp_dir().join("cymed-cache")
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("cannot read input {path}: {reason}")]
    InputUnreadable { path: String, reason: String },
}

/// One extracted tree with its provenance label.
struct LabeledTree {
    label: String,
    tree: FileTree,
}

struct StageClock {
    deterministic: bool,
}

impl StageClock {
    fn measure<T>(&self, f: impl FnOnce() -> T) -> (T, Option<u64>) {
        let started = Instant::now();
        let value = f();
        let duration = if self.deterministic {
            None
        } else {
            Some(started.elapsed().as_millis() as u64)
        };
        (value, duration)
    }
}

/// Run the whole pipeline and assemble the report.
pub fn run_pipeline(config: &PipelineConfig) -> Result<Report, PipelineError> {
    let clock = StageClock {
        deterministic: config.deterministic,
    };
    let mut stages: Vec<StageSummary> = Vec::new();
    let mut findings: Vec<Finding> = Vec::new();
    let mut exhaustiveness = Exhaustiveness::default();

    let input = describe_input(&config.entry)?;

    // Stage 1: extraction.
    let mut trees: Vec<LabeledTree> = Vec::new();
    match &config.entry {
        PipelineEntry::FirmwareBlob(path) => {
            let blob = std::fs::read(path).map_err(|e| PipelineError::InputUnreadable {
                path: path.display().to_string(),
                reason: e.to_string(),
            })?;
            let ((extraction, stage_findings), duration) = clock.measure(|| {
                let extraction = carver::extract_firmware(&blob, &config.extract_limits);
                let stage_findings = extraction_findings(&extraction);
                (extraction, stage_findings)
            });
            for t in extraction.trees {
                trees.push(LabeledTree {
                    label: t.source,
                    tree: t.tree,
                });
            }
            stages.push(StageSummary {
                name: "extract".into(),
                status: StageStatus::Ran,
                findings: stage_findings.len(),
                duration_ms: duration,
            });
            findings.extend(stage_findings);
        }
        PipelineEntry::ExtractedTree(dir) => {
            let (tree, duration) = clock.measure(|| read_tree_from_dir(dir));
            let tree = tree?;
            trees.push(LabeledTree {
                label: String::new(),
                tree,
            });
            stages.push(StageSummary {
                name: "extract".into(),
                status: StageStatus::Skipped {
                    reason: "entry point is an already-extracted tree".into(),
                },
                findings: 0,
                duration_ms: duration,
            });
        }
        PipelineEntry::VmProgram(_) => {
            stages.push(StageSummary {
                name: "extract".into(),
                status: StageStatus::Skipped {
                    reason: "entry point is a VM program".into(),
                },
                findings: 0,
                duration_ms: None,
            });
        }
    }

    // Stage 2a: known vulnerabilities via the advisory feed.
    let cve_stage = run_cve_stage(config, &trees, &clock);
    stages.push(cve_stage.0);
    findings.extend(cve_stage.1);

    // Stage 2b: configuration, credential, permission and weak-function
    // audits.
    let inspect_stage = run_inspect_stage(config, &trees, &clock);
    stages.push(inspect_stage.0);
    findings.extend(inspect_stage.1);

    // Stage 3: unknown-vulnerability search on the VM target.
    let mut crash_records = Vec::new();
    match &config.entry {
        PipelineEntry::VmProgram(path) => {
            let program_text =
                std::fs::read_to_string(path).map_err(|e| PipelineError::InputUnreadable {
                    path: path.display().to_string(),
                    reason: e.to_string(),
                })?;
            let program =
                minivm::assemble(&program_text).map_err(|e| PipelineError::InputUnreadable {
                    path: path.display().to_string(),
                    reason: e.to_string(),
                })?;
            let program_label = path.display().to_string();

            if config.policy.run_fuzz {
                let (outcome, duration) = clock.measure(|| {
                    let mut target = VmTarget::new(program.clone(), config.vm_step_limit);
                    let campaign = CampaignConfig {
                        max_execs: config.fuzz_max_execs,
                        time_budget: config.policy.fuzz_time_budget,
                        rng_seed: config.rng_seed,
                        stop_on_crash: config.stop_on_crash,
                        artifacts_dir: config.artifacts_dir.clone(),
                        ..Default::default()
                    };
                    fuzzer::run_campaign(&mut target, &[Vec::new()], &campaign)
                });
                match outcome {
                    Ok(result) => {
                        exhaustiveness.fuzz_executions = Some(result.stats.execs);
                        exhaustiveness.fuzz_max_executions = Some(config.fuzz_max_execs);
                        exhaustiveness.fuzz_corpus_size = Some(result.stats.corpus_size);
                        crash_records = result.crashes;
                        stages.push(StageSummary {
                            name: "fuzz".into(),
                            status: StageStatus::Ran,
                            findings: 0,
                            duration_ms: duration,
                        });
                    }
                    Err(e) => {
                        stages.push(StageSummary {
                            name: "fuzz".into(),
                            status: StageStatus::Failed {
                                error: e.to_string(),
                            },
                            findings: 0,
                            duration_ms: duration,
                        });
                    }
                }
            } else {
                stages.push(skipped("fuzz", "disabled by policy"));
            }

            if config.policy.run_symex {
                let (result, duration) =
                    clock.measure(|| symex::sym_execute(&program, &config.symex_limits));
                exhaustiveness.symex_exhaustive = Some(result.exhaustive);
                let sym_findings = symex_findings(&result, &program_label);
                stages.push(StageSummary {
                    name: "symex".into(),
                    status: StageStatus::Ran,
                    findings: sym_findings.len(),
                    duration_ms: duration,
                });
                findings.extend(sym_findings);
            } else {
                stages.push(skipped("symex", "disabled by policy"));
            }

            // Stage 4: triage the fuzzer's crashes.
            let (crash_findings, duration) = clock.measure(|| {
                let groups = triage::triage_crashes(&crash_records);
                crash_findings_from_groups(&groups, &program_label)
            });
            stages.push(StageSummary {
                name: "triage".into(),
                status: StageStatus::Ran,
                findings: crash_findings.len(),
                duration_ms: duration,
            });
            findings.extend(crash_findings);
        }
        _ => match &config.subprocess_cmd {
            Some(argv) => {
                // Black-box mode: crash detection via abnormal termination,
                // no coverage, documented as strictly weaker.
                let scratch =
                    std::env::temp_dir().join(format!("cymed-fuzz-{}", std::process::id()));
                let (outcome, duration) = clock.measure(|| {
                    let campaign = CampaignConfig {
                        max_execs: config.fuzz_max_execs,
                        time_budget: config.policy.fuzz_time_budget,
                        rng_seed: config.rng_seed,
                        stop_on_crash: config.stop_on_crash,
                        artifacts_dir: config.artifacts_dir.clone(),
                        ..Default::default()
                    };
                    let mut target = fuzzer::SubprocessTarget::new(
                        argv.clone(),
                        Duration::from_secs(1),
                        scratch.clone(),
                    )?;
                    fuzzer::run_campaign(&mut target, &[Vec::new()], &campaign)
                });
                std::fs::remove_dir_all(&scratch).ok();
                let label = argv.join(" ");
                match outcome {
                    Ok(result) => {
                        exhaustiveness.fuzz_executions = Some(result.stats.execs);
                        exhaustiveness.fuzz_max_executions = Some(config.fuzz_max_execs);
                        exhaustiveness.fuzz_corpus_size = Some(result.stats.corpus_size);
                        crash_records = result.crashes;
                        stages.push(StageSummary {
                            name: "fuzz".into(),
                            status: StageStatus::Ran,
                            findings: 0,
                            duration_ms: duration,
                        });
                    }
                    Err(e) => stages.push(StageSummary {
                        name: "fuzz".into(),
                        status: StageStatus::Failed {
                            error: e.to_string(),
                        },
                        findings: 0,
                        duration_ms: duration,
                    }),
                }
                stages.push(skipped("symex", "not applicable to subprocess targets"));

                let (crash_findings, duration) = clock.measure(|| {
                    let groups = triage::triage_crashes(&crash_records);
                    crash_findings_from_groups(&groups, &label)
                });
                stages.push(StageSummary {
                    name: "triage".into(),
                    status: StageStatus::Ran,
                    findings: crash_findings.len(),
                    duration_ms: duration,
                });
                findings.extend(crash_findings);
            }
            None => {
                stages.push(skipped(
                    "fuzz",
                    "no VM program or subprocess target configured",
                ));
                stages.push(skipped("symex", "no VM program configured"));
                stages.push(skipped("triage", "no crashes to triage"));
            }
        },
    }

    let mut report = Report {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        input,
        stages,
        findings,
        exhaustiveness,
    };
    report.sort_findings();
    Ok(report)
}

fn skipped(name: &str, reason: &str) -> StageSummary {
    StageSummary {
        name: name.into(),
        status: StageStatus::Skipped {
            reason: reason.into(),
        },
        findings: 0,
        duration_ms: None,
    }
}

fn describe_input(entry: &PipelineEntry) -> Result<InputDescriptor, PipelineError> {
    let (path, bytes): (&Path, Vec<u8>) = match entry {
        PipelineEntry::FirmwareBlob(p) | PipelineEntry::VmProgram(p) => {
            let bytes = std::fs::read(p).map_err(|e| PipelineError::InputUnreadable {
                path: p.display().to_string(),
                reason: e.to_string(),
            })?;
            (p, bytes)
        }
        PipelineEntry::ExtractedTree(p) => {
            if !p.is_dir() {
                return Err(PipelineError::InputUnreadable {
                    path: p.display().to_string(),
                    reason: "not a directory".into(),
                });
            }
            // Hash the sorted relative path list; file contents are hashed
            // implicitly by the scans that read them.
            let tree = read_tree_from_dir(p)?;
            let mut listing = Vec::new();
            for e in tree.sorted_entries() {
                listing.extend_from_slice(e.path.as_bytes());
                listing.push(0);
                listing.extend_from_slice(&(e.bytes.len() as u64).to_le_bytes());
            }
            (p, listing)
        }
    };
    let digest = Sha256::digest(&bytes);
    Ok(InputDescriptor {
        path: path.display().to_string(),
        sha256: digest.iter().map(|b| format!("{b:02x}")).collect(),
    })
}

fn extraction_findings(extraction: &carver::FirmwareExtraction) -> Vec<Finding> {
    let mut findings = Vec::new();
    for hit in &extraction.detected_only {
        findings.push(Finding::new(
            FindingCategory::ExtractionIssue,
            Severity::Info,
            None,
            Some(format!("offset {:#x}", hit.offset)),
            format!(
                "{} detected but not unpacked (report-only format)",
                hit.format.label()
            ),
        ));
    }
    for diag in &extraction.dropped {
        findings.push(Finding::new(
            FindingCategory::ExtractionIssue,
            Severity::Info,
            None,
            Some(format!("offset {:#x}", diag.offset)),
            format!("{} container dropped: {}", diag.format.label(), diag.reason),
        ));
    }
    for (source, diag) in &extraction.entry_diags {
        findings.push(Finding::new(
            FindingCategory::ExtractionIssue,
            Severity::Low,
            Some(source.clone()),
            None,
            diag.describe(),
        ));
    }
    if extraction.trees.is_empty() && extraction.detected_only.is_empty() {
        findings.push(Finding::new(
            FindingCategory::ExtractionIssue,
            Severity::Info,
            None,
            None,
            "no known container signatures found in the image".into(),
        ));
    }
    findings
}

fn prefixed(label: &str, path: &str) -> String {
    if label.is_empty() {
        path.to_string()
    } else {
        format!("{label}!{path}")
    }
}

fn run_cve_stage(
    config: &PipelineConfig,
    trees: &[LabeledTree],
    clock: &StageClock,
) -> (StageSummary, Vec<Finding>) {
    if !config.policy.run_cve {
        return (skipped("cve-match", "disabled by policy"), Vec::new());
    }
    if trees.is_empty() {
        return (
            skipped("cve-match", "no extracted files to scan"),
            Vec::new(),
        );
    }
    let Some(source_raw) = &config.feed_source else {
        return (skipped("cve-match", "no feed configured"), Vec::new());
    };

    let source = FeedSource::parse(source_raw);
    let fetch_config = FetchConfig::new(&config.cache_dir).offline(config.offline);
    let document = match cve::fetch_feed(&source, &fetch_config) {
        Ok(doc) => doc,
        Err(e) => {
            // Feed unavailable: skip the stage visibly, pipeline continues.
            let finding = Finding::new(
                FindingCategory::ExtractionIssue,
                Severity::Info,
                None,
                None,
                format!("known-vulnerability search skipped: {e}"),
            );
            return (
                StageSummary {
                    name: "cve-match".into(),
                    status: StageStatus::Skipped {
                        reason: e.to_string(),
                    },
                    findings: 1,
                    duration_ms: None,
                },
                vec![finding],
            );
        }
    };

    let (findings, duration) = clock.measure(|| {
        let mut findings = Vec::new();

        let (feed, feed_diags) = match cve::load_feed(&document) {
            Ok(v) => v,
            Err(e) => {
                findings.push(Finding::new(
                    FindingCategory::ExtractionIssue,
                    Severity::Info,
                    None,
                    None,
                    format!("advisory feed unusable: {e}"),
                ));
                return findings;
            }
        };
        for diag in &feed_diags {
            findings.push(Finding::new(
                FindingCategory::ExtractionIssue,
                Severity::Info,
                None,
                None,
                format!("advisory {} rejected: {}", diag.advisory_id, diag.reason),
            ));
        }

        let rules = match &config.rules_path {
            Some(path) => match std::fs::read(path)
                .map_err(|e| e.to_string())
                .and_then(|bytes| RuleSet::from_json(&bytes).map_err(|e| e.to_string()))
            {
                Ok(r) => r,
                Err(e) => {
                    findings.push(Finding::new(
                        FindingCategory::ExtractionIssue,
                        Severity::Info,
                        None,
                        None,
                        format!("detector rules unusable, falling back to built-ins: {e}"),
                    ));
                    RuleSet::default_rules()
                }
            },
            None => RuleSet::default_rules(),
        };

        let mut components = Vec::new();
        for labeled in trees {
            for entry in labeled.tree.regular_files() {
                let strings = inspector::extract_strings(&entry.bytes, 6);
                let (mut found, _diags) = cve::detect_components(
                    &strings,
                    &prefixed(&labeled.label, &entry.path),
                    &rules,
                );
                components.append(&mut found);
            }
        }

        let matches = cve::match_vulnerabilities(&components, &feed);
        for m in &matches {
            findings.push(Finding::from_vuln_match(m));
        }
        findings
    });

    (
        StageSummary {
            name: "cve-match".into(),
            status: StageStatus::Ran,
            findings: findings.len(),
            duration_ms: duration,
        },
        findings,
    )
}

fn run_inspect_stage(
    config: &PipelineConfig,
    trees: &[LabeledTree],
    clock: &StageClock,
) -> (StageSummary, Vec<Finding>) {
    if !config.policy.run_inspect {
        return (skipped("inspect", "disabled by policy"), Vec::new());
    }
    if trees.is_empty() {
        return (skipped("inspect", "no extracted files to scan"), Vec::new());
    }

    let table = match &config.weak_table_path {
        Some(path) => match std::fs::read_to_string(path) {
            Ok(text) => WeakFunctionTable::from_config(&text).unwrap_or_default(),
            Err(_) => WeakFunctionTable::default(),
        },
        None => WeakFunctionTable::default(),
    };

    let (findings, duration) = clock.measure(|| {
        let mut findings = Vec::new();
        for labeled in trees {
            let report = inspector::inspect_tree(&labeled.tree, &table, &config.secrets_config);
            for weak in &report.weak_functions {
                findings.push(
                    Finding::new(
                        FindingCategory::WeakFunction,
                        severity_from_weak_category(weak.category),
                        Some(prefixed(&labeled.label, &weak.file)),
                        None,
                        format!("imports {} ({})", weak.symbol, weak.category.label()),
                    )
                    .with_evidence(weak.symbol.clone()),
                );
            }
            for secret in report.secrets.iter() {
                findings.push(
                    Finding::new(
                        FindingCategory::Secret,
                        severity_from_secret_kind(secret.kind),
                        Some(prefixed(&labeled.label, &secret.file)),
                        Some(secret.locator.to_string()),
                        format!("{} detected", secret.kind.label()),
                    )
                    .with_evidence(secret.evidence.clone()),
                );
            }
            for perm in report.permissions.iter() {
                findings.push(
                    Finding::new(
                        FindingCategory::Permission,
                        severity_from_secret_kind(perm.kind),
                        Some(prefixed(&labeled.label, &perm.file)),
                        None,
                        format!("{} detected", perm.kind.label()),
                    )
                    .with_evidence(perm.evidence.clone()),
                );
            }
            for (path, variant) in &report.unsupported_executables {
                findings.push(Finding::new(
                    FindingCategory::ExtractionIssue,
                    Severity::Info,
                    Some(prefixed(&labeled.label, path)),
                    None,
                    format!("executable skipped: {variant} is not parsed by this build"),
                ));
            }
            for (path, error) in &report.malformed_executables {
                findings.push(Finding::new(
                    FindingCategory::ExtractionIssue,
                    Severity::Low,
                    Some(prefixed(&labeled.label, path)),
                    None,
                    format!("malformed executable: {error}"),
                ));
            }
        }
        findings
    });

    (
        StageSummary {
            name: "inspect".into(),
            status: StageStatus::Ran,
            findings: findings.len(),
            duration_ms: duration,
        },
        findings,
    )
}

fn symex_findings(result: &symex::SymResult, program_label: &str) -> Vec<Finding> {
    let mut findings = Vec::new();
    for f in &result.findings {
        match f.kind {
            SymFindingKind::InputDependentIp => {
                findings.push(
                    Finding::new(
                        FindingCategory::SymFinding,
                        Severity::Critical,
                        Some(program_label.to_string()),
                        Some(format!("insn {}", f.at)),
                        format!(
                            "input-dependent instruction pointer at instruction {}",
                            f.at
                        ),
                    )
                    .with_evidence(format!("witness input: {}", hex_bytes(&f.witness))),
                );
            }
            SymFindingKind::ReachableCrash => {
                let kind = f.crash_kind.expect("crash findings carry a kind");
                findings.push(
                    Finding::new(
                        FindingCategory::SymFinding,
                        severity_from_triage(triage::severity_of(kind)),
                        Some(program_label.to_string()),
                        Some(format!("insn {}", f.at)),
                        format!(
                            "reachable crash ({}) proven at instruction {}",
                            kind.label(),
                            f.at
                        ),
                    )
                    .with_evidence(format!("witness input: {}", hex_bytes(&f.witness))),
                );
            }
        }
    }
    findings
}

fn crash_findings_from_groups(
    groups: &[triage::TriagedGroup],
    program_label: &str,
) -> Vec<Finding> {
    groups
        .iter()
        .map(|group| {
            let representative = group.representative();
            let evidence = match &representative.artifact {
                Some(path) => format!("artifact: {}", path.display()),
                None => format!("input: {}", hex_bytes(&representative.input)),
            };
            Finding::new(
                FindingCategory::Crash,
                severity_from_triage(group.severity),
                Some(program_label.to_string()),
                Some(format!("insn {}", group.location)),
                format!(
                    "{} ({}) at instruction {}, {} occurrence(s), first at execution {}",
                    group.kind.label(),
                    group.severity.label(),
                    group.location,
                    group.count,
                    representative.discovered_at_exec,
                ),
            )
            .with_evidence(evidence)
        })
        .collect()
}

fn hex_bytes(bytes: &[u8]) -> String {
    if bytes.is_empty() {
        return "(empty)".to_string();
    }
    let head: Vec<String> = bytes.iter().take(24).map(|b| format!("{b:02x}")).collect();
    let mut out = head.join(" ");
    if bytes.len() > 24 {
        out.push_str(&format!(" … ({} bytes)", bytes.len()));
    }
    out
}

/// Read an on-disk directory into an in-memory tree (the `--tree` entry
/// point). Deterministic: entries are sorted by relative path.
pub fn read_tree_from_dir(root: &Path) -> Result<FileTree, PipelineError> {
    let mut paths = Vec::new();
    collect_paths(root, root, &mut paths).map_err(|e| PipelineError::InputUnreadable {
        path: root.display().to_string(),
        reason: e.to_string(),
    })?;
    paths.sort();

    let mut tree = FileTree::new();
    for (rel, abs) in paths {
        let meta = std::fs::symlink_metadata(&abs).map_err(|e| PipelineError::InputUnreadable {
            path: abs.display().to_string(),
            reason: e.to_string(),
        })?;
        let mode = unix_mode(&meta);
        let result = if meta.file_type().is_symlink() {
            let target = std::fs::read_link(&abs)
                .map(|t| t.to_string_lossy().into_owned())
                .unwrap_or_default();
            tree.insert_symlink(&rel, mode, &target)
        } else if meta.is_dir() {
            tree.insert_directory(&rel, mode)
        } else {
            let bytes = std::fs::read(&abs).map_err(|e| PipelineError::InputUnreadable {
                path: abs.display().to_string(),
                reason: e.to_string(),
            })?;
            tree.insert_regular(&rel, mode, bytes)
        };
        result.map_err(|e| PipelineError::InputUnreadable {
            path: abs.display().to_string(),
            reason: e.to_string(),
        })?;
    }
    Ok(tree)
}

fn collect_paths(root: &Path, dir: &Path, out: &mut Vec<(String, PathBuf)>) -> std::io::Result<()> {
    for entry in std::fs::read_dir(dir)? {
        let entry = entry?;
        let path = entry.path();
        let rel = path
            .strip_prefix(root)
            .expect("walked paths live under the root")
            .to_string_lossy()
            .into_owned();
        let file_type = entry.file_type()?;
        out.push((rel, path.clone()));
        if file_type.is_dir() {
            collect_paths(root, &path, out)?;
        }
    }
    Ok(())
}

#[cfg(unix)]
fn unix_mode(meta: &std::fs::Metadata) -> u32 {
    use std::os::unix::fs::PermissionsExt;
    meta.permissions().mode() & 0o7777
}

#[cfg(not(unix))]
fn unix_mode(_meta: &std::fs::Metadata) -> u32 {
    0o644
}

/// CI gate: exit 0 when no finding reaches the policy threshold, exit 1
/// when one does. (Exit 2 is reserved for tool errors and produced by the
/// CLI when the pipeline itself fails.)
pub fn gate(report: &Report, policy: &GatePolicy) -> i32 {
    let failing = report
        .findings
        .iter()
        .any(|f| f.severity.rank() >= policy.fail_at.rank());
    if failing {
        1
    } else {
        0
    }
}

/// Render helper re-exported for the CLI.
pub fn render(report: &Report, format: ReportFormat) -> Vec<u8> {
    render_report(report, format)
}

// Shared with the integration suites, which compile the same files as
// plain modules under tests/common/.
#[cfg(test)]
#[path = "../tests/common/archives.rs"]
pub(crate) mod test_archives;
