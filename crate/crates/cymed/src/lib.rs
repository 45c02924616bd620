//! Firmware security analysis toolkit.
//!
//! The pipeline has two entry points: a raw firmware blob (which is first
//! carved into file trees) or an already-extracted tree. Either way the
//! contents are checked for known vulnerabilities (CVE feed matching plus
//! configuration, credential, permission and weak-function audits), and an
//! optional instrumented VM target is hunted for unknown bugs with
//! coverage-guided fuzzing and bounded symbolic execution. Crashes are
//! triaged by exploitability and everything lands in one report that a CI
//! gate can veto on.
//!
//! Modules, in pipeline order:
//!
//! * [`carver`] — magic-byte signature scanning and container extraction
//! * [`inspector`] — weak libc imports, hardcoded secrets, permission audits
//! * [`cve`] — advisory feed client, component detection, version matching
//! * [`minivm`] — the deterministic toy register VM used as a fuzz/symex target
//! * [`fuzzer`] — coverage-guided mutational fuzzing over pluggable targets
//! * [`symex`] — bounded symbolic execution of VM programs
//! * [`triage`] — crash deduplication and exploitability ranking
//! * [`report`] / [`pipeline`] — finding aggregation, rendering, CI gate

// Canonical VM fixtures, shared with the integration suites (which compile
// the same file as a plain module under tests/common/).
#[cfg(test)]
#[path = "../tests/common/vm_fixtures.rs"]
pub(crate) mod vm_fixtures;

pub mod carver;
pub mod crash;
pub mod cve;
pub mod fuzzer;
pub mod inspector;
pub mod minivm;
pub mod pipeline;
pub mod report;
pub mod symex;
pub mod triage;

pub use carver::{CarvedRegion, ContainerFormat, FileTree, SignatureHit};
pub use crash::CrashKind;
pub use pipeline::{gate, run_pipeline, GatePolicy, PipelineConfig, PipelineEntry};
pub use report::{render_report, Finding, FindingCategory, Report, ReportFormat, Severity};
