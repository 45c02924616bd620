//! Static analysis of extracted files: weak libc imports, hardcoded
//! credentials, private keys, high-entropy secrets and dangerous
//! permissions.

pub mod elf;
pub mod secrets;
pub mod strings;
pub mod weak;

// Shared with the integration suites, which compile the same file as a
// plain module under tests/common/.
#[cfg(test)]
#[path = "../../tests/common/elf_fixture.rs"]
pub(crate) mod elf_fixture;

pub use elf::{parse_executable, ElfError, ExecutableInfo};
pub use secrets::{
    redact, scan_permissions, scan_secrets, shannon_entropy, Locator, SecretFinding, SecretKind,
    SecretsConfig,
};
pub use strings::{extract_strings, FoundString};
pub use weak::{scan_weak_functions, WeakCategory, WeakFunctionFinding, WeakFunctionTable};

use crate::carver::FileTree;

/// Everything the inspector found in one tree, plus what it had to skip.
#[derive(Debug, Default)]
pub struct InspectionReport {
    pub weak_functions: Vec<WeakFunctionFinding>,
    pub secrets: Vec<SecretFinding>,
    pub permissions: Vec<SecretFinding>,
    /// Real ELF files of a class this build does not parse (path, variant).
    pub unsupported_executables: Vec<(String, String)>,
    /// Malformed ELF files (path, error).
    pub malformed_executables: Vec<(String, String)>,
}

/// Run the full inspector battery over one tree.
pub fn inspect_tree(
    tree: &FileTree,
    table: &WeakFunctionTable,
    config: &SecretsConfig,
) -> InspectionReport {
    let mut report = InspectionReport {
        secrets: scan_secrets(tree, config),
        permissions: scan_permissions(tree),
        ..Default::default()
    };
    for entry in tree.regular_files() {
        match parse_executable(&entry.bytes) {
            Ok(info) => {
                report
                    .weak_functions
                    .extend(scan_weak_functions(&info, &entry.path, table));
            }
            Err(ElfError::NotAnExecutable) => {}
            Err(ElfError::UnsupportedVariant(v)) => {
                report.unsupported_executables.push((entry.path.clone(), v));
            }
            Err(ElfError::MalformedHeader(m)) => {
                report.malformed_executables.push((entry.path.clone(), m));
            }
        }
    }
    report
        .weak_functions
        .sort_by(|a, b| (&a.file, &a.symbol).cmp(&(&b.file, &b.symbol)));
    report
}
