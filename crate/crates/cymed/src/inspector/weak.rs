//! Weak libc function detection: flag binaries that import standard-library
//! functions which cannot be used safely or are routinely misused.

use super::elf::ExecutableInfo;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum WeakCategory {
    /// No safe usage exists (gets).
    Forbidden,
    /// Safe only under conditions callers regularly get wrong.
    Dangerous,
    /// Nominally safe replacements with known sharp edges.
    CautionRequired,
}

impl WeakCategory {
    pub fn label(&self) -> &'static str {
        match self {
            WeakCategory::Forbidden => "forbidden",
            WeakCategory::Dangerous => "dangerous",
            WeakCategory::CautionRequired => "caution-required",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "forbidden" => Some(WeakCategory::Forbidden),
            "dangerous" => Some(WeakCategory::Dangerous),
            "caution-required" | "caution_required" | "caution" => {
                Some(WeakCategory::CautionRequired)
            }
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeakFunctionFinding {
    pub symbol: String,
    pub category: WeakCategory,
    pub file: String,
}

/// Symbol-to-category table; configurable, with a built-in default.
#[derive(Debug, Clone)]
pub struct WeakFunctionTable {
    entries: BTreeMap<String, WeakCategory>,
}

#[derive(Debug, Error)]
pub enum TableError {
    #[error("line {line}: expected `category:symbol`, got {text:?}")]
    BadLine { line: usize, text: String },
    #[error("line {line}: unknown category {category:?}")]
    UnknownCategory { line: usize, category: String },
}

impl Default for WeakFunctionTable {
    fn default() -> Self {
        let mut entries = BTreeMap::new();
        entries.insert("gets".to_string(), WeakCategory::Forbidden);
        for sym in [
            "strcpy", "strcat", "sprintf", "vsprintf", "scanf", "sscanf", "fscanf",
        ] {
            entries.insert(sym.to_string(), WeakCategory::Dangerous);
        }
        for sym in ["strncpy", "strncat", "snprintf", "memcpy"] {
            entries.insert(sym.to_string(), WeakCategory::CautionRequired);
        }
        Self { entries }
    }
}

impl WeakFunctionTable {
    /// Load from plain text: one `category:symbol` per line, `#` comments.
    pub fn from_config(text: &str) -> Result<Self, TableError> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (cat, sym) = line.split_once(':').ok_or_else(|| TableError::BadLine {
                line: i + 1,
                text: line.to_string(),
            })?;
            let category =
                WeakCategory::parse(cat.trim()).ok_or_else(|| TableError::UnknownCategory {
                    line: i + 1,
                    category: cat.trim().to_string(),
                })?;
            entries.insert(sym.trim().to_string(), category);
        }
        Ok(Self { entries })
    }

    pub fn category_of(&self, symbol: &str) -> Option<WeakCategory> {
        self.entries.get(symbol).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// One finding per imported symbol present in the table. Symbols a binary
/// merely *defines* never trigger: implementing `strcpy` is libc's problem,
/// importing it is the consumer's.
pub fn scan_weak_functions(
    info: &ExecutableInfo,
    file: &str,
    table: &WeakFunctionTable,
) -> Vec<WeakFunctionFinding> {
    info.imported_symbols
        .iter()
        .filter_map(|sym| {
            table.category_of(sym).map(|category| WeakFunctionFinding {
                symbol: sym.clone(),
                category,
                file: file.to_string(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn info_with_imports(imports: &[&str]) -> ExecutableInfo {
        ExecutableInfo {
            machine: 0x3E,
            imported_symbols: imports.iter().map(|s| s.to_string()).collect(),
            defined_symbols: Vec::new(),
            section_names: Vec::new(),
            is_stripped: true,
        }
    }

    #[test]
    fn gets_is_forbidden() {
        let findings = scan_weak_functions(
            &info_with_imports(&["gets"]),
            "bin/app",
            &WeakFunctionTable::default(),
        );
        assert_eq!(findings.len(), 1);
        assert_eq!(findings[0].symbol, "gets");
        assert_eq!(findings[0].category, WeakCategory::Forbidden);
    }

    #[test]
    fn bounded_variants_need_caution() {
        let findings = scan_weak_functions(
            &info_with_imports(&["snprintf", "strncpy"]),
            "bin/app",
            &WeakFunctionTable::default(),
        );
        assert_eq!(findings.len(), 2);
        assert!(findings
            .iter()
            .all(|f| f.category == WeakCategory::CautionRequired));
    }

    #[test]
    fn benign_imports_yield_nothing() {
        let findings = scan_weak_functions(
            &info_with_imports(&["printf", "malloc"]),
            "bin/app",
            &WeakFunctionTable::default(),
        );
        assert!(findings.is_empty());
    }

    #[test]
    fn defined_symbols_never_trigger() {
        let info = ExecutableInfo {
            machine: 0x3E,
            imported_symbols: vec!["printf".into()],
            defined_symbols: vec!["strcpy".into(), "gets".into()],
            section_names: Vec::new(),
            is_stripped: false,
        };
        assert!(
            scan_weak_functions(&info, "lib/libc.so", &WeakFunctionTable::default()).is_empty()
        );
    }

    #[test]
    fn scan_is_monotone_in_imports() {
        let table = WeakFunctionTable::default();
        let small = scan_weak_functions(&info_with_imports(&["strcpy"]), "f", &table);
        let grown = scan_weak_functions(
            &info_with_imports(&["strcpy", "gets", "qsort"]),
            "f",
            &table,
        );
        for f in &small {
            assert!(grown
                .iter()
                .any(|g| g.symbol == f.symbol && g.category == f.category));
        }
        assert!(grown.len() >= small.len());
    }

    #[test]
    fn config_parsing_round_trip() {
        let table = WeakFunctionTable::from_config(
            "# custom table\nforbidden:gets\ndangerous:strcpy\ncaution-required:memcpy\n",
        )
        .unwrap();
        assert_eq!(table.category_of("gets"), Some(WeakCategory::Forbidden));
        assert_eq!(
            table.category_of("memcpy"),
            Some(WeakCategory::CautionRequired)
        );
        assert_eq!(table.category_of("sprintf"), None);
        assert_eq!(table.len(), 3);
    }

    #[test]
    fn bad_config_lines_are_rejected() {
        assert!(matches!(
            WeakFunctionTable::from_config("nonsense line"),
            Err(TableError::BadLine { line: 1, .. })
        ));
        assert!(matches!(
            WeakFunctionTable::from_config("lethal:gets"),
            Err(TableError::UnknownCategory { line: 1, .. })
        ));
    }
}
