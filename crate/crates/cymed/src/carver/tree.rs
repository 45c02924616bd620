//! In-memory file tree extracted from a container.
//!
//! Extraction never touches the real filesystem; hostile archive entries can
//! at worst be rejected, not escape. Paths are normalized, '/'-separated and
//! relative, and anything absolute or `..`-escaping is refused at insert time.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EntryKind {
    Regular,
    Directory,
    Symlink,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FileEntry {
    pub path: String,
    pub kind: EntryKind,
    /// 12-bit permission value (setuid/setgid/sticky + rwxrwxrwx).
    pub mode: u32,
    /// Content; empty for directories and symlinks.
    pub bytes: Vec<u8>,
    /// Target path, symlinks only. Stored verbatim, never resolved.
    pub link_target: Option<String>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PathError {
    #[error("absolute path {0:?} not allowed")]
    Absolute(String),
    #[error("path {0:?} escapes the tree via `..`")]
    Escapes(String),
    #[error("empty path")]
    Empty,
    #[error("duplicate path {0:?}")]
    Duplicate(String),
}

/// Normalize an archive entry path: strip `.` segments and empty segments,
/// reject absolute paths and any `..` component.
pub fn normalize_path(raw: &str) -> Result<String, PathError> {
    let raw_unified = raw.replace('\\', "/");
    if raw_unified.starts_with('/') {
        return Err(PathError::Absolute(raw.to_string()));
    }
    // Windows-style drive prefixes count as absolute too.
    if raw_unified.len() >= 2 && raw_unified.as_bytes()[1] == b':' {
        return Err(PathError::Absolute(raw.to_string()));
    }
    let mut parts = Vec::new();
    for seg in raw_unified.split('/') {
        match seg {
            "" | "." => continue,
            ".." => return Err(PathError::Escapes(raw.to_string())),
            s => parts.push(s),
        }
    }
    if parts.is_empty() {
        return Err(PathError::Empty);
    }
    Ok(parts.join("/"))
}

/// Extracted firmware contents: paths, bytes, permission metadata.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FileTree {
    entries: Vec<FileEntry>,
}

impl FileTree {
    pub fn new() -> Self {
        Self::default()
    }

    /// Insert an entry whose path is already normalized.
    ///
    /// Duplicate paths are rejected; the mode is masked to its 12 permission
    /// bits.
    pub fn insert(&mut self, mut entry: FileEntry) -> Result<(), PathError> {
        if self.entries.iter().any(|e| e.path == entry.path) {
            return Err(PathError::Duplicate(entry.path));
        }
        entry.mode &= 0o7777;
        self.entries.push(entry);
        Ok(())
    }

    pub fn insert_regular(
        &mut self,
        path: &str,
        mode: u32,
        bytes: Vec<u8>,
    ) -> Result<(), PathError> {
        let path = normalize_path(path)?;
        self.insert(FileEntry {
            path,
            kind: EntryKind::Regular,
            mode,
            bytes,
            link_target: None,
        })
    }

    pub fn insert_directory(&mut self, path: &str, mode: u32) -> Result<(), PathError> {
        let path = normalize_path(path)?;
        self.insert(FileEntry {
            path,
            kind: EntryKind::Directory,
            mode,
            bytes: Vec::new(),
            link_target: None,
        })
    }

    pub fn insert_symlink(&mut self, path: &str, mode: u32, target: &str) -> Result<(), PathError> {
        let path = normalize_path(path)?;
        self.insert(FileEntry {
            path,
            kind: EntryKind::Symlink,
            mode,
            bytes: Vec::new(),
            link_target: Some(target.to_string()),
        })
    }

    pub fn entries(&self) -> &[FileEntry] {
        &self.entries
    }

    pub fn get(&self, path: &str) -> Option<&FileEntry> {
        self.entries.iter().find(|e| e.path == path)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Regular-file view, the unit of work for the scanners.
    pub fn regular_files(&self) -> impl Iterator<Item = &FileEntry> {
        self.entries.iter().filter(|e| e.kind == EntryKind::Regular)
    }

    /// Entries sorted by path; used wherever deterministic ordering matters.
    pub fn sorted_entries(&self) -> Vec<&FileEntry> {
        let mut v: Vec<&FileEntry> = self.entries.iter().collect();
        v.sort_by(|a, b| a.path.cmp(&b.path));
        v
    }
}
