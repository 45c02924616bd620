//! Reference archivers for extraction fixtures.
//!
//! tar and zip fixtures come from the independent `tar` and `zip` crates,
//! gzip from flate2's encoder; the newc cpio writer is hand-rolled here
//! straight from the format's field table. All of them are independent of
//! the extraction code under test.

#![allow(dead_code)]

use std::io::{Cursor, Write};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpecKind {
    Regular(Vec<u8>),
    Directory,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecEntry {
    pub path: String,
    pub mode: u32,
    pub kind: SpecKind,
}

impl SpecEntry {
    pub fn file(path: &str, mode: u32, bytes: &[u8]) -> Self {
        Self {
            path: path.to_string(),
            mode,
            kind: SpecKind::Regular(bytes.to_vec()),
        }
    }

    pub fn dir(path: &str, mode: u32) -> Self {
        Self {
            path: path.to_string(),
            mode,
            kind: SpecKind::Directory,
        }
    }

    pub fn bytes(&self) -> &[u8] {
        match &self.kind {
            SpecKind::Regular(b) => b,
            SpecKind::Directory => &[],
        }
    }
}

/// POSIX ustar archive via the `tar` crate.
pub fn tar_archive(entries: &[SpecEntry]) -> Vec<u8> {
    let mut builder = tar::Builder::new(Vec::new());
    for entry in entries {
        let mut header = tar::Header::new_ustar();
        header.set_mode(entry.mode);
        header.set_uid(0);
        header.set_gid(0);
        header.set_mtime(0);
        match &entry.kind {
            SpecKind::Regular(bytes) => {
                header.set_entry_type(tar::EntryType::Regular);
                header.set_size(bytes.len() as u64);
                builder
                    .append_data(&mut header, &entry.path, bytes.as_slice())
                    .unwrap();
            }
            SpecKind::Directory => {
                header.set_entry_type(tar::EntryType::Directory);
                header.set_size(0);
                builder
                    .append_data(&mut header, &entry.path, std::io::empty())
                    .unwrap();
            }
        }
    }
    builder.into_inner().unwrap()
}

/// Zip archive via the `zip` crate, stored or deflated.
pub fn zip_archive(entries: &[SpecEntry], deflate: bool) -> Vec<u8> {
    let mut writer = zip::ZipWriter::new(Cursor::new(Vec::new()));
    let method = if deflate {
        zip::CompressionMethod::Deflated
    } else {
        zip::CompressionMethod::Stored
    };
    for entry in entries {
        let options: zip::write::SimpleFileOptions = zip::write::SimpleFileOptions::default()
            .compression_method(method)
            .unix_permissions(entry.mode);
        match &entry.kind {
            SpecKind::Regular(bytes) => {
                writer.start_file(entry.path.as_str(), options).unwrap();
                writer.write_all(bytes).unwrap();
            }
            SpecKind::Directory => {
                writer.add_directory(entry.path.as_str(), options).unwrap();
            }
        }
    }
    writer.finish().unwrap().into_inner()
}

/// newc cpio archive, written from the format's field table.
pub fn cpio_archive(entries: &[SpecEntry]) -> Vec<u8> {
    let mut out = Vec::new();
    for (index, entry) in entries.iter().enumerate() {
        let (type_bits, data): (u32, &[u8]) = match &entry.kind {
            SpecKind::Regular(bytes) => (0o100000, bytes),
            SpecKind::Directory => (0o040000, &[]),
        };
        cpio_entry(
            &mut out,
            index as u32 + 1,
            type_bits | entry.mode,
            &entry.path,
            data,
        );
    }
    cpio_entry(&mut out, 0, 0, "TRAILER!!!", &[]);
    out
}

fn cpio_entry(out: &mut Vec<u8>, ino: u32, mode: u32, name: &str, data: &[u8]) {
    let namesize = name.len() + 1;
    out.extend_from_slice(b"070701");
    for field in [
        ino,
        mode,
        0, // uid
        0, // gid
        1, // nlink
        0, // mtime
        data.len() as u32,
        0, // devmajor
        0, // devminor
        0, // rdevmajor
        0, // rdevminor
        namesize as u32,
        0, // check (unused in newc)
    ] {
        out.extend_from_slice(format!("{field:08X}").as_bytes());
    }
    out.extend_from_slice(name.as_bytes());
    out.push(0);
    while !out.len().is_multiple_of(4) {
        out.push(0);
    }
    out.extend_from_slice(data);
    while !out.len().is_multiple_of(4) {
        out.push(0);
    }
}

/// Single gzip member via flate2, optionally carrying an FNAME field.
pub fn gzip_member(name: Option<&str>, content: &[u8]) -> Vec<u8> {
    let mut builder = flate2::GzBuilder::new();
    if let Some(n) = name {
        builder = builder.filename(n);
    }
    let mut encoder = builder.write(Vec::new(), flate2::Compression::default());
    encoder.write_all(content).unwrap();
    encoder.finish().unwrap()
}

/// Junk padding that cannot form or complete any scanned magic sequence.
pub fn safe_junk(rng_state: &mut u64, len: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        *rng_state ^= *rng_state << 13;
        *rng_state ^= *rng_state >> 7;
        *rng_state ^= *rng_state << 17;
        // 0xA0..=0xBF: outside ASCII and never a magic byte.
        out.push(0xA0 + (*rng_state % 32) as u8);
    }
    out
}

/// Random file tree over a filesystem-safe alphabet, for round-trip
/// property fixtures.
pub fn random_tree(rng_state: &mut u64, max_entries: usize) -> Vec<SpecEntry> {
    let next = move |n: u64, state: &mut u64| -> u64 {
        *state ^= *state << 13;
        *state ^= *state >> 7;
        *state ^= *state << 17;
        *state % n
    };
    let name_alphabet: Vec<char> = "abcdefghijklmnopqrstuvwxyz_".chars().collect();
    let count = 1 + next(max_entries as u64, rng_state) as usize;
    let mut entries: Vec<SpecEntry> = Vec::new();
    let mut dirs: Vec<String> = Vec::new();

    for i in 0..count {
        let mut name = String::new();
        for _ in 0..(3 + next(8, rng_state)) {
            name.push(name_alphabet[next(name_alphabet.len() as u64, rng_state) as usize]);
        }
        name.push_str(&format!("{i}")); // uniqueness
        let parent = if dirs.is_empty() || next(3, rng_state) == 0 {
            String::new()
        } else {
            dirs[next(dirs.len() as u64, rng_state) as usize].clone()
        };
        let path = if parent.is_empty() {
            name
        } else {
            format!("{parent}/{name}")
        };

        if next(4, rng_state) == 0 {
            let mode = 0o700 | (next(0o77, rng_state) as u32);
            dirs.push(path.clone());
            entries.push(SpecEntry::dir(&path, mode));
        } else {
            let len = next(2048, rng_state) as usize;
            let mut bytes = Vec::with_capacity(len);
            for _ in 0..len {
                bytes.push(next(256, rng_state) as u8);
            }
            let mode = 0o400 | (next(0o400, rng_state) as u32 & 0o377);
            entries.push(SpecEntry::file(&path, mode, &bytes));
        }
    }
    entries
}
