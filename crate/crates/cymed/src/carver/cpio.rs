//! cpio "newc" (SVR4 without CRC) reader.
//!
//! Header is 110 ASCII bytes: the magic `070701` followed by 13 fields of
//! 8 hex digits each. Names and file data are padded to 4-byte boundaries
//! relative to the archive start.

use super::tree::{normalize_path, EntryKind, FileEntry, FileTree};
use super::{ExtractDiag, ExtractError, ExtractLimits};

pub const MAGIC: &[u8; 6] = b"070701";
const HEADER_LEN: usize = 110;
const TRAILER: &str = "TRAILER!!!";

const S_IFMT: u32 = 0o170000;
const S_IFREG: u32 = 0o100000;
const S_IFDIR: u32 = 0o040000;
const S_IFLNK: u32 = 0o120000;

struct RawHeader {
    mode: u32,
    filesize: usize,
    namesize: usize,
}

/// True when a syntactically valid newc header sits at `offset` (magic plus
/// 13 all-hex fields).
pub fn header_is_plausible(data: &[u8], offset: usize) -> bool {
    parse_header(data, offset).is_ok()
}

fn parse_header(data: &[u8], offset: usize) -> Result<RawHeader, ExtractError> {
    let hdr = data
        .get(offset..offset + HEADER_LEN)
        .ok_or_else(|| ExtractError::Truncated("cpio header past end".into()))?;
    if &hdr[..6] != MAGIC {
        return Err(ExtractError::Corrupt("cpio magic mismatch".into()));
    }
    let field = |i: usize| -> Result<u64, ExtractError> {
        let s = &hdr[6 + i * 8..6 + (i + 1) * 8];
        if !s.iter().all(|b| b.is_ascii_hexdigit()) {
            return Err(ExtractError::Corrupt("cpio header field not hex".into()));
        }
        let txt = std::str::from_utf8(s).expect("hex digits are ascii");
        u64::from_str_radix(txt, 16)
            .map_err(|_| ExtractError::Corrupt("cpio header field overflow".into()))
    };
    Ok(RawHeader {
        mode: field(1)? as u32,
        filesize: field(6)? as usize,
        namesize: field(11)? as usize,
    })
}

fn align4(n: usize) -> usize {
    n.div_ceil(4) * 4
}

/// Measure the archive at `offset`: walk entries through the TRAILER record.
pub fn measure(data: &[u8], offset: usize) -> Result<usize, ExtractError> {
    let mut pos = offset;
    loop {
        let hdr = parse_header(data, pos)?;
        let name_start = pos + HEADER_LEN;
        let name_end = name_start
            .checked_add(hdr.namesize)
            .filter(|&e| e <= data.len())
            .ok_or_else(|| ExtractError::Truncated("cpio name past end".into()))?;
        if hdr.namesize == 0 {
            return Err(ExtractError::Corrupt("cpio empty name".into()));
        }
        let name = &data[name_start..name_end - 1]; // trailing NUL
        let data_start = offset + align4(name_end - offset);
        let data_end = data_start
            .checked_add(hdr.filesize)
            .filter(|&e| e <= data.len())
            .ok_or_else(|| ExtractError::Truncated("cpio data past end".into()))?;
        let next = offset + align4(data_end - offset);
        if name == TRAILER.as_bytes() {
            return Ok(next - offset);
        }
        pos = next;
    }
}

/// Extract the archive at `payload[0..]`.
pub fn extract(
    payload: &[u8],
    limits: &ExtractLimits,
) -> Result<(FileTree, Vec<ExtractDiag>), ExtractError> {
    let mut tree = FileTree::new();
    let mut diags = Vec::new();
    let mut pos = 0usize;
    let mut total: u64 = 0;
    loop {
        let hdr = parse_header(payload, pos)?;
        let name_start = pos + HEADER_LEN;
        if hdr.namesize == 0 {
            return Err(ExtractError::Corrupt("cpio empty name".into()));
        }
        let name_end = name_start
            .checked_add(hdr.namesize)
            .filter(|&e| e <= payload.len())
            .ok_or_else(|| ExtractError::Truncated("cpio name past end".into()))?;
        let raw_name = String::from_utf8_lossy(&payload[name_start..name_end - 1]).into_owned();
        let data_start = align4(name_end);
        let data_end = data_start
            .checked_add(hdr.filesize)
            .filter(|&e| e <= payload.len())
            .ok_or_else(|| ExtractError::Truncated("cpio data past end".into()))?;

        if raw_name == TRAILER {
            break;
        }

        total += hdr.filesize as u64;
        if total > limits.max_total_bytes {
            return Err(ExtractError::ZipBomb {
                declared: total,
                limit: limits.max_total_bytes,
            });
        }

        let perm = hdr.mode & 0o7777;
        match normalize_path(&raw_name) {
            Ok(path) => {
                let result = match hdr.mode & S_IFMT {
                    S_IFREG => tree.insert(FileEntry {
                        path,
                        kind: EntryKind::Regular,
                        mode: perm,
                        bytes: payload[data_start..data_end].to_vec(),
                        link_target: None,
                    }),
                    S_IFDIR => tree.insert(FileEntry {
                        path,
                        kind: EntryKind::Directory,
                        mode: perm,
                        bytes: Vec::new(),
                        link_target: None,
                    }),
                    S_IFLNK => tree.insert(FileEntry {
                        path,
                        kind: EntryKind::Symlink,
                        mode: perm,
                        bytes: Vec::new(),
                        link_target: Some(
                            String::from_utf8_lossy(&payload[data_start..data_end]).into_owned(),
                        ),
                    }),
                    other => {
                        diags.push(ExtractDiag::UnsupportedEntry {
                            path: raw_name.clone(),
                            detail: format!("cpio file type {:#o} skipped", other >> 12),
                        });
                        Ok(())
                    }
                };
                if let Err(e) = result {
                    diags.push(ExtractDiag::UnsafePath {
                        path: raw_name,
                        detail: e.to_string(),
                    });
                }
            }
            Err(e) => {
                diags.push(ExtractDiag::UnsafePath {
                    path: raw_name,
                    detail: e.to_string(),
                });
            }
        }

        pos = align4(data_end);
    }
    Ok((tree, diags))
}
