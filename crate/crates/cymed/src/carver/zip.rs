//! Zip reader driven by the central directory.
//!
//! Only what firmware images actually need: stored and deflated entries,
//! directory markers, unix mode bits from the external attributes. Entry
//! data is located via the central directory so local headers with deferred
//! sizes (data-descriptor flag) still extract.

use super::gzip::inflate_raw;
use super::tree::{normalize_path, EntryKind, FileEntry, FileTree};
use super::{ExtractDiag, ExtractError, ExtractLimits};

pub const LOCAL_MAGIC: [u8; 4] = [0x50, 0x4B, 0x03, 0x04];
const CENTRAL_MAGIC: [u8; 4] = [0x50, 0x4B, 0x01, 0x02];
const EOCD_MAGIC: [u8; 4] = [0x50, 0x4B, 0x05, 0x06];
const EOCD_LEN: usize = 22;
const CENTRAL_FIXED: usize = 46;
const LOCAL_FIXED: usize = 30;

const S_IFMT: u32 = 0o170000;
const S_IFLNK: u32 = 0o120000;
const S_IFDIR: u32 = 0o040000;

/// Plausibility check for signature scanning: sane version-needed field and
/// in-bounds name length in the local header.
pub fn header_is_plausible(data: &[u8], offset: usize) -> bool {
    let Some(h) = data.get(offset..offset + LOCAL_FIXED) else {
        return false;
    };
    if h[..4] != LOCAL_MAGIC {
        return false;
    }
    let version_needed = u16::from_le_bytes([h[4], h[5]]);
    let name_len = u16::from_le_bytes([h[26], h[27]]) as usize;
    version_needed < 100 && name_len > 0 && offset + LOCAL_FIXED + name_len <= data.len()
}

struct Eocd {
    cd_offset: usize,
    cd_size: usize,
    entries: usize,
    archive_len: usize,
}

/// Locate the end-of-central-directory record for the archive based at
/// `base`. A candidate is accepted only if its central-directory offset and
/// size land exactly at the candidate's own position, which rules out EOCDs
/// belonging to other archives embedded later in the blob.
fn find_eocd(data: &[u8], base: usize) -> Result<Eocd, ExtractError> {
    let mut q = base;
    while q + EOCD_LEN <= data.len() {
        if data[q..q + 4] == EOCD_MAGIC {
            let cd_size = u32::from_le_bytes(data[q + 12..q + 16].try_into().unwrap()) as usize;
            let cd_offset = u32::from_le_bytes(data[q + 16..q + 20].try_into().unwrap()) as usize;
            let comment_len = u16::from_le_bytes(data[q + 20..q + 22].try_into().unwrap()) as usize;
            let consistent = base
                .checked_add(cd_offset)
                .and_then(|s| s.checked_add(cd_size))
                .map(|end| end == q)
                .unwrap_or(false);
            if consistent && q + EOCD_LEN + comment_len <= data.len() {
                return Ok(Eocd {
                    cd_offset,
                    cd_size,
                    entries: u16::from_le_bytes(data[q + 10..q + 12].try_into().unwrap()) as usize,
                    archive_len: q + EOCD_LEN + comment_len - base,
                });
            }
        }
        q += 1;
    }
    Err(ExtractError::Truncated(
        "zip end-of-central-directory not found".into(),
    ))
}

/// Total byte length of the archive starting at `offset`.
pub fn measure(data: &[u8], offset: usize) -> Result<usize, ExtractError> {
    if data
        .get(offset..offset + 4)
        .map(|m| m != LOCAL_MAGIC)
        .unwrap_or(true)
    {
        return Err(ExtractError::Corrupt(
            "zip local header magic missing".into(),
        ));
    }
    Ok(find_eocd(data, offset)?.archive_len)
}

struct CentralEntry {
    name: String,
    method: u16,
    crc: u32,
    comp_size: usize,
    uncomp_size: usize,
    external_attrs: u32,
    made_by_unix: bool,
    local_offset: usize,
}

fn walk_central(payload: &[u8], eocd: &Eocd) -> Result<Vec<CentralEntry>, ExtractError> {
    let mut entries = Vec::with_capacity(eocd.entries);
    let mut pos = eocd.cd_offset;
    let cd_end = eocd.cd_offset + eocd.cd_size;
    for _ in 0..eocd.entries {
        let h = payload
            .get(pos..pos + CENTRAL_FIXED)
            .ok_or_else(|| ExtractError::Truncated("zip central directory cut off".into()))?;
        if h[..4] != CENTRAL_MAGIC {
            return Err(ExtractError::Corrupt(
                "zip central directory entry magic mismatch".into(),
            ));
        }
        let name_len = u16::from_le_bytes([h[28], h[29]]) as usize;
        let extra_len = u16::from_le_bytes([h[30], h[31]]) as usize;
        let comment_len = u16::from_le_bytes([h[32], h[33]]) as usize;
        let name_end = pos + CENTRAL_FIXED + name_len;
        let name = String::from_utf8_lossy(
            payload
                .get(pos + CENTRAL_FIXED..name_end)
                .ok_or_else(|| ExtractError::Truncated("zip central entry name cut off".into()))?,
        )
        .into_owned();
        entries.push(CentralEntry {
            name,
            method: u16::from_le_bytes([h[10], h[11]]),
            crc: u32::from_le_bytes(h[16..20].try_into().unwrap()),
            comp_size: u32::from_le_bytes(h[20..24].try_into().unwrap()) as usize,
            uncomp_size: u32::from_le_bytes(h[24..28].try_into().unwrap()) as usize,
            external_attrs: u32::from_le_bytes(h[38..42].try_into().unwrap()),
            made_by_unix: h[5] == 3,
            local_offset: u32::from_le_bytes(h[42..46].try_into().unwrap()) as usize,
        });
        pos = name_end + extra_len + comment_len;
        if pos > cd_end {
            return Err(ExtractError::Corrupt(
                "zip central directory overruns its declared size".into(),
            ));
        }
    }
    Ok(entries)
}

/// Extract the archive at `payload[0..]`.
pub fn extract(
    payload: &[u8],
    limits: &ExtractLimits,
) -> Result<(FileTree, Vec<ExtractDiag>), ExtractError> {
    let eocd = find_eocd(payload, 0)?;
    let entries = walk_central(payload, &eocd)?;

    let mut tree = FileTree::new();
    let mut diags = Vec::new();
    let mut total_out: u64 = 0;
    let mut total_in: u64 = 0;

    for entry in entries {
        let lh = payload
            .get(entry.local_offset..entry.local_offset + LOCAL_FIXED)
            .ok_or_else(|| ExtractError::Truncated("zip local header cut off".into()))?;
        if lh[..4] != LOCAL_MAGIC {
            return Err(ExtractError::Corrupt(
                "zip local header magic mismatch".into(),
            ));
        }
        let name_len = u16::from_le_bytes([lh[26], lh[27]]) as usize;
        let extra_len = u16::from_le_bytes([lh[28], lh[29]]) as usize;
        let data_start = entry.local_offset + LOCAL_FIXED + name_len + extra_len;
        let data_end = data_start
            .checked_add(entry.comp_size)
            .filter(|&e| e <= payload.len())
            .ok_or_else(|| ExtractError::Truncated("zip entry data cut off".into()))?;
        let raw = &payload[data_start..data_end];

        total_in += entry.comp_size as u64;
        total_out += entry.uncomp_size as u64;
        if total_out > limits.max_total_bytes {
            return Err(ExtractError::ZipBomb {
                declared: total_out,
                limit: limits.max_total_bytes,
            });
        }
        if total_out > limits.max_ratio.saturating_mul(total_in.max(1)) {
            return Err(ExtractError::ZipBomb {
                declared: total_out,
                limit: limits.max_ratio,
            });
        }

        let bytes = match entry.method {
            0 => raw.to_vec(),
            8 => {
                let (out, _) = inflate_raw(raw, limits)?;
                out
            }
            m => {
                diags.push(ExtractDiag::UnsupportedEntry {
                    path: entry.name.clone(),
                    detail: format!("zip compression method {m} unsupported"),
                });
                continue;
            }
        };
        if bytes.len() != entry.uncomp_size {
            return Err(ExtractError::Corrupt(format!(
                "zip entry {:?}: declared size {} but decoded {}",
                entry.name,
                entry.uncomp_size,
                bytes.len()
            )));
        }
        if !entry.name.ends_with('/') && crc32fast::hash(&bytes) != entry.crc {
            return Err(ExtractError::Corrupt(format!(
                "zip entry {:?}: crc mismatch",
                entry.name
            )));
        }

        let unix_mode = if entry.made_by_unix {
            entry.external_attrs >> 16
        } else {
            0
        };
        let is_dir_name = entry.name.ends_with('/');
        match normalize_path(&entry.name) {
            Ok(path) => {
                let result = if is_dir_name || unix_mode & S_IFMT == S_IFDIR {
                    tree.insert(FileEntry {
                        path,
                        kind: EntryKind::Directory,
                        mode: if unix_mode != 0 {
                            unix_mode & 0o7777
                        } else {
                            0o755
                        },
                        bytes: Vec::new(),
                        link_target: None,
                    })
                } else if unix_mode & S_IFMT == S_IFLNK {
                    tree.insert(FileEntry {
                        path,
                        kind: EntryKind::Symlink,
                        mode: unix_mode & 0o7777,
                        bytes: Vec::new(),
                        link_target: Some(String::from_utf8_lossy(&bytes).into_owned()),
                    })
                } else {
                    tree.insert(FileEntry {
                        path,
                        kind: EntryKind::Regular,
                        mode: if unix_mode != 0 {
                            unix_mode & 0o7777
                        } else {
                            0o644
                        },
                        bytes,
                        link_target: None,
                    })
                };
                if let Err(e) = result {
                    diags.push(ExtractDiag::UnsafePath {
                        path: entry.name,
                        detail: e.to_string(),
                    });
                }
            }
            Err(e) => {
                diags.push(ExtractDiag::UnsafePath {
                    path: entry.name,
                    detail: e.to_string(),
                });
            }
        }
    }
    Ok((tree, diags))
}
