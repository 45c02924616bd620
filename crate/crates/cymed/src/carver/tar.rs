//! POSIX ustar reader over an in-memory slice.

use super::tree::{normalize_path, EntryKind, FileEntry, FileTree};
use super::{ExtractDiag, ExtractError, ExtractLimits};

pub const MAGIC: &[u8; 5] = b"ustar";
/// Offset of the `ustar` magic within a header block.
pub const MAGIC_OFFSET: usize = 257;
const BLOCK: usize = 512;

/// Validate the checksum of the 512-byte header block at `offset`.
///
/// The stored value is the unsigned byte sum of the header with the checksum
/// field itself treated as spaces.
pub fn header_checksum_ok(data: &[u8], offset: usize) -> bool {
    let Some(block) = data.get(offset..offset + BLOCK) else {
        return false;
    };
    let Some(stored) = parse_octal(&block[148..156]) else {
        return false;
    };
    let mut sum: u64 = 0;
    for (i, &b) in block.iter().enumerate() {
        sum += if (148..156).contains(&i) {
            b' ' as u64
        } else {
            b as u64
        };
    }
    sum == stored
}

/// Measure the archive starting at `offset`: walk header blocks until the
/// end-of-archive marker (two zero blocks) or the first non-header block.
/// Returns the total byte length of the archive region.
pub fn measure(data: &[u8], offset: usize) -> Result<usize, ExtractError> {
    let mut pos = offset;
    let mut saw_entry = false;
    loop {
        let Some(block) = data.get(pos..pos + BLOCK) else {
            if saw_entry {
                // Ran off the end without a terminator; accept what we have.
                return Ok(data.len() - offset);
            }
            return Err(ExtractError::Truncated(
                "tar header past end of blob".into(),
            ));
        };
        if block.iter().all(|&b| b == 0) {
            // End-of-archive: two zero blocks, tolerate one.
            let mut end = pos + BLOCK;
            if data
                .get(end..end + BLOCK)
                .map(|b| b.iter().all(|&x| x == 0))
                .unwrap_or(false)
            {
                end += BLOCK;
            }
            return Ok(end - offset);
        }
        if !header_checksum_ok(data, pos) {
            if saw_entry {
                return Ok(pos - offset);
            }
            return Err(ExtractError::Corrupt("tar header checksum invalid".into()));
        }
        let size = parse_octal(&block[124..136])
            .ok_or_else(|| ExtractError::Corrupt("tar size field not octal".into()))?
            as usize;
        let data_blocks = size.div_ceil(BLOCK);
        pos = pos
            .checked_add(BLOCK + data_blocks * BLOCK)
            .filter(|&p| p <= data.len())
            .ok_or_else(|| ExtractError::Truncated("tar entry data past end of blob".into()))?;
        saw_entry = true;
    }
}

/// Extract the archive at `payload[0..]` into a [`FileTree`].
pub fn extract(
    payload: &[u8],
    limits: &ExtractLimits,
) -> Result<(FileTree, Vec<ExtractDiag>), ExtractError> {
    let mut tree = FileTree::new();
    let mut diags = Vec::new();
    let mut pos = 0usize;
    let mut total: u64 = 0;
    while pos + BLOCK <= payload.len() {
        let block = &payload[pos..pos + BLOCK];
        if block.iter().all(|&b| b == 0) {
            break;
        }
        if !header_checksum_ok(payload, pos) {
            return Err(ExtractError::Corrupt("tar header checksum invalid".into()));
        }
        let name_raw = cstr_field(&block[0..100]);
        let prefix = cstr_field(&block[345..500]);
        let full_name = if prefix.is_empty() {
            name_raw.clone()
        } else {
            format!("{prefix}/{name_raw}")
        };
        let mode = parse_octal(&block[100..108]).unwrap_or(0) as u32;
        let size = parse_octal(&block[124..136])
            .ok_or_else(|| ExtractError::Corrupt("tar size field not octal".into()))?
            as usize;
        let typeflag = block[156];
        let link_name = cstr_field(&block[157..257]);

        let data_start = pos + BLOCK;
        let data_end = data_start
            .checked_add(size)
            .filter(|&e| e <= payload.len())
            .ok_or_else(|| ExtractError::Truncated("tar entry data truncated".into()))?;

        total += size as u64;
        if total > limits.max_total_bytes {
            return Err(ExtractError::ZipBomb {
                declared: total,
                limit: limits.max_total_bytes,
            });
        }

        match normalize_path(&full_name) {
            Ok(path) => {
                let result = match typeflag {
                    b'0' | 0 => tree.insert(FileEntry {
                        path,
                        kind: EntryKind::Regular,
                        mode,
                        bytes: payload[data_start..data_end].to_vec(),
                        link_target: None,
                    }),
                    b'5' => tree.insert(FileEntry {
                        path,
                        kind: EntryKind::Directory,
                        mode,
                        bytes: Vec::new(),
                        link_target: None,
                    }),
                    b'2' => tree.insert(FileEntry {
                        path,
                        kind: EntryKind::Symlink,
                        mode,
                        bytes: Vec::new(),
                        link_target: Some(link_name),
                    }),
                    other => {
                        diags.push(ExtractDiag::UnsupportedEntry {
                            path: full_name.clone(),
                            detail: format!("tar typeflag {:?} skipped", other as char),
                        });
                        Ok(())
                    }
                };
                if let Err(e) = result {
                    diags.push(ExtractDiag::UnsafePath {
                        path: full_name,
                        detail: e.to_string(),
                    });
                }
            }
            Err(e) => {
                diags.push(ExtractDiag::UnsafePath {
                    path: full_name,
                    detail: e.to_string(),
                });
            }
        }

        pos = data_start + size.div_ceil(BLOCK) * BLOCK;
    }
    Ok((tree, diags))
}

fn cstr_field(field: &[u8]) -> String {
    let end = field.iter().position(|&b| b == 0).unwrap_or(field.len());
    String::from_utf8_lossy(&field[..end]).into_owned()
}

/// Parse a NUL/space-terminated octal field.
fn parse_octal(field: &[u8]) -> Option<u64> {
    let s: Vec<u8> = field
        .iter()
        .copied()
        .skip_while(|&b| b == b' ' || b == 0)
        .take_while(|&b| (b'0'..=b'7').contains(&b))
        .collect();
    if s.is_empty() {
        // All-blank size fields occur for directory entries from some writers.
        if field.iter().all(|&b| b == b' ' || b == 0) {
            return Some(0);
        }
        return None;
    }
    let mut v: u64 = 0;
    for b in s {
        v = v.checked_mul(8)?.checked_add((b - b'0') as u64)?;
    }
    Some(v)
}
