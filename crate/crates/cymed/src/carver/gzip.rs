//! Gzip member framing: header parse, bounded inflate, trailer validation.
//!
//! The DEFLATE codec itself is `flate2`; everything around it (header fields,
//! FNAME recovery, exact stream length for carving, CRC/ISIZE checks, bomb
//! caps) is handled here.

use super::{ExtractError, ExtractLimits};
use flate2::{Decompress, FlushDecompress, Status};

pub const MAGIC: [u8; 2] = [0x1F, 0x8B];
const FLG_FHCRC: u8 = 0x02;
const FLG_FEXTRA: u8 = 0x04;
const FLG_FNAME: u8 = 0x08;
const FLG_FCOMMENT: u8 = 0x10;

#[derive(Debug)]
pub struct GzipMember {
    /// Original file name from the FNAME field, when present.
    pub name: Option<String>,
    pub decompressed: Vec<u8>,
    /// Total encoded length: header + deflate stream + 8-byte trailer.
    pub stream_len: usize,
}

/// True when the two magic bytes and a plausible header follow at `offset`:
/// method must be 8 (deflate) and no reserved flag bits set.
pub fn header_is_plausible(data: &[u8], offset: usize) -> bool {
    let Some(h) = data.get(offset..offset + 4) else {
        return false;
    };
    h[0] == MAGIC[0] && h[1] == MAGIC[1] && h[2] == 8 && h[3] & 0xE0 == 0
}

/// Decode one gzip member starting at `data[offset..]`.
pub fn decode_member(
    data: &[u8],
    offset: usize,
    limits: &ExtractLimits,
) -> Result<GzipMember, ExtractError> {
    let blob = &data[offset..];
    if blob.len() < 18 || blob[0] != MAGIC[0] || blob[1] != MAGIC[1] {
        return Err(ExtractError::Corrupt("gzip header truncated".into()));
    }
    if blob[2] != 8 {
        return Err(ExtractError::Corrupt(format!(
            "gzip compression method {} is not deflate",
            blob[2]
        )));
    }
    let flg = blob[3];
    if flg & 0xE0 != 0 {
        return Err(ExtractError::Corrupt("gzip reserved flag bits set".into()));
    }
    // Fixed part: magic(2) method(1) flags(1) mtime(4) xfl(1) os(1).
    let mut pos = 10usize;
    if flg & FLG_FEXTRA != 0 {
        let xlen = read_u16(blob, pos)? as usize;
        pos = pos.checked_add(2 + xlen).ok_or_else(truncated)?;
    }
    let mut name = None;
    if flg & FLG_FNAME != 0 {
        let (s, end) = read_cstr(blob, pos)?;
        name = Some(s);
        pos = end;
    }
    if flg & FLG_FCOMMENT != 0 {
        let (_, end) = read_cstr(blob, pos)?;
        pos = end;
    }
    if flg & FLG_FHCRC != 0 {
        pos = pos.checked_add(2).ok_or_else(truncated)?;
    }
    if pos > blob.len() {
        return Err(truncated());
    }

    let (decompressed, consumed) = inflate_raw(&blob[pos..], limits)?;

    let trailer_at = pos + consumed;
    let crc_expect = read_u32(blob, trailer_at)?;
    let isize_expect = read_u32(blob, trailer_at + 4)?;
    let crc_actual = crc32fast::hash(&decompressed);
    if crc_actual != crc_expect {
        return Err(ExtractError::Corrupt(format!(
            "gzip crc mismatch: stored {crc_expect:#010x}, computed {crc_actual:#010x}"
        )));
    }
    if isize_expect != decompressed.len() as u32 {
        return Err(ExtractError::Corrupt("gzip ISIZE mismatch".into()));
    }

    Ok(GzipMember {
        name,
        decompressed,
        stream_len: trailer_at + 8,
    })
}

/// Inflate a raw deflate stream, returning (output, input bytes consumed).
/// Enforces the expansion caps from `limits`.
pub fn inflate_raw(input: &[u8], limits: &ExtractLimits) -> Result<(Vec<u8>, usize), ExtractError> {
    let mut decomp = Decompress::new(false);
    let mut out = Vec::new();
    let mut buf = [0u8; 32 * 1024];
    loop {
        let before_in = decomp.total_in();
        let before_out = decomp.total_out();
        let status = decomp
            .decompress(
                &input[decomp.total_in() as usize..],
                &mut buf,
                FlushDecompress::None,
            )
            .map_err(|e| ExtractError::Corrupt(format!("deflate error: {e}")))?;
        let produced = (decomp.total_out() - before_out) as usize;
        out.extend_from_slice(&buf[..produced]);

        if out.len() as u64 > limits.max_total_bytes {
            return Err(ExtractError::ZipBomb {
                declared: out.len() as u64,
                limit: limits.max_total_bytes,
            });
        }
        let consumed_so_far = decomp.total_in().max(1);
        if out.len() as u64 > limits.max_ratio.saturating_mul(consumed_so_far) {
            return Err(ExtractError::ZipBomb {
                declared: out.len() as u64,
                limit: limits.max_ratio,
            });
        }

        match status {
            Status::StreamEnd => return Ok((out, decomp.total_in() as usize)),
            Status::Ok | Status::BufError => {
                let advanced = decomp.total_in() != before_in || produced > 0;
                if !advanced {
                    return Err(ExtractError::Corrupt("deflate stream truncated".into()));
                }
            }
        }
    }
}

fn truncated() -> ExtractError {
    ExtractError::Corrupt("gzip header truncated".into())
}

fn read_u16(b: &[u8], at: usize) -> Result<u16, ExtractError> {
    b.get(at..at + 2)
        .map(|s| u16::from_le_bytes([s[0], s[1]]))
        .ok_or_else(truncated)
}

fn read_u32(b: &[u8], at: usize) -> Result<u32, ExtractError> {
    b.get(at..at + 4)
        .map(|s| u32::from_le_bytes([s[0], s[1], s[2], s[3]]))
        .ok_or_else(truncated)
}

fn read_cstr(b: &[u8], at: usize) -> Result<(String, usize), ExtractError> {
    let rest = b.get(at..).ok_or_else(truncated)?;
    let nul = rest.iter().position(|&c| c == 0).ok_or_else(truncated)?;
    let s = String::from_utf8_lossy(&rest[..nul]).into_owned();
    Ok((s, at + nul + 1))
}
