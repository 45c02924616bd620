//! Mutation stages over byte inputs.

use super::rng::Rng;

/// Byte-level interesting values.
const INTERESTING_8: [u8; 3] = [0, 1, 255];
/// 16-bit little-endian interesting values.
const INTERESTING_16: [u16; 3] = [0, 65535, 32768];
/// Arithmetic deltas run from 1 to this bound, both signs.
const ARITH_MAX: u64 = 35;
/// Havoc stacks between 1 and this many primitive edits.
const HAVOC_STACK_MAX: u64 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MutationStage {
    BitFlip,
    ByteFlip,
    Arith,
    Interesting,
    Havoc,
    /// Crossover with another corpus entry.
    Splice,
}

/// Apply one mutation stage.
///
/// The output differs from the input unless the input is empty and the stage
/// cannot grow it. Output length never exceeds `max_len`.
pub fn mutate(
    input: &[u8],
    rng: &mut Rng,
    stage: MutationStage,
    other: Option<&[u8]>,
    max_len: usize,
) -> Vec<u8> {
    let mut out = apply_stage(input, rng, stage, other, max_len);
    // A stage can no-op (e.g. an interesting value landing on itself); retry
    // a bounded number of times, then force a definite change.
    let mut tries = 0;
    while out == input && tries < 8 {
        if input.is_empty() && !stage_can_grow(stage) {
            return out;
        }
        out = apply_stage(input, rng, stage, other, max_len);
        tries += 1;
    }
    if out == input && !input.is_empty() {
        let pos = rng.below_usize(out.len());
        out[pos] ^= 1 << rng.below(8);
    }
    out.truncate(max_len);
    out
}

fn stage_can_grow(stage: MutationStage) -> bool {
    matches!(stage, MutationStage::Havoc | MutationStage::Splice)
}

fn apply_stage(
    input: &[u8],
    rng: &mut Rng,
    stage: MutationStage,
    other: Option<&[u8]>,
    max_len: usize,
) -> Vec<u8> {
    let mut out = input.to_vec();
    match stage {
        MutationStage::BitFlip => {
            if !out.is_empty() {
                let pos = rng.below_usize(out.len());
                out[pos] ^= 1 << rng.below(8);
            }
        }
        MutationStage::ByteFlip => {
            if !out.is_empty() {
                let pos = rng.below_usize(out.len());
                out[pos] ^= 0xFF;
            }
        }
        MutationStage::Arith => arith(&mut out, rng),
        MutationStage::Interesting => interesting(&mut out, rng),
        MutationStage::Havoc => havoc(&mut out, rng, max_len),
        MutationStage::Splice => match other {
            Some(b) if input.len() >= 2 && b.len() >= 2 => {
                let cut_a = rng.range(1, input.len() as u64 - 1) as usize;
                let cut_b = rng.range(1, b.len() as u64 - 1) as usize;
                out = input[..cut_a].to_vec();
                out.extend_from_slice(&b[cut_b..]);
            }
            // No usable partner: behave like havoc so the stage still makes
            // progress on tiny corpora.
            _ => havoc(&mut out, rng, max_len),
        },
    }
    out.truncate(max_len);
    out
}

fn arith(out: &mut [u8], rng: &mut Rng) {
    if out.is_empty() {
        return;
    }
    let pos = rng.below_usize(out.len());
    let delta = rng.range(1, ARITH_MAX);
    if rng.coin() {
        // 16-bit LE when there is room, byte otherwise.
        if pos + 1 < out.len() && rng.coin() {
            let v = u16::from_le_bytes([out[pos], out[pos + 1]]);
            let v = if rng.coin() {
                v.wrapping_add(delta as u16)
            } else {
                v.wrapping_sub(delta as u16)
            };
            out[pos..pos + 2].copy_from_slice(&v.to_le_bytes());
            return;
        }
        out[pos] = out[pos].wrapping_add(delta as u8);
    } else {
        out[pos] = out[pos].wrapping_sub(delta as u8);
    }
}

fn interesting(out: &mut [u8], rng: &mut Rng) {
    if out.is_empty() {
        return;
    }
    let pos = rng.below_usize(out.len());
    if pos + 1 < out.len() && rng.coin() {
        let v = *rng.pick(&INTERESTING_16);
        out[pos..pos + 2].copy_from_slice(&v.to_le_bytes());
    } else {
        out[pos] = *rng.pick(&INTERESTING_8);
    }
}

fn havoc(out: &mut Vec<u8>, rng: &mut Rng, max_len: usize) {
    let stack = rng.range(1, HAVOC_STACK_MAX);
    for _ in 0..stack {
        match rng.below(9) {
            0 => {
                if !out.is_empty() {
                    let pos = rng.below_usize(out.len());
                    out[pos] ^= 1 << rng.below(8);
                }
            }
            1 => {
                if !out.is_empty() {
                    let pos = rng.below_usize(out.len());
                    out[pos] = rng.byte();
                }
            }
            2 => arith(out, rng),
            3 => interesting(out, rng),
            4 => {
                // insert a random byte
                if out.len() < max_len {
                    let pos = rng.below_usize(out.len() + 1);
                    out.insert(pos, rng.byte());
                }
            }
            5 => {
                // delete a byte
                if !out.is_empty() {
                    let pos = rng.below_usize(out.len());
                    out.remove(pos);
                }
            }
            6 => {
                // duplicate a chunk
                if !out.is_empty() && out.len() < max_len {
                    let from = rng.below_usize(out.len());
                    let len = (rng.range(1, 8) as usize)
                        .min(out.len() - from)
                        .min(max_len - out.len());
                    if len > 0 {
                        let chunk: Vec<u8> = out[from..from + len].to_vec();
                        let at = rng.below_usize(out.len() + 1);
                        out.splice(at..at, chunk);
                    }
                }
            }
            7 => {
                // overwrite with a repeated byte
                if !out.is_empty() {
                    let pos = rng.below_usize(out.len());
                    let len = (rng.range(1, 4) as usize).min(out.len() - pos);
                    let b = rng.byte();
                    out[pos..pos + len].fill(b);
                }
            }
            _ => {
                // append a random byte; input length is a search dimension
                if out.len() < max_len {
                    out.push(rng.byte());
                }
            }
        }
    }
}
