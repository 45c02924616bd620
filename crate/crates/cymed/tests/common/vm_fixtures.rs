//! Canonical VM programs used across the fuzzing and symbolic-execution
//! suites.

#![allow(dead_code)]

/// Magic accepted by the canonical crashing fixture.
pub const BUG_MAGIC: &[u8; 4] = b"BUG!";

/// Crash kind id planted in fixtures: 2 decodes to a write violation, the
/// stand-in for a memory-corrupting bug.
pub const FIXTURE_CRASH_CODE: u8 = 2;

/// A k-guard magic-check chain: each input byte must match its guard or the
/// program halts; passing every guard reaches `CRASH`.
///
/// Finding the crash blind is a 256^k shot; with coverage feedback each
/// matched guard is retained, so the cost is roughly linear in k.
pub fn guard_chain_asm(magic: &[u8], crash_code: u8) -> String {
    let mut lines = Vec::new();
    for (i, byte) in magic.iter().enumerate() {
        lines.push("INPUT r0".to_string());
        lines.push(format!("LOADI r1, {byte}"));
        lines.push(format!("BEQ r0, r1, g{i}"));
        lines.push("HALT".to_string());
        lines.push(format!("g{i}:"));
    }
    lines.push(format!("CRASH {crash_code}"));
    lines.join("\n")
}

/// The `INPUT; JMPR` program: the instruction pointer depends directly on
/// input.
pub fn input_dependent_jump_asm() -> String {
    "INPUT r0\nJMPR r0".to_string()
}

/// Tiny local xorshift so this file stays free of crate-path dependencies
/// (it is compiled both inside the library tests and the integration
/// suites).
pub struct MiniRng(pub u64);

impl MiniRng {
    pub fn next(&mut self) -> u64 {
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        self.0
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }
}

/// A random forward-branching program over registers r0..r3 with inputs,
/// arithmetic, branches, crashes and the odd indirect jump. Forward-only
/// static branch targets keep the direct control flow acyclic; `JMPR` can
/// still loop at runtime, which the caller handles via depth bounds.
pub fn random_dag_program_asm(seed: u64, max_insns: usize) -> String {
    let mut rng = MiniRng(seed | 1);
    let len = 6 + (rng.below(max_insns.max(8) as u64 - 5) as usize);
    let mut lines = Vec::with_capacity(len + 1);
    for i in 0..len {
        let is_last = i == len - 1;
        let remaining = len - 1 - i;
        let insn = if is_last {
            "HALT".to_string()
        } else {
            match rng.below(100) {
                0..=24 => format!("INPUT r{}", rng.below(4)),
                25..=39 => format!("LOADI r{}, {}", rng.below(4), rng.below(300)),
                40..=47 => format!("MOV r{}, r{}", rng.below(4), rng.below(4)),
                48..=57 => format!(
                    "ADD r{}, r{}, r{}",
                    rng.below(4),
                    rng.below(4),
                    rng.below(4)
                ),
                58..=65 => format!(
                    "SUB r{}, r{}, r{}",
                    rng.below(4),
                    rng.below(4),
                    rng.below(4)
                ),
                66..=71 => format!(
                    "MUL r{}, r{}, r{}",
                    rng.below(4),
                    rng.below(4),
                    rng.below(4)
                ),
                72..=85 if remaining >= 1 => {
                    let target = i + 1 + rng.below(remaining as u64) as usize;
                    let op = if rng.below(2) == 0 { "BEQ" } else { "BLT" };
                    format!("{op} r{}, r{}, L{target}", rng.below(4), rng.below(4))
                }
                86..=89 if remaining >= 1 => {
                    let target = i + 1 + rng.below(remaining as u64) as usize;
                    format!("JMP L{target}")
                }
                90..=92 => format!("JMPR r{}", rng.below(4)),
                93..=97 => format!("CRASH {}", rng.below(3)),
                _ => "HALT".to_string(),
            }
        };
        lines.push(format!("L{i}: {insn}"));
    }
    lines.join("\n")
}
