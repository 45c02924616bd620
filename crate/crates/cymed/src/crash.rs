//! Crash-kind vocabulary shared by the VM, the fuzzer targets and triage.

use serde::{Deserialize, Serialize};
use std::fmt;

/// What went wrong when an execution aborted.
///
/// VM-raised kinds come either from the machine itself
/// (`IndirectJumpOutOfRange`) or from an explicit `CRASH k` instruction whose
/// id is decoded by [`CrashKind::from_vm_code`]; the `CRASH` instruction
/// exists so toy targets can simulate the failure classes a real process
/// would exhibit. Subprocess targets map abnormal-termination causes
/// (signals) onto the same vocabulary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CrashKind {
    /// Control transfer to an instruction index derived from input.
    IndirectJumpOutOfRange,
    AssertFailure,
    DivByZero,
    WriteViolation,
    IllegalInstruction,
    SegmentationRead,
    SegmentationWrite,
    /// `CRASH k` with an id outside the decoded set.
    Explicit(u8),
    /// Termination cause outside the table (e.g. an unexpected signal).
    Other(u32),
}

impl CrashKind {
    /// Decode the operand of a `CRASH k` instruction.
    pub fn from_vm_code(code: u8) -> Self {
        match code {
            0 => CrashKind::AssertFailure,
            1 => CrashKind::DivByZero,
            2 => CrashKind::WriteViolation,
            3 => CrashKind::IllegalInstruction,
            4 => CrashKind::SegmentationRead,
            5 => CrashKind::SegmentationWrite,
            k => CrashKind::Explicit(k),
        }
    }

    /// Map a Unix signal number from an abnormally terminated subprocess.
    pub fn from_signal(signal: i32) -> Self {
        match signal {
            4 => CrashKind::IllegalInstruction,
            6 => CrashKind::AssertFailure,
            8 => CrashKind::DivByZero,
            // A bare wait status cannot distinguish read from write faults;
            // classify conservatively.
            7 | 11 => CrashKind::SegmentationRead,
            s => CrashKind::Other(s as u32),
        }
    }

    /// Short stable label used in artifact file names and dedup keys.
    pub fn label(&self) -> String {
        match self {
            CrashKind::IndirectJumpOutOfRange => "indirect_jump_oob".to_string(),
            CrashKind::AssertFailure => "assert_failure".to_string(),
            CrashKind::DivByZero => "div_by_zero".to_string(),
            CrashKind::WriteViolation => "write_violation".to_string(),
            CrashKind::IllegalInstruction => "illegal_instruction".to_string(),
            CrashKind::SegmentationRead => "segv_read".to_string(),
            CrashKind::SegmentationWrite => "segv_write".to_string(),
            CrashKind::Explicit(k) => format!("explicit_{k}"),
            CrashKind::Other(c) => format!("other_{c}"),
        }
    }
}

impl fmt::Display for CrashKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}
