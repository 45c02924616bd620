//! A deterministic toy register VM: the shared, fully instrumented target
//! for the fuzzer (edge coverage) and the symbolic executor.
//!
//! Sixteen 64-bit registers, wrapping arithmetic, unsigned comparisons.
//! `INPUT` reads the next input byte (0 once exhausted, so every byte
//! sequence is a valid input and length is just another dimension to
//! explore). `CRASH k` aborts with a decoded crash kind; `JMPR` with an
//! out-of-range register value is the machine's own crash class.

mod asm;
mod exec;

pub use asm::{assemble, AsmError};
pub use exec::{execute, ExecutionOutcome, RunStatus};

pub const REGISTER_COUNT: usize = 16;

/// Distinguished sink node for transitions leaving the program.
pub const SINK: usize = usize::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Insn {
    /// Read next input byte into `r` (0 when exhausted).
    Input {
        r: u8,
    },
    LoadImm {
        r: u8,
        imm: u64,
    },
    Mov {
        dst: u8,
        src: u8,
    },
    Add {
        dst: u8,
        a: u8,
        b: u8,
    },
    Sub {
        dst: u8,
        a: u8,
        b: u8,
    },
    Mul {
        dst: u8,
        a: u8,
        b: u8,
    },
    Beq {
        a: u8,
        b: u8,
        target: usize,
    },
    /// Unsigned less-than branch.
    Blt {
        a: u8,
        b: u8,
        target: usize,
    },
    Jmp {
        target: usize,
    },
    /// Indirect jump to the instruction index in `r`.
    JmpR {
        r: u8,
    },
    Crash {
        code: u8,
    },
    Halt,
}

/// A validated instruction sequence: static branch targets in range,
/// register indices below [`REGISTER_COUNT`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Program {
    insns: Vec<Insn>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ProgramError {
    #[error("instruction {index}: branch target {target} out of range")]
    TargetOutOfRange { index: usize, target: usize },
    #[error("instruction {index}: register {register} out of range")]
    RegisterOutOfRange { index: usize, register: u8 },
}

impl Program {
    /// Validate and wrap an instruction sequence built in code.
    pub fn new(insns: Vec<Insn>) -> Result<Self, ProgramError> {
        let len = insns.len();
        for (index, insn) in insns.iter().enumerate() {
            let check_reg = |r: u8| {
                if (r as usize) < REGISTER_COUNT {
                    Ok(())
                } else {
                    Err(ProgramError::RegisterOutOfRange { index, register: r })
                }
            };
            let check_target = |t: usize| {
                if t < len {
                    Ok(())
                } else {
                    Err(ProgramError::TargetOutOfRange { index, target: t })
                }
            };
            match *insn {
                Insn::Input { r } | Insn::LoadImm { r, .. } | Insn::JmpR { r } => check_reg(r)?,
                Insn::Mov { dst, src } => {
                    check_reg(dst)?;
                    check_reg(src)?;
                }
                Insn::Add { dst, a, b } | Insn::Sub { dst, a, b } | Insn::Mul { dst, a, b } => {
                    check_reg(dst)?;
                    check_reg(a)?;
                    check_reg(b)?;
                }
                Insn::Beq { a, b, target } | Insn::Blt { a, b, target } => {
                    check_reg(a)?;
                    check_reg(b)?;
                    check_target(target)?;
                }
                Insn::Jmp { target } => check_target(target)?,
                Insn::Crash { .. } | Insn::Halt => {}
            }
        }
        Ok(Self { insns })
    }

    /// Construction path for the assembler, which has already validated.
    pub(crate) fn from_validated(insns: Vec<Insn>) -> Self {
        Self { insns }
    }

    pub fn insns(&self) -> &[Insn] {
        &self.insns
    }

    pub fn len(&self) -> usize {
        self.insns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.insns.is_empty()
    }
}
