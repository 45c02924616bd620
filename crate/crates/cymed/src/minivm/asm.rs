//! Two-pass assembler for the VM's line-oriented assembly format.
//!
//! One instruction per line, `;` starts a comment, labels are `name:` either
//! alone on a line or prefixed to an instruction.

use super::{Insn, Program, REGISTER_COUNT};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AsmError {
    #[error("line {line}: syntax error: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: undefined label {name:?}")]
    UndefinedLabel { line: usize, name: String },
    #[error("line {line}: register {register:?} out of range (r0..r{max})", max = REGISTER_COUNT - 1)]
    RegisterOutOfRange { line: usize, register: String },
}

/// Assemble source text into a validated [`Program`].
pub fn assemble(text: &str) -> Result<Program, AsmError> {
    struct PendingInsn<'a> {
        line: usize,
        mnemonic: String,
        operands: Vec<&'a str>,
    }

    let mut labels: BTreeMap<String, usize> = BTreeMap::new();
    let mut pending: Vec<PendingInsn> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let mut line = raw;
        if let Some(comment) = line.find(';') {
            line = &line[..comment];
        }
        let mut line = line.trim();
        if line.is_empty() {
            continue;
        }
        // Leading labels; several may stack on one line.
        while let Some(colon) = line.find(':') {
            let (candidate, rest) = line.split_at(colon);
            let name = candidate.trim();
            if name.is_empty() || !is_label(name) {
                break;
            }
            if labels.insert(name.to_string(), pending.len()).is_some() {
                return Err(AsmError::Syntax {
                    line: line_no,
                    message: format!("label {name:?} defined twice"),
                });
            }
            line = rest[1..].trim();
        }
        if line.is_empty() {
            continue;
        }
        let (mnemonic, rest) = match line.split_once(char::is_whitespace) {
            Some((m, r)) => (m, r.trim()),
            None => (line, ""),
        };
        let operands: Vec<&str> = if rest.is_empty() {
            Vec::new()
        } else {
            rest.split(',').map(str::trim).collect()
        };
        pending.push(PendingInsn {
            line: line_no,
            mnemonic: mnemonic.to_ascii_uppercase(),
            operands,
        });
    }

    let instruction_count = pending.len();
    let resolve = |name: &str, line: usize| -> Result<usize, AsmError> {
        let target = *labels.get(name).ok_or_else(|| AsmError::UndefinedLabel {
            line,
            name: name.to_string(),
        })?;
        if target >= instruction_count {
            return Err(AsmError::Syntax {
                line,
                message: format!("label {name:?} points past the last instruction"),
            });
        }
        Ok(target)
    };

    let mut insns = Vec::with_capacity(pending.len());
    for p in &pending {
        let line = p.line;
        let need = |n: usize| -> Result<(), AsmError> {
            if p.operands.len() != n {
                return Err(AsmError::Syntax {
                    line,
                    message: format!(
                        "{} expects {n} operand(s), got {}",
                        p.mnemonic,
                        p.operands.len()
                    ),
                });
            }
            Ok(())
        };
        let reg = |s: &str| parse_register(s, line);
        let insn = match p.mnemonic.as_str() {
            "INPUT" => {
                need(1)?;
                Insn::Input {
                    r: reg(p.operands[0])?,
                }
            }
            "LOADI" => {
                need(2)?;
                Insn::LoadImm {
                    r: reg(p.operands[0])?,
                    imm: parse_imm(p.operands[1], line)?,
                }
            }
            "MOV" => {
                need(2)?;
                Insn::Mov {
                    dst: reg(p.operands[0])?,
                    src: reg(p.operands[1])?,
                }
            }
            "ADD" | "SUB" | "MUL" => {
                need(3)?;
                let (dst, a, b) = (
                    reg(p.operands[0])?,
                    reg(p.operands[1])?,
                    reg(p.operands[2])?,
                );
                match p.mnemonic.as_str() {
                    "ADD" => Insn::Add { dst, a, b },
                    "SUB" => Insn::Sub { dst, a, b },
                    _ => Insn::Mul { dst, a, b },
                }
            }
            "BEQ" | "BLT" => {
                need(3)?;
                let (a, b) = (reg(p.operands[0])?, reg(p.operands[1])?);
                let target = resolve(p.operands[2], line)?;
                if p.mnemonic == "BEQ" {
                    Insn::Beq { a, b, target }
                } else {
                    Insn::Blt { a, b, target }
                }
            }
            "JMP" => {
                need(1)?;
                Insn::Jmp {
                    target: resolve(p.operands[0], line)?,
                }
            }
            "JMPR" => {
                need(1)?;
                Insn::JmpR {
                    r: reg(p.operands[0])?,
                }
            }
            "CRASH" => {
                need(1)?;
                let code = parse_imm(p.operands[0], line)?;
                if code > u8::MAX as u64 {
                    return Err(AsmError::Syntax {
                        line,
                        message: format!("crash kind id {code} exceeds 255"),
                    });
                }
                Insn::Crash { code: code as u8 }
            }
            "HALT" => {
                need(0)?;
                Insn::Halt
            }
            other => {
                return Err(AsmError::Syntax {
                    line,
                    message: format!("unknown mnemonic {other:?}"),
                });
            }
        };
        insns.push(insn);
    }

    Ok(Program::from_validated(insns))
}

fn is_label(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn parse_register(s: &str, line: usize) -> Result<u8, AsmError> {
    let lower = s.to_ascii_lowercase();
    let Some(num) = lower.strip_prefix('r') else {
        return Err(AsmError::Syntax {
            line,
            message: format!("expected register, got {s:?}"),
        });
    };
    let idx: u32 = num.parse().map_err(|_| AsmError::Syntax {
        line,
        message: format!("expected register, got {s:?}"),
    })?;
    if idx as usize >= REGISTER_COUNT {
        return Err(AsmError::RegisterOutOfRange {
            line,
            register: s.to_string(),
        });
    }
    Ok(idx as u8)
}

fn parse_imm(s: &str, line: usize) -> Result<u64, AsmError> {
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let value = if let Some(hex) = body.strip_prefix("0x").or_else(|| body.strip_prefix("0X")) {
        u64::from_str_radix(hex, 16)
    } else {
        body.parse::<u64>()
    }
    .map_err(|_| AsmError::Syntax {
        line,
        message: format!("bad immediate {s:?}"),
    })?;
    Ok(if negative {
        value.wrapping_neg()
    } else {
        value
    })
}
