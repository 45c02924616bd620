//! The interpreter: deterministic execution with edge-level coverage.

use super::{Insn, Program, SINK};
use crate::crash::CrashKind;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    Halted,
    Crashed {
        kind: CrashKind,
        at: usize,
    },
    /// Step budget exhausted; not a crash.
    StepLimit,
}

/// One run's outcome: status plus the exercised control-flow edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExecutionOutcome {
    pub status: RunStatus,
    /// Edge multiset: `(from, to) -> times taken`. `to` may be [`SINK`] for
    /// transitions that leave the program (fall-off or wild indirect jump).
    pub edge_counts: BTreeMap<(usize, usize), u64>,
    pub steps: u64,
    /// Bytes actually read from the input; reads past the end yield 0 and do
    /// not count.
    pub input_consumed: usize,
}

impl ExecutionOutcome {
    /// The set view of the exercised edges.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edge_counts.keys().copied()
    }

    pub fn crashed(&self) -> bool {
        matches!(self.status, RunStatus::Crashed { .. })
    }
}

/// Run `program` on `input` with a hard step budget.
///
/// Identical `(program, input)` always produce identical outcomes, including
/// the edge multiset. All failures are in-band statuses, never errors.
pub fn execute(program: &Program, input: &[u8], step_limit: u64) -> ExecutionOutcome {
    debug_assert!(step_limit >= 1);
    let insns = program.insns();
    let len = insns.len();
    let mut regs = [0u64; super::REGISTER_COUNT];
    let mut pc = 0usize;
    let mut cursor = 0usize;
    let mut edge_counts: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    let mut steps = 0u64;

    let record = |from: usize, to: usize, edge_counts: &mut BTreeMap<(usize, usize), u64>| {
        *edge_counts.entry((from, to)).or_insert(0) += 1;
    };

    loop {
        if pc >= len {
            // Falling off the end halts; the transition out was already
            // recorded as an edge to the sink.
            return ExecutionOutcome {
                status: RunStatus::Halted,
                edge_counts,
                steps,
                input_consumed: cursor,
            };
        }
        if steps >= step_limit {
            return ExecutionOutcome {
                status: RunStatus::StepLimit,
                edge_counts,
                steps,
                input_consumed: cursor,
            };
        }
        steps += 1;

        let next = match insns[pc] {
            Insn::Input { r } => {
                regs[r as usize] = match input.get(cursor) {
                    Some(&b) => {
                        cursor += 1;
                        b as u64
                    }
                    None => 0,
                };
                pc + 1
            }
            Insn::LoadImm { r, imm } => {
                regs[r as usize] = imm;
                pc + 1
            }
            Insn::Mov { dst, src } => {
                regs[dst as usize] = regs[src as usize];
                pc + 1
            }
            Insn::Add { dst, a, b } => {
                regs[dst as usize] = regs[a as usize].wrapping_add(regs[b as usize]);
                pc + 1
            }
            Insn::Sub { dst, a, b } => {
                regs[dst as usize] = regs[a as usize].wrapping_sub(regs[b as usize]);
                pc + 1
            }
            Insn::Mul { dst, a, b } => {
                regs[dst as usize] = regs[a as usize].wrapping_mul(regs[b as usize]);
                pc + 1
            }
            Insn::Beq { a, b, target } => {
                if regs[a as usize] == regs[b as usize] {
                    target
                } else {
                    pc + 1
                }
            }
            Insn::Blt { a, b, target } => {
                if regs[a as usize] < regs[b as usize] {
                    target
                } else {
                    pc + 1
                }
            }
            Insn::Jmp { target } => target,
            Insn::JmpR { r } => {
                let value = regs[r as usize];
                if value >= len as u64 {
                    record(pc, SINK, &mut edge_counts);
                    return ExecutionOutcome {
                        status: RunStatus::Crashed {
                            kind: CrashKind::IndirectJumpOutOfRange,
                            at: pc,
                        },
                        edge_counts,
                        steps,
                        input_consumed: cursor,
                    };
                }
                value as usize
            }
            Insn::Crash { code } => {
                return ExecutionOutcome {
                    status: RunStatus::Crashed {
                        kind: CrashKind::from_vm_code(code),
                        at: pc,
                    },
                    edge_counts,
                    steps,
                    input_consumed: cursor,
                };
            }
            Insn::Halt => {
                return ExecutionOutcome {
                    status: RunStatus::Halted,
                    edge_counts,
                    steps,
                    input_consumed: cursor,
                };
            }
        };

        record(pc, if next < len { next } else { SINK }, &mut edge_counts);
        pc = next;
    }
}
