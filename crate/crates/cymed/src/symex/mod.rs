//! Bounded symbolic execution of VM programs: enumerate feasible paths,
//! prove bounded absence of crashes, and flag input-dependent instruction
//! pointers.
//!
//! Honesty over power: the value domain is linear expressions with an
//! `Opaque` escape hatch instead of a general SMT solver, and every place
//! the engine gives up (opaque branch, depth bound, path cap) clears the
//! `exhaustive` flag rather than silently dropping behavior. When
//! `exhaustive` is true, the reported crash sites are *all* of them within
//! the input bound.

mod expr;
mod solve;

pub use expr::{CmpOp, Constraint, LinExpr, PathCondition, SymValue, MAX_INPUT_VARS};
pub use solve::{solve, solve_where, DomainTooLarge};

use crate::crash::CrashKind;
use crate::minivm::{Insn, Program, REGISTER_COUNT};
use std::sync::Mutex;

#[derive(Debug, Clone)]
pub struct SymLimits {
    /// Input model bound; at most [`MAX_INPUT_VARS`].
    pub max_input_bytes: usize,
    pub max_paths: usize,
    /// Symbolic steps per path before truncation.
    pub max_depth: u64,
}

impl Default for SymLimits {
    fn default() -> Self {
        Self {
            max_input_bytes: MAX_INPUT_VARS,
            max_paths: 1024,
            max_depth: 4096,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PathTerminal {
    Halted,
    Crashed { kind: CrashKind, at: usize },
    Truncated,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymPath {
    pub condition: PathCondition,
    pub terminal: PathTerminal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SymFindingKind {
    InputDependentIp,
    ReachableCrash,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymFinding {
    pub kind: SymFindingKind,
    /// Instruction index of the jump or crash site.
    pub at: usize,
    /// Crash kind for `ReachableCrash` findings.
    pub crash_kind: Option<CrashKind>,
    /// Concrete input that reproduces the finding.
    pub witness: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymResult {
    pub paths: Vec<SymPath>,
    pub findings: Vec<SymFinding>,
    /// True iff no path was truncated and no opaque give-up occurred: the
    /// path enumeration is complete within the bound.
    pub exhaustive: bool,
}

#[derive(Clone)]
struct State {
    pc: usize,
    regs: [SymValue; REGISTER_COUNT],
    input_pos: usize,
    cond: PathCondition,
    depth: u64,
}

impl State {
    fn initial() -> Self {
        Self {
            pc: 0,
            regs: [SymValue::constant(0); REGISTER_COUNT],
            input_pos: 0,
            cond: PathCondition::default(),
            depth: 0,
        }
    }
}

struct StepOutput {
    successors: Vec<State>,
    finished: Vec<SymPath>,
    findings: Vec<SymFinding>,
    gave_up: bool,
}

impl StepOutput {
    fn empty() -> Self {
        Self {
            successors: Vec::new(),
            finished: Vec::new(),
            findings: Vec::new(),
            gave_up: false,
        }
    }

    fn terminal(cond: PathCondition, terminal: PathTerminal) -> Self {
        let mut out = Self::empty();
        out.finished.push(SymPath {
            condition: cond,
            terminal,
        });
        out
    }
}

/// Symbolically execute a program within the given bounds.
pub fn sym_execute(program: &Program, limits: &SymLimits) -> SymResult {
    sym_execute_parallel(program, limits, 1)
}

/// Same exploration fanned out over `workers` threads. Results are merged
/// and canonically ordered, so for complete (non-capped) explorations the
/// output is identical for any worker count.
pub fn sym_execute_parallel(program: &Program, limits: &SymLimits, workers: usize) -> SymResult {
    let limits = SymLimits {
        max_input_bytes: limits.max_input_bytes.min(MAX_INPUT_VARS),
        ..limits.clone()
    };
    let workers = workers.max(1);

    struct Shared {
        stack: Vec<State>,
        in_flight: usize,
        paths: Vec<SymPath>,
        findings: Vec<SymFinding>,
        gave_up: bool,
    }

    let shared = Mutex::new(Shared {
        stack: vec![State::initial()],
        in_flight: 0,
        paths: Vec::new(),
        findings: Vec::new(),
        gave_up: false,
    });

    let work = |shared: &Mutex<Shared>| loop {
        let state = {
            let mut guard = shared.lock().expect("symex worklist poisoned");
            if guard.paths.len() >= limits.max_paths {
                // Path budget spent: anything still queued goes unexplored.
                if !guard.stack.is_empty() {
                    guard.gave_up = true;
                    guard.stack.clear();
                }
                if guard.in_flight == 0 {
                    return;
                }
                None
            } else {
                match guard.stack.pop() {
                    Some(s) => {
                        guard.in_flight += 1;
                        Some(s)
                    }
                    None if guard.in_flight == 0 => return,
                    None => None,
                }
            }
        };
        match state {
            Some(state) => {
                let output = step(program, state, &limits);
                let mut guard = shared.lock().expect("symex worklist poisoned");
                guard.in_flight -= 1;
                guard.stack.extend(output.successors);
                guard.paths.extend(output.finished);
                guard.findings.extend(output.findings);
                guard.gave_up |= output.gave_up;
            }
            None => std::thread::yield_now(),
        }
    };

    if workers == 1 {
        work(&shared);
    } else {
        std::thread::scope(|scope| {
            for _ in 0..workers {
                scope.spawn(|| work(&shared));
            }
        });
    }

    let shared = shared.into_inner().expect("symex worklist poisoned");
    canonicalize(shared.paths, shared.findings, shared.gave_up)
}

fn canonicalize(
    mut paths: Vec<SymPath>,
    mut findings: Vec<SymFinding>,
    gave_up: bool,
) -> SymResult {
    // Equal keys imply equal paths, so the merged order is independent of
    // which worker got there first.
    paths.sort_by_key(|p| (p.condition.describe(), terminal_key(&p.terminal)));
    findings.sort_by(|a, b| (a.kind, a.at, &a.witness).cmp(&(b.kind, b.at, &b.witness)));
    findings.dedup_by_key(|f| (f.kind, f.at));
    let exhaustive = !gave_up && paths.iter().all(|p| p.terminal != PathTerminal::Truncated);
    SymResult {
        paths,
        findings,
        exhaustive,
    }
}

fn terminal_key(t: &PathTerminal) -> (u8, usize, String) {
    match t {
        PathTerminal::Halted => (0, 0, String::new()),
        PathTerminal::Crashed { kind, at } => (1, *at, kind.label()),
        PathTerminal::Truncated => (2, 0, String::new()),
    }
}

/// Execute one instruction of one state.
fn step(program: &Program, mut state: State, limits: &SymLimits) -> StepOutput {
    let insns = program.insns();
    let len = insns.len();

    if state.pc >= len {
        return StepOutput::terminal(state.cond, PathTerminal::Halted);
    }
    if state.depth >= limits.max_depth {
        let mut out = StepOutput::terminal(state.cond, PathTerminal::Truncated);
        out.gave_up = true;
        return out;
    }
    state.depth += 1;

    let sat = |cond: &PathCondition| -> Option<Vec<u8>> {
        solve(cond, limits.max_input_bytes).expect("input bound validated at entry")
    };

    match insns[state.pc] {
        Insn::Input { r } => {
            state.regs[r as usize] = if state.input_pos < limits.max_input_bytes {
                SymValue::input_var(state.input_pos)
            } else {
                // Beyond the modeled bytes the VM reads zeros.
                SymValue::constant(0)
            };
            state.input_pos += 1;
            state.pc += 1;
            StepOutput {
                successors: vec![state],
                ..StepOutput::empty()
            }
        }
        Insn::LoadImm { r, imm } => {
            state.regs[r as usize] = SymValue::constant(imm);
            state.pc += 1;
            StepOutput {
                successors: vec![state],
                ..StepOutput::empty()
            }
        }
        Insn::Mov { dst, src } => {
            state.regs[dst as usize] = state.regs[src as usize];
            state.pc += 1;
            StepOutput {
                successors: vec![state],
                ..StepOutput::empty()
            }
        }
        Insn::Add { dst, a, b } => {
            state.regs[dst as usize] = state.regs[a as usize].add(&state.regs[b as usize]);
            state.pc += 1;
            StepOutput {
                successors: vec![state],
                ..StepOutput::empty()
            }
        }
        Insn::Sub { dst, a, b } => {
            state.regs[dst as usize] = state.regs[a as usize].sub(&state.regs[b as usize]);
            state.pc += 1;
            StepOutput {
                successors: vec![state],
                ..StepOutput::empty()
            }
        }
        Insn::Mul { dst, a, b } => {
            state.regs[dst as usize] = state.regs[a as usize].mul(&state.regs[b as usize]);
            state.pc += 1;
            StepOutput {
                successors: vec![state],
                ..StepOutput::empty()
            }
        }
        Insn::Beq { a, b, target } => branch(state, a, b, target, CmpOp::Eq, &sat),
        Insn::Blt { a, b, target } => branch(state, a, b, target, CmpOp::Lt, &sat),
        Insn::Jmp { target } => {
            state.pc = target;
            StepOutput {
                successors: vec![state],
                ..StepOutput::empty()
            }
        }
        Insn::JmpR { r } => indirect_jump(state, r, len, &sat),
        Insn::Crash { code } => {
            let witness = sat(&state.cond).expect("reached states are satisfiable");
            let kind = CrashKind::from_vm_code(code);
            let at = state.pc;
            let mut out = StepOutput::terminal(state.cond, PathTerminal::Crashed { kind, at });
            out.findings.push(SymFinding {
                kind: SymFindingKind::ReachableCrash,
                at,
                crash_kind: Some(kind),
                witness,
            });
            out
        }
        Insn::Halt => StepOutput::terminal(state.cond, PathTerminal::Halted),
    }
}

fn branch(
    state: State,
    a: u8,
    b: u8,
    target: usize,
    op: CmpOp,
    sat: &impl Fn(&PathCondition) -> Option<Vec<u8>>,
) -> StepOutput {
    let va = state.regs[a as usize];
    let vb = state.regs[b as usize];
    let (Some(lhs), Some(rhs)) = (va.as_linear(), vb.as_linear()) else {
        // Opaque condition: neither side can be constrained, give up here.
        let mut out = StepOutput::terminal(state.cond, PathTerminal::Truncated);
        out.gave_up = true;
        return out;
    };
    let (lhs, rhs) = (*lhs, *rhs);

    // Both concrete: a plain step, no constraint recorded.
    if let (Some(x), Some(y)) = (lhs.as_constant(), rhs.as_constant()) {
        let taken = match op {
            CmpOp::Eq => x == y,
            CmpOp::Lt => x < y,
            CmpOp::Ne => x != y,
            CmpOp::Ge => x >= y,
        };
        let mut next = state;
        next.pc = if taken { target } else { next.pc + 1 };
        return StepOutput {
            successors: vec![next],
            ..StepOutput::empty()
        };
    }

    let mut out = StepOutput::empty();
    // Fallthrough first, taken second; order only affects internal
    // exploration, results are canonicalized later.
    let fall_cond = state.cond.with(Constraint {
        lhs,
        op: op.negate(),
        rhs,
    });
    if sat(&fall_cond).is_some() {
        let mut fall = state.clone();
        fall.cond = fall_cond;
        fall.pc += 1;
        out.successors.push(fall);
    }
    let taken_cond = state.cond.with(Constraint { lhs, op, rhs });
    if sat(&taken_cond).is_some() {
        let mut taken = state;
        taken.cond = taken_cond;
        taken.pc = target;
        out.successors.push(taken);
    }
    out
}

fn indirect_jump(
    state: State,
    r: u8,
    len: usize,
    sat: &impl Fn(&PathCondition) -> Option<Vec<u8>>,
) -> StepOutput {
    let value = state.regs[r as usize];
    let Some(expr) = value.as_linear() else {
        let mut out = StepOutput::terminal(state.cond, PathTerminal::Truncated);
        out.gave_up = true;
        return out;
    };
    let expr = *expr;

    // Concrete target: jump or crash, no new constraints.
    if let Some(target) = expr.as_constant() {
        if target >= len as u64 {
            let witness = sat(&state.cond).expect("reached states are satisfiable");
            let at = state.pc;
            let mut out = StepOutput::terminal(
                state.cond,
                PathTerminal::Crashed {
                    kind: CrashKind::IndirectJumpOutOfRange,
                    at,
                },
            );
            out.findings.push(SymFinding {
                kind: SymFindingKind::ReachableCrash,
                at,
                crash_kind: Some(CrashKind::IndirectJumpOutOfRange),
                witness,
            });
            return out;
        }
        let mut next = state;
        next.pc = target as usize;
        return StepOutput {
            successors: vec![next],
            ..StepOutput::empty()
        };
    }

    // The instruction pointer depends on input: a finding in itself.
    let at = state.pc;
    let mut out = StepOutput::empty();
    out.findings.push(SymFinding {
        kind: SymFindingKind::InputDependentIp,
        at,
        crash_kind: None,
        witness: sat(&state.cond).expect("reached states are satisfiable"),
    });

    // Any assignment steering the jump out of range is a concrete crash;
    // `value >= len` is itself a linear constraint, keeping this path
    // disjoint from the in-range forks below.
    let oob_cond = state.cond.with(Constraint {
        lhs: expr,
        op: CmpOp::Ge,
        rhs: LinExpr::constant(len as u64),
    });
    if let Some(witness) = sat(&oob_cond) {
        out.finished.push(SymPath {
            condition: oob_cond,
            terminal: PathTerminal::Crashed {
                kind: CrashKind::IndirectJumpOutOfRange,
                at,
            },
        });
        out.findings.push(SymFinding {
            kind: SymFindingKind::ReachableCrash,
            at,
            crash_kind: Some(CrashKind::IndirectJumpOutOfRange),
            witness,
        });
    }

    // Fork over every in-range target consistent with the path condition.
    for target in 0..len {
        let cond = state.cond.with(Constraint {
            lhs: expr,
            op: CmpOp::Eq,
            rhs: LinExpr::constant(target as u64),
        });
        if sat(&cond).is_some() {
            let mut next = state.clone();
            next.cond = cond;
            next.pc = target;
            out.successors.push(next);
        }
    }
    out
}
