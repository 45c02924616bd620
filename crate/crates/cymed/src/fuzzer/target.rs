//! Pluggable execution targets: the instrumented VM and black-box
//! subprocesses.

use super::coverage::RunCoverage;
use crate::crash::CrashKind;
use crate::minivm::{execute, Program, RunStatus};
use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Ok,
    Crash { kind: CrashKind, location: u64 },
    Hang,
}

/// What one execution produced.
#[derive(Debug, Clone)]
pub struct RunResult {
    pub verdict: Verdict,
    /// Present for instrumented targets, absent in black-box mode.
    pub coverage: Option<RunCoverage>,
    /// Deterministic cost for instrumented targets (VM steps), wall-clock
    /// micros for subprocesses.
    pub cost: u64,
    /// Observable output size, the only feedback black-box mode has.
    pub output_len: usize,
}

#[derive(Debug, Error)]
pub enum TargetError {
    #[error("target unavailable: {0}")]
    Unavailable(String),
}

pub trait FuzzTarget {
    fn run(&mut self, input: &[u8]) -> Result<RunResult, TargetError>;
    fn describe(&self) -> String;
}

/// Instrumented MiniVM target; always supplies edge coverage.
pub struct VmTarget {
    program: Program,
    step_limit: u64,
}

impl VmTarget {
    pub fn new(program: Program, step_limit: u64) -> Self {
        Self {
            program,
            step_limit,
        }
    }

    pub fn program(&self) -> &Program {
        &self.program
    }
}

impl FuzzTarget for VmTarget {
    fn run(&mut self, input: &[u8]) -> Result<RunResult, TargetError> {
        let outcome = execute(&self.program, input, self.step_limit);
        let verdict = match outcome.status {
            RunStatus::Halted => Verdict::Ok,
            RunStatus::Crashed { kind, at } => Verdict::Crash {
                kind,
                location: at as u64,
            },
            // Step-limit exhaustion is the VM's notion of a hang.
            RunStatus::StepLimit => Verdict::Hang,
        };
        Ok(RunResult {
            verdict,
            coverage: Some(RunCoverage::from_edge_counts(outcome.edge_counts.iter())),
            cost: outcome.steps,
            output_len: 0,
        })
    }

    fn describe(&self) -> String {
        format!("minivm program ({} instructions)", self.program.len())
    }
}

/// Black-box subprocess target: a command template where `@@` is replaced by
/// the input file path; without `@@`, input arrives on stdin. Crash
/// detection is via abnormal termination, there is no coverage.
pub struct SubprocessTarget {
    argv: Vec<String>,
    timeout: Duration,
    scratch_dir: PathBuf,
    counter: u64,
}

impl SubprocessTarget {
    pub fn new(
        argv: Vec<String>,
        timeout: Duration,
        scratch_dir: PathBuf,
    ) -> Result<Self, TargetError> {
        if argv.is_empty() {
            return Err(TargetError::Unavailable("empty command template".into()));
        }
        std::fs::create_dir_all(&scratch_dir)
            .map_err(|e| TargetError::Unavailable(format!("cannot create scratch dir: {e}")))?;
        Ok(Self {
            argv,
            timeout,
            scratch_dir,
            counter: 0,
        })
    }

    fn uses_file_placeholder(&self) -> bool {
        self.argv.iter().any(|a| a.contains("@@"))
    }
}

impl FuzzTarget for SubprocessTarget {
    fn run(&mut self, input: &[u8]) -> Result<RunResult, TargetError> {
        self.counter += 1;
        let input_path = self
            .scratch_dir
            .join(format!("input_{}.bin", self.counter % 2));
        let via_file = self.uses_file_placeholder();
        if via_file {
            std::fs::write(&input_path, input)
                .map_err(|e| TargetError::Unavailable(format!("cannot write input file: {e}")))?;
        }

        let argv: Vec<String> = self
            .argv
            .iter()
            .map(|a| a.replace("@@", &input_path.to_string_lossy()))
            .collect();
        let started = Instant::now();
        let mut child = Command::new(&argv[0])
            .args(&argv[1..])
            .stdin(if via_file {
                Stdio::null()
            } else {
                Stdio::piped()
            })
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()
            .map_err(|e| TargetError::Unavailable(format!("cannot spawn {}: {e}", argv[0])))?;

        if !via_file {
            if let Some(mut stdin) = child.stdin.take() {
                // A target that closes stdin early is fine; ignore EPIPE.
                let _ = stdin.write_all(input);
            }
        }

        let status = loop {
            match child.try_wait() {
                Ok(Some(status)) => break Some(status),
                Ok(None) => {
                    if started.elapsed() >= self.timeout {
                        let _ = child.kill();
                        let _ = child.wait();
                        break None;
                    }
                    std::thread::sleep(Duration::from_millis(1));
                }
                Err(e) => return Err(TargetError::Unavailable(format!("wait failed: {e}"))),
            }
        };
        let cost = started.elapsed().as_micros() as u64;

        let mut output_len = 0usize;
        if let Some(mut out) = child.stdout.take() {
            let mut buf = Vec::new();
            if std::io::Read::read_to_end(&mut out, &mut buf).is_ok() {
                output_len += buf.len();
            }
        }
        if let Some(mut err) = child.stderr.take() {
            let mut buf = Vec::new();
            if std::io::Read::read_to_end(&mut err, &mut buf).is_ok() {
                output_len += buf.len();
            }
        }

        let verdict = match status {
            None => Verdict::Hang,
            Some(status) => {
                if status.success() || status.code().is_some() {
                    // Normal exit, any code: the process chose to exit.
                    Verdict::Ok
                } else {
                    let signal = exit_signal(&status).unwrap_or(0);
                    Verdict::Crash {
                        kind: CrashKind::from_signal(signal),
                        location: signal as u64,
                    }
                }
            }
        };
        Ok(RunResult {
            verdict,
            coverage: None,
            cost,
            output_len,
        })
    }

    fn describe(&self) -> String {
        format!("subprocess `{}`", self.argv.join(" "))
    }
}

#[cfg(unix)]
fn exit_signal(status: &std::process::ExitStatus) -> Option<i32> {
    std::os::unix::process::ExitStatusExt::signal(status)
}

#[cfg(not(unix))]
fn exit_signal(_status: &std::process::ExitStatus) -> Option<i32> {
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minivm::assemble;

    #[test]
    fn vm_target_reports_coverage_and_crashes() {
        let program = assemble("INPUT r0\nJMPR r0").unwrap();
        let mut target = VmTarget::new(program, 1000);
        let result = target.run(&[200]).unwrap();
        assert!(matches!(
            result.verdict,
            Verdict::Crash {
                kind: CrashKind::IndirectJumpOutOfRange,
                location: 1
            }
        ));
        assert!(result.coverage.is_some());
    }

    #[test]
    fn vm_step_limit_is_a_hang() {
        let program = assemble("loop: JMP loop").unwrap();
        let mut target = VmTarget::new(program, 100);
        assert_eq!(target.run(&[]).unwrap().verdict, Verdict::Hang);
    }

    #[cfg(unix)]
    #[test]
    fn subprocess_normal_exit_is_ok() {
        let dir = std::env::temp_dir().join(format!("cymed-subproc-{}", std::process::id()));
        let mut target = SubprocessTarget::new(
            vec!["/bin/cat".into(), "@@".into()],
            Duration::from_secs(2),
            dir.clone(),
        )
        .unwrap();
        let result = target.run(b"hello").unwrap();
        assert_eq!(result.verdict, Verdict::Ok);
        assert!(result.coverage.is_none());
        assert_eq!(result.output_len, 5);
        std::fs::remove_dir_all(&dir).ok();
    }

    #[cfg(unix)]
    #[test]
    fn subprocess_missing_binary_is_unavailable() {
        let dir = std::env::temp_dir().join(format!("cymed-subproc-miss-{}", std::process::id()));
        let mut target = SubprocessTarget::new(
            vec!["/definitely/not/a/binary".into()],
            Duration::from_secs(1),
            dir.clone(),
        )
        .unwrap();
        assert!(target.run(b"x").is_err());
        std::fs::remove_dir_all(&dir).ok();
    }

    #[cfg(unix)]
    #[test]
    fn subprocess_signal_death_is_a_crash() {
        let dir = std::env::temp_dir().join(format!("cymed-subproc-kill-{}", std::process::id()));
        // The shell kills itself with SIGSEGV (11).
        let mut target = SubprocessTarget::new(
            vec!["/bin/sh".into(), "-c".into(), "kill -SEGV $$".into()],
            Duration::from_secs(2),
            dir.clone(),
        )
        .unwrap();
        let result = target.run(b"").unwrap();
        assert_eq!(
            result.verdict,
            Verdict::Crash {
                kind: CrashKind::SegmentationRead,
                location: 11
            }
        );
        std::fs::remove_dir_all(&dir).ok();
    }
}
