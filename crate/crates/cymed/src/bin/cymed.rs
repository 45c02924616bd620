//! Firmware security scanner CLI.
//!
//! Exit codes: 0 = gate passed, 1 = findings at or above the failure
//! threshold, 2 = tool error (unreadable input, bad arguments, internal
//! failure).

use clap::{Args, Parser, Subcommand};
use cymed::pipeline::{self, GatePolicy, PipelineConfig, PipelineEntry};
use cymed::report::{render_report, ReportFormat, Severity, StageStatus};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

#[derive(Parser)]
#[command(
    name = "cymed",
    version,
    about = "Firmware security analysis pipeline with a CI gate"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Scan a firmware blob, an extracted tree, or a VM program.
    Scan(ScanArgs),
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("entry").required(true).multiple(false))]
struct ScanArgs {
    /// Raw firmware image to carve and analyze.
    #[arg(long, group = "entry")]
    firmware: Option<PathBuf>,

    /// Already-extracted firmware root directory.
    #[arg(long, group = "entry")]
    tree: Option<PathBuf>,

    /// VM assembly program to fuzz and symbolically execute.
    #[arg(long, group = "entry")]
    vm: Option<PathBuf>,

    /// Advisory feed URL or local path. Without it the CVE stage is skipped.
    #[arg(long)]
    feed: Option<String>,

    /// Component detector rules (JSON). Defaults to the built-in set.
    #[arg(long)]
    rules: Option<PathBuf>,

    /// Weak-function table (`category:symbol` lines). Defaults to built-ins.
    #[arg(long)]
    weak_table: Option<PathBuf>,

    /// Known-default password hashes, one per line.
    #[arg(long)]
    default_hashes: Option<PathBuf>,

    /// Never touch the network; serve the feed from cache only.
    #[arg(long)]
    offline: bool,

    /// Wall-clock budget for the fuzzing stage, in seconds.
    #[arg(long, value_name = "SECS")]
    fuzz_budget: Option<u64>,

    /// Execution budget for the fuzzing stage.
    #[arg(long, value_name = "N", default_value_t = 1_000_000)]
    max_execs: u64,

    /// RNG seed; also makes the report byte-reproducible (wall-clock
    /// timings are omitted).
    #[arg(long, value_name = "N")]
    seed: Option<u64>,

    /// Stop fuzzing at the first crash (CI refusal semantics).
    #[arg(long)]
    stop_on_crash: bool,

    /// Minimum severity that fails the gate.
    #[arg(long, value_name = "SEVERITY", default_value = "high")]
    fail_at: String,

    /// Report format.
    #[arg(long, value_name = "FORMAT", default_value = "json")]
    format: String,

    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Directory for crash artifacts (`crashes/<kind>_<location>_<n>.bin`).
    #[arg(long)]
    artifacts_dir: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Scan(args) => match run_scan(args) {
            Ok(code) => ExitCode::from(code),
            Err(message) => {
                eprintln!("error: {message}");
                ExitCode::from(2)
            }
        },
    }
}

fn run_scan(args: ScanArgs) -> Result<u8, String> {
    let entry = match (&args.firmware, &args.tree, &args.vm) {
        (Some(p), None, None) => PipelineEntry::FirmwareBlob(p.clone()),
        (None, Some(p), None) => PipelineEntry::ExtractedTree(p.clone()),
        (None, None, Some(p)) => PipelineEntry::VmProgram(p.clone()),
        _ => return Err("exactly one of --firmware, --tree, --vm is required".into()),
    };

    let fail_at = Severity::parse(&args.fail_at).ok_or_else(|| {
        format!(
            "unknown severity {:?} (critical|high|medium|low|info)",
            args.fail_at
        )
    })?;
    let format = match args.format.as_str() {
        "json" => ReportFormat::Json,
        "text" => ReportFormat::Text,
        other => return Err(format!("unknown format {other:?} (json|text)")),
    };

    let mut config = PipelineConfig::new(entry);
    config.feed_source = args.feed;
    config.rules_path = args.rules;
    config.weak_table_path = args.weak_table;
    if let Some(path) = &args.default_hashes {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read default-hash list {}: {e}", path.display()))?;
        config.secrets_config = config.secrets_config.clone().with_default_hashes(&text);
    }
    config.offline = args.offline;
    config.fuzz_max_execs = args.max_execs;
    config.stop_on_crash = args.stop_on_crash;
    config.artifacts_dir = args.artifacts_dir;
    config.policy = GatePolicy {
        fail_at,
        fuzz_time_budget: args.fuzz_budget.map(Duration::from_secs),
        ..Default::default()
    };
    if let Some(seed) = args.seed {
        config.rng_seed = seed;
        config.deterministic = true;
    }

    let report = pipeline::run_pipeline(&config).map_err(|e| e.to_string())?;

    let rendered = render_report(&report, format);
    match &args.out {
        Some(path) => std::fs::write(path, &rendered)
            .map_err(|e| format!("cannot write report to {}: {e}", path.display()))?,
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(&rendered)
                .map_err(|e| format!("cannot write report: {e}"))?;
        }
    }

    for stage in &report.stages {
        let status = match &stage.status {
            StageStatus::Ran => "ran".to_string(),
            StageStatus::Skipped { reason } => format!("skipped: {reason}"),
            StageStatus::Failed { error } => format!("failed: {error}"),
        };
        eprintln!("[cymed] stage {:<10} {status}", stage.name);
    }
    eprintln!(
        "[cymed] {} finding(s), gate threshold {}",
        report.findings.len(),
        fail_at.label()
    );

    Ok(pipeline::gate(&report, &config.policy) as u8)
}
