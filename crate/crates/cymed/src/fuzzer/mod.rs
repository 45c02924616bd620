//! Coverage-guided mutational fuzzing over pluggable targets.
//!
//! The loop keeps any input whose coverage signature raised a bucket class
//! (black-box targets fall back to output-length novelty, documented as
//! strictly weaker), schedules retained entries by energy, and dedups
//! crashes by `(kind, location)`. With a fixed seed and a single worker the
//! whole campaign replays byte-identically.

mod corpus;
mod coverage;
mod mutate;
mod rng;
mod target;

pub use corpus::{Corpus, CorpusEntry, EmptyCorpus};
pub use coverage::{bucket_class, edge_id, CoverageMap, RunCoverage, MAP_SIZE};
pub use mutate::{mutate, MutationStage};
pub use rng::Rng;
pub use target::{FuzzTarget, RunResult, SubprocessTarget, TargetError, Verdict, VmTarget};

use crate::crash::CrashKind;
use std::collections::BTreeSet;
use std::path::PathBuf;
use std::time::{Duration, Instant};

#[derive(Debug, Clone)]
pub struct CampaignConfig {
    pub max_execs: u64,
    pub time_budget: Option<Duration>,
    pub rng_seed: u64,
    /// Stop at the first crash (CI refusal semantics).
    pub stop_on_crash: bool,
    pub max_input_len: usize,
    /// When false, coverage feedback is ignored and mutation draws from the
    /// seeds alone (the "pure random" baseline).
    pub coverage_guided: bool,
    /// Minimize crashing inputs after the campaign.
    pub minimize: bool,
    /// Where to write `crashes/<kind>_<location>_<n>.bin` artifacts.
    pub artifacts_dir: Option<PathBuf>,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        Self {
            max_execs: 1_000_000,
            time_budget: None,
            rng_seed: 0,
            stop_on_crash: false,
            max_input_len: 4096,
            coverage_guided: true,
            minimize: true,
            artifacts_dir: None,
        }
    }
}

/// An observed, deduplicated crash.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrashRecord {
    pub input: Vec<u8>,
    pub kind: CrashKind,
    pub location: u64,
    /// Execution index (1-based) of the discovering run.
    pub discovered_at_exec: u64,
    pub minimized: bool,
    pub artifact: Option<PathBuf>,
}

#[derive(Debug, Clone, Default)]
pub struct CampaignStats {
    pub execs: u64,
    pub execs_per_sec: f64,
    pub corpus_size: usize,
    pub crashes: usize,
    pub hangs: u64,
    pub minimization_execs: u64,
    pub elapsed: Duration,
}

impl CampaignStats {
    /// The wire form: `{execs, execs_per_sec, corpus_size, crashes, hangs}`.
    pub fn to_json(&self) -> String {
        format!(
            r#"{{"execs":{},"execs_per_sec":{:.1},"corpus_size":{},"crashes":{},"hangs":{}}}"#,
            self.execs, self.execs_per_sec, self.corpus_size, self.crashes, self.hangs
        )
    }
}

#[derive(Debug)]
pub struct CampaignResult {
    pub corpus: Corpus,
    pub crashes: Vec<CrashRecord>,
    pub stats: CampaignStats,
}

/// Run a fuzzing campaign until the execution or time budget is spent (or
/// the first crash under `stop_on_crash`).
pub fn run_campaign(
    target: &mut dyn FuzzTarget,
    seeds: &[Vec<u8>],
    config: &CampaignConfig,
) -> Result<CampaignResult, TargetError> {
    let started = Instant::now();
    let mut rng = Rng::seeded(config.rng_seed);
    let mut corpus = Corpus::new();
    let mut crashes: Vec<CrashRecord> = Vec::new();
    let mut seen_crash_keys: BTreeSet<(CrashKind, u64)> = BTreeSet::new();
    let mut length_buckets: BTreeSet<u32> = BTreeSet::new();
    let mut hangs = 0u64;
    let mut execs = 0u64;

    let default_seeds = vec![Vec::new()];
    let seeds: &[Vec<u8>] = if seeds.is_empty() {
        &default_seeds
    } else {
        seeds
    };

    let budget_left = |execs: u64| -> bool {
        if execs >= config.max_execs {
            return false;
        }
        match config.time_budget {
            Some(budget) => started.elapsed() < budget,
            None => true,
        }
    };

    // Seed runs: everything novel gets retained; in random mode the seeds
    // simply form the immutable corpus.
    for seed in seeds {
        if !budget_left(execs) {
            break;
        }
        let result = target.run(seed)?;
        execs += 1;
        observe(
            seed,
            &result,
            execs,
            config,
            &mut corpus,
            &mut length_buckets,
            &mut crashes,
            &mut seen_crash_keys,
            &mut hangs,
            true,
        );
        if config.stop_on_crash && !crashes.is_empty() {
            break;
        }
    }

    // Seeds that crash or hang are not retained; keep the first seed anyway
    // so mutation has a base to work from.
    if corpus.is_empty() {
        corpus.insert(CorpusEntry {
            input: seeds[0].clone(),
            signature: Vec::new(),
            cost: 1,
            found_at_exec: 0,
        });
    }

    let stages = [
        MutationStage::BitFlip,
        MutationStage::ByteFlip,
        MutationStage::Arith,
        MutationStage::Interesting,
        MutationStage::Havoc,
        MutationStage::Havoc,
        MutationStage::Havoc,
        MutationStage::Splice,
    ];

    while budget_left(execs) && !(config.stop_on_crash && !crashes.is_empty()) {
        // Half the time work the newest entry (the coverage frontier), half
        // the time draw by energy so nothing starves.
        let base_idx = if config.coverage_guided && rng.coin() {
            corpus.len() - 1
        } else {
            corpus
                .select_next(&mut rng)
                .expect("corpus holds at least the seeds")
        };
        let mut stage = *rng.pick(&stages);
        let other_idx = rng.below_usize(corpus.len());
        let (base, other) = (
            corpus.entries()[base_idx].input.clone(),
            corpus.entries()[other_idx].input.clone(),
        );
        if base.is_empty() {
            // Positional stages cannot grow an empty input.
            stage = MutationStage::Havoc;
        }
        let input = mutate(&base, &mut rng, stage, Some(&other), config.max_input_len);

        let result = target.run(&input)?;
        execs += 1;
        observe(
            &input,
            &result,
            execs,
            config,
            &mut corpus,
            &mut length_buckets,
            &mut crashes,
            &mut seen_crash_keys,
            &mut hangs,
            false,
        );
    }

    let mut minimization_execs = 0u64;
    if config.minimize {
        for record in &mut crashes {
            let (smaller, spent) =
                minimize_crash(target, &record.input, record.kind, record.location)?;
            minimization_execs += spent;
            record.input = smaller;
            record.minimized = true;
        }
    }

    if let Some(dir) = &config.artifacts_dir {
        write_artifacts(dir, &mut crashes)?;
    }

    corpus.total_execs = execs;
    let elapsed = started.elapsed();
    let stats = CampaignStats {
        execs,
        execs_per_sec: if elapsed.as_secs_f64() > 0.0 {
            execs as f64 / elapsed.as_secs_f64()
        } else {
            0.0
        },
        corpus_size: corpus.len(),
        crashes: crashes.len(),
        hangs,
        minimization_execs,
        elapsed,
    };
    Ok(CampaignResult {
        corpus,
        crashes,
        stats,
    })
}

#[allow(clippy::too_many_arguments)]
fn observe(
    input: &[u8],
    result: &RunResult,
    execs: u64,
    config: &CampaignConfig,
    corpus: &mut Corpus,
    length_buckets: &mut BTreeSet<u32>,
    crashes: &mut Vec<CrashRecord>,
    seen_crash_keys: &mut BTreeSet<(CrashKind, u64)>,
    hangs: &mut u64,
    is_seed: bool,
) {
    match &result.verdict {
        Verdict::Ok => {
            if !config.coverage_guided {
                // Feedback disabled: only the seeds are retained.
                if is_seed {
                    corpus.insert(CorpusEntry {
                        input: input.to_vec(),
                        signature: Vec::new(),
                        cost: result.cost,
                        found_at_exec: execs,
                    });
                }
                return;
            }
            match &result.coverage {
                Some(cov) => {
                    if corpus.map.classify_and_merge(cov) {
                        corpus.insert(CorpusEntry {
                            input: input.to_vec(),
                            signature: cov.signature(),
                            cost: result.cost,
                            found_at_exec: execs,
                        });
                    }
                }
                None => {
                    // Black-box: novelty = unseen output-length bucket.
                    let bucket = usize::BITS - result.output_len.leading_zeros();
                    if length_buckets.insert(bucket) || is_seed {
                        corpus.insert(CorpusEntry {
                            input: input.to_vec(),
                            signature: vec![(bucket as u16, 1)],
                            cost: result.cost,
                            found_at_exec: execs,
                        });
                    }
                }
            }
        }
        Verdict::Crash { kind, location } => {
            if seen_crash_keys.insert((*kind, *location)) {
                crashes.push(CrashRecord {
                    input: input.to_vec(),
                    kind: *kind,
                    location: *location,
                    discovered_at_exec: execs,
                    minimized: false,
                    artifact: None,
                });
            }
        }
        Verdict::Hang => *hangs += 1,
    }
}

/// Greedy chunk removal, halving chunk sizes down to single bytes, keeping
/// any removal that still reproduces the same `(kind, location)`.
fn minimize_crash(
    target: &mut dyn FuzzTarget,
    input: &[u8],
    kind: CrashKind,
    location: u64,
) -> Result<(Vec<u8>, u64), TargetError> {
    const MINIMIZE_BUDGET: u64 = 10_000;
    let mut current = input.to_vec();
    let mut spent = 0u64;

    let mut reproduces = |candidate: &[u8], spent: &mut u64| -> Result<bool, TargetError> {
        *spent += 1;
        let result = target.run(candidate)?;
        Ok(
            matches!(result.verdict, Verdict::Crash { kind: k, location: l } if k == kind && l == location),
        )
    };

    let mut chunk = (current.len() / 2).max(1);
    while !current.is_empty() && spent < MINIMIZE_BUDGET {
        let mut changed = false;
        let mut pos = 0;
        while pos < current.len() && spent < MINIMIZE_BUDGET {
            let end = (pos + chunk).min(current.len());
            let mut candidate = current[..pos].to_vec();
            candidate.extend_from_slice(&current[end..]);
            if reproduces(&candidate, &mut spent)? {
                current = candidate;
                changed = true;
                continue; // same pos, shorter input
            }
            pos += chunk;
        }
        if chunk == 1 {
            if !changed {
                break;
            }
        } else {
            chunk = (chunk / 2).max(1);
        }
    }
    Ok((current, spent))
}

/// Multi-worker campaign: `worker_count` loops share the coverage map and
/// corpus behind a lock; coverage merges and corpus insertions are atomic
/// per tick. Each worker runs its own target instance and RNG lane.
/// Multi-worker runs trade reproducibility for throughput — only the
/// single-worker seeded mode replays identically, so `worker_count == 1`
/// simply delegates to [`run_campaign`].
pub fn run_campaign_workers<T, F>(
    make_target: F,
    seeds: &[Vec<u8>],
    config: &CampaignConfig,
    worker_count: usize,
) -> Result<CampaignResult, TargetError>
where
    T: FuzzTarget,
    F: Fn(usize) -> Result<T, TargetError> + Sync,
{
    if worker_count <= 1 {
        let mut target = make_target(0)?;
        return run_campaign(&mut target, seeds, config);
    }

    struct SharedCampaign {
        corpus: Corpus,
        crashes: Vec<CrashRecord>,
        seen_crash_keys: BTreeSet<(CrashKind, u64)>,
        length_buckets: BTreeSet<u32>,
        hangs: u64,
        execs: u64,
        stop: bool,
        error: Option<String>,
    }

    let started = Instant::now();
    let shared = std::sync::Mutex::new(SharedCampaign {
        corpus: Corpus::new(),
        crashes: Vec::new(),
        seen_crash_keys: BTreeSet::new(),
        length_buckets: BTreeSet::new(),
        hangs: 0,
        execs: 0,
        stop: false,
        error: None,
    });

    let default_seeds = vec![Vec::new()];
    let seeds: &[Vec<u8>] = if seeds.is_empty() {
        &default_seeds
    } else {
        seeds
    };

    // Seed runs happen once, on worker 0's target, before the pool starts.
    {
        let mut target = make_target(0)?;
        let mut guard = shared.lock().expect("campaign state poisoned");
        for seed in seeds {
            let result = target.run(seed)?;
            guard.execs += 1;
            let execs = guard.execs;
            let g = &mut *guard;
            observe(
                seed,
                &result,
                execs,
                config,
                &mut g.corpus,
                &mut g.length_buckets,
                &mut g.crashes,
                &mut g.seen_crash_keys,
                &mut g.hangs,
                true,
            );
        }
        if guard.corpus.is_empty() {
            guard.corpus.insert(CorpusEntry {
                input: seeds[0].clone(),
                signature: Vec::new(),
                cost: 1,
                found_at_exec: 0,
            });
        }
    }

    let stages = [
        MutationStage::BitFlip,
        MutationStage::ByteFlip,
        MutationStage::Arith,
        MutationStage::Interesting,
        MutationStage::Havoc,
        MutationStage::Havoc,
        MutationStage::Havoc,
        MutationStage::Splice,
    ];

    std::thread::scope(|scope| {
        for worker in 0..worker_count {
            let shared = &shared;
            let make_target = &make_target;
            let stages = &stages;
            scope.spawn(move || {
                let mut rng = Rng::seeded(config.rng_seed).fork(worker as u64 + 1);
                let mut target = match make_target(worker) {
                    Ok(t) => t,
                    Err(e) => {
                        let mut guard = shared.lock().expect("campaign state poisoned");
                        guard.error = Some(e.to_string());
                        guard.stop = true;
                        return;
                    }
                };
                loop {
                    // Tick: snapshot a base under the lock.
                    let (base, other) = {
                        let mut guard = shared.lock().expect("campaign state poisoned");
                        if guard.stop
                            || guard.execs >= config.max_execs
                            || config
                                .time_budget
                                .map(|b| started.elapsed() >= b)
                                .unwrap_or(false)
                            || (config.stop_on_crash && !guard.crashes.is_empty())
                        {
                            guard.stop = true;
                            return;
                        }
                        let base_idx = if config.coverage_guided && rng.coin() {
                            guard.corpus.len() - 1
                        } else {
                            guard
                                .corpus
                                .select_next(&mut rng)
                                .expect("corpus holds at least the seeds")
                        };
                        let other_idx = rng.below_usize(guard.corpus.len());
                        (
                            guard.corpus.entries()[base_idx].input.clone(),
                            guard.corpus.entries()[other_idx].input.clone(),
                        )
                    };

                    let mut stage = *rng.pick(stages);
                    if base.is_empty() {
                        stage = MutationStage::Havoc;
                    }
                    let input = mutate(&base, &mut rng, stage, Some(&other), config.max_input_len);

                    // Execute without holding the lock.
                    let result = match target.run(&input) {
                        Ok(r) => r,
                        Err(e) => {
                            let mut guard = shared.lock().expect("campaign state poisoned");
                            guard.error = Some(e.to_string());
                            guard.stop = true;
                            return;
                        }
                    };

                    // Merge atomically.
                    let mut guard = shared.lock().expect("campaign state poisoned");
                    guard.execs += 1;
                    let execs = guard.execs;
                    let g = &mut *guard;
                    observe(
                        &input,
                        &result,
                        execs,
                        config,
                        &mut g.corpus,
                        &mut g.length_buckets,
                        &mut g.crashes,
                        &mut g.seen_crash_keys,
                        &mut g.hangs,
                        false,
                    );
                }
            });
        }
    });

    let state = shared.into_inner().expect("campaign state poisoned");
    if let Some(error) = state.error {
        return Err(TargetError::Unavailable(error));
    }
    let mut corpus = state.corpus;
    let mut crashes = state.crashes;
    crashes.sort_by_key(|c| (c.discovered_at_exec, c.kind, c.location));

    let mut minimization_execs = 0u64;
    if config.minimize {
        let mut target = make_target(0)?;
        for record in &mut crashes {
            let (smaller, spent) =
                minimize_crash(&mut target, &record.input, record.kind, record.location)?;
            minimization_execs += spent;
            record.input = smaller;
            record.minimized = true;
        }
    }
    if let Some(dir) = &config.artifacts_dir {
        write_artifacts(dir, &mut crashes)?;
    }

    corpus.total_execs = state.execs;
    let elapsed = started.elapsed();
    let stats = CampaignStats {
        execs: state.execs,
        execs_per_sec: if elapsed.as_secs_f64() > 0.0 {
            state.execs as f64 / elapsed.as_secs_f64()
        } else {
            0.0
        },
        corpus_size: corpus.len(),
        crashes: crashes.len(),
        hangs: state.hangs,
        minimization_execs,
        elapsed,
    };
    Ok(CampaignResult {
        corpus,
        crashes,
        stats,
    })
}

fn write_artifacts(dir: &std::path::Path, crashes: &mut [CrashRecord]) -> Result<(), TargetError> {
    let crash_dir = dir.join("crashes");
    std::fs::create_dir_all(&crash_dir)
        .map_err(|e| TargetError::Unavailable(format!("cannot create artifact dir: {e}")))?;
    for (n, record) in crashes.iter_mut().enumerate() {
        let path = crash_dir.join(format!(
            "{}_{}_{n}.bin",
            record.kind.label(),
            record.location
        ));
        std::fs::write(&path, &record.input)
            .map_err(|e| TargetError::Unavailable(format!("cannot write artifact: {e}")))?;
        record.artifact = Some(path);
    }
    Ok(())
}
