//! Desk-scale benchmark harness: per-case subprocess isolation, PAR-2
//! scoring, and comparison reports with plot-ready CSV data.
//!
//! Each case runs in its own subprocess of this binary under a hard
//! wall-clock kill and an address-space limit the child applies to itself
//! (`IC3MC_MEM_LIMIT`), so a hung SAT query or a memory blowup can never
//! sink the harness. Verdicts only count as solved when the child reports
//! that its own certification (invariant check or trace replay) passed —
//! reports never contain uncertified results.

use crate::config::StrategyKind;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("no records to score")]
    EmptyRecordSet,
    #[error("strategies cover different case sets: {0}")]
    MismatchedCaseSets(String),
    #[error("baseline strategy '{0}' not present in the records")]
    UnknownBaseline(String),
    #[error("records carry different time limits ({0} s vs {1} s)")]
    NonUniformTimeLimit(f64, f64),
    #[error("malformed results row {row}: {reason}")]
    Malformed { row: usize, reason: String },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

/// Outcome class of one benchmark run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunResult {
    Safe,
    Unsafe,
    Timeout,
    MemOut,
    Error,
}

impl RunResult {
    pub fn as_str(self) -> &'static str {
        match self {
            RunResult::Safe => "safe",
            RunResult::Unsafe => "unsafe",
            RunResult::Timeout => "timeout",
            RunResult::MemOut => "memout",
            RunResult::Error => "error",
        }
    }

    pub fn solved(self) -> bool {
        matches!(self, RunResult::Safe | RunResult::Unsafe)
    }
}

impl std::str::FromStr for RunResult {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "safe" => Ok(RunResult::Safe),
            "unsafe" => Ok(RunResult::Unsafe),
            "timeout" => Ok(RunResult::Timeout),
            "memout" => Ok(RunResult::MemOut),
            "error" => Ok(RunResult::Error),
            other => Err(format!("unknown result '{other}'")),
        }
    }
}

/// One case × strategy measurement. `time_limit` is carried per record so a
/// results file is self-describing and uniform limits can be enforced when
/// scoring.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub case_name: String,
    pub strategy: String,
    pub result: RunResult,
    pub wall_time: f64,
    pub queries: u64,
    pub lemmas: u64,
    pub time_limit: f64,
}

/// Per-case resource limits.
#[derive(Debug, Clone, Copy)]
pub struct Limits {
    /// Wall-clock seconds before the subprocess is killed.
    pub time_limit: f64,
    /// Address-space cap in MiB the child applies to itself.
    pub mem_limit_mb: u64,
}

impl Default for Limits {
    fn default() -> Self {
        // Desk-scale defaults; competition-scale 3600 s / 16 GiB is flags away.
        Limits {
            time_limit: 60.0,
            mem_limit_mb: 2048,
        }
    }
}

fn grab_line<'a>(stdout: &'a str, prefix: &str) -> Option<&'a str> {
    stdout
        .lines()
        .find_map(|l| l.strip_prefix(prefix))
        .map(str::trim)
}

fn grab_counter(stats_line: Option<&str>, key: &str) -> u64 {
    stats_line
        .and_then(|l| {
            l.split_whitespace()
                .find_map(|tok| tok.strip_prefix(&format!("{key}=")))
        })
        .and_then(|v| v.parse().ok())
        .unwrap_or(0)
}

/// Runs one case under one strategy in a subprocess of `exe` (this binary),
/// with certification required for a solved verdict. Failures of any kind —
/// spawn, parse, certification, crash — are recorded in the RunRecord, never
/// raised.
pub fn run_single(
    exe: &Path,
    case: &Path,
    strategy: StrategyKind,
    seed: u64,
    limits: &Limits,
) -> RunRecord {
    let case_name = case
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| case.display().to_string());
    let mut record = RunRecord {
        case_name,
        strategy: strategy.name().to_string(),
        result: RunResult::Error,
        wall_time: 0.0,
        queries: 0,
        lemmas: 0,
        time_limit: limits.time_limit,
    };

    let child = Command::new(exe)
        .arg("check")
        .arg(case)
        .arg("--strategy")
        .arg(strategy.name())
        .arg("--certify")
        .arg("--seed")
        .arg(seed.to_string())
        .env("IC3MC_MEM_LIMIT", (limits.mem_limit_mb * 1024 * 1024).to_string())
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn();
    let mut child = match child {
        Ok(c) => c,
        Err(_) => return record, // spawn failure → Error record
    };

    let start = Instant::now();
    let deadline = Duration::from_secs_f64(limits.time_limit);
    let poll = Duration::from_millis(1).max(deadline / 100).min(Duration::from_millis(20));
    let timed_out = loop {
        match child.try_wait() {
            Ok(Some(_)) => break false,
            Ok(None) => {
                if start.elapsed() >= deadline {
                    let _ = child.kill();
                    break true;
                }
                std::thread::sleep(poll);
            }
            Err(_) => {
                let _ = child.kill();
                break false;
            }
        }
    };
    record.wall_time = start.elapsed().as_secs_f64();

    let output = match child.wait_with_output() {
        Ok(o) => o,
        Err(_) => return record,
    };
    if timed_out {
        record.result = RunResult::Timeout;
        return record;
    }

    let stdout = String::from_utf8_lossy(&output.stdout).into_owned();
    let stderr = String::from_utf8_lossy(&output.stderr).into_owned();
    record.queries = grab_counter(grab_line(&stdout, "stats:"), "queries");
    record.lemmas = grab_counter(grab_line(&stdout, "stats:"), "lemmas");

    if output.status.code().is_none() {
        // Killed by a signal we did not send. The standard allocator aborts
        // with this message when the self-applied address-space cap bites.
        record.result = if stderr.contains("memory allocation of") {
            RunResult::MemOut
        } else {
            RunResult::Error
        };
        return record;
    }

    let result_line = grab_line(&stdout, "result:");
    let certified = grab_line(&stdout, "certified:");
    record.result = match (output.status.code(), result_line, certified) {
        (Some(0), Some("safe"), Some("invariant")) => RunResult::Safe,
        (Some(1), Some("unsafe"), Some("trace")) => RunResult::Unsafe,
        // Uncertified or inconsistent output never counts as solved.
        _ => RunResult::Error,
    };
    record
}

/// PAR-2 score: unsolved cases are charged twice the time limit. The mean is
/// the headline number; the sum is printed alongside since both conventions
/// circulate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Par2 {
    pub mean: f64,
    pub sum: f64,
}

pub fn par2(records: &[RunRecord], time_limit: f64) -> Result<Par2, BenchError> {
    if records.is_empty() {
        return Err(BenchError::EmptyRecordSet);
    }
    let sum: f64 = records
        .iter()
        .map(|r| {
            if r.result.solved() {
                r.wall_time
            } else {
                2.0 * time_limit
            }
        })
        .sum();
    Ok(Par2 {
        mean: sum / records.len() as f64,
        sum,
    })
}

/// One table row of a comparison report.
#[derive(Debug, Clone, PartialEq)]
pub struct StrategyRow {
    pub strategy: String,
    pub solved: usize,
    /// Solved-count difference against the baseline strategy.
    pub delta: i64,
    pub par2: Par2,
}

/// Comparison across strategies on a shared case set: a printable table plus
/// CSV blocks for cactus (solved-over-time) and pairwise scatter plots.
#[derive(Debug, Clone, PartialEq)]
pub struct CompareReport {
    pub rows: Vec<StrategyRow>,
    pub table: String,
    pub cactus_csv: String,
    pub scatter_csv: String,
}

/// The PAR-2 charge for one record: its wall time if solved, 2 × limit if not.
fn charged_time(r: &RunRecord, limit: f64) -> f64 {
    if r.result.solved() {
        r.wall_time
    } else {
        2.0 * limit
    }
}

pub fn compare(records: &[RunRecord], baseline: &str) -> Result<CompareReport, BenchError> {
    if records.is_empty() {
        return Err(BenchError::EmptyRecordSet);
    }
    let limit = records[0].time_limit;
    for r in records {
        if r.time_limit != limit {
            return Err(BenchError::NonUniformTimeLimit(limit, r.time_limit));
        }
    }

    // Group by strategy, cases sorted by name within each group.
    let mut groups: BTreeMap<&str, Vec<&RunRecord>> = BTreeMap::new();
    for r in records {
        groups.entry(&r.strategy).or_default().push(r);
    }
    for g in groups.values_mut() {
        g.sort_by(|a, b| a.case_name.cmp(&b.case_name));
    }
    if !groups.contains_key(baseline) {
        return Err(BenchError::UnknownBaseline(baseline.to_string()));
    }
    let case_set: Vec<&str> = groups[baseline].iter().map(|r| r.case_name.as_str()).collect();
    for (name, g) in &groups {
        let cases: Vec<&str> = g.iter().map(|r| r.case_name.as_str()).collect();
        if cases != case_set {
            return Err(BenchError::MismatchedCaseSets(format!(
                "'{baseline}' ran {} cases, '{name}' ran {}",
                case_set.len(),
                cases.len()
            )));
        }
    }

    // Baseline first, remaining strategies alphabetically.
    let mut order: Vec<&str> = groups.keys().copied().filter(|s| *s != baseline).collect();
    order.insert(0, baseline);

    let baseline_solved = groups[baseline].iter().filter(|r| r.result.solved()).count();
    let mut rows = Vec::new();
    for name in &order {
        let g = &groups[name];
        let owned: Vec<RunRecord> = g.iter().map(|r| (*r).clone()).collect();
        let solved = g.iter().filter(|r| r.result.solved()).count();
        rows.push(StrategyRow {
            strategy: name.to_string(),
            solved,
            delta: solved as i64 - baseline_solved as i64,
            par2: par2(&owned, limit)?,
        });
    }

    let mut table = String::new();
    let _ = writeln!(
        table,
        "{:<12} {:>7} {:>6} {:>12} {:>12}",
        "strategy", "solved", "delta", "par2-mean", "par2-sum"
    );
    for row in &rows {
        let _ = writeln!(
            table,
            "{:<12} {:>7} {:>+6} {:>12.3} {:>12.3}",
            row.strategy, row.solved, row.delta, row.par2.mean, row.par2.sum
        );
    }

    // Cactus data: per strategy, solved times ascending with cumulative count.
    let mut cactus_csv = String::from("strategy,solved,wall_time\n");
    for name in &order {
        let mut times: Vec<f64> = groups[name]
            .iter()
            .filter(|r| r.result.solved())
            .map(|r| r.wall_time)
            .collect();
        times.sort_by(f64::total_cmp);
        for (i, t) in times.iter().enumerate() {
            let _ = writeln!(cactus_csv, "{name},{},{t:.3}", i + 1);
        }
    }

    // Scatter data: every non-baseline strategy against the baseline, one
    // point per case; unsolved runs are charged at 2 × limit like PAR-2.
    let mut scatter_csv = String::from("strategy,case,baseline_time,strategy_time\n");
    for name in order.iter().skip(1) {
        for (b, s) in groups[baseline].iter().zip(groups[name].iter()) {
            let _ = writeln!(
                scatter_csv,
                "{name},{},{:.3},{:.3}",
                b.case_name,
                charged_time(b, limit),
                charged_time(s, limit)
            );
        }
    }

    Ok(CompareReport {
        rows,
        table,
        cactus_csv,
        scatter_csv,
    })
}

const CSV_HEADER: [&str; 7] = [
    "case",
    "strategy",
    "result",
    "wall_time",
    "queries",
    "lemmas",
    "time_limit",
];

pub fn write_records(path: &Path, records: &[RunRecord]) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record([
            r.case_name.as_str(),
            r.strategy.as_str(),
            r.result.as_str(),
            &format!("{:.3}", r.wall_time),
            &r.queries.to_string(),
            &r.lemmas.to_string(),
            &format!("{:.3}", r.time_limit),
        ])?;
    }
    w.flush().map_err(BenchError::Io)?;
    Ok(())
}

pub fn read_records(path: &Path) -> Result<Vec<RunRecord>, BenchError> {
    fn field(row: &csv::StringRecord, line: usize, j: usize) -> Result<&str, BenchError> {
        row.get(j).ok_or_else(|| BenchError::Malformed {
            row: line,
            reason: format!("missing column {}", CSV_HEADER[j]),
        })
    }
    fn parse<T: std::str::FromStr>(
        row: &csv::StringRecord,
        line: usize,
        j: usize,
    ) -> Result<T, BenchError> {
        let v = field(row, line, j)?;
        v.parse().map_err(|_| BenchError::Malformed {
            row: line,
            reason: format!("bad {} value '{v}'", CSV_HEADER[j]),
        })
    }

    let mut rd = csv::ReaderBuilder::new().has_headers(true).from_path(path)?;
    let mut records = Vec::new();
    for (i, row) in rd.records().enumerate() {
        let row = row?;
        let line = i + 2; // 1-based, after the header line
        records.push(RunRecord {
            case_name: field(&row, line, 0)?.to_string(),
            strategy: field(&row, line, 1)?.to_string(),
            result: parse(&row, line, 2)?,
            wall_time: parse(&row, line, 3)?,
            queries: parse(&row, line, 4)?,
            lemmas: parse(&row, line, 5)?,
            time_limit: parse(&row, line, 6)?,
        });
    }
    Ok(records)
}

/// Runs `cases × strategies` through subprocesses, up to `jobs` at a time,
/// returning records in (case, strategy) input order regardless of
/// completion order. Progress lines go to `progress` as runs finish.
pub fn run_matrix(
    exe: &Path,
    cases: &[std::path::PathBuf],
    strategies: &[StrategyKind],
    seed: u64,
    limits: &Limits,
    jobs: usize,
    progress: &mut (dyn std::io::Write + Send),
) -> Vec<RunRecord> {
    let jobs = jobs.max(1);
    let work: Vec<(usize, &std::path::PathBuf, StrategyKind)> = cases
        .iter()
        .flat_map(|c| strategies.iter().map(move |&s| (c, s)))
        .enumerate()
        .map(|(i, (c, s))| (i, c, s))
        .collect();
    let mut slots: Vec<Option<RunRecord>> = vec![None; work.len()];

    let next = std::sync::atomic::AtomicUsize::new(0);
    let progress = std::sync::Mutex::new(progress);
    let slot_results = std::sync::Mutex::new(&mut slots);
    std::thread::scope(|scope| {
        for _ in 0..jobs.min(work.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if i >= work.len() {
                    break;
                }
                let (slot, case, strategy) = work[i];
                let record = run_single(exe, case, strategy, seed, limits);
                {
                    let mut p = progress.lock().unwrap();
                    let _ = writeln!(
                        p,
                        "{} {} {} {:.3}s",
                        record.case_name,
                        record.strategy,
                        record.result.as_str(),
                        record.wall_time
                    );
                }
                slot_results.lock().unwrap()[slot] = Some(record);
            });
        }
    });

    slots
        .into_iter()
        .map(|s| s.expect("every work item ran"))
        .collect()
}
