//! Command-line entry point: single-file checking, the benchmark runner,
//! and the results reporter.
//!
//! Exit codes for `check`: 0 safe, 1 unsafe, 2 unknown or error. `bench` and
//! `report` exit 0 on success and 2 on any harness error.

use clap::{Args, Parser, Subcommand};
use ic3mc::aiger::parse_aiger;
use ic3mc::bench::{self, Limits};
use ic3mc::certify::{check_invariant, replay_trace};
use ic3mc::config::{DropOrder, EngineOptions, StrategyConfig, StrategyKind};
use ic3mc::engine::{Engine, Verdict};
use ic3mc::logic::{Clause, Cube, Var};
use ic3mc::tracelog::TraceWriter;
use ic3mc::transys::{encode_transition, to_dimacs, to_transition_system, TransitionSystem};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

#[derive(Parser)]
#[command(
    name = "ic3mc",
    about = "SAT-based safety model checker for AIGER circuits (IC3/PDR)"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check one AIGER file and report safe/unsafe.
    Check(CheckArgs),
    /// Run every strategy over a directory of .aag files, one subprocess per
    /// case, and write a results CSV.
    Bench(BenchArgs),
    /// Score a results CSV: solved counts, PAR-2, cactus and scatter data.
    Report(ReportArgs),
}

#[derive(Args)]
struct CheckArgs {
    /// AIGER file (ASCII .aag).
    file: PathBuf,
    /// Generalization strategy: standard | ctg | exctg | dynamic.
    #[arg(long, default_value = "standard", value_parser = StrategyKind::from_str)]
    strategy: StrategyKind,
    /// Max consecutive blocked counterexamples-to-generalization (CTG_MAX).
    #[arg(long)]
    ctg_max: Option<u32>,
    /// Nested generalization recursion level (CTG_LV).
    #[arg(long)]
    ctg_lv: Option<u32>,
    /// Recursive blocking budget per predecessor attempt (EXCTG_LIMIT).
    #[arg(long)]
    exctg_limit: Option<u32>,
    /// Dynamic strategy: activity threshold entering the ctg regime.
    #[arg(long)]
    ctg_th: Option<u32>,
    /// Dynamic strategy: activity threshold entering the exctg regime.
    #[arg(long)]
    exctg_th: Option<u32>,
    /// Re-verify the verdict in-process (invariant check or trace replay).
    #[arg(long)]
    certify: bool,
    /// Write a stimulus witness ("1"/input lines for unsafe, "0" for safe).
    #[arg(long)]
    witness: Option<PathBuf>,
    /// Write the inductive invariant clauses when the result is safe.
    #[arg(long)]
    invariant: Option<PathBuf>,
    /// Write the SAT-query/lemma/obligation run trace to a file.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Dump the transition-relation CNF as DIMACS and exit.
    #[arg(long)]
    dump_cnf: Option<PathBuf>,
    /// Solver seed (deterministic for any fixed value). The IC3MC_SEED
    /// environment variable overrides this flag.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Literal drop order in generalization: asc | desc | act.
    #[arg(long, default_value = "asc", value_parser = DropOrder::from_str)]
    drop_order: DropOrder,
    /// Re-check the frame invariants after every major iteration.
    #[arg(long)]
    audit_frames: bool,
}

#[derive(Args)]
struct BenchArgs {
    /// Directory of .aag benchmark cases.
    dir: PathBuf,
    /// Comma-separated strategies to run.
    #[arg(long, default_value = "standard,ctg,exctg,dynamic")]
    strategies: String,
    /// Per-case wall-clock limit in seconds.
    #[arg(long, default_value_t = 60.0)]
    time_limit: f64,
    /// Per-case address-space limit in MiB.
    #[arg(long, default_value_t = 2048)]
    mem_limit: u64,
    /// Concurrent case subprocesses (1 preserves timing fidelity).
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Solver seed passed to every case.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output CSV path.
    #[arg(long, default_value = "results.csv")]
    out: PathBuf,
}

#[derive(Args)]
struct ReportArgs {
    /// Results CSV produced by `bench`.
    file: PathBuf,
    /// Strategy name the delta column is measured against.
    #[arg(long)]
    baseline: String,
    /// Directory for cactus.csv and scatter.csv (default: next to the input).
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

fn main() -> ExitCode {
    apply_mem_limit_from_env();
    match Cli::parse().cmd {
        Cmd::Check(args) => run_check(&args),
        Cmd::Bench(args) => run_bench(&args),
        Cmd::Report(args) => run_report(&args),
    }
}

/// Benchmark children run under an address-space cap they apply to
/// themselves, so the harness needs no privileges. Best-effort: a failure to
/// set the limit only means the run is uncapped.
fn apply_mem_limit_from_env() {
    if let Some(bytes) = std::env::var("IC3MC_MEM_LIMIT")
        .ok()
        .and_then(|v| v.parse::<u64>().ok())
    {
        let lim = libc::rlimit {
            rlim_cur: bytes,
            rlim_max: bytes,
        };
        unsafe {
            libc::setrlimit(libc::RLIMIT_AS, &lim);
        }
    }
}

fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn run_check(args: &CheckArgs) -> ExitCode {
    let bytes = match std::fs::read(&args.file) {
        Ok(b) => b,
        Err(e) => return fail(format_args!("{}: {e}", args.file.display())),
    };
    let circuit = match parse_aiger(&bytes) {
        Ok(c) => c,
        Err(e) => return fail(format_args!("{}: {e}", args.file.display())),
    };
    let ts = match to_transition_system(&circuit) {
        Ok(ts) => ts,
        Err(e) => return fail(format_args!("{}: {e}", args.file.display())),
    };

    if let Some(path) = &args.dump_cnf {
        let cnf = encode_transition(&ts);
        if let Err(e) = std::fs::write(path, to_dimacs(&ts, &cnf)) {
            return fail(format_args!("{}: {e}", path.display()));
        }
        println!("wrote {}", path.display());
        return ExitCode::SUCCESS;
    }

    let mut cfg = StrategyConfig::new(args.strategy);
    if let Some(v) = args.ctg_max {
        cfg.ctg_max = v;
    }
    if let Some(v) = args.ctg_lv {
        cfg.ctg_lv = v;
    }
    if let Some(v) = args.exctg_limit {
        cfg.exctg_limit = v;
    }
    if let Some(v) = args.ctg_th {
        cfg.ctg_th = v;
    }
    if let Some(v) = args.exctg_th {
        cfg.exctg_th = v;
    }
    if let Err(e) = cfg.validate() {
        return fail(e);
    }

    let seed = match std::env::var("IC3MC_SEED") {
        Ok(v) => match v.parse::<u64>() {
            Ok(s) => s,
            Err(_) => return fail(format_args!("IC3MC_SEED is not a number: '{v}'")),
        },
        Err(_) => args.seed,
    };
    let opts = EngineOptions {
        seed,
        audit_frames: args.audit_frames,
        drop_order: args.drop_order,
    };

    let mut engine = Engine::new(ts, cfg, opts);
    if let Some(path) = &args.trace {
        match TraceWriter::to_file(path) {
            Ok(w) => engine.attach_trace(w),
            Err(e) => return fail(format_args!("{}: {e}", path.display())),
        }
    }

    let verdict = match engine.check() {
        Ok(v) => v,
        Err(e) => return fail(e),
    };
    if let Err(e) = engine.finish_trace() {
        return fail(format_args!("trace write failed: {e}"));
    }

    match verdict {
        Verdict::Safe { invariant, depth } => {
            println!("result: safe");
            println!("depth: {depth}");
            println!("stats: {}", engine.stats());
            if let Some(path) = &args.invariant {
                if let Err(e) = write_invariant(path, engine.transition_system(), &invariant) {
                    return fail(e);
                }
            }
            if let Some(path) = &args.witness {
                if let Err(e) = std::fs::write(path, "0\nb0\n.\n") {
                    return fail(format_args!("{}: {e}", path.display()));
                }
            }
            if args.certify {
                if let Err(e) = check_invariant(engine.transition_system(), &invariant, seed) {
                    return fail(format_args!("certification failed: {e}"));
                }
                println!("certified: invariant");
            }
            ExitCode::SUCCESS
        }
        Verdict::Unsafe { trace } => {
            println!("result: unsafe");
            println!("depth: {}", trace.len() - 1);
            println!("stats: {}", engine.stats());
            if let Some(path) = &args.witness {
                if let Err(e) = write_witness(path, engine.transition_system(), &trace) {
                    return fail(e);
                }
            }
            if args.certify {
                if let Err(e) = replay_trace(engine.transition_system(), &trace) {
                    return fail(format_args!("certification failed: {e}"));
                }
                println!("certified: trace");
            }
            ExitCode::from(1)
        }
        Verdict::Unknown => {
            println!("result: unknown");
            println!("stats: {}", engine.stats());
            ExitCode::from(2)
        }
    }
}

fn bits_line(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// Stimulus witness: "1" (counterexample found), the property line "b0", the
/// initial latch values, one line of input bits per step — the step the bad
/// output fires on included — and a closing ".".
fn write_witness(
    path: &Path,
    ts: &TransitionSystem,
    trace: &[(Cube, Cube)],
) -> Result<(), String> {
    let nl = ts.num_state_vars() as usize;
    let ni = ts.num_input_vars() as usize;
    let mut text = String::from("1\nb0\n");
    let state0 = trace[0]
        .0
        .as_bits(Var(0), nl)
        .ok_or("trace state is not a full assignment")?;
    text.push_str(&bits_line(&state0));
    text.push('\n');
    for (_, input) in trace {
        let bits = input
            .as_bits(Var(nl as u32), ni)
            .ok_or("trace input is not a full assignment")?;
        text.push_str(&bits_line(&bits));
        text.push('\n');
    }
    text.push_str(".\n");
    std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
}

/// Invariant certificate: a DIMACS-style clause list over latch variables
/// (literal ±(latch + 1)), with the property that I ⇒ INV, INV ∧ T ⇒ INV',
/// and INV ⇒ P all hold after `--certify`.
fn write_invariant(
    path: &Path,
    ts: &TransitionSystem,
    invariant: &[Clause],
) -> Result<(), String> {
    let mut text = format!(
        "c inductive invariant: clauses over latch variables 1..{}\np inv {} {}\n",
        ts.num_state_vars(),
        ts.num_state_vars(),
        invariant.len()
    );
    for clause in invariant {
        for l in clause.lits() {
            let v = l.var().0 as i64 + 1;
            let signed = if l.positive() { v } else { -v };
            text.push_str(&signed.to_string());
            text.push(' ');
        }
        text.push_str("0\n");
    }
    std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
}

fn run_bench(args: &BenchArgs) -> ExitCode {
    let mut strategies = Vec::new();
    for name in args.strategies.split(',') {
        match StrategyKind::from_str(name.trim()) {
            Ok(k) => strategies.push(k),
            Err(e) => return fail(e),
        }
    }
    if strategies.is_empty() {
        return fail("no strategies given");
    }

    let mut cases = Vec::new();
    let entries = match std::fs::read_dir(&args.dir) {
        Ok(es) => es,
        Err(e) => return fail(format_args!("{}: {e}", args.dir.display())),
    };
    for entry in entries {
        let entry = match entry {
            Ok(e) => e,
            Err(e) => return fail(format_args!("{}: {e}", args.dir.display())),
        };
        let path = entry.path();
        if path.extension().is_some_and(|x| x == "aag") {
            cases.push(path);
        }
    }
    cases.sort();
    if cases.is_empty() {
        return fail(format_args!("no .aag files in {}", args.dir.display()));
    }

    let exe = match std::env::current_exe() {
        Ok(p) => p,
        Err(e) => return fail(format_args!("cannot locate own binary: {e}")),
    };
    let limits = Limits {
        time_limit: args.time_limit,
        mem_limit_mb: args.mem_limit,
    };
    let records = bench::run_matrix(
        &exe,
        &cases,
        &strategies,
        args.seed,
        &limits,
        args.jobs,
        &mut std::io::stderr(),
    );
    if let Err(e) = bench::write_records(&args.out, &records) {
        return fail(e);
    }
    println!("wrote {} records to {}", records.len(), args.out.display());
    ExitCode::SUCCESS
}

fn run_report(args: &ReportArgs) -> ExitCode {
    let records = match bench::read_records(&args.file) {
        Ok(rs) => rs,
        Err(e) => return fail(e),
    };
    let report = match bench::compare(&records, &args.baseline) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    print!("{}", report.table);

    let out_dir = args
        .out_dir
        .clone()
        .unwrap_or_else(|| args.file.parent().unwrap_or(Path::new(".")).to_path_buf());
    let cactus = out_dir.join("cactus.csv");
    let scatter = out_dir.join("scatter.csv");
    if let Err(e) = std::fs::write(&cactus, &report.cactus_csv) {
        return fail(format_args!("{}: {e}", cactus.display()));
    }
    if let Err(e) = std::fs::write(&scatter, &report.scatter_csv) {
        return fail(format_args!("{}: {e}", scatter.display()));
    }
    println!("wrote {}", cactus.display());
    println!("wrote {}", scatter.display());
    ExitCode::SUCCESS
}
