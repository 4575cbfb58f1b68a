use std::io::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use macroplan::benchmark::{DomainSpec, Problem};
use macroplan::config::expand_config_args;
use macroplan::experiments::{
    correlate, correlation_csv, effects_csv, learn, plan_csv, plan_problem, summarize_plans,
    summarize_sweep, sweep, sweep_runs_csv, sweep_summary_csv, CorrelateConfig, GoalSource,
    LearnConfig, MacroSource, PlanConfig, PlanMeta, SweepConfig,
};
use macroplan::formats::LibraryFile;

/// Black-box planning experiments with focused macro-actions.
///
/// Any flag may also come from a `key = value` file passed with `--config`;
/// flags on the command line take precedence.
#[derive(Parser)]
#[command(name = "macroplan", version, args_override_self = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Goal-count vs true-distance correlation on Suitcase Lock.
    Correlate(CorrelateArgs),
    /// Generated states vs effect size on Suitcase Lock.
    Sweep(SweepArgs),
    /// Build a macro library.
    Learn(LearnArgs),
    /// Solve planning instances with an optional macro library.
    Plan(PlanArgs),
}

#[derive(Args)]
struct Common {
    /// Base seed for every random choice.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// key = value file with more flags.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct LockArgs {
    /// Only `suitcase` is meaningful here.
    #[arg(long, default_value = "suitcase")]
    domain: String,
    /// Number of dials N.
    #[arg(long, default_value_t = 10)]
    dials: usize,
    /// Digits per dial M.
    #[arg(long, default_value_t = 2)]
    digits: u8,
    /// kbar values: a list `1,3,5` or an inclusive range `1-9`. Defaults to 1..N-1.
    #[arg(long)]
    kbar: Option<String>,
}

#[derive(Args)]
struct CorrelateArgs {
    #[command(flatten)]
    lock: LockArgs,
    /// Locks per kbar.
    #[arg(long, default_value_t = 10)]
    seeds: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    lock: LockArgs,
    /// Runs per kbar.
    #[arg(long, default_value_t = 100)]
    runs: usize,
    /// Simulator queries per run.
    #[arg(long, default_value_t = 500_000)]
    budget: u64,
    /// Also write one row per run here.
    #[arg(long)]
    runs_out: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct LearnArgs {
    /// npuzzle, npuzzle:<side>, cube, hanoi:<n>, strips:<file> or suitcase:<N>,<M>,<kbar>[,<seed>]
    #[arg(long)]
    domain: String,
    /// focused, random or expert (cube only).
    #[arg(long, default_value = "focused")]
    source: String,
    /// N_M (random: number of macros, default one per length).
    #[arg(long)]
    num_macros: Option<usize>,
    /// R_M.
    #[arg(long)]
    repetitions: Option<usize>,
    /// B_M.
    #[arg(long)]
    budget: Option<u64>,
    /// Random-macro lengths, comma separated and cycled.
    #[arg(long)]
    lengths: Option<String>,
    /// Random macros: copy the lengths of this library.
    #[arg(long = "match", value_name = "LIBRARY")]
    match_library: Option<PathBuf>,
    /// Also write (length, effect size) records here.
    #[arg(long)]
    effects_out: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct PlanArgs {
    #[arg(long)]
    domain: String,
    /// Macro library file; primitives only when absent.
    #[arg(long)]
    library: Option<PathBuf>,
    #[arg(long, default_value_t = 100)]
    instances: usize,
    /// B_S (domain default when absent).
    #[arg(long)]
    budget: Option<u64>,
    /// default or random.
    #[arg(long, default_value = "default")]
    goals: String,
    #[command(flatten)]
    common: Common,
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

fn run() -> anyhow::Result<()> {
    let args = expand_config_args(std::env::args_os().collect())?;
    let cli = Cli::parse_from(args);
    match cli.command {
        Command::Correlate(a) => {
            let cfg = CorrelateConfig {
                dials: a.lock.dials,
                digits: a.lock.digits,
                kbars: lock_kbars(&a.lock)?,
                seeds: a.seeds,
                seed: a.common.seed,
            };
            let rows = correlate(&cfg)?;
            emit(a.common.out.as_deref(), &correlation_csv(&cfg, &rows))
        }
        Command::Sweep(a) => {
            let cfg = SweepConfig {
                dials: a.lock.dials,
                digits: a.lock.digits,
                kbars: lock_kbars(&a.lock)?,
                runs: a.runs,
                budget: a.budget,
                seed: a.common.seed,
            };
            let runs = sweep(&cfg)?;
            if let Some(path) = &a.runs_out {
                emit(Some(path), &sweep_runs_csv(&cfg, &runs))?;
            }
            emit(a.common.out.as_deref(), &sweep_summary_csv(&cfg, &summarize_sweep(&runs)))
        }
        Command::Learn(a) => {
            let spec: DomainSpec = a.domain.parse()?;
            let problem = Problem::load(&spec)?;
            let lengths = match (&a.lengths, &a.match_library) {
                (Some(_), Some(_)) => bail!("give either --lengths or --match, not both"),
                (Some(text), None) => Some(parse_list(text)?),
                (None, Some(path)) => {
                    let file = read_library(path)?;
                    Some(file.entries.iter().map(|e| e.seq.len()).collect())
                }
                (None, None) => None,
            };
            let cfg = LearnConfig {
                source: a.source.parse::<MacroSource>()?,
                num_macros: a.num_macros,
                repetitions: a.repetitions,
                budget: a.budget,
                lengths,
                seed: a.common.seed,
            };
            let report = learn(&problem, &spec.to_string(), &cfg)?;
            eprintln!("{}", report.summary());
            if let Some(path) = &a.effects_out {
                emit(Some(path), &effects_csv(&report.file))?;
            }
            emit(a.common.out.as_deref(), &report.file.to_text())
        }
        Command::Plan(a) => {
            let spec: DomainSpec = a.domain.parse()?;
            let problem = Problem::load(&spec)?;
            let library = a.library.as_deref().map(read_library).transpose()?;
            let cfg = PlanConfig {
                instances: a.instances,
                budget: a.budget,
                goals: a.goals.parse::<GoalSource>()?,
                seed: a.common.seed,
            };
            let label = spec.to_string();
            let (rows, macros, budget) = plan_problem(&problem, &label, library.as_ref(), &cfg)?;
            let library_name = a
                .library
                .as_deref()
                .and_then(Path::file_name)
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_else(|| "none".into());
            let meta = PlanMeta {
                domain: &label,
                library: &library_name,
                macros,
                budget,
            };
            if !rows.is_empty() {
                let s = summarize_plans(&rows);
                eprintln!(
                    "solve rate {:.3}, mean generated {:.1}",
                    s.solve_rate, s.mean_generated
                );
            }
            emit(a.common.out.as_deref(), &plan_csv(&meta, &cfg, &rows))
        }
    }
}

fn lock_kbars(lock: &LockArgs) -> anyhow::Result<Vec<usize>> {
    if lock.domain != "suitcase" {
        bail!("this command runs on the suitcase lock only, got --domain {}", lock.domain);
    }
    match &lock.kbar {
        Some(text) => parse_list(text),
        None => Ok((1..lock.dials).collect()),
    }
}

/// `a,b,c` or an inclusive range `a-b`.
fn parse_list(text: &str) -> anyhow::Result<Vec<usize>> {
    let num = |t: &str| t.trim().parse::<usize>().with_context(|| format!("bad number {t:?}"));
    if let Some((lo, hi)) = text.split_once('-') {
        let (lo, hi) = (num(lo)?, num(hi)?);
        if lo > hi {
            bail!("empty range {text:?}");
        }
        return Ok((lo..=hi).collect());
    }
    text.split(',').map(num).collect()
}

fn read_library(path: &Path) -> anyhow::Result<LibraryFile> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading library {}", path.display()))?;
    LibraryFile::parse(&text).with_context(|| format!("parsing library {}", path.display()))
}

fn emit(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().lock().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}
