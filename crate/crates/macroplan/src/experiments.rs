//! The four experiments behind the command-line verbs, plus their CSV output.
//!
//! Every function here is deterministic in its configuration: seeds for
//! locks, instances and goals are derived from the single `seed` field, and
//! rows are produced in index order.

use std::fmt::Write as _;

use anyhow::{bail, ensure, Context};
use macroplan_core::domains::cube::{expert_catalog, Cube};
use macroplan_core::domains::suitcase::{all_pairs_distances, generate_lock, SuitcaseLock};
use macroplan_core::rng::{derive_seed, seeded};
use macroplan_core::sim::{apply_plan, macro_effect_size, Simulator};
use macroplan_core::{
    attach_macros, best_first_search, generate_random_macros, learn_focused_macros, Goal,
    LearnParams, Macro, MacroDomain, MacroLibrary, StateSampler,
};

use crate::benchmark::{Benchmark, Problem};
use crate::formats::{LibraryEntry, LibraryFile, LibraryHeader};
use crate::stats::{mean, median, spearman, JointCounts};
use crate::with_problem;

/// Seed of the `index`-th lock built for `kbar`.
pub fn lock_seed(seed: u64, kbar: usize, index: usize) -> u64 {
    derive_seed(seed, ((kbar as u64) << 32) | index as u64)
}

/// Seed of planning instance `index`.
pub fn instance_seed(seed: u64, index: usize) -> u64 {
    derive_seed(seed, index as u64)
}

fn goal_seed(seed: u64, index: usize) -> u64 {
    derive_seed(instance_seed(seed, index), 1)
}

fn check_kbars(dials: usize, kbars: &[usize]) -> anyhow::Result<()> {
    ensure!(!kbars.is_empty(), "no kbar values given");
    if let Some(k) = kbars.iter().find(|&&k| k == 0 || k >= dials) {
        bail!("kbar {k} outside 1..={}", dials.saturating_sub(1));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// correlate

#[derive(Clone, Debug)]
pub struct CorrelateConfig {
    pub dials: usize,
    pub digits: u8,
    pub kbars: Vec<usize>,
    /// Locks per kbar.
    pub seeds: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationStats {
    pub kbar: usize,
    pub pearson: f64,
    pub spearman: f64,
    pub samples: u64,
}

/// Correlation between goal count and true distance over every ordered
/// pair of lock states, pooled across `seeds` locks per kbar.
pub fn correlate(cfg: &CorrelateConfig) -> anyhow::Result<Vec<CorrelationStats>> {
    check_kbars(cfg.dials, &cfg.kbars)?;
    ensure!(cfg.seeds > 0, "seeds must be positive");
    let mut out = Vec::with_capacity(cfg.kbars.len());
    for &kbar in &cfg.kbars {
        let mut counts = JointCounts::new();
        for i in 0..cfg.seeds {
            let lock = generate_lock(cfg.dials, cfg.digits, kbar, lock_seed(cfg.seed, kbar, i))?;
            pool_lock_pairs(&lock, &mut counts)?;
        }
        out.push(CorrelationStats {
            kbar,
            pearson: counts.pearson(),
            spearman: counts.spearman(),
            samples: counts.total(),
        });
    }
    Ok(out)
}

fn pool_lock_pairs(lock: &SuitcaseLock, counts: &mut JointCounts) -> anyhow::Result<()> {
    let table = all_pairs_distances(lock)?;
    let states: Vec<_> = (0..table.num_states()).map(|i| table.decode(i)).collect();
    // dense (h, d) histogram, flushed once per lock
    let width = 256;
    let mut hist = vec![0u64; (lock.dials() + 1) * width];
    for (from, s) in states.iter().enumerate() {
        let row = table.row(from);
        for (t, &d) in states.iter().zip(row) {
            let h = s.iter().zip(t.iter()).filter(|(a, b)| a != b).count();
            hist[h * width + d as usize] += 1;
        }
    }
    for (i, &c) in hist.iter().enumerate() {
        counts.add_many((i / width) as u32, (i % width) as u32, c);
    }
    Ok(())
}

pub fn correlation_csv(cfg: &CorrelateConfig, rows: &[CorrelationStats]) -> String {
    let mut out = format!(
        "# macroplan correlate v1 dials={} digits={} seeds={} seed={}\n",
        cfg.dials, cfg.digits, cfg.seeds, cfg.seed
    );
    out.push_str("kbar,pearson,spearman,samples\n");
    for r in rows {
        let _ = writeln!(out, "{},{:.6},{:.6},{}", r.kbar, r.pearson, r.spearman, r.samples);
    }
    out
}

// ---------------------------------------------------------------------------
// sweep

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub dials: usize,
    pub digits: u8,
    pub kbars: Vec<usize>,
    /// Runs per kbar, each with its own lock, start and goal.
    pub runs: usize,
    pub budget: u64,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepRun {
    pub kbar: usize,
    pub run: usize,
    pub generated: u64,
    pub solved: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSummary {
    pub kbar: usize,
    pub runs: usize,
    pub median: f64,
    pub mean: f64,
    pub max: u64,
    pub solve_rate: f64,
}

/// GBFS with the goal-count heuristic on random locks, starts and goals.
pub fn sweep(cfg: &SweepConfig) -> anyhow::Result<Vec<SweepRun>> {
    check_kbars(cfg.dials, &cfg.kbars)?;
    ensure!(cfg.runs > 0, "runs must be positive");
    ensure!(cfg.budget > 0, "budget must be positive");
    let mut out = Vec::with_capacity(cfg.kbars.len() * cfg.runs);
    for &kbar in &cfg.kbars {
        for run in 0..cfg.runs {
            let lseed = lock_seed(cfg.seed, kbar, run);
            let lock = generate_lock(cfg.dials, cfg.digits, kbar, lseed)?;
            let mut rng = seeded(derive_seed(lseed, 1));
            let start = lock.sample_state(&mut rng);
            let goal_state = loop {
                let g = lock.sample_state(&mut rng);
                if g != start {
                    break g;
                }
            };
            let goal = Goal::from_state(&goal_state);
            let mut sim = Simulator::new(&lock);
            let r = macroplan_core::gbfs_goal_count(&mut sim, &start, &goal, cfg.budget)?;
            out.push(SweepRun {
                kbar,
                run,
                generated: r.generated,
                solved: r.solved,
            });
        }
    }
    Ok(out)
}

/// Per-kbar statistics of generated states, in the order kbars first appear.
pub fn summarize_sweep(runs: &[SweepRun]) -> Vec<SweepSummary> {
    let mut kbars: Vec<usize> = Vec::new();
    for r in runs {
        if !kbars.contains(&r.kbar) {
            kbars.push(r.kbar);
        }
    }
    kbars
        .into_iter()
        .map(|kbar| {
            let group: Vec<&SweepRun> = runs.iter().filter(|r| r.kbar == kbar).collect();
            let generated: Vec<f64> = group.iter().map(|r| r.generated as f64).collect();
            SweepSummary {
                kbar,
                runs: group.len(),
                median: median(&generated),
                mean: mean(&generated),
                max: group.iter().map(|r| r.generated).max().unwrap_or(0),
                solve_rate: group.iter().filter(|r| r.solved).count() as f64 / group.len() as f64,
            }
        })
        .collect()
}

/// Spearman correlation between kbar and median generated states.
pub fn sweep_trend(summary: &[SweepSummary]) -> f64 {
    let ks: Vec<f64> = summary.iter().map(|s| s.kbar as f64).collect();
    let medians: Vec<f64> = summary.iter().map(|s| s.median).collect();
    spearman(&ks, &medians).unwrap_or(0.0)
}

fn sweep_header(cfg: &SweepConfig, table: &str) -> String {
    format!(
        "# macroplan sweep-{table} v1 dials={} digits={} runs={} budget={} seed={}\n",
        cfg.dials, cfg.digits, cfg.runs, cfg.budget, cfg.seed
    )
}

pub fn sweep_summary_csv(cfg: &SweepConfig, summary: &[SweepSummary]) -> String {
    let mut out = sweep_header(cfg, "summary");
    out.push_str("kbar,runs,median_generated,mean_generated,max_generated,solve_rate\n");
    for s in summary {
        let _ = writeln!(
            out,
            "{},{},{:.1},{:.1},{},{:.3}",
            s.kbar, s.runs, s.median, s.mean, s.max, s.solve_rate
        );
    }
    let _ = writeln!(out, "# trend spearman={:.6}", sweep_trend(summary));
    out
}

pub fn sweep_runs_csv(cfg: &SweepConfig, runs: &[SweepRun]) -> String {
    let mut out = sweep_header(cfg, "runs");
    out.push_str("kbar,run,generated,solved\n");
    for r in runs {
        let _ = writeln!(out, "{},{},{},{}", r.kbar, r.run, r.generated, u8::from(r.solved));
    }
    out
}

// ---------------------------------------------------------------------------
// learn

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MacroSource {
    Focused,
    Random,
    Expert,
}

impl std::str::FromStr for MacroSource {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        Ok(match s {
            "focused" => MacroSource::Focused,
            "random" => MacroSource::Random,
            "expert" => MacroSource::Expert,
            _ => bail!("unknown macro source {s:?} (expected focused, random or expert)"),
        })
    }
}

#[derive(Clone, Debug)]
pub struct LearnConfig {
    pub source: MacroSource,
    /// Overrides of the domain defaults for `N_M`, `R_M` and `B_M`.
    pub num_macros: Option<usize>,
    pub repetitions: Option<usize>,
    pub budget: Option<u64>,
    /// Random-macro lengths, cycled. The cube defaults to the expert lengths.
    pub lengths: Option<Vec<usize>>,
    pub seed: u64,
}

/// A library ready to be written, plus how it was obtained.
#[derive(Clone, Debug)]
pub struct LearnReport {
    pub file: LibraryFile,
    pub queries: u64,
    pub repetitions_run: usize,
    pub restart_failed_at: Option<usize>,
}

impl LearnReport {
    /// One-line summary of lengths and effect sizes.
    pub fn summary(&self) -> String {
        let e = &self.file.entries;
        let lens: Vec<f64> = e.iter().map(|m| m.seq.len() as f64).collect();
        let sizes: Vec<f64> = e.iter().map(|m| m.effect_size as f64).collect();
        let mut s = format!("{} macros", e.len());
        if !e.is_empty() {
            let _ = write!(
                s,
                ", length mean {:.1} max {}, effect size mean {:.2} max {}",
                mean(&lens),
                e.iter().map(|m| m.seq.len()).max().unwrap_or(0),
                mean(&sizes),
                e.iter().map(|m| m.effect_size).max().unwrap_or(0),
            );
        }
        let _ = write!(s, ", {} queries, {} repetitions", self.queries, self.repetitions_run);
        if let Some(r) = self.restart_failed_at {
            let _ = write!(s, " (no restart state after repetition {r})");
        }
        s
    }
}

/// Builds a macro library for `problem`. Focused macros are learned from
/// the start of planning instance 0 under the same seed.
pub fn learn(problem: &Problem, label: &str, cfg: &LearnConfig) -> anyhow::Result<LearnReport> {
    if cfg.source == MacroSource::Expert {
        let Problem::Cube(cube) = problem else {
            bail!("expert macros exist only for the cube");
        };
        return expert_library(cube, label);
    }
    let mut cfg = cfg.clone();
    if let (Problem::Cube(_), None) = (problem, &cfg.lengths) {
        cfg.lengths = Some(expert_catalog().iter().map(Vec::len).collect());
    }
    with_problem!(problem, d => learn_in(d, label, &cfg))
}

fn learn_in<D: Benchmark>(domain: &D, label: &str, cfg: &LearnConfig) -> anyhow::Result<LearnReport> {
    let defaults = domain.default_learn_params();
    let params = LearnParams {
        num_macros: cfg.num_macros.unwrap_or(defaults.num_macros),
        repetitions: cfg.repetitions.unwrap_or(defaults.repetitions),
        budget: cfg.budget.unwrap_or(defaults.budget),
    };
    let library = match cfg.source {
        MacroSource::Focused => {
            ensure!(params.budget > 0, "budget must be positive");
            let start = domain.instance_start(instance_seed(cfg.seed, 0));
            learn_focused_macros(domain, &start, params, cfg.seed)?
        }
        MacroSource::Random => {
            let lengths = match &cfg.lengths {
                Some(l) => l.clone(),
                None => bail!("random macros need a length list (--lengths or --match)"),
            };
            let count = cfg.num_macros.unwrap_or(lengths.len());
            generate_random_macros(domain, &lengths, count, cfg.seed)?
        }
        MacroSource::Expert => unreachable!("handled by the caller"),
    };
    Ok(report(domain, label, library))
}

fn report<D: MacroDomain>(domain: &D, label: &str, library: MacroLibrary<D::Effect>) -> LearnReport {
    LearnReport {
        file: library_file(domain, label, &library),
        queries: library.queries,
        repetitions_run: library.repetitions_run,
        restart_failed_at: library.restart_failed_at,
    }
}

/// The 576 expert variants, with effect sizes measured from the solved cube.
fn expert_library(cube: &Cube, label: &str) -> anyhow::Result<LearnReport> {
    let catalog = expert_catalog();
    let params = LearnParams {
        num_macros: catalog.len(),
        repetitions: 0,
        budget: 0,
    };
    let mut library = MacroLibrary::new(params, 0);
    let solved = cube.solved();
    for seq in catalog {
        let effect_size = macro_effect_size(&mut Simulator::new(cube), &solved, &seq)?;
        library.macros.push(Macro {
            effect: cube.summarize(&seq)?,
            primitive_seq: seq,
            effect_size,
        });
    }
    Ok(report(cube, label, library))
}

pub fn library_file<D: MacroDomain>(domain: &D, label: &str, library: &MacroLibrary<D::Effect>) -> LibraryFile {
    LibraryFile {
        header: LibraryHeader {
            domain: label.to_string(),
            num_macros: library.params.num_macros,
            repetitions: library.params.repetitions,
            budget: library.params.budget,
            seed: library.seed,
        },
        entries: library
            .macros
            .iter()
            .map(|m| LibraryEntry {
                seq: m.primitive_seq.iter().map(|&a| domain.action_name(a)).collect(),
                effect_size: m.effect_size,
                pre: domain.precondition_token(&m.effect).unwrap_or_else(|| "-".into()),
            })
            .collect(),
    }
}

/// Rebuilds macros from a library file written for the domain `label`.
pub fn load_macros<D: MacroDomain>(domain: &D, label: &str, file: &LibraryFile) -> anyhow::Result<Vec<Macro<D::Effect>>> {
    ensure!(
        file.header.domain == label,
        "library was built for domain {:?}, not {label:?}",
        file.header.domain
    );
    file.entries
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let seq = e
                .seq
                .iter()
                .map(|name| {
                    domain
                        .action_by_name(name)
                        .with_context(|| format!("macro {i}: unknown action {name:?}"))
                })
                .collect::<anyhow::Result<Vec<_>>>()?;
            let effect = domain.summarize(&seq).with_context(|| format!("macro {i}"))?;
            Ok(Macro {
                primitive_seq: seq,
                effect,
                effect_size: e.effect_size,
            })
        })
        .collect()
}

/// `(macro, length, effect_size)` records of a library.
pub fn effects_csv(file: &LibraryFile) -> String {
    let h = &file.header;
    let mut out = format!(
        "# macroplan effects v1 domain={} N_M={} R_M={} B_M={} seed={}\n",
        h.domain, h.num_macros, h.repetitions, h.budget, h.seed
    );
    out.push_str("macro,length,effect_size\n");
    for (i, e) in file.entries.iter().enumerate() {
        let _ = writeln!(out, "{i},{},{}", e.seq.len(), e.effect_size);
    }
    out
}

// ---------------------------------------------------------------------------
// plan

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GoalSource {
    Default,
    Random,
}

impl std::str::FromStr for GoalSource {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        Ok(match s {
            "default" => GoalSource::Default,
            "random" => GoalSource::Random,
            _ => bail!("unknown goal source {s:?} (expected default or random)"),
        })
    }
}

impl GoalSource {
    fn name(self) -> &'static str {
        match self {
            GoalSource::Default => "default",
            GoalSource::Random => "random",
        }
    }
}

#[derive(Clone, Debug)]
pub struct PlanConfig {
    pub instances: usize,
    /// `B_S`; the domain default when absent.
    pub budget: Option<u64>,
    pub goals: GoalSource,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanRow {
    pub instance: usize,
    pub solved: bool,
    pub generated: u64,
    /// Steps in the plan, each macro counting once.
    pub plan_length: usize,
    pub plan_length_primitive: usize,
    /// Fewest unsatisfied goal literals in any generated state.
    pub remaining: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlanSummary {
    pub instances: usize,
    pub solve_rate: f64,
    pub mean_generated: f64,
    /// Over solved instances only; NaN when none were solved.
    pub mean_plan_length_primitive: f64,
    pub mean_remaining: f64,
}

/// The start and goal of planning instance `index`.
pub fn plan_instance<D: Benchmark>(domain: &D, seed: u64, index: usize, goals: GoalSource) -> (Vec<u8>, Goal) {
    let start = domain.instance_start(instance_seed(seed, index)).into_vec();
    let goal = match goals {
        GoalSource::Default => domain.default_goal(),
        GoalSource::Random => domain.random_goal(goal_seed(seed, index)),
    };
    (start, goal)
}

/// Solves each instance with goal-count GBFS on the domain augmented by
/// `macros`, and re-validates every plan it reports as solved.
pub fn plan<D: Benchmark>(domain: &D, macros: Vec<Macro<D::Effect>>, cfg: &PlanConfig) -> anyhow::Result<Vec<PlanRow>> {
    let budget = cfg.budget.unwrap_or_else(|| domain.default_plan_budget());
    ensure!(budget > 0, "budget must be positive");
    let aug = attach_macros(domain, macros)?;
    let mut rows = Vec::with_capacity(cfg.instances);
    for instance in 0..cfg.instances {
        let (start, goal) = plan_instance(domain, cfg.seed, instance, cfg.goals);
        goal.check(start.len())?;
        let mut sim = Simulator::new(&aug);
        let mut remaining = goal.unsatisfied(&start);
        let r = best_first_search(
            &mut sim,
            &start,
            |s, _| {
                let h = goal.unsatisfied(s);
                remaining = remaining.min(h);
                h
            },
            |s| goal.is_satisfied(s),
            budget,
        );
        debug_assert_eq!(r.generated, sim.queries());
        if r.solved {
            remaining = 0;
            let end = apply_plan(&mut Simulator::new(&aug), &start, &r.plan)?;
            let primitives = aug.expand(&r.plan);
            let end_primitive = apply_plan(&mut Simulator::new(domain), &start, &primitives)?;
            ensure!(
                goal.is_satisfied(&end) && end == end_primitive,
                "instance {instance}: plan failed re-validation"
            );
            ensure!(primitives.len() == r.plan_length_primitive, "instance {instance}: primitive length mismatch");
        }
        rows.push(PlanRow {
            instance,
            solved: r.solved,
            generated: r.generated,
            plan_length: r.plan.len(),
            plan_length_primitive: r.plan_length_primitive,
            remaining,
        });
    }
    Ok(rows)
}

pub fn summarize_plans(rows: &[PlanRow]) -> PlanSummary {
    let n = rows.len();
    let solved: Vec<&PlanRow> = rows.iter().filter(|r| r.solved).collect();
    let prim: Vec<f64> = solved.iter().map(|r| r.plan_length_primitive as f64).collect();
    PlanSummary {
        instances: n,
        solve_rate: solved.len() as f64 / n as f64,
        mean_generated: mean(&rows.iter().map(|r| r.generated as f64).collect::<Vec<_>>()),
        mean_plan_length_primitive: mean(&prim),
        mean_remaining: mean(&rows.iter().map(|r| r.remaining as f64).collect::<Vec<_>>()),
    }
}

/// Header fields describing a planning run, for the CSV comment line.
#[derive(Clone, Debug)]
pub struct PlanMeta<'a> {
    pub domain: &'a str,
    pub library: &'a str,
    pub macros: usize,
    pub budget: u64,
}

pub fn plan_csv(meta: &PlanMeta<'_>, cfg: &PlanConfig, rows: &[PlanRow]) -> String {
    let mut out = format!(
        "# macroplan plan v1 domain={} library={} macros={} instances={} budget={} goals={} seed={}\n",
        meta.domain,
        meta.library,
        meta.macros,
        cfg.instances,
        meta.budget,
        cfg.goals.name(),
        cfg.seed
    );
    out.push_str("instance,solved,generated,plan_length,plan_length_primitive,remaining\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.instance,
            u8::from(r.solved),
            r.generated,
            r.plan_length,
            r.plan_length_primitive,
            r.remaining
        );
    }
    if !rows.is_empty() {
        let s = summarize_plans(rows);
        let _ = writeln!(
            out,
            "# summary solve_rate={:.3} mean_generated={:.1} mean_plan_length_primitive={:.1} mean_remaining={:.2}",
            s.solve_rate, s.mean_generated, s.mean_plan_length_primitive, s.mean_remaining
        );
    }
    out
}

/// Loads `library` (if any) for `problem` and runs [`plan`]. Returns the
/// rows and the budget actually used.
pub fn plan_problem(
    problem: &Problem,
    label: &str,
    library: Option<&LibraryFile>,
    cfg: &PlanConfig,
) -> anyhow::Result<(Vec<PlanRow>, usize, u64)> {
    with_problem!(problem, d => {
        let macros = match library {
            Some(file) => load_macros(d, label, file)?,
            None => Vec::new(),
        };
        let count = macros.len();
        let budget = cfg.budget.unwrap_or_else(|| d.default_plan_budget());
        Ok((plan(d, macros, cfg)?, count, budget))
    })
}
