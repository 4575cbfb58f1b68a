//! Problem instances for each domain: how starts, goals and default budgets
//! are drawn, and how a domain is selected on the command line.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context};
use macroplan_core::domains::cube::{scramble_cube, Cube};
use macroplan_core::domains::npuzzle::{scramble_puzzle, NPuzzle};
use macroplan_core::domains::strips::{generate_hanoi, parse_ground_strips, GroundStripsDomain};
use macroplan_core::domains::suitcase::{generate_lock, SuitcaseLock};
use macroplan_core::rng::seeded;
use macroplan_core::{Goal, LearnParams, MacroDomain, State, StateSampler};

/// Scramble length for cube instances and cube goal states.
pub const CUBE_SCRAMBLE: usize = 60;

/// Instance generation for a planning domain. Seeds fully determine the
/// returned start states and goals.
pub trait Benchmark: MacroDomain + StateSampler {
    fn default_goal(&self) -> Goal;

    fn instance_start(&self, seed: u64) -> State;

    /// A goal that is reachable from every instance start.
    fn random_goal(&self, seed: u64) -> Goal;

    /// Planning budget `B_S`.
    fn default_plan_budget(&self) -> u64;

    fn default_learn_params(&self) -> LearnParams;
}

impl Benchmark for NPuzzle {
    fn default_goal(&self) -> Goal {
        self.goal()
    }

    fn instance_start(&self, seed: u64) -> State {
        scramble_puzzle(self, seed)
    }

    fn random_goal(&self, seed: u64) -> Goal {
        Goal::from_state(&self.sample_state(&mut seeded(seed)))
    }

    fn default_plan_budget(&self) -> u64 {
        500_000
    }

    fn default_learn_params(&self) -> LearnParams {
        LearnParams {
            num_macros: 1600,
            repetitions: 16,
            budget: 1_000_000,
        }
    }
}

impl Benchmark for Cube {
    fn default_goal(&self) -> Goal {
        self.goal()
    }

    fn instance_start(&self, seed: u64) -> State {
        scramble_cube(self, CUBE_SCRAMBLE, seed)
    }

    fn random_goal(&self, seed: u64) -> Goal {
        Goal::from_state(&scramble_cube(self, CUBE_SCRAMBLE, seed))
    }

    fn default_plan_budget(&self) -> u64 {
        2_000_000
    }

    fn default_learn_params(&self) -> LearnParams {
        LearnParams {
            num_macros: 576,
            repetitions: 1,
            budget: 1_000_000,
        }
    }
}

impl Benchmark for GroundStripsDomain {
    fn default_goal(&self) -> Goal {
        self.goal()
    }

    fn instance_start(&self, seed: u64) -> State {
        self.sample_state(&mut seeded(seed))
    }

    /// The fluent atoms true in a sampled state. Static atoms such as
    /// `smaller-x-y` are left out so the goal reads like a hand-written one.
    fn random_goal(&self, seed: u64) -> Goal {
        let state = self.sample_state(&mut seeded(seed));
        let mut fluent = vec![false; self.atoms().len()];
        for a in self.actions() {
            for &atom in a.add.iter().chain(&a.del) {
                fluent[atom as usize] = true;
            }
        }
        let literals = GroundStripsDomain::true_atoms(&state)
            .into_iter()
            .filter(|&a| fluent[a as usize])
            .map(|a| (a as usize, 1))
            .collect();
        Goal::new(literals).expect("atoms of a sampled state are in range")
    }

    fn default_plan_budget(&self) -> u64 {
        100_000
    }

    fn default_learn_params(&self) -> LearnParams {
        LearnParams {
            num_macros: 8,
            repetitions: 1,
            budget: 100_000,
        }
    }
}

impl Benchmark for SuitcaseLock {
    /// All dials at zero.
    fn default_goal(&self) -> Goal {
        Goal::from_state(&vec![0; self.dials()])
    }

    fn instance_start(&self, seed: u64) -> State {
        self.sample_state(&mut seeded(seed))
    }

    fn random_goal(&self, seed: u64) -> Goal {
        Goal::from_state(&self.sample_state(&mut seeded(seed)))
    }

    fn default_plan_budget(&self) -> u64 {
        500_000
    }

    fn default_learn_params(&self) -> LearnParams {
        LearnParams {
            num_macros: self.dials(),
            repetitions: 1,
            budget: 100_000,
        }
    }
}

/// A domain selector as written on the command line.
///
/// `npuzzle` (4x4), `npuzzle:<side>`, `cube`, `hanoi:<disks>`,
/// `strips:<file>` or `suitcase:<dials>,<digits>,<kbar>[,<seed>]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DomainSpec {
    Puzzle { side: usize },
    Cube,
    Hanoi { disks: usize },
    StripsFile(PathBuf),
    Suitcase { dials: usize, digits: u8, kbar: usize, seed: u64 },
}

impl FromStr for DomainSpec {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        let (kind, arg) = match s.split_once(':') {
            Some((k, a)) => (k, Some(a)),
            None => (s, None),
        };
        let num = |what: &str, text: &str| -> anyhow::Result<u64> {
            text.trim()
                .parse()
                .with_context(|| format!("bad {what} {text:?} in domain {s:?}"))
        };
        Ok(match (kind, arg) {
            ("npuzzle" | "15puzzle", None) => DomainSpec::Puzzle { side: 4 },
            ("npuzzle", Some(a)) => DomainSpec::Puzzle {
                side: num("side", a)? as usize,
            },
            ("cube", None) => DomainSpec::Cube,
            ("hanoi", Some(a)) => DomainSpec::Hanoi {
                disks: num("disk count", a)? as usize,
            },
            ("strips", Some(a)) if !a.is_empty() => DomainSpec::StripsFile(PathBuf::from(a)),
            ("suitcase", Some(a)) => {
                let parts: Vec<&str> = a.split(',').collect();
                if !(3..=4).contains(&parts.len()) {
                    bail!("expected suitcase:<dials>,<digits>,<kbar>[,<seed>], got {s:?}");
                }
                let digits = num("digit count", parts[1])?;
                DomainSpec::Suitcase {
                    dials: num("dial count", parts[0])? as usize,
                    digits: u8::try_from(digits).context("digit count must fit in a byte")?,
                    kbar: num("kbar", parts[2])? as usize,
                    seed: parts.get(3).map(|p| num("seed", p)).transpose()?.unwrap_or(0),
                }
            }
            _ => bail!(
                "unknown domain {s:?} (expected npuzzle, npuzzle:<side>, cube, hanoi:<n>, \
                 strips:<file> or suitcase:<dials>,<digits>,<kbar>[,<seed>])"
            ),
        })
    }
}

impl fmt::Display for DomainSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainSpec::Puzzle { side } => write!(f, "npuzzle-{side}x{side}"),
            DomainSpec::Cube => f.write_str("cube"),
            DomainSpec::Hanoi { disks } => write!(f, "hanoi-{disks}"),
            DomainSpec::StripsFile(path) => {
                let stem = path.file_stem().map(|s| s.to_string_lossy()).unwrap_or_default();
                let stem: String = stem.chars().map(|c| if c.is_whitespace() { '_' } else { c }).collect();
                write!(f, "strips-{stem}")
            }
            DomainSpec::Suitcase { dials, digits, kbar, seed } => {
                write!(f, "suitcase-n{dials}-m{digits}-k{kbar}-s{seed}")
            }
        }
    }
}

/// A loaded domain.
pub enum Problem {
    Puzzle(NPuzzle),
    Cube(Cube),
    Strips(GroundStripsDomain),
    Suitcase(SuitcaseLock),
}

impl Problem {
    pub fn load(spec: &DomainSpec) -> anyhow::Result<Self> {
        Ok(match spec {
            DomainSpec::Puzzle { side } => Problem::Puzzle(NPuzzle::new(*side)?),
            DomainSpec::Cube => Problem::Cube(Cube::new()),
            DomainSpec::Hanoi { disks } => Problem::Strips(generate_hanoi(*disks)?),
            DomainSpec::StripsFile(path) => Problem::Strips(load_strips(path)?),
            DomainSpec::Suitcase { dials, digits, kbar, seed } => {
                Problem::Suitcase(generate_lock(*dials, *digits, *kbar, *seed)?)
            }
        })
    }
}

fn load_strips(path: &Path) -> anyhow::Result<GroundStripsDomain> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_ground_strips(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Runs `$body` with `$d` bound to the concrete domain inside a [`Problem`].
#[macro_export]
macro_rules! with_problem {
    ($problem:expr, $d:ident => $body:expr) => {
        match $problem {
            $crate::benchmark::Problem::Puzzle($d) => $body,
            $crate::benchmark::Problem::Cube($d) => $body,
            $crate::benchmark::Problem::Strips($d) => $body,
            $crate::benchmark::Problem::Suitcase($d) => $body,
        }
    };
}
