//! Ground STRIPS domains behind the black-box interface.
//!
//! Every atom is a 0/1 state variable. Actions delete before they add, so an
//! atom both added and deleted ends up true; the constructor folds such
//! overlaps into the add list. Goals are conjunctions of positive atoms.
//!
//! Text format:
//!
//! ```text
//! atoms:
//!   on-a-b
//!   clear-a
//!   holding-a
//! action pick-a:
//!   pre: clear-a on-a-b
//!   add: holding-a
//!   del: on-a-b
//! init:
//!   on-a-b clear-a
//! goal:
//!   holding-a
//! ```
//!
//! Section bodies are indented; `#` starts a comment.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write as _;

use crate::macros::{MacroDomain, StateSampler};
use crate::rng::Rng;
use crate::sim::{ActionId, Domain};
use crate::state::{Goal, State, Value};
use crate::{Error, Result};

use rand::seq::SliceRandom;

/// Length of the random walk from the initial state that draws restart states.
pub const SAMPLER_WALK: usize = 200;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundAction {
    pub name: String,
    pub pre: Vec<u32>,
    pub add: Vec<u32>,
    pub del: Vec<u32>,
}

impl GroundAction {
    /// Sorts and deduplicates the atom lists and drops deletes that are also added.
    pub fn new(name: impl Into<String>, pre: Vec<u32>, add: Vec<u32>, del: Vec<u32>) -> Self {
        let (pre, add, mut del) = (sorted(pre), sorted(add), sorted(del));
        del.retain(|d| add.binary_search(d).is_err());
        GroundAction {
            name: name.into(),
            pre,
            add,
            del,
        }
    }
}

fn sorted(mut v: Vec<u32>) -> Vec<u32> {
    v.sort_unstable();
    v.dedup();
    v
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundStripsDomain {
    atoms: Vec<String>,
    atom_index: BTreeMap<String, u32>,
    actions: Vec<GroundAction>,
    init: Vec<u32>,
    goal: Vec<u32>,
}

impl GroundStripsDomain {
    pub fn new(
        atoms: Vec<String>,
        actions: Vec<GroundAction>,
        init: Vec<u32>,
        goal: Vec<u32>,
    ) -> Result<Self> {
        if atoms.len() > u32::MAX as usize {
            return Err(Error::Config("too many atoms".into()));
        }
        let mut atom_index = BTreeMap::new();
        for (i, a) in atoms.iter().enumerate() {
            if !valid_token(a) {
                return Err(Error::Config(format!("invalid atom name {a:?}")));
            }
            if atom_index.insert(a.clone(), i as u32).is_some() {
                return Err(Error::Config(format!("atom {a} declared twice")));
            }
        }
        let n = atoms.len() as u32;
        let check = |list: &[u32], what: &str| {
            match list.iter().find(|&&i| i >= n) {
                Some(&i) => Err(Error::Config(format!("{what} refers to atom {i}, only {n} declared"))),
                None => Ok(()),
            }
        };
        let mut names = BTreeMap::new();
        let mut simplified = Vec::with_capacity(actions.len());
        for a in actions {
            if !valid_token(&a.name) {
                return Err(Error::Config(format!("invalid action name {:?}", a.name)));
            }
            if names.insert(a.name.clone(), ()).is_some() {
                return Err(Error::Config(format!("action {} declared twice", a.name)));
            }
            for list in [&a.pre, &a.add, &a.del] {
                check(list, &a.name)?;
            }
            simplified.push(GroundAction::new(a.name, a.pre, a.add, a.del));
        }
        let (init, goal) = (sorted(init), sorted(goal));
        check(&init, "init")?;
        check(&goal, "goal")?;
        Ok(GroundStripsDomain {
            atoms,
            atom_index,
            actions: simplified,
            init,
            goal,
        })
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn atom(&self, name: &str) -> Option<u32> {
        self.atom_index.get(name).copied()
    }

    pub fn actions(&self) -> &[GroundAction] {
        &self.actions
    }

    pub fn init_atoms(&self) -> &[u32] {
        &self.init
    }

    pub fn goal_atoms(&self) -> &[u32] {
        &self.goal
    }

    pub fn state_of(&self, true_atoms: &[u32]) -> State {
        let mut s = vec![0; self.atoms.len()];
        for &a in true_atoms {
            s[a as usize] = 1;
        }
        State::new(s)
    }

    pub fn init_state(&self) -> State {
        self.state_of(&self.init)
    }

    /// Positive goal: every goal atom must be true.
    pub fn goal(&self) -> Goal {
        Goal::new(self.goal.iter().map(|&a| (a as usize, 1)).collect()).expect("sorted unique atoms")
    }

    /// Atoms true in `state`.
    pub fn true_atoms(state: &[Value]) -> Vec<u32> {
        (0..state.len() as u32).filter(|&i| state[i as usize] != 0).collect()
    }

    /// Same domain with a different goal.
    pub fn with_goal(&self, goal: Vec<u32>) -> Result<Self> {
        let mut out = self.clone();
        out.goal = sorted(goal);
        if let Some(&bad) = out.goal.iter().find(|&&g| g as usize >= self.atoms.len()) {
            return Err(Error::Config(format!("goal refers to undeclared atom {bad}")));
        }
        Ok(out)
    }

    fn holds(state: &[Value], atoms: &[u32]) -> bool {
        atoms.iter().all(|&a| state[a as usize] != 0)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("atoms:\n");
        for a in &self.atoms {
            let _ = writeln!(out, "  {a}");
        }
        let names = |list: &[u32]| {
            let v: Vec<&str> = list.iter().map(|&i| self.atoms[i as usize].as_str()).collect();
            v.join(" ")
        };
        for a in &self.actions {
            let _ = writeln!(out, "action {}:", a.name);
            for (label, list) in [("pre", &a.pre), ("add", &a.add), ("del", &a.del)] {
                if list.is_empty() {
                    let _ = writeln!(out, "  {label}:");
                } else {
                    let _ = writeln!(out, "  {label}: {}", names(list));
                }
            }
        }
        for (label, list) in [("init", &self.init), ("goal", &self.goal)] {
            let _ = writeln!(out, "{label}:");
            for &i in list {
                let _ = writeln!(out, "  {}", self.atoms[i as usize]);
            }
        }
        out
    }
}

fn valid_token(s: &str) -> bool {
    !s.is_empty()
        && s.bytes()
            .all(|b| b.is_ascii_alphanumeric() || b == b'_' || b == b'-')
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    Atoms,
    Action,
    Init,
    Goal,
}

struct RawAction {
    name: String,
    lists: [Option<Vec<(usize, String)>>; 3],
}

/// Parses the text format described in the module docs.
pub fn parse_ground_strips(text: &str) -> Result<GroundStripsDomain> {
    let mut section = Section::None;
    let mut atoms: Vec<(usize, String)> = Vec::new();
    let mut init: Vec<(usize, String)> = Vec::new();
    let mut goal: Vec<(usize, String)> = Vec::new();
    let mut actions: Vec<RawAction> = Vec::new();
    let mut seen = [false; 3];

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let indented = line.starts_with(' ') || line.starts_with('\t');
        let body = line.trim();
        if !indented {
            let header = body
                .strip_suffix(':')
                .ok_or_else(|| parse_err(line_no, format!("expected a section header, got {body:?}")))?;
            let mut once = |slot: usize, s: Section| {
                if core::mem::replace(&mut seen[slot], true) {
                    Err(parse_err(line_no, format!("section {header:?} repeated")))
                } else {
                    Ok(s)
                }
            };
            section = match header {
                "atoms" => once(0, Section::Atoms)?,
                "init" => once(1, Section::Init)?,
                "goal" => once(2, Section::Goal)?,
                _ => {
                    let name = header
                        .strip_prefix("action ")
                        .map(str::trim)
                        .ok_or_else(|| parse_err(line_no, format!("unknown section {header:?}")))?;
                    if !valid_token(name) {
                        return Err(parse_err(line_no, format!("invalid action name {name:?}")));
                    }
                    if actions.iter().any(|a| a.name == name) {
                        return Err(parse_err(line_no, format!("duplicate action {name}")));
                    }
                    actions.push(RawAction {
                        name: name.to_string(),
                        lists: [None, None, None],
                    });
                    Section::Action
                }
            };
            continue;
        }
        let tokens = |s: &str| -> Result<Vec<(usize, String)>> {
            s.split_whitespace()
                .map(|t| {
                    if valid_token(t) {
                        Ok((line_no, t.to_string()))
                    } else {
                        Err(parse_err(line_no, format!("invalid token {t:?}")))
                    }
                })
                .collect()
        };
        match section {
            Section::None => return Err(parse_err(line_no, "indented line outside any section")),
            Section::Atoms => atoms.extend(tokens(body)?),
            Section::Init => init.extend(tokens(body)?),
            Section::Goal => goal.extend(tokens(body)?),
            Section::Action => {
                let (label, rest) = body
                    .split_once(':')
                    .ok_or_else(|| parse_err(line_no, "expected pre:, add: or del:"))?;
                let slot = match label.trim() {
                    "pre" => 0,
                    "add" => 1,
                    "del" => 2,
                    other => return Err(parse_err(line_no, format!("unknown action field {other:?}"))),
                };
                let action = actions.last_mut().expect("inside an action section");
                if action.lists[slot].is_some() {
                    return Err(parse_err(line_no, format!("field {label} repeated")));
                }
                action.lists[slot] = Some(tokens(rest)?);
            }
        }
    }

    let mut index = BTreeMap::new();
    for (line, name) in &atoms {
        if index.insert(name.as_str(), index.len() as u32).is_some() {
            return Err(parse_err(*line, format!("atom {name} declared twice")));
        }
    }
    let resolve = |list: &[(usize, String)]| -> Result<Vec<u32>> {
        list.iter()
            .map(|(line, name)| {
                index
                    .get(name.as_str())
                    .copied()
                    .ok_or_else(|| parse_err(*line, format!("undeclared atom {name}")))
            })
            .collect()
    };
    let mut ground = Vec::with_capacity(actions.len());
    for a in &actions {
        let get = |slot: usize| resolve(a.lists[slot].as_deref().unwrap_or(&[]));
        ground.push(GroundAction::new(a.name.clone(), get(0)?, get(1)?, get(2)?));
    }
    let init = resolve(&init)?;
    let goal = resolve(&goal)?;
    GroundStripsDomain::new(atoms.into_iter().map(|(_, n)| n).collect(), ground, init, goal)
}

impl Domain for GroundStripsDomain {
    fn num_vars(&self) -> usize {
        self.atoms.len()
    }

    fn num_actions(&self) -> usize {
        self.actions.len()
    }

    fn applicable(&self, state: &[Value], out: &mut Vec<ActionId>) {
        out.extend(
            self.actions
                .iter()
                .enumerate()
                .filter(|(_, a)| Self::holds(state, &a.pre))
                .map(|(i, _)| ActionId::from(i)),
        );
    }

    fn is_applicable(&self, state: &[Value], action: ActionId) -> bool {
        self.actions
            .get(action.index())
            .is_some_and(|a| Self::holds(state, &a.pre))
    }

    fn apply(&self, state: &[Value], action: ActionId, next: &mut [Value]) {
        let a = &self.actions[action.index()];
        next.copy_from_slice(state);
        for &d in &a.del {
            next[d as usize] = 0;
        }
        for &p in &a.add {
            next[p as usize] = 1;
        }
    }

    fn action_name(&self, action: ActionId) -> String {
        self.actions[action.index()].name.clone()
    }

    fn action_by_name(&self, name: &str) -> Option<ActionId> {
        self.actions.iter().position(|a| a.name == name).map(ActionId::from)
    }
}

/// Precondition and net effect of a chained action sequence.
///
/// `pre` lists the atoms the sequence reads before producing them itself.
/// Applying the summary to any state that satisfies `pre` gives exactly the
/// state stepwise execution gives. Atoms in `pre` are never listed in `add`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundMacroSummary {
    pub pre: Vec<u32>,
    pub add: Vec<u32>,
    pub del: Vec<u32>,
}

/// Folds `seq` into one summary, failing at the first step whose
/// precondition an earlier step deleted.
pub fn summarize_ground_macro(
    domain: &GroundStripsDomain,
    seq: &[ActionId],
) -> Result<GroundMacroSummary> {
    if seq.is_empty() {
        return Err(Error::Unchainable {
            position: 0,
            reason: "empty sequence".into(),
        });
    }
    let n = domain.atoms.len();
    // per atom: 0 untouched, 1 currently added, 2 currently deleted
    let mut status = vec![0u8; n];
    let mut pre = vec![false; n];
    for (position, &id) in seq.iter().enumerate() {
        let a = domain.actions.get(id.index()).ok_or_else(|| Error::Unchainable {
            position,
            reason: format!("unknown action {}", id.0),
        })?;
        for &p in &a.pre {
            match status[p as usize] {
                0 => pre[p as usize] = true,
                1 => {}
                _ => {
                    return Err(Error::Unchainable {
                        position,
                        reason: format!("{} needs {}, deleted earlier", a.name, domain.atoms[p as usize]),
                    })
                }
            }
        }
        for &d in &a.del {
            status[d as usize] = 2;
        }
        for &p in &a.add {
            status[p as usize] = 1;
        }
    }
    let pick = |f: &dyn Fn(usize) -> bool| (0..n).filter(|&i| f(i)).map(|i| i as u32).collect();
    Ok(GroundMacroSummary {
        pre: pick(&|i| pre[i]),
        add: pick(&|i| status[i] == 1 && !pre[i]),
        del: pick(&|i| status[i] == 2),
    })
}

impl MacroDomain for GroundStripsDomain {
    type Effect = GroundMacroSummary;

    fn summarize(&self, seq: &[ActionId]) -> Result<GroundMacroSummary> {
        summarize_ground_macro(self, seq)
    }

    fn effect_applicable(&self, effect: &GroundMacroSummary, state: &[Value]) -> bool {
        Self::holds(state, &effect.pre)
    }

    fn apply_effect(&self, effect: &GroundMacroSummary, state: &[Value], next: &mut [Value]) {
        next.copy_from_slice(state);
        for &d in &effect.del {
            next[d as usize] = 0;
        }
        for &p in &effect.add {
            next[p as usize] = 1;
        }
    }

    fn precondition_token(&self, effect: &GroundMacroSummary) -> Option<String> {
        let names: Vec<&str> = effect.pre.iter().map(|&i| self.atoms[i as usize].as_str()).collect();
        Some(if names.is_empty() {
            String::from("-")
        } else {
            names.join("+")
        })
    }
}

impl StateSampler for GroundStripsDomain {
    /// End of a random walk from the initial state (stops early at dead ends).
    fn sample_state(&self, rng: &mut Rng) -> State {
        let mut cur = self.init_state().into_vec();
        let mut next = cur.clone();
        let mut actions = Vec::new();
        for _ in 0..SAMPLER_WALK {
            actions.clear();
            self.applicable(&cur, &mut actions);
            let Some(&a) = actions.choose(rng) else { break };
            self.apply(&cur, a, &mut next);
            core::mem::swap(&mut cur, &mut next);
        }
        State::new(cur)
    }
}

/// Three-peg Tower of Hanoi with disks `d1` (smallest) to `dn` and pegs
/// `p1..p3`. All disks start on `p1` and must end on `p3`.
///
/// Only moves whose static `smaller` preconditions hold are grounded.
pub fn generate_hanoi(n_disks: usize) -> Result<GroundStripsDomain> {
    if n_disks == 0 {
        return Err(Error::Config("Hanoi needs at least one disk".into()));
    }
    let disks: Vec<String> = (1..=n_disks).map(|i| format!("d{i}")).collect();
    let pegs: Vec<String> = (1..=3).map(|i| format!("p{i}")).collect();
    // objects ordered by size: disks ascending, then pegs (larger than any disk)
    let objects: Vec<&String> = disks.iter().chain(&pegs).collect();
    let size = |o: usize| if o < n_disks { o } else { n_disks };

    let mut atoms = Vec::new();
    let mut id = BTreeMap::new();
    let mut intern = |name: String, atoms: &mut Vec<String>| {
        let next = atoms.len() as u32;
        *id.entry(name.clone()).or_insert_with(|| {
            atoms.push(name);
            next
        })
    };
    let mut on = BTreeMap::new();
    let mut smaller = BTreeMap::new();
    for d in 0..n_disks {
        for o in d + 1..objects.len() {
            on.insert((d, o), intern(format!("on-{}-{}", objects[d], objects[o]), &mut atoms));
        }
    }
    let clear: Vec<u32> = objects
        .iter()
        .map(|o| intern(format!("clear-{o}"), &mut atoms))
        .collect();
    for d in 0..n_disks {
        for o in 0..objects.len() {
            if size(d) < size(o) {
                smaller.insert((d, o), intern(format!("smaller-{}-{}", objects[d], objects[o]), &mut atoms));
            }
        }
    }

    let mut actions = Vec::new();
    for d in 0..n_disks {
        for from in d + 1..objects.len() {
            for to in d + 1..objects.len() {
                if from == to {
                    continue;
                }
                actions.push(GroundAction::new(
                    format!("move-{}-{}-{}", objects[d], objects[from], objects[to]),
                    vec![on[&(d, from)], clear[d], clear[to], smaller[&(d, to)]],
                    vec![on[&(d, to)], clear[from]],
                    vec![on[&(d, from)], clear[to]],
                ));
            }
        }
    }

    let p = |k: usize| n_disks + k;
    let tower_on = |peg: usize| -> Vec<u32> {
        (0..n_disks)
            .map(|d| if d + 1 < n_disks { on[&(d, d + 1)] } else { on[&(d, peg)] })
            .collect()
    };
    let mut init = tower_on(p(0));
    init.extend([clear[0], clear[p(1)], clear[p(2)]]);
    init.extend(smaller.values().copied());
    let goal = tower_on(p(2));
    GroundStripsDomain::new(atoms, actions, init, goal)
}
