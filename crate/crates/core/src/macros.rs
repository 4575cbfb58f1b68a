//! Macro-actions: learning focused macros, random baselines, and the
//! macro-augmented simulator.
//!
//! A macro is a primitive sequence plus a state-independent summary of its
//! net effect (a permutation, a delta vector, a STRIPS pre/add/del triple).
//! The summary doubles as the dedup signature and lets the augmented
//! simulator execute the whole macro as one query.

use alloc::collections::BinaryHeap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Debug;
use core::hash::Hash;

use rand::seq::SliceRandom;

use crate::rng::{seeded, Rng};
use crate::search::{best_first_search_with, NodeId, TieBreak};
use crate::sim::{ActionId, Domain, Simulator};
use crate::state::{diff_count, State, Value};
use crate::{Error, FastSet, Result};

/// Attempts the restart sampler makes before giving up on a repetition.
pub const RESTART_ATTEMPTS: usize = 10_000;

/// A domain that can summarize a primitive sequence into a single operation.
pub trait MacroDomain: Domain {
    /// Net effect plus precondition; equal summaries mean "same net effect".
    type Effect: Clone + Eq + Hash + Debug;

    /// Summarizes a sequence of *primitive* actions. Fails when the sequence
    /// is empty or cannot run as a whole from any state.
    fn summarize(&self, seq: &[ActionId]) -> Result<Self::Effect>;

    fn effect_applicable(&self, effect: &Self::Effect, state: &[Value]) -> bool;

    /// Applies a summarized macro; `effect_applicable` must hold.
    fn apply_effect(&self, effect: &Self::Effect, state: &[Value], next: &mut [Value]);

    /// Short text form of the precondition for library files, if there is one.
    fn precondition_token(&self, _effect: &Self::Effect) -> Option<String> {
        None
    }
}

/// Draws random valid states (restart states, random-walk starts).
pub trait StateSampler {
    fn sample_state(&self, rng: &mut Rng) -> State;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Macro<E> {
    pub primitive_seq: Vec<ActionId>,
    pub effect: E,
    /// Variables changed between the start and the end of the macro, measured
    /// from the state it was found (or walked) from.
    pub effect_size: usize,
}

impl<E> Macro<E> {
    pub fn len(&self) -> usize {
        self.primitive_seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primitive_seq.is_empty()
    }
}

/// Search score of a candidate macro: `f = g + h`, with `h` infinite when
/// the macro changes nothing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MacroScore {
    pub g: usize,
    /// `None` stands for infinity.
    pub h: Option<usize>,
}

impl MacroScore {
    pub fn new(length: usize, changed: usize) -> Self {
        MacroScore {
            g: length,
            h: (changed > 0).then_some(changed),
        }
    }

    pub fn f(&self) -> Option<usize> {
        self.h.map(|h| h + self.g)
    }

    /// Open-list key; infinite scores sort last.
    pub fn key(&self) -> u64 {
        self.f().map_or(u64::MAX, |f| f as u64)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LearnParams {
    /// N_M: maximum number of macros to keep.
    pub num_macros: usize,
    /// R_M: number of search repetitions.
    pub repetitions: usize,
    /// B_M: total simulator budget, split evenly over repetitions.
    pub budget: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Provenance {
    pub seed: u64,
    pub repetition: usize,
    /// `h` when the macro was saved (its effect size from the repetition start).
    pub h: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MacroLibrary<E> {
    pub macros: Vec<Macro<E>>,
    /// One entry per macro; empty for libraries loaded from disk.
    pub provenance: Vec<Provenance>,
    pub params: LearnParams,
    pub seed: u64,
    /// Simulator queries spent building the library.
    pub queries: u64,
    pub repetitions_run: usize,
    /// Repetition whose restart state could not be sampled, if any.
    pub restart_failed_at: Option<usize>,
}

impl<E> MacroLibrary<E> {
    pub fn new(params: LearnParams, seed: u64) -> Self {
        MacroLibrary {
            macros: Vec::new(),
            provenance: Vec::new(),
            params,
            seed,
            queries: 0,
            repetitions_run: 0,
            restart_failed_at: None,
        }
    }

    pub fn len(&self) -> usize {
        self.macros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.macros.is_empty()
    }
}

/// Learns macros whose net effect touches as few variables as possible.
///
/// Each repetition runs best-first search from `start` with budget
/// `B_M / R_M`, ordering nodes by `f = length + h` (newest first among equal
/// `f`), where `h` is the number of variables differing from `start` (infinite
/// for no change). Every newly generated node is offered to a bounded
/// max-queue keyed by `h`; the survivors, minus duplicates by net effect, join the library. The next
/// repetition restarts from a random state in which no saved macro applies,
/// and learning stops early when no such state can be found.
pub fn learn_focused_macros<D>(
    domain: &D,
    start: &[Value],
    params: LearnParams,
    seed: u64,
) -> Result<MacroLibrary<D::Effect>>
where
    D: MacroDomain + StateSampler,
{
    let LearnParams {
        num_macros,
        repetitions,
        budget,
    } = params;
    if repetitions == 0 {
        return Err(Error::Config("R_M must be at least 1".into()));
    }
    if budget < repetitions as u64 {
        return Err(Error::Config(format!(
            "B_M ({budget}) must be at least R_M ({repetitions})"
        )));
    }
    let mut library = MacroLibrary::new(params, seed);
    if num_macros == 0 {
        return Ok(library);
    }

    let mut rng = seeded(seed);
    let rep_budget = budget / repetitions as u64;
    let mut known: FastSet<D::Effect> = FastSet::default();
    let mut start = start.to_vec();

    for rep in 0..repetitions {
        let mut capacity = num_macros / repetitions;
        if rep + 1 == repetitions {
            capacity += num_macros % repetitions;
        }
        library.repetitions_run += 1;

        if capacity > 0 {
            let found = focused_search(domain, &start, capacity, rep_budget, &mut library.queries);
            let candidates = found
                .into_iter()
                .map(|(seq, h)| {
                    let effect = domain.summarize(&seq)?;
                    Ok(Macro {
                        primitive_seq: seq,
                        effect,
                        effect_size: h,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            for m in dedup_by_net_effect(candidates) {
                if known.insert(m.effect.clone()) {
                    library.provenance.push(Provenance {
                        seed,
                        repetition: rep,
                        h: m.effect_size,
                    });
                    library.macros.push(m);
                }
            }
        }

        if rep + 1 == repetitions {
            break;
        }
        match sample_restart(domain, &library.macros, &mut rng) {
            Some(s) => start = s.into_vec(),
            None => {
                library.restart_failed_at = Some(rep + 1);
                break;
            }
        }
    }
    Ok(library)
}

/// One repetition: returns the kept `(sequence, h)` pairs, best first.
fn focused_search<D: Domain>(
    domain: &D,
    start: &[Value],
    capacity: usize,
    budget: u64,
    queries: &mut u64,
) -> Vec<(Vec<ActionId>, usize)> {
    // Ties on f go to the newest node. Oldest-first keeps the search in a
    // shallow band of short macros; newest-first lets it follow promising
    // branches down to the longer commutator-like macros.
    // max-heap on (h, length, serial): the top is the next to evict
    let mut kept: BinaryHeap<(usize, u32, u32)> = BinaryHeap::with_capacity(capacity + 1);
    let mut sim = Simulator::new(domain);
    let (_, space) = best_first_search_with(
        &mut sim,
        start,
        |s, depth| MacroScore::new(depth as usize, diff_count(start, s)).key(),
        |_| false,
        budget,
        TieBreak::Lifo,
        |id, s, depth| {
            let h = diff_count(start, s);
            if h == 0 {
                return;
            }
            let entry = (h, depth, id.0);
            if kept.len() < capacity {
                kept.push(entry);
            } else if kept.peek().is_some_and(|top| entry < *top) {
                kept.pop();
                kept.push(entry);
            }
        },
    );
    *queries += sim.queries();
    kept.into_sorted_vec()
        .into_iter()
        .map(|(h, _, id)| (space.path(NodeId(id)), h))
        .collect()
}

fn sample_restart<D>(domain: &D, macros: &[Macro<D::Effect>], rng: &mut Rng) -> Option<State>
where
    D: MacroDomain + StateSampler,
{
    (0..RESTART_ATTEMPTS)
        .map(|_| domain.sample_state(rng))
        .find(|s| !macros.iter().any(|m| domain.effect_applicable(&m.effect, s)))
}

/// Drops macros whose net effect repeats an earlier one, after a stable sort
/// by length (so the shortest representative survives).
pub fn dedup_by_net_effect<E: Clone + Eq + Hash>(mut candidates: Vec<Macro<E>>) -> Vec<Macro<E>> {
    candidates.sort_by_key(|m| m.len());
    let mut seen = FastSet::default();
    candidates.retain(|m| seen.insert(m.effect.clone()));
    candidates
}

/// Random-walk macros: for each requested length, walk from a sampled state
/// choosing uniformly among the applicable actions. `lengths` is cycled
/// until `count` macros exist. Walks that hit a dead end are restarted.
pub fn generate_random_macros<D>(
    domain: &D,
    lengths: &[usize],
    count: usize,
    seed: u64,
) -> Result<MacroLibrary<D::Effect>>
where
    D: MacroDomain + StateSampler,
{
    const WALK_ATTEMPTS: usize = 1000;
    if count > 0 && lengths.is_empty() {
        return Err(Error::Config("empty length schedule".into()));
    }
    if lengths.contains(&0) {
        return Err(Error::Config("macro lengths must be at least 1".into()));
    }
    let params = LearnParams {
        num_macros: count,
        repetitions: 0,
        budget: 0,
    };
    let mut library = MacroLibrary::new(params, seed);
    let mut rng = seeded(seed);
    let mut actions = Vec::new();
    let mut next = alloc::vec![0; domain.num_vars()];

    for i in 0..count {
        let length = lengths[i % lengths.len()];
        let mut walked = None;
        for _ in 0..WALK_ATTEMPTS {
            let start = domain.sample_state(&mut rng).into_vec();
            let mut cur = start.clone();
            let mut seq = Vec::with_capacity(length);
            while seq.len() < length {
                actions.clear();
                domain.applicable(&cur, &mut actions);
                let Some(&a) = actions.choose(&mut rng) else {
                    break;
                };
                domain.apply(&cur, a, &mut next);
                cur.copy_from_slice(&next);
                seq.push(a);
            }
            if seq.len() == length {
                walked = Some((seq, diff_count(&start, &cur)));
                break;
            }
        }
        let (seq, effect_size) = walked.ok_or_else(|| Error::GenerationFailed {
            attempts: WALK_ATTEMPTS,
            what: format!("a random walk of length {length}"),
        })?;
        library.macros.push(Macro {
            effect: domain.summarize(&seq)?,
            primitive_seq: seq,
            effect_size,
        });
    }
    Ok(library)
}

/// A domain whose action table is its primitives followed by macros.
/// Applying a macro executes its summarized effect as one simulator query.
pub struct Augmented<'b, D: MacroDomain> {
    base: &'b D,
    base_actions: usize,
    macros: Vec<Macro<D::Effect>>,
}

impl<'b, D: MacroDomain> Augmented<'b, D> {
    pub fn base(&self) -> &'b D {
        self.base
    }

    pub fn macros(&self) -> &[Macro<D::Effect>] {
        &self.macros
    }

    /// The macro behind `action`, if it is not a primitive.
    pub fn macro_of(&self, action: ActionId) -> Option<&Macro<D::Effect>> {
        action
            .index()
            .checked_sub(self.base_actions)
            .and_then(|i| self.macros.get(i))
    }

    /// Replaces every macro in `plan` with its primitive sequence.
    pub fn expand(&self, plan: &[ActionId]) -> Vec<ActionId> {
        let mut out = Vec::new();
        for &a in plan {
            match self.macro_of(a) {
                Some(m) => out.extend_from_slice(&m.primitive_seq),
                None => out.push(a),
            }
        }
        out
    }
}

/// Adds `macros` to `base` after checking each one: it must be non-empty,
/// consist of primitives, and re-summarize to its stored effect.
pub fn attach_macros<D: MacroDomain>(
    base: &D,
    macros: Vec<Macro<D::Effect>>,
) -> Result<Augmented<'_, D>> {
    let base_actions = base.num_actions();
    for (index, m) in macros.iter().enumerate() {
        if m.is_empty() {
            return Err(Error::InvalidMacro {
                index,
                reason: "empty primitive sequence".into(),
            });
        }
        if let Some(a) = m.primitive_seq.iter().find(|a| a.index() >= base_actions) {
            return Err(Error::InvalidMacro {
                index,
                reason: format!("action {} is not a primitive", a.0),
            });
        }
        let effect = base.summarize(&m.primitive_seq).map_err(|e| Error::InvalidMacro {
            index,
            reason: format!("{e}"),
        })?;
        if effect != m.effect {
            return Err(Error::InvalidMacro {
                index,
                reason: "stored net effect disagrees with its primitive sequence".into(),
            });
        }
    }
    Ok(Augmented {
        base,
        base_actions,
        macros,
    })
}

impl<D: MacroDomain> Domain for Augmented<'_, D> {
    fn num_vars(&self) -> usize {
        self.base.num_vars()
    }

    fn num_actions(&self) -> usize {
        self.base_actions + self.macros.len()
    }

    fn applicable(&self, state: &[Value], out: &mut Vec<ActionId>) {
        self.base.applicable(state, out);
        for (i, m) in self.macros.iter().enumerate() {
            if self.base.effect_applicable(&m.effect, state) {
                out.push(ActionId::from(self.base_actions + i));
            }
        }
    }

    fn is_applicable(&self, state: &[Value], action: ActionId) -> bool {
        match self.macro_of(action) {
            Some(m) => self.base.effect_applicable(&m.effect, state),
            None => action.index() < self.base_actions && self.base.is_applicable(state, action),
        }
    }

    #[inline]
    fn apply(&self, state: &[Value], action: ActionId, next: &mut [Value]) {
        match action.index().checked_sub(self.base_actions) {
            Some(i) => self.base.apply_effect(&self.macros[i].effect, state, next),
            None => self.base.apply(state, action, next),
        }
    }

    fn primitive_len(&self, action: ActionId) -> usize {
        self.macro_of(action).map_or(1, |m| m.len())
    }

    fn action_name(&self, action: ActionId) -> String {
        match action.index().checked_sub(self.base_actions) {
            Some(i) => format!("m{i}"),
            None => self.base.action_name(action),
        }
    }
}
