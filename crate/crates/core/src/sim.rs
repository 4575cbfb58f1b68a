//! The black-box simulator contract.
//!
//! A [`Domain`] is an immutable description: which actions apply in a state
//! and what state each produces. A [`Simulator`] wraps a borrowed domain with
//! the per-run query counter, so independent searches can share one domain
//! while keeping their own counts.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::state::{diff_count, State, Value};
use crate::{Error, Result};

/// Index into a domain's action table (primitives first, then any macros).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct ActionId(pub u32);

impl ActionId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for ActionId {
    fn from(i: usize) -> Self {
        ActionId(i as u32)
    }
}

pub trait Domain {
    /// Length of every state vector.
    fn num_vars(&self) -> usize;

    /// Size of the action table.
    fn num_actions(&self) -> usize;

    /// Appends the actions applicable in `state`, in action-table order.
    fn applicable(&self, state: &[Value], out: &mut Vec<ActionId>);

    fn is_applicable(&self, state: &[Value], action: ActionId) -> bool {
        let mut out = Vec::new();
        self.applicable(state, &mut out);
        out.contains(&action)
    }

    /// Writes the successor of `state` under `action` into `next`.
    ///
    /// `action` must be applicable in `state` and `next` must have
    /// `num_vars()` entries.
    fn apply(&self, state: &[Value], action: ActionId, next: &mut [Value]);

    /// Number of primitive actions `action` stands for.
    fn primitive_len(&self, _action: ActionId) -> usize {
        1
    }

    fn action_name(&self, action: ActionId) -> String {
        format!("a{}", action.0)
    }

    fn action_by_name(&self, name: &str) -> Option<ActionId> {
        (0..self.num_actions())
            .map(ActionId::from)
            .find(|&a| self.action_name(a) == name)
    }
}

impl<D: Domain + ?Sized> Domain for &D {
    fn num_vars(&self) -> usize {
        (**self).num_vars()
    }
    fn num_actions(&self) -> usize {
        (**self).num_actions()
    }
    fn applicable(&self, state: &[Value], out: &mut Vec<ActionId>) {
        (**self).applicable(state, out)
    }
    fn is_applicable(&self, state: &[Value], action: ActionId) -> bool {
        (**self).is_applicable(state, action)
    }
    fn apply(&self, state: &[Value], action: ActionId, next: &mut [Value]) {
        (**self).apply(state, action, next)
    }
    fn primitive_len(&self, action: ActionId) -> usize {
        (**self).primitive_len(action)
    }
    fn action_name(&self, action: ActionId) -> String {
        (**self).action_name(action)
    }
    fn action_by_name(&self, name: &str) -> Option<ActionId> {
        (**self).action_by_name(name)
    }
}

/// A domain plus the query counter of one run. Every [`Simulator::step`]
/// counts as exactly one query, whether the action is a primitive or a macro.
pub struct Simulator<'d, D: ?Sized> {
    domain: &'d D,
    queries: u64,
}

impl<'d, D: Domain + ?Sized> Simulator<'d, D> {
    pub fn new(domain: &'d D) -> Self {
        Simulator { domain, queries: 0 }
    }

    pub fn domain(&self) -> &'d D {
        self.domain
    }

    pub fn queries(&self) -> u64 {
        self.queries
    }

    #[inline]
    pub fn applicable(&self, state: &[Value], out: &mut Vec<ActionId>) {
        self.domain.applicable(state, out)
    }

    #[inline]
    pub fn step_into(&mut self, state: &[Value], action: ActionId, next: &mut [Value]) {
        self.queries += 1;
        self.domain.apply(state, action, next);
    }

    pub fn step(&mut self, state: &[Value], action: ActionId) -> State {
        let mut next = vec![0; state.len()];
        self.step_into(state, action, &mut next);
        State::new(next)
    }
}

/// Runs `plan` from `start`, checking every step is applicable.
pub fn apply_plan<D: Domain + ?Sized>(
    sim: &mut Simulator<'_, D>,
    start: &[Value],
    plan: &[ActionId],
) -> Result<State> {
    if start.len() != sim.domain().num_vars() {
        return Err(Error::LengthMismatch {
            left: start.len(),
            right: sim.domain().num_vars(),
        });
    }
    let mut cur = start.to_vec();
    let mut next = vec![0; cur.len()];
    for (position, &action) in plan.iter().enumerate() {
        if action.index() >= sim.domain().num_actions() {
            return Err(Error::UnknownAction(action));
        }
        if !sim.domain().is_applicable(&cur, action) {
            return Err(Error::NotApplicable { position, action });
        }
        sim.step_into(&cur, action, &mut next);
        core::mem::swap(&mut cur, &mut next);
    }
    Ok(State::new(cur))
}

/// Effect size of `seq` measured from `start`: the number of variables that
/// differ between the start and the end of execution.
pub fn macro_effect_size<D: Domain + ?Sized>(
    sim: &mut Simulator<'_, D>,
    start: &[Value],
    seq: &[ActionId],
) -> Result<usize> {
    let end = apply_plan(sim, start, seq)?;
    Ok(diff_count(start, &end))
}
