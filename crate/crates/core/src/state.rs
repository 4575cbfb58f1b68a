//! Value-vector states and conjunctive goals.
//!
//! Every domain encodes its states as a fixed-length vector of small
//! integers. STRIPS atoms become 0/1 variables, puzzle states hold the cell
//! of each tile, cube states hold the position of each sticker.

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::ops::Deref;

use crate::{Error, Result};

/// A single state-variable value. Every supported domain fits in a byte.
pub type Value = u8;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct State(Box<[Value]>);

impl State {
    pub fn new(values: Vec<Value>) -> Self {
        State(values.into_boxed_slice())
    }

    pub fn values(&self) -> &[Value] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Value> {
        self.0.into_vec()
    }
}

impl Deref for State {
    type Target = [Value];

    fn deref(&self) -> &[Value] {
        &self.0
    }
}

impl From<Vec<Value>> for State {
    fn from(values: Vec<Value>) -> Self {
        State::new(values)
    }
}

impl From<&[Value]> for State {
    fn from(values: &[Value]) -> Self {
        State(values.into())
    }
}

/// A conjunction of `(variable, value)` literals, sorted by variable.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Goal {
    literals: Vec<(usize, Value)>,
}

impl Goal {
    /// Builds a goal, rejecting two literals on the same variable.
    pub fn new(mut literals: Vec<(usize, Value)>) -> Result<Self> {
        literals.sort_unstable();
        for pair in literals.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(Error::DuplicateGoalVariable(pair[0].0));
            }
        }
        Ok(Goal { literals })
    }

    /// The single-state goal: one literal per variable of `state`.
    pub fn from_state(state: &[Value]) -> Self {
        Goal {
            literals: state.iter().copied().enumerate().collect(),
        }
    }

    pub fn literals(&self) -> &[(usize, Value)] {
        &self.literals
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    /// Checks that every literal refers to a variable of a `num_vars`-long state.
    pub fn check(&self, num_vars: usize) -> Result<()> {
        match self.literals.last() {
            Some(&(index, _)) if index >= num_vars => Err(Error::VariableOutOfRange {
                index,
                len: num_vars,
            }),
            _ => Ok(()),
        }
    }

    /// Number of unsatisfied literals. Panics if the goal does not fit the state;
    /// call [`Goal::check`] first when that is not already known.
    #[inline]
    pub fn unsatisfied(&self, state: &[Value]) -> usize {
        self.literals
            .iter()
            .filter(|&&(i, v)| state[i] != v)
            .count()
    }

    #[inline]
    pub fn is_satisfied(&self, state: &[Value]) -> bool {
        self.literals.iter().all(|&(i, v)| state[i] == v)
    }
}

/// The goal-count heuristic: how many literals of `goal` are false in `state`.
pub fn goal_count(state: &[Value], goal: &Goal) -> Result<usize> {
    goal.check(state.len())?;
    Ok(goal.unsatisfied(state))
}

/// Indices of the variables whose values differ between `before` and `after`.
pub fn net_effect(before: &[Value], after: &[Value]) -> Result<Vec<usize>> {
    same_len(before, after)?;
    Ok(before
        .iter()
        .zip(after)
        .enumerate()
        .filter(|(_, (a, b))| a != b)
        .map(|(i, _)| i)
        .collect())
}

/// `net_effect(before, after).len()` without the allocation.
pub fn effect_size(before: &[Value], after: &[Value]) -> Result<usize> {
    same_len(before, after)?;
    Ok(diff_count(before, after))
}

#[inline]
pub(crate) fn diff_count(a: &[Value], b: &[Value]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

fn same_len(a: &[Value], b: &[Value]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(())
}
