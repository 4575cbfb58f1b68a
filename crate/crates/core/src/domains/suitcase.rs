//! Suitcase Lock: `N` dials with `M` digits each.
//!
//! Action `inc<i>` adds row `i` of a binary increment matrix to the dials
//! (mod `M`); `dec<i>` subtracts it. For `M = 2` the decrements coincide with
//! the increments and are left out. The increment matrix is always full rank
//! over GF(2), so every combination is reachable from every other.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use alloc::collections::VecDeque;

use rand::seq::index;
use rand::Rng as _;

use super::gf2::BinaryMatrix;
use crate::macros::{MacroDomain, StateSampler};
use crate::rng::{seeded, Rng};
use crate::sim::{ActionId, Domain};
use crate::state::{State, Value};
use crate::{Error, Result};

/// Increment matrices drawn before generation gives up. Near-extreme even
/// `kbar` on 20 dials succeeds about once in 2000 draws.
pub const MAX_DRAWS: usize = 1_000_000;

/// Largest state space [`all_pairs_distances`] will enumerate.
pub const MAX_ENUMERABLE_STATES: u64 = 1 << 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuitcaseLock {
    n: usize,
    m: u8,
    kbar: usize,
    seed: u64,
    inc: BinaryMatrix,
}

impl SuitcaseLock {
    /// Wraps an explicit increment matrix, checking it is square and full rank.
    pub fn new(m: u8, kbar: usize, seed: u64, inc: BinaryMatrix) -> Result<Self> {
        let n = inc.rows().len();
        if n == 0 || inc.cols() != n {
            return Err(Error::Config(format!(
                "increment matrix must be square, got {}x{}",
                n,
                inc.cols()
            )));
        }
        if m < 2 {
            return Err(Error::Config(format!("M must be at least 2, got {m}")));
        }
        if inc.rank() != n {
            return Err(Error::Config("increment matrix is not full rank over GF(2)".into()));
        }
        Ok(SuitcaseLock {
            n,
            m,
            kbar,
            seed,
            inc,
        })
    }

    pub fn dials(&self) -> usize {
        self.n
    }

    pub fn digits(&self) -> u8 {
        self.m
    }

    pub fn kbar(&self) -> usize {
        self.kbar
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn increments(&self) -> &BinaryMatrix {
        &self.inc
    }

    pub fn has_decrements(&self) -> bool {
        self.m > 2
    }

    /// Mean number of dials an action turns.
    pub fn mean_effect_size(&self) -> f64 {
        let total: usize = (0..self.n).map(|i| self.inc.row_weight(i)).sum();
        total as f64 / self.n as f64
    }

    fn row_and_sign(&self, action: ActionId) -> (u64, bool) {
        let a = action.index();
        (self.inc.rows()[a % self.n], a < self.n)
    }
}

/// Generates a lock whose actions turn `kbar` dials on average.
///
/// `kbar = 1` gives the identity matrix and `kbar = N - 1` gives `1 - I`
/// with the top-left entry set. Otherwise matrices are drawn until one is
/// full rank over GF(2): for odd `kbar` every row has weight `kbar`. Rows of
/// even weight span at most an `N - 1` dimensional subspace, so for even
/// `kbar` rows alternate between weights `kbar - 1` and `kbar + 1`, with one
/// row of weight `kbar` when `N` is odd.
pub fn generate_lock(n: usize, m: u8, kbar: usize, seed: u64) -> Result<SuitcaseLock> {
    if !(2..=64).contains(&n) {
        return Err(Error::Config(format!("N must be in 2..=64, got {n}")));
    }
    if kbar < 1 || kbar > n - 1 {
        return Err(Error::Config(format!("k̄ must be in 1..={}, got {kbar}", n - 1)));
    }
    let inc = if kbar == 1 {
        BinaryMatrix::identity(n)
    } else if kbar == n - 1 {
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let mut rows: Vec<u64> = (0..n).map(|i| full ^ (1 << i)).collect();
        rows[0] |= 1;
        BinaryMatrix::from_rows(n, rows)
    } else {
        let mut rng = seeded(seed);
        (0..MAX_DRAWS)
            .map(|_| weighted_matrix(&row_weights(n, kbar), &mut rng))
            .find(|mat| mat.rank() == n)
            .ok_or_else(|| Error::GenerationFailed {
                attempts: MAX_DRAWS,
                what: format!("a full-rank {n}x{n} increment matrix with k̄ = {kbar}"),
            })?
    };
    SuitcaseLock::new(m, kbar, seed, inc)
}

/// Row weights summing to `n * kbar`, all odd where possible.
fn row_weights(n: usize, kbar: usize) -> Vec<usize> {
    if kbar % 2 == 1 {
        return vec![kbar; n];
    }
    (0..n)
        .map(|i| match (i % 2, n % 2 == 1 && i == n - 1) {
            (_, true) => kbar,
            (0, _) => kbar - 1,
            _ => kbar + 1,
        })
        .collect()
}

fn weighted_matrix(weights: &[usize], rng: &mut Rng) -> BinaryMatrix {
    let n = weights.len();
    let rows = weights
        .iter()
        .map(|&w| index::sample(rng, n, w).iter().fold(0u64, |row, c| row | 1 << c))
        .collect();
    BinaryMatrix::from_rows(n, rows)
}

impl Domain for SuitcaseLock {
    fn num_vars(&self) -> usize {
        self.n
    }

    fn num_actions(&self) -> usize {
        if self.has_decrements() {
            2 * self.n
        } else {
            self.n
        }
    }

    fn applicable(&self, _state: &[Value], out: &mut Vec<ActionId>) {
        out.extend((0..self.num_actions()).map(ActionId::from));
    }

    fn is_applicable(&self, _state: &[Value], action: ActionId) -> bool {
        action.index() < self.num_actions()
    }

    fn apply(&self, state: &[Value], action: ActionId, next: &mut [Value]) {
        next.copy_from_slice(state);
        let (mut row, up) = self.row_and_sign(action);
        let step = if up { 1 } else { self.m - 1 };
        while row != 0 {
            let j = row.trailing_zeros() as usize;
            next[j] = ((next[j] as u16 + step as u16) % self.m as u16) as Value;
            row &= row - 1;
        }
    }

    fn action_name(&self, action: ActionId) -> String {
        let a = action.index();
        if a < self.n {
            format!("inc{a}")
        } else {
            format!("dec{}", a - self.n)
        }
    }

    fn action_by_name(&self, name: &str) -> Option<ActionId> {
        let (offset, digits) = if let Some(d) = name.strip_prefix("inc") {
            (0, d)
        } else {
            (self.n, name.strip_prefix("dec")?)
        };
        let i: usize = digits.parse().ok()?;
        let a = offset + i;
        (i < self.n && a < self.num_actions()).then(|| ActionId::from(a))
    }
}

impl MacroDomain for SuitcaseLock {
    /// Per-dial shift mod `M`.
    type Effect = Box<[Value]>;

    fn summarize(&self, seq: &[ActionId]) -> Result<Self::Effect> {
        if seq.is_empty() {
            return Err(Error::Unchainable {
                position: 0,
                reason: "empty sequence".into(),
            });
        }
        let mut delta = vec![0; self.n];
        for (position, &a) in seq.iter().enumerate() {
            if a.index() >= self.num_actions() {
                return Err(Error::Unchainable {
                    position,
                    reason: format!("unknown action {}", a.0),
                });
            }
            let scratch = delta.clone();
            self.apply(&scratch, a, &mut delta);
        }
        Ok(delta.into_boxed_slice())
    }

    fn effect_applicable(&self, _effect: &Self::Effect, _state: &[Value]) -> bool {
        true
    }

    fn apply_effect(&self, effect: &Self::Effect, state: &[Value], next: &mut [Value]) {
        for ((n, &s), &d) in next.iter_mut().zip(state).zip(effect.iter()) {
            *n = ((s as u16 + d as u16) % self.m as u16) as Value;
        }
    }
}

impl StateSampler for SuitcaseLock {
    fn sample_state(&self, rng: &mut Rng) -> State {
        State::new((0..self.n).map(|_| rng.gen_range(0..self.m)).collect())
    }
}

/// Shortest-path distances between every ordered pair of lock states.
#[derive(Clone, Debug)]
pub struct DistanceTable {
    n: usize,
    m: u8,
    states: usize,
    dist: Vec<u8>,
}

impl DistanceTable {
    pub fn num_states(&self) -> usize {
        self.states
    }

    /// Moves needed to turn state `from` into state `to` (indices as in [`DistanceTable::encode`]).
    pub fn distance(&self, from: usize, to: usize) -> u8 {
        self.dist[from * self.states + to]
    }

    /// Row of distances from `from` to every state.
    pub fn row(&self, from: usize) -> &[u8] {
        &self.dist[from * self.states..(from + 1) * self.states]
    }

    /// Mixed-radix index of a state, dial 0 least significant.
    pub fn encode(&self, state: &[Value]) -> usize {
        state
            .iter()
            .rev()
            .fold(0, |acc, &v| acc * self.m as usize + v as usize)
    }

    pub fn decode(&self, mut index: usize) -> State {
        let m = self.m as usize;
        let mut values = Vec::with_capacity(self.n);
        for _ in 0..self.n {
            values.push((index % m) as Value);
            index /= m;
        }
        State::new(values)
    }
}

/// Breadth-first search from every state over the lock's action set.
pub fn all_pairs_distances(lock: &SuitcaseLock) -> Result<DistanceTable> {
    let count = (lock.m as u64).checked_pow(lock.n as u32).unwrap_or(u64::MAX);
    if count > MAX_ENUMERABLE_STATES {
        return Err(Error::TooLarge {
            states: count,
            limit: MAX_ENUMERABLE_STATES,
        });
    }
    let states = count as usize;
    let mut table = DistanceTable {
        n: lock.n,
        m: lock.m,
        states,
        dist: vec![u8::MAX; states * states],
    };
    let actions = lock.num_actions();
    let mut succ = vec![0u32; states * actions];
    let mut next = vec![0; lock.n];
    for s in 0..states {
        let state = table.decode(s);
        for a in 0..actions {
            lock.apply(&state, ActionId::from(a), &mut next);
            succ[s * actions + a] = table.encode(&next) as u32;
        }
    }
    let mut queue = VecDeque::with_capacity(states);
    for source in 0..states {
        let row = &mut table.dist[source * states..(source + 1) * states];
        row[source] = 0;
        queue.clear();
        queue.push_back(source as u32);
        while let Some(s) = queue.pop_front() {
            let d = row[s as usize];
            for &t in &succ[s as usize * actions..(s as usize + 1) * actions] {
                if row[t as usize] == u8::MAX {
                    row[t as usize] = d + 1;
                    queue.push_back(t);
                }
            }
        }
    }
    Ok(table)
}
