//! Sliding-tile puzzle in position form.
//!
//! Variable 0 holds the cell of the blank and variable `i` the cell of tile
//! `i`. Cells are numbered row-major. In the solved state tile `i` sits in
//! cell `i - 1` and the blank in the last cell. A move `mv<from>-<to>` slides
//! the blank from `from` to the adjacent cell `to`, which is the
//! transposition of the two cell indices.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng as _;

use crate::macros::{MacroDomain, StateSampler};
use crate::perm::Permutation;
use crate::rng::{seeded, Rng};
use crate::sim::{ActionId, Domain};
use crate::state::{Goal, State, Value};
use crate::{Error, Result};

/// Scramble lengths; each is chosen with probability one half.
pub const SCRAMBLE_STEPS: [usize; 2] = [225, 226];

#[derive(Clone, Debug)]
pub struct NPuzzle {
    side: usize,
    /// `(from, to)` cell pairs, sorted.
    moves: Vec<(u8, u8)>,
    by_from: Vec<Vec<ActionId>>,
}

/// A summarized move sequence: where the blank must start and how every
/// cell index is relabeled.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PuzzleEffect {
    pub blank_cell: u8,
    pub perm: Permutation,
}

impl NPuzzle {
    /// The `side x side` puzzle; `side` must be in `2..=16`.
    pub fn new(side: usize) -> Result<Self> {
        if !(2..=16).contains(&side) {
            return Err(Error::Config(format!("puzzle side must be in 2..=16, got {side}")));
        }
        let cells = side * side;
        let mut moves = Vec::new();
        for from in 0..cells {
            let (r, c) = (from / side, from % side);
            let mut targets = Vec::new();
            if r > 0 {
                targets.push(from - side);
            }
            if c > 0 {
                targets.push(from - 1);
            }
            if c + 1 < side {
                targets.push(from + 1);
            }
            if r + 1 < side {
                targets.push(from + side);
            }
            moves.extend(targets.into_iter().map(|to| (from as u8, to as u8)));
        }
        let mut by_from = alloc::vec![Vec::new(); cells];
        for (i, &(from, _)) in moves.iter().enumerate() {
            by_from[from as usize].push(ActionId::from(i));
        }
        Ok(NPuzzle {
            side,
            moves,
            by_from,
        })
    }

    /// The 15-puzzle.
    pub fn fifteen() -> Self {
        NPuzzle::new(4).expect("valid side")
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn cells(&self) -> usize {
        self.side * self.side
    }

    /// `(from, to)` cells of a primitive move.
    pub fn move_cells(&self, action: ActionId) -> (u8, u8) {
        self.moves[action.index()]
    }

    pub fn move_between(&self, from: usize, to: usize) -> Option<ActionId> {
        self.moves
            .binary_search(&(from as u8, to as u8))
            .ok()
            .map(ActionId::from)
    }

    pub fn solved(&self) -> State {
        let n = self.cells();
        let mut s = Vec::with_capacity(n);
        s.push((n - 1) as Value);
        s.extend((0..n - 1).map(|c| c as Value));
        State::new(s)
    }

    pub fn goal(&self) -> Goal {
        Goal::from_state(&self.solved())
    }

    /// Checks that `state` assigns every piece a distinct cell.
    pub fn validate(&self, state: &[Value]) -> Result<()> {
        if state.len() != self.cells() {
            return Err(Error::LengthMismatch {
                left: state.len(),
                right: self.cells(),
            });
        }
        Permutation::from_images(state.to_vec()).map(|_| ())
    }

    /// Whether `state` can reach the solved state.
    ///
    /// Every move is one transposition of cells and shifts the blank by one
    /// step, so the parity of the piece-to-cell permutation plus the blank's
    /// Manhattan distance from its home cell never changes.
    pub fn is_solvable(&self, state: &[Value]) -> bool {
        self.parity_class(state) == self.parity_class(&self.solved())
    }

    fn parity_class(&self, state: &[Value]) -> bool {
        let perm = Permutation::from_images(state.to_vec()).expect("valid puzzle state");
        let home = self.cells() - 1;
        let blank = state[0] as usize;
        let dist = (blank / self.side).abs_diff(home / self.side)
            + (blank % self.side).abs_diff(home % self.side);
        perm.is_odd() ^ (dist % 2 == 1)
    }

    /// Applies `steps` uniformly random applicable moves from the solved state.
    pub fn scramble_steps(&self, steps: usize, rng: &mut Rng) -> State {
        let mut cur = self.solved().into_vec();
        let mut next = cur.clone();
        for _ in 0..steps {
            let &action = self.by_from[cur[0] as usize]
                .choose(rng)
                .expect("every cell has a neighbour");
            self.apply(&cur, action, &mut next);
            core::mem::swap(&mut cur, &mut next);
        }
        State::new(cur)
    }
}

/// A 15-puzzle instance scrambled by 225 or 226 random moves.
pub fn scramble_puzzle(puzzle: &NPuzzle, seed: u64) -> State {
    let mut rng = seeded(seed);
    let steps = SCRAMBLE_STEPS[rng.gen_range(0..2)];
    puzzle.scramble_steps(steps, &mut rng)
}

impl Domain for NPuzzle {
    fn num_vars(&self) -> usize {
        self.cells()
    }

    fn num_actions(&self) -> usize {
        self.moves.len()
    }

    fn applicable(&self, state: &[Value], out: &mut Vec<ActionId>) {
        out.extend_from_slice(&self.by_from[state[0] as usize]);
    }

    fn is_applicable(&self, state: &[Value], action: ActionId) -> bool {
        self.moves
            .get(action.index())
            .is_some_and(|&(from, _)| from == state[0])
    }

    fn apply(&self, state: &[Value], action: ActionId, next: &mut [Value]) {
        let (from, to) = self.moves[action.index()];
        for (n, &s) in next.iter_mut().zip(state) {
            *n = if s == from {
                to
            } else if s == to {
                from
            } else {
                s
            };
        }
    }

    fn action_name(&self, action: ActionId) -> String {
        let (from, to) = self.moves[action.index()];
        format!("mv{from}-{to}")
    }

    fn action_by_name(&self, name: &str) -> Option<ActionId> {
        let (from, to) = name.strip_prefix("mv")?.split_once('-')?;
        self.move_between(from.parse().ok()?, to.parse().ok()?)
    }
}

impl MacroDomain for NPuzzle {
    type Effect = PuzzleEffect;

    fn summarize(&self, seq: &[ActionId]) -> Result<PuzzleEffect> {
        let Some(&first) = seq.first() else {
            return Err(Error::Unchainable {
                position: 0,
                reason: "empty sequence".into(),
            });
        };
        let n = self.cells();
        let check = |position: usize, a: ActionId| {
            if a.index() >= self.moves.len() {
                return Err(Error::Unchainable {
                    position,
                    reason: format!("unknown action {}", a.0),
                });
            }
            Ok(self.moves[a.index()])
        };
        let blank_cell = check(0, first)?.0;
        let mut perm = Permutation::identity(n);
        let mut blank = blank_cell;
        for (position, &a) in seq.iter().enumerate() {
            let (from, to) = check(position, a)?;
            if from != blank {
                return Err(Error::Unchainable {
                    position,
                    reason: format!("blank is at cell {blank}, {} needs it at {from}", self.action_name(a)),
                });
            }
            perm = perm.then(&Permutation::transposition(n, from as usize, to as usize));
            blank = to;
        }
        Ok(PuzzleEffect { blank_cell, perm })
    }

    fn effect_applicable(&self, effect: &PuzzleEffect, state: &[Value]) -> bool {
        state[0] == effect.blank_cell
    }

    fn apply_effect(&self, effect: &PuzzleEffect, state: &[Value], next: &mut [Value]) {
        effect.perm.apply_into(state, next);
    }

    fn precondition_token(&self, effect: &PuzzleEffect) -> Option<String> {
        Some(format!("cell{}", effect.blank_cell))
    }
}

impl StateSampler for NPuzzle {
    /// Uniform over solvable states.
    fn sample_state(&self, rng: &mut Rng) -> State {
        let mut cells: Vec<Value> = (0..self.cells() as u16).map(|c| c as Value).collect();
        cells.shuffle(rng);
        if !self.is_solvable(&cells) {
            // swapping two tiles flips solvability and is a bijection
            cells.swap(1, 2);
        }
        State::new(cells)
    }
}
