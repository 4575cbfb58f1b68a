//! Rubik's cube as a permutation of 48 non-center stickers.
//!
//! Faces are ordered U, D, L, R, F, B; each face contributes its eight outer
//! stickers row-major (center skipped), so sticker `8 * face + k`. Variable
//! `i` holds the slot sticker `i` currently occupies; the solved cube is the
//! identity. The twelve quarter turns are derived from 3D geometry rather
//! than hand-written cycles.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng as _;

use crate::macros::{MacroDomain, StateSampler};
use crate::perm::Permutation;
use crate::rng::{seeded, Rng};
use crate::sim::{ActionId, Domain};
use crate::state::{Goal, State, Value};
use crate::{Error, Result};

pub const STICKERS: usize = 48;
pub const NUM_MOVES: usize = 12;

/// Quarter-turn names in action-table order. Move `a ^ 1` undoes move `a`.
pub const MOVE_NAMES: [&str; NUM_MOVES] =
    ["U", "U'", "D", "D'", "L", "L'", "R", "R'", "F", "F'", "B", "B'"];

/// Random quarter turns used to draw restart states.
pub const SAMPLER_SCRAMBLE: usize = 100;

/// The six expert sequences, in their published notation.
pub const EXPERT_MACROS: [&str; 6] = [
    "L' B L F' L' B' L F",
    "L' R U U R' L F F",
    "R R U R U R' U' R' U' R' U R'",
    "R B' R' U' B' U F U' B U R B R' F'",
    "F F R' F' U' F' U F R F' U U F U U F' U'",
    "L R' F L R' D L R' B L R' U U L R' F L R' D L R' B L R'",
];

type V3 = [i32; 3];

/// (outward normal, right, down) of each face as seen from outside.
const FACES: [(V3, V3, V3); 6] = [
    ([0, 1, 0], [1, 0, 0], [0, 0, 1]),
    ([0, -1, 0], [1, 0, 0], [0, 0, -1]),
    ([-1, 0, 0], [0, 0, 1], [0, -1, 0]),
    ([1, 0, 0], [0, 0, -1], [0, -1, 0]),
    ([0, 0, 1], [1, 0, 0], [0, -1, 0]),
    ([0, 0, -1], [-1, 0, 0], [0, -1, 0]),
];

fn add(a: V3, b: V3) -> V3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn scale(k: i32, a: V3) -> V3 {
    [k * a[0], k * a[1], k * a[2]]
}

fn dot(a: V3, b: V3) -> i32 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: V3, b: V3) -> V3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Clockwise quarter turn (seen from outside) about the unit axis `n`.
fn turn(n: V3, v: V3) -> V3 {
    add(scale(-1, cross(n, v)), scale(dot(n, v), n))
}

fn face_of(normal: V3) -> usize {
    FACES.iter().position(|f| f.0 == normal).expect("unit axis")
}

/// Cubie position and facing of every sticker.
fn sticker_geometry() -> Vec<(V3, V3)> {
    let mut out = Vec::with_capacity(STICKERS);
    for &(n, r, d) in &FACES {
        for row in -1..=1 {
            for col in -1..=1 {
                if row == 0 && col == 0 {
                    continue;
                }
                out.push((add(n, add(scale(col, r), scale(row, d))), n));
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct Cube {
    moves: Vec<Permutation>,
}

impl Default for Cube {
    fn default() -> Self {
        Cube::new()
    }
}

impl Cube {
    pub fn new() -> Self {
        let geometry = sticker_geometry();
        let slot = |pos: V3, normal: V3| {
            geometry
                .iter()
                .position(|&g| g == (pos, normal))
                .expect("turn maps stickers to stickers")
        };
        let mut moves = Vec::with_capacity(NUM_MOVES);
        for &(n, _, _) in &FACES {
            let cw: Vec<Value> = geometry
                .iter()
                .enumerate()
                .map(|(i, &(pos, normal))| {
                    if dot(pos, n) == 1 {
                        slot(turn(n, pos), turn(n, normal)) as Value
                    } else {
                        i as Value
                    }
                })
                .collect();
            let cw = Permutation::from_images(cw).expect("geometric turn is a bijection");
            let ccw = cw.inverse();
            moves.push(cw);
            moves.push(ccw);
        }
        Cube { moves }
    }

    pub fn solved(&self) -> State {
        State::new((0..STICKERS as u8).collect())
    }

    pub fn goal(&self) -> Goal {
        Goal::from_state(&self.solved())
    }

    pub fn move_perm(&self, action: ActionId) -> &Permutation {
        &self.moves[action.index()]
    }

    /// Applies `steps` uniformly random quarter turns from the solved cube.
    pub fn scramble_steps(&self, steps: usize, rng: &mut Rng) -> State {
        let mut cur = self.solved().into_vec();
        let mut next = cur.clone();
        for _ in 0..steps {
            let a = ActionId(rng.gen_range(0..NUM_MOVES as u32));
            self.apply(&cur, a, &mut next);
            core::mem::swap(&mut cur, &mut next);
        }
        State::new(cur)
    }
}

/// `steps` random quarter turns from solved, seeded.
pub fn scramble_cube(cube: &Cube, steps: usize, seed: u64) -> State {
    cube.scramble_steps(steps, &mut seeded(seed))
}

/// Parses space-separated move tokens.
pub fn parse_moves(text: &str) -> Result<Vec<ActionId>> {
    text.split_whitespace()
        .map(|tok| {
            MOVE_NAMES
                .iter()
                .position(|&m| m == tok)
                .map(ActionId::from)
                .ok_or_else(|| Error::Config(format!("unknown cube move {tok:?}")))
        })
        .collect()
}

pub fn format_moves(seq: &[ActionId]) -> String {
    let names: Vec<&str> = seq.iter().map(|a| MOVE_NAMES[a.index()]).collect();
    names.join(" ")
}

/// The move undoing `a`.
pub fn inverse_move(a: ActionId) -> ActionId {
    ActionId(a.0 ^ 1)
}

/// The 24 proper rotations as signed permutation matrices, identity first.
pub fn rotations() -> Vec<[V3; 3]> {
    const AXES: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut out = Vec::with_capacity(24);
    for axes in AXES {
        for signs in 0..8 {
            let mut m = [[0; 3]; 3];
            for (row, &col) in axes.iter().enumerate() {
                m[row][col] = if signs >> row & 1 == 1 { -1 } else { 1 };
            }
            if det(&m) == 1 {
                out.push(m);
            }
        }
    }
    out
}

fn det(m: &[V3; 3]) -> i32 {
    dot(m[0], cross(m[1], m[2]))
}

fn mat_vec(m: &[V3; 3], v: V3) -> V3 {
    [dot(m[0], v), dot(m[1], v), dot(m[2], v)]
}

/// Relabels `seq` as seen after rotating the whole cube by `rot`.
pub fn rotate_sequence(seq: &[ActionId], rot: &[V3; 3]) -> Vec<ActionId> {
    seq.iter()
        .map(|a| {
            let face = face_of(mat_vec(rot, FACES[a.index() / 2].0));
            ActionId::from(2 * face + a.index() % 2)
        })
        .collect()
}

/// Left-right mirror image: L and R trade places and every turn reverses.
pub fn mirror_sequence(seq: &[ActionId]) -> Vec<ActionId> {
    seq.iter()
        .map(|a| {
            let face = match a.index() / 2 {
                2 => 3,
                3 => 2,
                f => f,
            };
            ActionId::from(2 * face + (1 - a.index() % 2))
        })
        .collect()
}

pub fn invert_sequence(seq: &[ActionId]) -> Vec<ActionId> {
    seq.iter().rev().map(|&a| inverse_move(a)).collect()
}

/// The 96 orientation, mirror and inverse variants of `base`.
///
/// Ordered rotation-major, then mirror, then inverse, so variant 0 is `base`
/// itself and variant 1 its inverse. Coinciding variants are kept.
pub fn expand_variants(base: &[ActionId]) -> Vec<Vec<ActionId>> {
    let mut out = Vec::with_capacity(96);
    for rot in rotations() {
        let rotated = rotate_sequence(base, &rot);
        for mirrored in [rotated.clone(), mirror_sequence(&rotated)] {
            out.push(mirrored.clone());
            out.push(invert_sequence(&mirrored));
        }
    }
    out
}

pub fn expert_bases() -> Vec<Vec<ActionId>> {
    EXPERT_MACROS
        .iter()
        .map(|s| parse_moves(s).expect("well-formed expert macro"))
        .collect()
}

/// All 576 expert macro sequences, base by base.
pub fn expert_catalog() -> Vec<Vec<ActionId>> {
    expert_bases().iter().flat_map(|b| expand_variants(b)).collect()
}

impl Domain for Cube {
    fn num_vars(&self) -> usize {
        STICKERS
    }

    fn num_actions(&self) -> usize {
        NUM_MOVES
    }

    fn applicable(&self, _state: &[Value], out: &mut Vec<ActionId>) {
        out.extend((0..NUM_MOVES).map(ActionId::from));
    }

    fn is_applicable(&self, _state: &[Value], action: ActionId) -> bool {
        action.index() < NUM_MOVES
    }

    fn apply(&self, state: &[Value], action: ActionId, next: &mut [Value]) {
        self.moves[action.index()].apply_into(state, next);
    }

    fn action_name(&self, action: ActionId) -> String {
        MOVE_NAMES[action.index()].into()
    }

    fn action_by_name(&self, name: &str) -> Option<ActionId> {
        MOVE_NAMES.iter().position(|&m| m == name).map(ActionId::from)
    }
}

impl MacroDomain for Cube {
    type Effect = Permutation;

    fn summarize(&self, seq: &[ActionId]) -> Result<Permutation> {
        if let Some(position) = seq.iter().position(|a| a.index() >= NUM_MOVES) {
            return Err(Error::Unchainable {
                position,
                reason: format!("unknown action {}", seq[position].0),
            });
        }
        Permutation::compose(seq.iter().map(|a| &self.moves[a.index()])).ok_or_else(|| {
            Error::Unchainable {
                position: 0,
                reason: "empty sequence".into(),
            }
        })
    }

    fn effect_applicable(&self, _effect: &Permutation, _state: &[Value]) -> bool {
        true
    }

    fn apply_effect(&self, effect: &Permutation, state: &[Value], next: &mut [Value]) {
        effect.apply_into(state, next);
    }
}

impl StateSampler for Cube {
    fn sample_state(&self, rng: &mut Rng) -> State {
        self.scramble_steps(SAMPLER_SCRAMBLE, rng)
    }
}
