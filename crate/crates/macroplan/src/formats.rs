//! Line-oriented text files: macro libraries, lock instances, puzzle problems
//! and cube scrambles. Ground STRIPS files are handled by the core crate.

use std::fmt::Write as _;
use std::str::FromStr;

use macroplan_core::domains::gf2::BinaryMatrix;
use macroplan_core::domains::suitcase::SuitcaseLock;
use macroplan_core::Value;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError {
        line,
        message: message.into(),
    }
}

/// Splits `key=value` tokens after a fixed leading keyword.
fn fields<'a>(line_no: usize, line: &'a str, keyword: &str) -> Result<Vec<(&'a str, &'a str)>, FormatError> {
    let mut tokens = line.split_whitespace();
    if tokens.next() != Some(keyword) {
        return Err(err(line_no, format!("expected a line starting with {keyword:?}")));
    }
    tokens
        .map(|t| {
            t.split_once('=')
                .ok_or_else(|| err(line_no, format!("expected key=value, got {t:?}")))
        })
        .collect()
}

fn field<T: FromStr>(line_no: usize, kv: &[(&str, &str)], key: &str) -> Result<T, FormatError> {
    let (_, v) = kv
        .iter()
        .find(|(k, _)| *k == key)
        .ok_or_else(|| err(line_no, format!("missing {key}=")))?;
    v.parse()
        .map_err(|_| err(line_no, format!("bad value for {key}: {v:?}")))
}

/// Non-empty lines with their 1-based numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LibraryHeader {
    pub domain: String,
    pub num_macros: usize,
    pub repetitions: usize,
    pub budget: u64,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LibraryEntry {
    pub seq: Vec<String>,
    pub effect_size: usize,
    /// Precondition token, `-` when the macro always applies.
    pub pre: String,
}

/// A macro library file: a header line, then one macro per line.
///
/// ```text
/// macros v1 domain=npuzzle-4x4 N_M=1600 R_M=16 B_M=1000000 seed=0
/// 0 len=2 seq=mv15-14,mv14-10 effect_size=3 pre=cell15
/// ```
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LibraryFile {
    pub header: LibraryHeader,
    pub entries: Vec<LibraryEntry>,
}

impl LibraryFile {
    pub fn to_text(&self) -> String {
        let h = &self.header;
        let mut out = format!(
            "macros v1 domain={} N_M={} R_M={} B_M={} seed={}\n",
            h.domain, h.num_macros, h.repetitions, h.budget, h.seed
        );
        for (i, e) in self.entries.iter().enumerate() {
            let _ = writeln!(
                out,
                "{i} len={} seq={} effect_size={} pre={}",
                e.seq.len(),
                e.seq.join(","),
                e.effect_size,
                e.pre
            );
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let mut lines = content_lines(text);
        let (hl, head) = lines.next().ok_or_else(|| err(1, "empty library file"))?;
        let mut tokens = head.split_whitespace();
        if tokens.next() != Some("macros") || tokens.next() != Some("v1") {
            return Err(err(hl, "expected a `macros v1` header"));
        }
        let kv: Vec<_> = tokens
            .map(|t| t.split_once('=').ok_or_else(|| err(hl, format!("expected key=value, got {t:?}"))))
            .collect::<Result<_, _>>()?;
        let header = LibraryHeader {
            domain: field(hl, &kv, "domain")?,
            num_macros: field(hl, &kv, "N_M")?,
            repetitions: field(hl, &kv, "R_M")?,
            budget: field(hl, &kv, "B_M")?,
            seed: field(hl, &kv, "seed")?,
        };
        let mut entries = Vec::new();
        for (ln, line) in lines {
            let mut tokens = line.split_whitespace();
            let id: usize = tokens
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| err(ln, "expected a macro id"))?;
            if id != entries.len() {
                return Err(err(ln, format!("macro id {id} out of order, expected {}", entries.len())));
            }
            let kv: Vec<_> = tokens
                .map(|t| t.split_once('=').ok_or_else(|| err(ln, format!("expected key=value, got {t:?}"))))
                .collect::<Result<_, _>>()?;
            let len: usize = field(ln, &kv, "len")?;
            let seq_text: String = field(ln, &kv, "seq")?;
            let seq: Vec<String> = seq_text.split(',').map(str::to_string).collect();
            if seq.len() != len || seq.iter().any(String::is_empty) {
                return Err(err(ln, format!("len={len} but seq has {} actions", seq.len())));
            }
            entries.push(LibraryEntry {
                seq,
                effect_size: field(ln, &kv, "effect_size")?,
                pre: field(ln, &kv, "pre")?,
            });
        }
        Ok(LibraryFile { header, entries })
    }
}

/// `suitcase N= M= kbar= seed=` followed by N rows of N bits.
pub fn lock_to_text(lock: &SuitcaseLock) -> String {
    let n = lock.dials();
    let mut out = format!(
        "suitcase N={n} M={} kbar={} seed={}\n",
        lock.digits(),
        lock.kbar(),
        lock.seed()
    );
    for r in 0..n {
        let row: String = (0..n)
            .map(|c| if lock.increments().get(r, c) { '1' } else { '0' })
            .collect();
        out.push_str(&row);
        out.push('\n');
    }
    out
}

pub fn parse_lock(text: &str) -> Result<SuitcaseLock, FormatError> {
    let mut lines = content_lines(text);
    let (hl, head) = lines.next().ok_or_else(|| err(1, "empty lock file"))?;
    let kv = fields(hl, head, "suitcase")?;
    let n: usize = field(hl, &kv, "N")?;
    let m: u8 = field(hl, &kv, "M")?;
    let kbar: usize = field(hl, &kv, "kbar")?;
    let seed: u64 = field(hl, &kv, "seed")?;
    if !(1..=64).contains(&n) {
        return Err(err(hl, format!("N={n} outside 1..=64")));
    }
    let mut rows = Vec::with_capacity(n);
    for (ln, line) in lines {
        if line.len() != n || !line.bytes().all(|b| b == b'0' || b == b'1') {
            return Err(err(ln, format!("expected {n} bits")));
        }
        rows.push(line.bytes().enumerate().fold(0u64, |acc, (c, b)| acc | ((b == b'1') as u64) << c));
    }
    if rows.len() != n {
        return Err(err(hl, format!("expected {n} rows, found {}", rows.len())));
    }
    SuitcaseLock::new(m, kbar, seed, BinaryMatrix::from_rows(n, rows)).map_err(|e| err(hl, e.to_string()))
}

/// `npuzzle <side>x<side> seed=` followed by one line of tile positions.
pub fn puzzle_to_text(side: usize, seed: u64, state: &[Value]) -> String {
    let cells: Vec<String> = state.iter().map(|v| v.to_string()).collect();
    format!("npuzzle {side}x{side} seed={seed}\n{}\n", cells.join(" "))
}

pub fn parse_puzzle(text: &str) -> Result<(usize, u64, Vec<Value>), FormatError> {
    let mut lines = content_lines(text);
    let (hl, head) = lines.next().ok_or_else(|| err(1, "empty puzzle file"))?;
    let mut tokens = head.split_whitespace();
    if tokens.next() != Some("npuzzle") {
        return Err(err(hl, "expected npuzzle header"));
    }
    let dims = tokens.next().ok_or_else(|| err(hl, "missing grid size"))?;
    let side: usize = dims
        .split_once('x')
        .filter(|(a, b)| a == b)
        .and_then(|(a, _)| a.parse().ok())
        .ok_or_else(|| err(hl, format!("bad grid size {dims:?}")))?;
    let kv: Vec<_> = tokens.filter_map(|t| t.split_once('=')).collect();
    let seed = field(hl, &kv, "seed")?;
    let (vl, values) = lines.next().ok_or_else(|| err(hl + 1, "missing tile positions"))?;
    let state: Vec<Value> = values
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| err(vl, format!("bad cell {t:?}"))))
        .collect::<Result<_, _>>()?;
    if state.len() != side * side {
        return Err(err(vl, format!("expected {} positions, found {}", side * side, state.len())));
    }
    Ok((side, seed, state))
}

/// `cube seed= steps=` followed by the scramble's move tokens.
pub fn scramble_to_text(seed: u64, moves: &[&str]) -> String {
    format!("cube seed={seed} steps={}\n{}\n", moves.len(), moves.join(" "))
}

pub fn parse_scramble(text: &str) -> Result<(u64, Vec<String>), FormatError> {
    let mut lines = content_lines(text);
    let (hl, head) = lines.next().ok_or_else(|| err(1, "empty scramble file"))?;
    let kv = fields(hl, head, "cube")?;
    let seed = field(hl, &kv, "seed")?;
    let steps: usize = field(hl, &kv, "steps")?;
    let moves: Vec<String> = lines
        .flat_map(|(_, l)| l.split_whitespace().map(str::to_string).collect::<Vec<_>>())
        .collect();
    if moves.len() != steps {
        return Err(err(hl, format!("steps={steps} but {} moves listed", moves.len())));
    }
    Ok((seed, moves))
}
