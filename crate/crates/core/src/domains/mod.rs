//! Benchmark domains.

pub mod cube;
pub mod gf2;
pub mod npuzzle;
pub mod strips;
pub mod suitcase;
