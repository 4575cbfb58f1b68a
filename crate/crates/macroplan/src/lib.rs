//! Experiment driver for black-box planning with focused macro-actions:
//! file formats, correlation statistics and the `correlate`, `sweep`,
//! `learn` and `plan` experiments behind the `macroplan` binary.

pub mod benchmark;
pub mod config;
pub mod experiments;
pub mod formats;
pub mod stats;
