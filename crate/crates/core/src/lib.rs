//! Hankel determinants modulo 2, apwenian sequences and the constant-length
//! substitutions that generate them.

pub mod approx;
pub mod classify;
pub mod cli;
pub mod criteria;
pub mod error;
pub mod gf2;
pub mod hankel;
pub mod jfraction;
pub mod sequences;
pub mod series;

pub use error::{Error, Result};
