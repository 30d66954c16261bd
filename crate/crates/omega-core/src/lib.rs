//! Aperiodic transformations of ultimately periodic omega-words.
//!
//! Four machine models are implemented over a common word type:
//! deterministic Muller automata ([`muller`]), streaming string transducers
//! ([`sst`]), two-way transducers with regular look-around ([`twowst`]) and
//! first-order logic transducers ([`fot`], built on [`fo`]). The
//! [`constructions`] module turns two-way transducers into streaming ones and
//! removes look-around, and [`monoid`] holds the transition-monoid machinery
//! used to decide aperiodicity and 1-boundedness.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod constructions;
pub mod error;
pub mod fixtures;
pub mod fo;
pub mod fot;
pub mod monoid;
pub mod muller;
pub mod set;
pub mod sst;
pub mod twowst;
pub mod words;

pub use error::{Error, Result};
pub use set::StateSet;
pub use words::{Alphabet, OutSym, RunResult, UpWord};
