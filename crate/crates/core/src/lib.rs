//! Krivine machines, System R derivations and the relational semantics
//! they are measured against.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod corpus;
pub mod derivation;
pub mod engine;
pub mod machine;
pub mod parse;
pub mod reduce;
pub mod semantics;
pub mod term;
pub mod types;
pub mod typing;
pub mod unify;

pub use machine::{run, run_with, steps, KForm, MachineKind, RunOptions, RunReport, RunStatus};
pub use parse::{parse, ParseError};
pub use term::{alpha_eq, ensure_variable_convention, Name, Term};
