//! Joint linear complexity of multisequences over finite fields.
//!
//! An m-multisequence of length n over F_q is an m x n array of field
//! symbols; its joint linear complexity is the shortest single linear
//! recurrence generating all m rows simultaneously. This crate computes
//! that quantity (via a trusted linear-algebra oracle and a faster
//! search with witness extraction), exhaustively tallies the complexity
//! distribution N(L) over all q^(nm) multisequences, derives the exact
//! expected complexity and its deviation profile, fits the minimal
//! constants realizing the distribution bounds, and implements the
//! partition/lattice-point machinery (rho_H, M_H, the simplices and
//! their rational vertices) those bounds rest on.
//!
//! The `mseq` binary exposes everything as subcommands; see the README
//! for file formats and flags.

pub mod census;
pub mod error;
pub mod field;
pub mod lfsr;
pub mod polytope;
pub mod report;
pub mod seqfile;
pub mod verify;

pub use error::{Error, Result};
pub use field::Field;
pub use lfsr::{
    generates, jlc_fast, jlc_oracle, jlc_profile, ComplexityProfile, ConnectionPoly,
    Multisequence,
};
