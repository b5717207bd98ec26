//! Finite-scale constructions around budgeted plain complexity of prefixes.
//!
//! The crate is organised around a fixed toy machine (TRM-1) and the
//! combinatorial objects built on top of it:
//!
//! * [`machine`] runs TRM-1 programs and dovetails the set of strings with
//!   short descriptions given their length.
//! * [`tree`] is set algebra on the binary tree (width, leaflessness, paths).
//! * [`trimmer`] computes the largest acceptable leafless set of bounded
//!   width containing every depth-spanning path of an enumerated set.
//! * [`tokens`] numbers the paths of a leafless set online with at most
//!   `width` tokens.
//! * [`game`] referees the string-painting game and plays the recursive
//!   painter strategy against several opponents.
//! * [`probe`] gives budgeted upper estimates of prefix complexity measures.
//! * [`sample`] generates random and exhaustive instances.

pub mod bits;
pub mod game;
pub mod machine;
pub mod probe;
pub mod sample;
pub mod tokens;
pub mod tree;
pub mod trimmer;

pub use bits::{bs, BitString, ParseBitsError};
pub use machine::{
    enumerate_s, min_program_length, parse_program, run_program, Dovetailer, Program, RunOutcome,
    Witness,
};
pub use tokens::{Decoded, Event, TokenBoard, TokenError};
pub use tree::{shortlex_compare, Path, StringSet};
pub use trimmer::{acceptable_at, largest_acceptable_at, trim, TrimConfig, TrimReport};
