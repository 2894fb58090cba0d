//! Semantic dependency systems.
//!
//! A denotation system assigns every sentence (a propositional variable) a
//! formula describing what it "says". This crate builds the dependency graph
//! of such a system, searches for acceptable valuations (fixpoints), decides
//! paradoxicality and dangerousness for small graphs, and generates the
//! standard Yablo-style families as finite truncations.
//!
//! The crate is `no_std` and only needs `alloc`. File IO, the CLI and the
//! JSON/DOT output live in the `semdep-cli` crate.

#![cfg_attr(not(any(test, feature = "std")), no_std)]

extern crate alloc;

pub mod danger;
pub mod formula;
pub mod generators;
pub mod graph;
pub mod lex;
pub mod solve;
pub mod system;

pub use danger::{DangerError, DangerLimits, DangerReport, DenotationCandidate};
pub use formula::{Formula, FormulaError, ThreeValued, Valuation, VarId};
pub use generators::{ChainForm, GenError};
pub use graph::{DiGraph, GraphError, UndiGraph};
pub use lex::ParseError;
pub use solve::{SolveError, SolveMethod, SolveOutcome, SolveStats, SolveStatus, YabloLikeVerdict};
pub use system::{AcceptabilityReport, DenotationSystem, SystemError, TruncationPolicy};
