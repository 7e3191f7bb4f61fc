//! Simulator and transformation toolkit for fuzzy symport/antiport membrane
//! systems.
//!
//! A system moves possibly-inexact copies of reactives between nested
//! membranes under maximal parallelism; rules carry threshold functions that
//! decide which copies qualify. The crate provides:
//!
//! - the fuzzy set/multiset algebra the model is built on ([`fuzzy`]),
//! - system descriptions with validation ([`model`], [`crisp`]),
//! - the nondeterministic semantics with bounded exhaustive exploration of
//!   computation trees ([`engine`]),
//! - output extraction down to the generated fuzzy set of naturals
//!   ([`outputs`]),
//! - transformations between crisp and fuzzy systems ([`constructions`]),
//! - a line-oriented text format, trace serialization and a CLI ([`textio`],
//!   [`trace`], [`cli`]).

pub mod cli;
pub mod constructions;
pub mod crisp;
pub mod engine;
pub mod fuzzy;
pub mod ids;
pub mod model;
pub mod outputs;
pub mod textio;
pub mod trace;

pub use crate::crisp::{check_generator_shape, CrispPSystem, CrispRule, ShapeReport};
pub use crate::engine::{
    explore, ExplorationResult, ExploreBounds, TransitionChoice, TransitionOptions,
};
pub use crate::fuzzy::{ExtNat, FuzzyMultiset, FuzzyNatSet, Grade, GradeSet};
pub use crate::ids::{MembraneId, ReactiveId, RegionId};
pub use crate::model::{Configuration, PSystem, Rule, ValidationReport};
pub use crate::outputs::{gen, GenReport, OutputHistogram};
