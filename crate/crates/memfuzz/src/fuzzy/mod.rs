//! Finite-valued fuzzy set and multiset algebra.

mod extnat;
mod grade;
mod multiset;
mod natset;

pub use extnat::ExtNat;
pub use grade::{Grade, GradeError, GradeSet};
pub use multiset::FuzzyMultiset;
pub use natset::{FuzzyNatSet, NatLevel};
