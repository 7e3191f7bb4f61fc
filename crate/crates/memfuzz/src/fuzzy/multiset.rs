//! Fuzzy multisets: counts of possibly-inexact copies of reactives.

use std::collections::BTreeMap;
use std::fmt;

use crate::fuzzy::extnat::ExtNat;
use crate::fuzzy::grade::Grade;
use crate::ids::ReactiveId;

/// A finitely-supported map `(reactive, grade) -> count` describing the
/// content of one region.
///
/// Only positive grades are stored: a grade-0 entry would count objects that
/// are not copies of the reactive at all, and that value is determined by the
/// rest of the map. Zero counts are never materialized, so equal contents are
/// structurally equal.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FuzzyMultiset {
    entries: BTreeMap<(ReactiveId, Grade), ExtNat>,
}

impl FuzzyMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, v: &ReactiveId, t: Grade) -> ExtNat {
        self.entries
            .get(&(v.clone(), t))
            .copied()
            .unwrap_or(ExtNat::ZERO)
    }

    /// Sets the count for `(v, t)`, dropping the entry when it is zero.
    ///
    /// Panics on a grade-0 key; the domain is `V x I^+` by construction.
    pub fn set(&mut self, v: ReactiveId, t: Grade, count: ExtNat) {
        assert!(!t.is_zero(), "fuzzy multisets never store grade-0 entries");
        if count.is_zero() {
            self.entries.remove(&(v, t));
        } else {
            self.entries.insert((v, t), count);
        }
    }

    pub fn add(&mut self, v: ReactiveId, t: Grade, count: ExtNat) {
        if count.is_zero() {
            return;
        }
        let current = self.get(&v, t);
        self.set(v, t, current + count);
    }

    /// Removes `count` copies of `(v, t)`. Panics if fewer are present; the
    /// transition semantics checks feasibility before moving anything, so an
    /// underflow here is an engine bug.
    pub fn remove(&mut self, v: ReactiveId, t: Grade, count: ExtNat) {
        if count.is_zero() {
            return;
        }
        let current = self.get(&v, t);
        let left = current
            .checked_sub(count)
            .unwrap_or_else(|| panic!("removing {count} copies of ({v}, {t}) from {current}"));
        self.set(v, t, left);
    }

    /// Total count of copies of `v` with grade at least `t`; infinite when
    /// any contributing entry is infinite. `t` must be positive.
    pub fn level_sum(&self, v: &ReactiveId, t: Grade) -> ExtNat {
        assert!(!t.is_zero(), "level sums are taken at positive grades");
        self.entries
            .range((v.clone(), t)..=(v.clone(), Grade::one()))
            .map(|(_, &c)| c)
            .sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ReactiveId, Grade, ExtNat)> {
        self.entries.iter().map(|((v, t), &c)| (v, *t, c))
    }

    /// Grades at which `v` occurs with a nonzero count.
    pub fn grades_of(&self, v: &ReactiveId) -> impl Iterator<Item = (Grade, ExtNat)> + '_ {
        self.entries
            .range((v.clone(), Grade::zero())..=(v.clone(), Grade::one()))
            .map(|((_, t), &c)| (*t, c))
    }

    pub fn reactives(&self) -> impl Iterator<Item = &ReactiveId> {
        let mut last: Option<&ReactiveId> = None;
        self.entries.keys().filter_map(move |(v, _)| {
            if last == Some(v) {
                None
            } else {
                last = Some(v);
                Some(v)
            }
        })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }
}

impl FromIterator<(ReactiveId, Grade, ExtNat)> for FuzzyMultiset {
    fn from_iter<T: IntoIterator<Item = (ReactiveId, Grade, ExtNat)>>(iter: T) -> Self {
        let mut ms = FuzzyMultiset::new();
        for (v, t, c) in iter {
            ms.add(v, t, c);
        }
        ms
    }
}

impl fmt::Display for FuzzyMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        let mut first = true;
        for ((v, t), c) in &self.entries {
            if !first {
                write!(f, ",")?;
            }
            write!(f, " {v}@{t} : {c}")?;
            first = false;
        }
        if !first {
            write!(f, " ")?;
        }
        write!(f, "}}")
    }
}
