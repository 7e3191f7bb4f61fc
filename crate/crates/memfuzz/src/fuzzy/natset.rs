//! Finite-valued fuzzy subsets of the naturals and their level sets.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::fuzzy::grade::{Grade, GradeError, GradeSet};

/// A fuzzy subset of the naturals with finitely many nonzero assignments.
///
/// Absent entries have grade 0; grade-0 assignments are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FuzzyNatSet {
    assignments: BTreeMap<u64, Grade>,
}

/// A level set `{n | f(n) >= t}`. At `t = 0` every natural qualifies, which
/// gets a symbolic representation instead of an enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NatLevel {
    Universal,
    Finite(BTreeSet<u64>),
}

impl FuzzyNatSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, n: u64) -> Grade {
        self.assignments.get(&n).copied().unwrap_or(Grade::zero())
    }

    pub fn assign(&mut self, n: u64, grade: Grade) {
        if grade.is_zero() {
            self.assignments.remove(&n);
        } else {
            self.assignments.insert(n, grade);
        }
    }

    /// Raises the grade of `n` to at least `grade`.
    pub fn join_at(&mut self, n: u64, grade: Grade) {
        if grade > self.get(n) {
            self.assign(n, grade);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, Grade)> + '_ {
        self.assignments.iter().map(|(&n, &g)| (n, g))
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    /// The `t`-level `{n | f(n) >= t}`.
    pub fn level(&self, t: Grade) -> NatLevel {
        if t.is_zero() {
            return NatLevel::Universal;
        }
        NatLevel::Finite(
            self.assignments
                .iter()
                .filter(|(_, &g)| g >= t)
                .map(|(&n, _)| n)
                .collect(),
        )
    }

    /// Level set restricted to positive naturals | see [`FuzzyNatSet::level`].
    pub fn positive_level(&self, t: Grade) -> BTreeSet<u64> {
        match self.level(t) {
            NatLevel::Universal => panic!("positive level taken at grade 0"),
            NatLevel::Finite(set) => set.into_iter().filter(|&n| n > 0).collect(),
        }
    }

    /// Drops the assignment at 0, keeping entries for positive naturals only.
    pub fn restricted_to_positive(&self) -> FuzzyNatSet {
        FuzzyNatSet {
            assignments: self
                .assignments
                .iter()
                .filter(|(&n, _)| n > 0)
                .map(|(&n, &g)| (n, g))
                .collect(),
        }
    }

    /// Pointwise maximum of two fuzzy subsets.
    pub fn join(&self, other: &FuzzyNatSet) -> FuzzyNatSet {
        let mut out = self.clone();
        for (n, g) in other.iter() {
            out.join_at(n, g);
        }
        out
    }

    /// True iff the two subsets have the same `t`-level for every member of
    /// `grades`; for finite grade sets this coincides with pointwise
    /// equality. Errors when either subset assigns a grade outside `grades`.
    pub fn levels_equal(&self, other: &FuzzyNatSet, grades: &GradeSet) -> Result<bool, GradeError> {
        for set in [self, other] {
            for (_, g) in set.iter() {
                if !grades.contains(g) {
                    return Err(GradeError::NotAMember(g));
                }
            }
        }
        Ok(grades
            .all()
            .iter()
            .all(|&t| self.level(t) == other.level(t)))
    }

    /// True iff every assignment's grade is a member of `grades`.
    pub fn is_valued_in(&self, grades: &GradeSet) -> bool {
        self.iter().all(|(_, g)| grades.contains(g))
    }
}

impl FromIterator<(u64, Grade)> for FuzzyNatSet {
    fn from_iter<T: IntoIterator<Item = (u64, Grade)>>(iter: T) -> Self {
        let mut set = FuzzyNatSet::new();
        for (n, g) in iter {
            set.join_at(n, g);
        }
        set
    }
}

impl fmt::Display for FuzzyNatSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        let mut first = true;
        for (n, g) in self.iter() {
            if !first {
                write!(f, ",")?;
            }
            write!(f, " {n} : {g}")?;
            first = false;
        }
        if !first {
            write!(f, " ")?;
        }
        write!(f, "}}")
    }
}
