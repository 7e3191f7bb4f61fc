//! Exact membership grades and finite grade sets.
//!
//! Grades are exact rationals in `[0, 1]`. Keeping them exact keeps every
//! threshold comparison (`>= tau`) platform-independent, which matters because
//! maximality checks branch on those comparisons.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GradeError {
    #[error("grade must lie in [0, 1], got {0}")]
    OutOfRange(String),
    #[error("denominator must be nonzero")]
    ZeroDenominator,
    #[error("cannot parse grade from `{0}`")]
    Unparseable(String),
    #[error("grade set must contain 0")]
    MissingZero,
    #[error("grade set must contain 1")]
    MissingOne,
    #[error("grade set entries must be strictly increasing")]
    NotStrictlyIncreasing,
    #[error("grade {0} is not a member of the grade set")]
    NotAMember(Grade),
}

/// An exact rational degree of accuracy in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Grade(Ratio<i64>);

impl Grade {
    pub fn new(numer: i64, denom: i64) -> Result<Self, GradeError> {
        if denom == 0 {
            return Err(GradeError::ZeroDenominator);
        }
        let r = Ratio::new(numer, denom);
        if r < Ratio::zero() || r > Ratio::one() {
            return Err(GradeError::OutOfRange(format!("{numer}/{denom}")));
        }
        Ok(Grade(r))
    }

    pub const fn zero() -> Self {
        Grade(Ratio::new_raw(0, 1))
    }

    pub const fn one() -> Self {
        Grade(Ratio::new_raw(1, 1))
    }

    pub fn is_zero(self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(self) -> bool {
        self.0.is_one()
    }

    pub fn numer(self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(self) -> i64 {
        *self.0.denom()
    }
}

impl fmt::Display for Grade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom() == &1 {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for Grade {
    type Err = GradeError;

    /// Accepts `0`, `1`, `p/q` and exact decimals such as `0.5`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GradeError::Unparseable(s.to_string());
        if let Some((n, d)) = s.split_once('/') {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            return Grade::new(n, d);
        }
        if let Some((int, frac)) = s.split_once('.') {
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let int: i64 = if int.is_empty() {
                0
            } else {
                int.parse().map_err(|_| bad())?
            };
            let numer: i64 = frac.parse().map_err(|_| bad())?;
            let denom = 10i64.checked_pow(frac.len() as u32).ok_or_else(bad)?;
            return Grade::new(
                int.checked_mul(denom)
                    .and_then(|v| v.checked_add(numer))
                    .ok_or_else(bad)?,
                denom,
            );
        }
        let n: i64 = s.trim().parse().map_err(|_| bad())?;
        Grade::new(n, 1)
    }
}

/// The finite, totally ordered set `I` of admissible grades.
///
/// Always contains 0 and 1; `positive()` is `I` without 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GradeSet {
    grades: Vec<Grade>,
}

impl GradeSet {
    pub fn new(mut grades: Vec<Grade>) -> Result<Self, GradeError> {
        grades.sort();
        for w in grades.windows(2) {
            if w[0] == w[1] {
                return Err(GradeError::NotStrictlyIncreasing);
            }
        }
        if grades.first() != Some(&Grade::zero()) {
            return Err(GradeError::MissingZero);
        }
        if grades.last() != Some(&Grade::one()) {
            return Err(GradeError::MissingOne);
        }
        Ok(GradeSet { grades })
    }

    /// The two-valued set `{0, 1}`.
    pub fn boolean() -> Self {
        GradeSet {
            grades: vec![Grade::zero(), Grade::one()],
        }
    }

    pub fn all(&self) -> &[Grade] {
        &self.grades
    }

    /// `I` without 0, in ascending order. Nonempty by construction.
    pub fn positive(&self) -> &[Grade] {
        &self.grades[1..]
    }

    pub fn min_positive(&self) -> Grade {
        self.grades[1]
    }

    pub fn contains(&self, g: Grade) -> bool {
        self.grades.binary_search(&g).is_ok()
    }

    pub fn contains_positive(&self, g: Grade) -> bool {
        !g.is_zero() && self.contains(g)
    }

    /// The least member strictly greater than `t`, if any.
    ///
    /// Defined for every member except 1; callers use it to find the first
    /// grade level above a threshold.
    pub fn successor(&self, t: Grade) -> Option<Grade> {
        self.grades.iter().copied().find(|&g| g > t)
    }

    pub fn len(&self) -> usize {
        self.grades.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_boolean(&self) -> bool {
        self.grades.len() == 2
    }
}

impl fmt::Display for GradeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for g in &self.grades {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{g}")?;
            first = false;
        }
        Ok(())
    }
}
