//! Natural numbers extended with infinity, used for object counts.

use std::fmt;
use std::iter::Sum;
use std::ops::Add;

/// A count that is either a finite natural or unbounded.
///
/// Arithmetic saturates at infinity: `inf + k = inf` and `inf - k = inf` for
/// finite `k`. Subtracting a larger finite value from a smaller one is a bug
/// in the caller (the transition semantics never produces it), so
/// [`ExtNat::checked_sub`] returns `None` there instead of wrapping.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExtNat {
    Fin(u64),
    Inf,
}

impl ExtNat {
    pub const ZERO: ExtNat = ExtNat::Fin(0);

    pub fn fin(n: u64) -> Self {
        ExtNat::Fin(n)
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, ExtNat::Inf)
    }

    pub fn is_zero(self) -> bool {
        self == ExtNat::Fin(0)
    }

    pub fn as_finite(self) -> Option<u64> {
        match self {
            ExtNat::Fin(n) => Some(n),
            ExtNat::Inf => None,
        }
    }

    /// `self - rhs`, with `inf - k = inf`. `None` when the subtraction would
    /// go negative or when `rhs` is infinite while `self` is finite.
    pub fn checked_sub(self, rhs: ExtNat) -> Option<ExtNat> {
        match (self, rhs) {
            (ExtNat::Inf, ExtNat::Fin(_)) => Some(ExtNat::Inf),
            (ExtNat::Fin(a), ExtNat::Fin(b)) => a.checked_sub(b).map(ExtNat::Fin),
            (_, ExtNat::Inf) => None,
        }
    }
}

impl PartialOrd for ExtNat {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtNat {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use ExtNat::*;
        match (self, other) {
            (Fin(a), Fin(b)) => a.cmp(b),
            (Fin(_), Inf) => std::cmp::Ordering::Less,
            (Inf, Fin(_)) => std::cmp::Ordering::Greater,
            (Inf, Inf) => std::cmp::Ordering::Equal,
        }
    }
}

impl Add for ExtNat {
    type Output = ExtNat;

    fn add(self, rhs: ExtNat) -> ExtNat {
        match (self, rhs) {
            (ExtNat::Fin(a), ExtNat::Fin(b)) => {
                ExtNat::Fin(a.checked_add(b).expect("count overflow"))
            }
            _ => ExtNat::Inf,
        }
    }
}

impl Add<u64> for ExtNat {
    type Output = ExtNat;

    fn add(self, rhs: u64) -> ExtNat {
        self + ExtNat::Fin(rhs)
    }
}

impl Sum for ExtNat {
    fn sum<I: Iterator<Item = ExtNat>>(iter: I) -> ExtNat {
        iter.fold(ExtNat::ZERO, |acc, x| acc + x)
    }
}

impl From<u64> for ExtNat {
    fn from(n: u64) -> Self {
        ExtNat::Fin(n)
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtNat::Fin(n) => write!(f, "{n}"),
            ExtNat::Inf => write!(f, "inf"),
        }
    }
}
