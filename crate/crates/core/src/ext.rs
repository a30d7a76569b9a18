//! Extended reals `[-inf, +inf]` with a total order and guarded arithmetic.

use core::cmp::Ordering;
use core::fmt;
use core::ops::Neg;

use crate::error::{Error, Result};

/// A finite real, `+inf`, or `-inf`.
///
/// Ordering is total: `NegInf < Finite(_) < PosInf`, finite values compare
/// with `f64::total_cmp`.
#[derive(Clone, Copy, Debug)]
pub enum ExtReal {
    NegInf,
    Finite(f64),
    PosInf,
}

use ExtReal::*;

impl ExtReal {
    pub const ZERO: ExtReal = Finite(0.0);

    /// Maps IEEE infinities onto the matching variant.
    pub fn from_f64(v: f64) -> Self {
        if v == f64::INFINITY {
            PosInf
        } else if v == f64::NEG_INFINITY {
            NegInf
        } else {
            Finite(v)
        }
    }

    pub fn to_f64(self) -> f64 {
        match self {
            NegInf => f64::NEG_INFINITY,
            Finite(v) => v,
            PosInf => f64::INFINITY,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Finite(v) if !v.is_nan())
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Finite(v) => Some(v),
            _ => None,
        }
    }

    /// Addition; `+inf + -inf` is an error, never a silent value.
    pub fn try_add(self, rhs: ExtReal) -> Result<ExtReal> {
        match (self, rhs) {
            (PosInf, NegInf) | (NegInf, PosInf) => Err(Error::Undefined),
            (PosInf, _) | (_, PosInf) => Ok(PosInf),
            (NegInf, _) | (_, NegInf) => Ok(NegInf),
            (Finite(a), Finite(b)) => Ok(Finite(a + b)),
        }
    }

    pub fn try_sub(self, rhs: ExtReal) -> Result<ExtReal> {
        self.try_add(-rhs)
    }

    /// Multiplication by a finite scalar, with `0 * inf = 0`.
    pub fn scale(self, k: f64) -> ExtReal {
        match self {
            Finite(v) => Finite(v * k),
            _ if k == 0.0 => Finite(0.0),
            PosInf if k > 0.0 => PosInf,
            NegInf if k < 0.0 => PosInf,
            _ => NegInf,
        }
    }

    pub fn max(self, other: ExtReal) -> ExtReal {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: ExtReal) -> ExtReal {
        if other < self {
            other
        } else {
            self
        }
    }

    /// `self <= other + slack`, with infinite values compared by kind.
    ///
    /// `+inf <= +inf` and `finite <= +inf` hold; `+inf <= finite` fails.
    pub fn le_within(self, other: ExtReal, slack: f64) -> bool {
        match (self, other) {
            (NegInf, _) | (_, PosInf) => true,
            (PosInf, _) | (_, NegInf) => false,
            (Finite(a), Finite(b)) => a <= b + slack,
        }
    }

    /// Distance between two values; zero for equal infinities, infinite
    /// otherwise when either side is infinite.
    pub fn distance(self, other: ExtReal) -> f64 {
        match (self, other) {
            (Finite(a), Finite(b)) => libm::fabs(a - b),
            (PosInf, PosInf) | (NegInf, NegInf) => 0.0,
            _ => f64::INFINITY,
        }
    }

    fn rank(self) -> u8 {
        match self {
            NegInf => 0,
            Finite(_) => 1,
            PosInf => 2,
        }
    }
}

impl From<f64> for ExtReal {
    fn from(v: f64) -> Self {
        ExtReal::from_f64(v)
    }
}

impl Neg for ExtReal {
    type Output = ExtReal;
    fn neg(self) -> ExtReal {
        match self {
            NegInf => PosInf,
            PosInf => NegInf,
            Finite(v) => Finite(-v),
        }
    }
}

impl PartialEq for ExtReal {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for ExtReal {}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtReal {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Finite(a), Finite(b)) => a.total_cmp(b),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NegInf => f.write_str("-inf"),
            PosInf => f.write_str("+inf"),
            Finite(v) => fmt::Display::fmt(v, f),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_total() {
        assert!(NegInf < Finite(-1e300));
        assert!(Finite(1e300) < PosInf);
        assert!(Finite(-0.5) < Finite(0.5));
        assert_eq!(PosInf.max(Finite(3.0)), PosInf);
        assert_eq!(NegInf.min(Finite(3.0)), NegInf);
    }

    #[test]
    fn opposite_infinities_do_not_add() {
        assert_eq!(PosInf.try_add(NegInf), Err(Error::Undefined));
        assert_eq!(Finite(1.5).try_add(Finite(2.0)), Ok(Finite(3.5)));
        assert_eq!(Finite(1.0).try_add(PosInf), Ok(PosInf));
        assert_eq!(PosInf.try_sub(PosInf), Err(Error::Undefined));
    }

    #[test]
    fn comparisons_with_slack() {
        assert!(PosInf.le_within(PosInf, 0.0));
        assert!(Finite(1.0).le_within(PosInf, 0.0));
        assert!(!PosInf.le_within(Finite(1e9), 1.0));
        assert!(Finite(1.0 + 1e-7).le_within(Finite(1.0), 1e-6));
        assert_eq!(PosInf.scale(-2.0), NegInf);
        assert_eq!(PosInf.scale(0.0), Finite(0.0));
    }
}
