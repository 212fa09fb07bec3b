use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Open interval `(lo, hi)` on the real line; either end may be infinite.
///
/// Endpoint hits have probability zero for every ensemble here, so the
/// open/closed distinction only matters for synthetic inputs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() {
            return Err(Error::InvalidArgument("interval endpoint is NaN".into()));
        }
        if !(lo < hi) {
            return Err(Error::InvalidArgument(format!(
                "interval endpoints out of order: ({lo}, {hi})"
            )));
        }
        Ok(Self { lo, hi })
    }

    /// `(a, +inf)`
    pub fn above(a: f64) -> Result<Self> {
        Self::new(a, f64::INFINITY)
    }

    /// `(-inf, b)`
    pub fn below(b: f64) -> Result<Self> {
        Self::new(f64::NEG_INFINITY, b)
    }

    pub fn whole_line() -> Self {
        Self {
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
        }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo < x && x < self.hi
    }

    /// Complement as at most two intervals.
    pub fn complement(&self) -> Vec<Interval> {
        let mut out = Vec::with_capacity(2);
        if self.lo > f64::NEG_INFINITY {
            out.push(Interval {
                lo: f64::NEG_INFINITY,
                hi: self.lo,
            });
        }
        if self.hi < f64::INFINITY {
            out.push(Interval {
                lo: self.hi,
                hi: f64::INFINITY,
            });
        }
        out
    }

    /// Intersection with `[-r, r]`, or `None` when empty.
    pub fn clip(&self, r: f64) -> Option<(f64, f64)> {
        let lo = self.lo.max(-r);
        let hi = self.hi.min(r);
        (lo < hi).then_some((lo, hi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_inverted() {
        assert!(Interval::new(1.0, 0.0).is_err());
        assert!(Interval::new(1.0, 1.0).is_err());
        assert!(Interval::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn complement_pieces() {
        assert_eq!(Interval::whole_line().complement().len(), 0);
        assert_eq!(Interval::above(0.0).unwrap().complement().len(), 1);
        assert_eq!(Interval::new(-1.0, 1.0).unwrap().complement().len(), 2);
    }
}
