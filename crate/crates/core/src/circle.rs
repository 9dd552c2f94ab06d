//! Arithmetic on the circle `S¹ = ℝ/ℤ`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of `ℝ/ℤ`, stored as its representative in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CircleValue(f64);

impl CircleValue {
    pub const ZERO: CircleValue = CircleValue(0.0);

    pub fn new(x: f64) -> Result<Self> {
        circle_reduce(x)
    }

    /// Reduces a finite value without the error path. Non-finite input
    /// maps to zero; callers that can see untrusted data use [`circle_reduce`].
    pub(crate) fn wrap(x: f64) -> Self {
        CircleValue(reduce_mod1(x))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn shift(self, dx: f64) -> Self {
        Self::wrap(self.0 + dx)
    }

    pub fn dist(self, other: CircleValue) -> f64 {
        circle_dist(self.0, other.0)
    }
}

impl From<CircleValue> for f64 {
    fn from(c: CircleValue) -> f64 {
        c.0
    }
}

pub fn circle_reduce(x: f64) -> Result<CircleValue> {
    if !x.is_finite() {
        return Err(Error::NonFinite("circle coordinate"));
    }
    Ok(CircleValue(reduce_mod1(x)))
}

#[inline]
pub(crate) fn reduce_mod1(x: f64) -> f64 {
    if !x.is_finite() {
        return 0.0;
    }
    let r = x - x.floor();
    // x slightly below an integer rounds up to exactly 1.0
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// Distance on `ℝ/ℤ`: `min(|a-b|, 1-|a-b|)` after reduction.
#[inline]
pub fn circle_dist(a: f64, b: f64) -> f64 {
    let d = reduce_mod1(a - b);
    d.min(1.0 - d)
}

/// `(a * b) mod 1` for an integer-valued `a`, using an error-free product so
/// that large multipliers keep full precision in the fractional part.
#[inline]
pub(crate) fn mul_mod1(a: f64, b: f64) -> f64 {
    let p = a * b;
    let e = a.mul_add(b, -p);
    reduce_mod1((p - p.floor()) + e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reduce_examples() {
        assert_eq!(circle_reduce(0.0).unwrap().value(), 0.0);
        assert_eq!(circle_reduce(1.25).unwrap().value(), 0.25);
        assert!((circle_reduce(-0.1).unwrap().value() - 0.9).abs() < 1e-15);
        assert!(circle_reduce(f64::NAN).is_err());
        assert!(circle_reduce(f64::INFINITY).is_err());
    }

    #[test]
    fn tiny_negative_stays_below_one() {
        let v = circle_reduce(-1e-18).unwrap().value();
        assert!((0.0..1.0).contains(&v));
    }

    #[test]
    fn dist_across_seam() {
        assert!((circle_dist(0.99, 0.01) - 0.02).abs() < 1e-12);
        assert_eq!(circle_dist(0.3, 0.3), 0.0);
        assert!((circle_dist(0.0, 0.5) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn mul_mod1_large_multiplier() {
        let alpha = (5f64.sqrt() - 1.0) / 2.0;
        // 10^6 * alpha computed with the product split stays close to the naive value
        let naive = reduce_mod1(1e6 * alpha);
        assert!(circle_dist(mul_mod1(1e6, alpha), naive) < 1e-9);
    }

    proptest! {
        #[test]
        fn reduce_is_idempotent_and_periodic(x in -1.0e6f64..1.0e6) {
            let r = circle_reduce(x).unwrap().value();
            prop_assert!((0.0..1.0).contains(&r));
            prop_assert_eq!(circle_reduce(r).unwrap().value(), r);
            // x and x + 1 reduce to the same point; for |x| ≤ 1e6 the
            // addition itself may round, so compare on the circle at ulp scale
            let r1 = circle_reduce(x + 1.0).unwrap().value();
            prop_assert!(circle_dist(r, r1) <= 2.0 * f64::EPSILON * (x.abs() + 1.0));
        }
    }
}
