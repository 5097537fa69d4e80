//! Exact comparison between an f64 threshold and integer ratios.
//!
//! Guarantee checks compare a conductance a/b against a user-supplied
//! float threshold. Every finite f64 is itself a rational, so the
//! comparison can be made exact: a fast float path decides the easy
//! cases and a big-integer cross-multiplication settles anything close.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::FromPrimitive;

#[derive(Debug, Clone)]
pub struct ExactThreshold {
    value: f64,
    exact: BigRational,
}

impl ExactThreshold {
    /// `value` must be finite.
    pub fn new(value: f64) -> ExactThreshold {
        let exact = BigRational::from_f64(value).expect("threshold must be finite");
        ExactThreshold { value, exact }
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    /// Exactly decides num/den <= threshold (den > 0).
    pub fn admits(&self, num: u64, den: u64) -> bool {
        debug_assert!(den > 0);
        let approx = num as f64 / den as f64;
        // u64 -> f64 conversion and one division carry relative error
        // below 1e-15; a 1e-9 band is comfortably safe.
        let band = (approx.abs() + self.value.abs()) * 1e-9 + 1e-300;
        if approx < self.value - band {
            return true;
        }
        if approx > self.value + band {
            return false;
        }
        let lhs = BigInt::from(num) * self.exact.denom();
        let rhs = BigInt::from(den) * self.exact.numer();
        lhs <= rhs
    }

    /// Exactly decides num <= threshold * scale.
    pub fn admits_scaled(&self, num: u64, scale: u64) -> bool {
        if scale == 0 {
            num == 0
        } else {
            self.admits(num, scale)
        }
    }
}
