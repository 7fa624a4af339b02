//! Scalar abstraction shared by every numeric kernel in the crate.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating-point type the bounds are computed in: `f32` or `f64`.
///
/// The two associated limits keep exponential terms and imaginary-axis
/// evaluations away from overflow for the concrete type.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Imaginary-axis values above this are treated as overflowed.
    const OVERFLOW_GUARD: f64;
    /// Largest exponent `s * A` the analytic bounds will feed into `exp`.
    const EXP_ARG_CAP: f64;

    /// Converts an `f64` literal, saturating to infinity if out of range.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).unwrap_or_else(|| {
            if x.is_sign_negative() {
                Self::neg_infinity()
            } else {
                Self::infinity()
            }
        })
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {
    const OVERFLOW_GUARD: f64 = 1e30;
    const EXP_ARG_CAP: f64 = 80.0;
}

impl Scalar for f64 {
    const OVERFLOW_GUARD: f64 = 1e300;
    const EXP_ARG_CAP: f64 = 700.0;
}

/// Binomial coefficient computed by the multiplicative formula.
/// Exact in `f64` for `n <= 60`.
pub fn binomial<T: Scalar>(n: u32, j: u32) -> T {
    if j > n {
        return T::zero();
    }
    let j = j.min(n - j);
    let mut acc = 1.0f64;
    for i in 1..=j {
        acc = acc * f64::from(n - j + i) / f64::from(i);
    }
    T::lit(acc.round())
}
