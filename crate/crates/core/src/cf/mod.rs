//! Characteristic functions: the abstraction every bound consumes, a
//! closed-form catalog, empirical CFs built from samples, and invariant
//! checks.
//!
//! A [`CharFn`] evaluates `f(t) = E exp(itX)` on the real line and, when the
//! law has exponential moments, `f(iu) = E exp(-uX)` on the imaginary axis.
//! The analyticity metadata records where the imaginary-axis values are
//! finite:
//!
//! * `upper_strip` (b+): `f` is analytic for `0 < Im t < b+`, so `f(iu)` is
//!   finite for `u` in `[0, b+)`;
//! * `lower_strip` (b-): `f` is analytic for `-b- < Im t < 0`, so
//!   `f(-iu) = E exp(uX)` is finite for `u` in `[0, b-)`;
//! * `analyticity_radius` (R): analytic in the disc `|t| < R`, which forces
//!   both strips to be at least `R`.

mod catalog;
mod check;
mod empirical;
mod samples;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub use catalog::CatalogSpec;
pub use check::{cf_self_check, SelfCheckFailure, SelfCheckReport};
pub use empirical::empirical_cf;
pub use samples::{load_samples, parse_samples};

type RealFn<T> = Arc<dyn Fn(T) -> Complex<T> + Send + Sync>;
type AxisFn<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

/// An evaluatable characteristic function plus the analyticity metadata
/// the exponential and one-sided bounds need.
///
/// Immutable after construction; clones share the underlying closures.
#[derive(Clone)]
pub struct CharFn<T: Scalar> {
    eval: RealFn<T>,
    imag_axis: Option<AxisFn<T>>,
    analyticity_radius: T,
    lower_strip: T,
    upper_strip: T,
    prob_nonpositive: Option<T>,
    prob_negative: Option<T>,
    even_moments: BTreeMap<u32, T>,
    label: String,
}

impl<T: Scalar> CharFn<T> {
    /// A characteristic function with no analyticity claims.
    pub fn new<F>(label: impl Into<String>, eval: F) -> Self
    where
        F: Fn(T) -> Complex<T> + Send + Sync + 'static,
    {
        CharFn {
            eval: Arc::new(eval),
            imag_axis: None,
            analyticity_radius: T::zero(),
            lower_strip: T::zero(),
            upper_strip: T::zero(),
            prob_nonpositive: None,
            prob_negative: None,
            even_moments: BTreeMap::new(),
            label: label.into(),
        }
    }

    /// Attaches `u -> f(iu) = E exp(-uX)`. The closure should return
    /// `+inf` where the expectation diverges instead of panicking.
    pub fn with_imag_axis<F>(mut self, imag_axis: F) -> Self
    where
        F: Fn(T) -> T + Send + Sync + 'static,
    {
        self.imag_axis = Some(Arc::new(imag_axis));
        self
    }

    /// Sets the disc radius and the two strip widths. The strips are raised
    /// to at least `radius`.
    pub fn with_analyticity(mut self, radius: T, lower_strip: T, upper_strip: T) -> Self {
        self.analyticity_radius = radius.max(T::zero());
        self.lower_strip = lower_strip.max(self.analyticity_radius);
        self.upper_strip = upper_strip.max(self.analyticity_radius);
        self
    }

    /// Sets `F(+0) = P(X <= 0)` and `F(-0) = P(X < 0)`.
    pub fn with_mass_at_origin(mut self, nonpositive: T, negative: T) -> Self {
        self.prob_nonpositive = Some(nonpositive);
        self.prob_negative = Some(negative);
        self
    }

    /// Records `E X^{2k}`.
    pub fn with_even_moment(mut self, k: u32, moment: T) -> Self {
        self.even_moments.insert(k, moment);
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    #[inline]
    pub fn eval(&self, t: T) -> Complex<T> {
        (self.eval)(t)
    }

    #[inline]
    pub fn re(&self, t: T) -> T {
        self.eval(t).re
    }

    #[inline]
    pub fn im(&self, t: T) -> T {
        self.eval(t).im
    }

    /// `f(iu) = E exp(-uX)`, `None` when no imaginary-axis continuation is
    /// attached. Outside the domain the value is `+inf`.
    #[inline]
    pub fn imag_axis_eval(&self, u: T) -> Option<T> {
        self.imag_axis.as_ref().map(|g| g(u))
    }

    pub fn has_imag_axis(&self) -> bool {
        self.imag_axis.is_some()
    }

    pub fn analyticity_radius(&self) -> T {
        self.analyticity_radius
    }

    pub fn lower_strip(&self) -> T {
        self.lower_strip
    }

    pub fn upper_strip(&self) -> T {
        self.upper_strip
    }

    pub fn prob_nonpositive(&self) -> Option<T> {
        self.prob_nonpositive
    }

    pub fn prob_negative(&self) -> Option<T> {
        self.prob_negative
    }

    pub fn even_moment(&self, k: u32) -> Option<T> {
        self.even_moments.get(&k).copied()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// The CF of `cX` for `c > 0`: `t -> f(ct)`, with metadata rescaled.
    pub fn scaled(&self, c: T) -> Result<Self> {
        if !(c > T::zero() && c.is_finite()) {
            return Err(Error::ParameterDomain(format!(
                "scale factor must be positive and finite, got {c}"
            )));
        }
        let inner = self.eval.clone();
        let mut out = CharFn::new(format!("{}*{}", c, self.label), move |t| inner(c * t));
        if let Some(axis) = self.imag_axis.clone() {
            out = out.with_imag_axis(move |u| axis(c * u));
        }
        out.analyticity_radius = self.analyticity_radius / c;
        out.lower_strip = self.lower_strip / c;
        out.upper_strip = self.upper_strip / c;
        out.prob_nonpositive = self.prob_nonpositive;
        out.prob_negative = self.prob_negative;
        for (&k, &m) in &self.even_moments {
            out.even_moments.insert(k, m * c.powi(2 * k as i32));
        }
        Ok(out)
    }
}

impl<T: Scalar> fmt::Debug for CharFn<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CharFn")
            .field("label", &self.label)
            .field("analyticity_radius", &self.analyticity_radius)
            .field("lower_strip", &self.lower_strip)
            .field("upper_strip", &self.upper_strip)
            .field("imag_axis", &self.imag_axis.is_some())
            .field("prob_nonpositive", &self.prob_nonpositive)
            .field("prob_negative", &self.prob_negative)
            .finish()
    }
}

/// Builds the closed-form characteristic function for a catalog entry.
pub fn make_catalog_cf<T: Scalar>(spec: &CatalogSpec) -> Result<CharFn<T>> {
    catalog::build(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strips_never_below_radius() {
        let cf = CharFn::<f64>::new("x", |_| Complex::new(1.0, 0.0)).with_analyticity(2.0, 0.5, 0.0);
        assert_eq!(cf.lower_strip(), 2.0);
        assert_eq!(cf.upper_strip(), 2.0);
    }

    #[test]
    fn scaling_rescales_metadata() {
        let cf = make_catalog_cf::<f64>(&CatalogSpec::Laplace { mu: 0.0, b: 1.0 }).unwrap();
        let scaled = cf.scaled(2.0).unwrap();
        assert_eq!(scaled.analyticity_radius(), 0.5);
        assert!((scaled.re(1.0) - cf.re(2.0)).abs() < 1e-15);
        assert!((scaled.imag_axis_eval(0.25).unwrap() - cf.imag_axis_eval(0.5).unwrap()).abs() < 1e-15);
        assert_eq!(scaled.even_moment(1), Some(8.0));
        assert!(cf.scaled(0.0).is_err());
    }
}
