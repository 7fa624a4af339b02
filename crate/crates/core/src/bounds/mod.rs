//! Tail bounds computed from characteristic functions.
//!
//! * [`theorem1_bound`]: any non-negative trigonometric polynomial `P`
//!   bounds the two-sided tail beyond `2 pi / s` by integrals of `Re f` and
//!   `Im f` over `[0, s]`.
//! * [`corollary1_bound`]: the same with `P = sin^{2k}`, also computed from
//!   central differences of `Re f` as a cross-check.
//! * [`theorem2_bound`]: exponential two-sided bound for CFs analytic in a
//!   disc, using `cosh` moments on the imaginary axis.
//! * [`theorem3_right`] / [`theorem3_left`]: one-sided bounds from a single
//!   analytic strip.
//! * [`optimize_bound`], [`tail_curve`]: minimise over the free parameter.
//! * [`certify_compact_support`]: numerical evidence that an entire CF
//!   belongs to a law with no mass outside `[-A, A]`.
//!
//! Every integral is taken as `value + error_estimate` with the sign that
//! keeps the result an upper bound, so reported bounds hold up to the
//! quadrature error heuristic.

mod analytic;
mod search;
mod support;
mod trig;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{DEFAULT_ABS_TOL, DEFAULT_REL_TOL};
use crate::scalar::Scalar;
use crate::trigpoly::TrigPoly;

pub use analytic::{theorem2_bound, theorem3_left, theorem3_right};
pub use search::{optimize_bound, s_domain, tail_curve, Method, SearchOptions};
pub use support::{certify_compact_support, SupportCertificate};
pub use trig::{
    corollary1_bound, corollary1_forms, remark1_majorant_check, theorem1_bound, Corollary1Forms,
    MajorantEntry, MajorantReport,
};

/// Environment variable overriding the default quadrature relative tolerance.
pub const QUAD_RELTOL_ENV: &str = "CF_TAILBOUND_QUAD_RELTOL";

/// Which tail a bound controls.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// `P(X > A) + P(X < -A)`.
    TwoSided,
    /// `P(X > A)`.
    Right,
    /// `P(X < -A)`.
    Left,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodKind {
    Theorem1,
    Corollary1,
    Theorem2,
    Theorem3,
}

/// The kernel a trigonometric bound was computed with.
#[derive(Debug, Clone, PartialEq)]
pub enum PolyOrK<T> {
    Poly(TrigPoly<T>),
    K(u32),
}

/// A computed tail bound.
///
/// `bound` is `raw_bound` clamped to `[0, 1]`; `quad_error` is the part of
/// `raw_bound` contributed by quadrature error estimates.
#[derive(Debug, Clone, PartialEq)]
pub struct TailBound<T> {
    pub threshold: T,
    pub side: Side,
    pub bound: T,
    pub raw_bound: T,
    pub method: MethodKind,
    pub s_used: T,
    pub poly_or_k: Option<PolyOrK<T>>,
    pub quad_error: T,
}

impl<T: Scalar> TailBound<T> {
    pub(crate) fn new(
        method: MethodKind,
        side: Side,
        threshold: T,
        s_used: T,
        raw_bound: T,
        quad_error: T,
        poly_or_k: Option<PolyOrK<T>>,
    ) -> Result<Self> {
        if raw_bound.is_nan() {
            return Err(Error::InternalConsistency(format!(
                "{method:?} produced NaN at s = {s_used}"
            )));
        }
        Ok(TailBound {
            threshold,
            side,
            bound: raw_bound.max(T::zero()).min(T::one()),
            raw_bound,
            method,
            s_used,
            poly_or_k,
            quad_error,
        })
    }

    /// `k` for corollary bounds.
    pub fn k(&self) -> Option<u32> {
        match self.poly_or_k {
            Some(PolyOrK::K(k)) => Some(k),
            _ => None,
        }
    }
}

/// Tolerances shared by every bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundOptions<T> {
    pub rel_tol: T,
    pub abs_tol: T,
    /// Threshold below zero the polynomial minimum may reach.
    pub nonneg_tol: T,
    /// Skip the non-negativity gate for user polynomials.
    pub allow_unchecked_poly: bool,
    /// Base tolerance for the two corollary computation paths.
    pub consistency_tol: T,
}

impl<T: Scalar> Default for BoundOptions<T> {
    fn default() -> Self {
        BoundOptions {
            rel_tol: T::lit(DEFAULT_REL_TOL),
            abs_tol: T::lit(DEFAULT_ABS_TOL),
            nonneg_tol: T::lit(1e-9),
            allow_unchecked_poly: false,
            consistency_tol: T::lit(1e-9),
        }
    }
}

impl<T: Scalar> BoundOptions<T> {
    /// Defaults, with the relative tolerance taken from
    /// `CF_TAILBOUND_QUAD_RELTOL` when it holds a positive number.
    pub fn from_env() -> Self {
        Self::from_lookup(|key| std::env::var(key).ok())
    }

    pub fn from_lookup(lookup: impl Fn(&str) -> Option<String>) -> Self {
        let mut opts = Self::default();
        if let Some(v) = lookup(QUAD_RELTOL_ENV)
            .and_then(|s| s.trim().parse::<f64>().ok())
            .filter(|v| v.is_finite() && *v > 0.0)
        {
            opts.rel_tol = T::lit(v);
        }
        opts
    }
}

pub(crate) fn require_positive<T: Scalar>(name: &str, v: T) -> Result<()> {
    if v > T::zero() && v.is_finite() {
        Ok(())
    } else {
        Err(Error::ParameterDomain(format!("{name} must be positive and finite, got {v}")))
    }
}

pub(crate) fn require_probability<T: Scalar>(name: &str, v: T) -> Result<()> {
    if v >= T::zero() && v <= T::one() {
        Ok(())
    } else {
        Err(Error::ParameterDomain(format!("{name} must lie in [0, 1], got {v}")))
    }
}
