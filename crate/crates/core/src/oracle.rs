//! Exact tails for catalog distributions and finite samples, and a harness
//! that checks computed bounds against them.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_PI, SQRT_2};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bounds::{
    corollary1_bound, theorem1_bound, theorem2_bound, theorem3_left, theorem3_right,
    BoundOptions, Side, TailBound,
};
use crate::cf::{CatalogSpec, CharFn};
use crate::error::{Error, Result};
use crate::trigpoly::{sin_power_coeffs, TrigPoly};

type Dist = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Exact distribution function of a law, with strict and non-strict sides.
#[derive(Clone)]
pub struct TailOracle {
    label: String,
    /// `P(X <= x)`.
    cdf: Dist,
    /// `P(X < x)`.
    below: Dist,
    /// `P(X > x)`, evaluated directly to keep far right tails accurate.
    above: Dist,
}

impl fmt::Debug for TailOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TailOracle").field("label", &self.label).finish_non_exhaustive()
    }
}

impl TailOracle {
    /// Oracle for a law with a continuous distribution function.
    /// `sf` must equal `1 - cdf`.
    pub fn continuous<F, S>(label: impl Into<String>, cdf: F, sf: S) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        S: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let cdf: Dist = Arc::new(cdf);
        TailOracle { label: label.into(), below: cdf.clone(), cdf, above: Arc::new(sf) }
    }

    /// Oracle of the empirical measure of `samples`.
    pub fn empirical(samples: &[f64]) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptySample);
        }
        if let Some(index) = samples.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFiniteSample { index });
        }
        let mut sorted = samples.to_vec();
        sorted.sort_by(f64::total_cmp);
        let sorted = Arc::new(sorted);
        let n = sorted.len() as f64;
        let (s1, s2, s3) = (sorted.clone(), sorted.clone(), sorted);
        Ok(TailOracle {
            label: format!("empirical(n={})", n),
            cdf: Arc::new(move |x| s1.partition_point(|&v| v <= x) as f64 / n),
            below: Arc::new(move |x| s2.partition_point(|&v| v < x) as f64 / n),
            above: Arc::new(move |x| (s3.len() - s3.partition_point(|&v| v <= x)) as f64 / n),
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// `P(X <= x)`.
    pub fn cdf(&self, x: f64) -> f64 {
        (self.cdf)(x)
    }

    /// `P(X > x)`.
    pub fn right_tail(&self, x: f64) -> f64 {
        (self.above)(x)
    }

    /// `P(X < -x)`.
    pub fn left_tail(&self, x: f64) -> f64 {
        (self.below)(-x)
    }

    /// `P(X > x) + P(X < -x)`.
    pub fn two_sided_tail(&self, x: f64) -> f64 {
        self.right_tail(x) + self.left_tail(x)
    }

    pub fn tail(&self, side: Side, x: f64) -> f64 {
        match side {
            Side::TwoSided => self.two_sided_tail(x),
            Side::Right => self.right_tail(x),
            Side::Left => self.left_tail(x),
        }
    }
}

fn normal(label: String, mu: f64, sigma: f64) -> TailOracle {
    let z = move |x: f64| (x - mu) / (sigma * SQRT_2);
    TailOracle::continuous(
        label,
        move |x| 0.5 * libm::erfc(-z(x)),
        move |x| 0.5 * libm::erfc(z(x)),
    )
}

fn cauchy(label: String, x0: f64, gamma: f64) -> TailOracle {
    TailOracle::continuous(
        label,
        move |x| f64::atan2(gamma, x0 - x) * FRAC_1_PI,
        move |x| f64::atan2(gamma, x - x0) * FRAC_1_PI,
    )
}

fn laplace(label: String, mu: f64, b: f64) -> TailOracle {
    let half_exp = move |z: f64| 0.5 * (-z.abs()).exp();
    TailOracle::continuous(
        label,
        move |x| {
            let z = (x - mu) / b;
            if z < 0.0 { half_exp(z) } else { 1.0 - half_exp(z) }
        },
        move |x| {
            let z = (x - mu) / b;
            if z > 0.0 { half_exp(z) } else { 1.0 - half_exp(z) }
        },
    )
}

/// Closed-form oracle for a catalog law.
///
/// Stable laws are covered only for `alpha` 1 and 2, Linnik laws only for
/// `alpha = 2`.
pub fn oracle_for(spec: &CatalogSpec) -> Result<TailOracle> {
    spec.validate()?;
    let label = spec.to_string();
    Ok(match *spec {
        CatalogSpec::PointMass { c } => TailOracle {
            label,
            cdf: Arc::new(move |x| if x >= c { 1.0 } else { 0.0 }),
            below: Arc::new(move |x| if x > c { 1.0 } else { 0.0 }),
            above: Arc::new(move |x| if x < c { 1.0 } else { 0.0 }),
        },
        CatalogSpec::Normal { mu, sigma } => normal(label, mu, sigma),
        CatalogSpec::Cauchy { x0, gamma } => cauchy(label, x0, gamma),
        CatalogSpec::Laplace { mu, b } => laplace(label, mu, b),
        CatalogSpec::Exponential { lambda } => TailOracle::continuous(
            label,
            move |x| if x > 0.0 { -(-lambda * x).exp_m1() } else { 0.0 },
            move |x| if x > 0.0 { (-lambda * x).exp() } else { 1.0 },
        ),
        CatalogSpec::Uniform { lo, hi } => {
            let frac = move |x: f64| ((x - lo) / (hi - lo)).clamp(0.0, 1.0);
            TailOracle::continuous(label, frac, move |x| ((hi - x) / (hi - lo)).clamp(0.0, 1.0))
        }
        CatalogSpec::SymmetricStable { alpha: 1.0, scale } => cauchy(label, 0.0, scale),
        CatalogSpec::SymmetricStable { alpha: 2.0, scale } => {
            normal(label, 0.0, SQRT_2 * scale)
        }
        CatalogSpec::Linnik { alpha: 2.0, scale } => laplace(label, 0.0, scale),
        CatalogSpec::SymmetricStable { .. } | CatalogSpec::Linnik { .. } => {
            return Err(Error::UnsupportedOracle(format!(
                "{spec} has no closed-form distribution function"
            )))
        }
    })
}

/// Exact tail of the empirical measure of `samples`: `#{x_j > x} / n` on
/// the right, `#{x_j < -x} / n` on the left.
pub fn empirical_tail(samples: &[f64], x: f64, side: Side) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::EmptySample);
    }
    let n = samples.len() as f64;
    let right = samples.iter().filter(|&&v| v > x).count() as f64 / n;
    let left = samples.iter().filter(|&&v| v < -x).count() as f64 / n;
    Ok(match side {
        Side::TwoSided => right + left,
        Side::Right => right,
        Side::Left => left,
    })
}

/// One bound computation in a validation plan.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundRequest {
    Theorem1 { poly: TrigPoly<f64>, s: f64 },
    Corollary1 { k: u32, s: f64 },
    Theorem2 { a: f64, s: f64 },
    Theorem3Right { a: f64, s: f64, f0_plus: Option<f64> },
    Theorem3Left { a: f64, s: f64, f0_minus: Option<f64> },
}

impl BoundRequest {
    pub fn method_name(&self) -> &'static str {
        match self {
            BoundRequest::Theorem1 { .. } => "theorem1",
            BoundRequest::Corollary1 { .. } => "corollary1",
            BoundRequest::Theorem2 { .. } => "theorem2",
            BoundRequest::Theorem3Right { .. } => "theorem3-right",
            BoundRequest::Theorem3Left { .. } => "theorem3-left",
        }
    }

    /// Scalar parameters, keyed by name. Polynomial coefficients appear as
    /// `a0, a1, ..., b1, b2, ...`.
    pub fn params(&self) -> BTreeMap<String, f64> {
        let mut m = BTreeMap::new();
        match self {
            BoundRequest::Theorem1 { poly, s } => {
                m.insert("s".into(), *s);
                for (j, c) in poly.cos_coeffs().iter().enumerate() {
                    m.insert(format!("a{j}"), *c);
                }
                for (j, c) in poly.sin_coeffs().iter().enumerate() {
                    m.insert(format!("b{}", j + 1), *c);
                }
            }
            BoundRequest::Corollary1 { k, s } => {
                m.insert("k".into(), f64::from(*k));
                m.insert("s".into(), *s);
            }
            BoundRequest::Theorem2 { a, s } => {
                m.insert("A".into(), *a);
                m.insert("s".into(), *s);
            }
            BoundRequest::Theorem3Right { a, s, f0_plus: f0 }
            | BoundRequest::Theorem3Left { a, s, f0_minus: f0 } => {
                m.insert("A".into(), *a);
                m.insert("s".into(), *s);
                if let Some(c) = f0 {
                    m.insert("F0".into(), *c);
                }
            }
        }
        m
    }

    pub fn compute(&self, cf: &CharFn<f64>, opts: &BoundOptions<f64>) -> Result<TailBound<f64>> {
        match self {
            BoundRequest::Theorem1 { poly, s } => theorem1_bound(cf, poly, *s, opts),
            BoundRequest::Corollary1 { k, s } => corollary1_bound(cf, *k, *s, opts),
            BoundRequest::Theorem2 { a, s } => theorem2_bound(cf, *a, *s, opts),
            BoundRequest::Theorem3Right { a, s, f0_plus } => theorem3_right(cf, *a, *s, *f0_plus, opts),
            BoundRequest::Theorem3Left { a, s, f0_minus } => theorem3_left(cf, *a, *s, *f0_minus, opts),
        }
    }
}

/// Deliberate corruption of computed bounds, for checking that validation
/// catches unsound results.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    HalveBounds,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationPlan {
    pub requests: Vec<BoundRequest>,
    pub fault: Option<Fault>,
    pub options: BoundOptions<f64>,
}

impl ValidationPlan {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_fault(mut self, fault: Fault) -> Self {
        self.fault = Some(fault);
        self
    }

    pub fn theorem1_grid(mut self, polys: &[TrigPoly<f64>], s_values: &[f64]) -> Self {
        for p in polys {
            for &s in s_values {
                self.requests.push(BoundRequest::Theorem1 { poly: p.clone(), s });
            }
        }
        self
    }

    pub fn corollary1_grid(mut self, ks: impl IntoIterator<Item = u32>, s_values: &[f64]) -> Self {
        for k in ks {
            for &s in s_values {
                self.requests.push(BoundRequest::Corollary1 { k, s });
            }
        }
        self
    }

    pub fn theorem2_grid(mut self, a_values: &[f64], s_values: &[f64]) -> Self {
        for &a in a_values {
            for &s in s_values {
                self.requests.push(BoundRequest::Theorem2 { a, s });
            }
        }
        self
    }

    pub fn theorem3_right_grid(mut self, a_values: &[f64], s_values: &[f64], f0_plus: Option<f64>) -> Self {
        for &a in a_values {
            for &s in s_values {
                self.requests.push(BoundRequest::Theorem3Right { a, s, f0_plus });
            }
        }
        self
    }

    pub fn theorem3_left_grid(mut self, a_values: &[f64], s_values: &[f64], f0_minus: Option<f64>) -> Self {
        for &a in a_values {
            for &s in s_values {
                self.requests.push(BoundRequest::Theorem3Left { a, s, f0_minus });
            }
        }
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub method: String,
    pub params: BTreeMap<String, f64>,
    pub bound: f64,
    pub truth: f64,
    /// `truth - bound`.
    pub deficit: f64,
}

/// A request that could not be computed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Skipped {
    pub method: String,
    pub params: BTreeMap<String, f64>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ViolationReport {
    pub label: String,
    pub checked: usize,
    pub violations: Vec<Violation>,
    pub skipped: Vec<Skipped>,
}

impl ViolationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn merge(&mut self, other: ViolationReport) {
        self.checked += other.checked;
        self.violations.extend(other.violations);
        self.skipped.extend(other.skipped);
    }
}

/// Slack allowed between a bound and the exact tail.
pub const SOUNDNESS_TOL: f64 = 1e-9;

/// Computes every bound in `plan` and records those falling more than
/// [`SOUNDNESS_TOL`] below the exact tail at the same threshold and side.
pub fn validate(cf: &CharFn<f64>, oracle: &TailOracle, plan: &ValidationPlan) -> ViolationReport {
    let mut report = ViolationReport { label: oracle.label().to_string(), ..Default::default() };
    for req in &plan.requests {
        let b = match req.compute(cf, &plan.options) {
            Ok(b) => b,
            Err(e) => {
                report.skipped.push(Skipped {
                    method: req.method_name().into(),
                    params: req.params(),
                    reason: e.to_string(),
                });
                continue;
            }
        };
        let bound = match plan.fault {
            Some(Fault::HalveBounds) => 0.5 * b.bound,
            None => b.bound,
        };
        let truth = oracle.tail(b.side, b.threshold);
        report.checked += 1;
        if bound + SOUNDNESS_TOL < truth {
            report.violations.push(Violation {
                method: req.method_name().into(),
                params: req.params(),
                bound,
                truth,
                deficit: truth - bound,
            });
        }
    }
    report
}

/// `n` points spaced evenly in log between `lo` and `hi`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (l, h) = (lo.ln(), hi.ln());
    (0..n).map(|i| (l + (h - l) * i as f64 / (n - 1) as f64).exp()).collect()
}

/// `n` points spaced evenly between `lo` and `hi`.
pub fn lin_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

/// `1 - cos t`, `sin^4 t`, and `(1 - cos t)(1 + sin t)`.
pub fn reference_polynomials() -> Vec<TrigPoly<f64>> {
    vec![
        TrigPoly::cosine(vec![1.0, -1.0]).expect("finite"),
        sin_power_coeffs(2).expect("k in range"),
        TrigPoly::new(vec![1.0, -1.0], vec![1.0, -0.5]).expect("finite"),
    ]
}

/// Built-in soundness suite: catalog laws paired with parameter grids for
/// every method that applies to them.
pub fn default_suite() -> Vec<(CatalogSpec, ValidationPlan)> {
    let a6 = [0.5, 1.0, 2.0, 3.0, 4.0, 6.0];
    vec![
        (
            CatalogSpec::Cauchy { x0: 0.0, gamma: 1.0 },
            ValidationPlan::new()
                .theorem1_grid(&reference_polynomials(), &log_grid(0.1, 10.0, 20))
                .corollary1_grid(1..=4, &log_grid(0.1, 10.0, 10)),
        ),
        (
            CatalogSpec::Normal { mu: 0.0, sigma: 1.0 },
            ValidationPlan::new().theorem2_grid(&a6, &log_grid(0.05, 3.0, 10)),
        ),
        (
            CatalogSpec::Laplace { mu: 0.0, b: 1.0 },
            ValidationPlan::new()
                .theorem2_grid(&a6, &lin_grid(0.1, 0.95, 8))
                .theorem3_right_grid(&a6, &lin_grid(0.1, 0.95, 8), None)
                .theorem3_left_grid(&a6, &lin_grid(0.1, 0.95, 8), None),
        ),
        (
            CatalogSpec::Exponential { lambda: 1.0 },
            ValidationPlan::new()
                .theorem3_right_grid(&[1.0, 2.0, 3.0, 5.0, 8.0, 12.0], &lin_grid(0.1, 0.9, 8), None)
                .theorem3_left_grid(&[0.5, 1.0, 2.0, 5.0], &log_grid(0.1, 5.0, 8), None),
        ),
    ]
}

/// Plan covering every method that applies to `cf`: trigonometric bounds
/// always, analytic bounds inside whatever strips the CF declares.
pub fn plan_for(cf: &CharFn<f64>) -> ValidationPlan {
    let mut plan = ValidationPlan::new()
        .theorem1_grid(&reference_polynomials(), &log_grid(0.1, 10.0, 12))
        .corollary1_grid(1..=4, &log_grid(0.1, 10.0, 6));
    if !cf.has_imag_axis() {
        return plan;
    }
    let a = [0.5, 1.0, 2.0, 4.0];
    let inside = |limit: f64| -> Vec<f64> {
        lin_grid(0.05, 0.95, 6).into_iter().map(|f| f * limit.min(3.0)).collect()
    };
    if cf.analyticity_radius() > 0.0 {
        plan = plan.theorem2_grid(&a, &inside(cf.analyticity_radius()));
    }
    if cf.lower_strip() > 0.0 {
        plan = plan.theorem3_right_grid(&a, &inside(cf.lower_strip()), None);
    }
    if cf.upper_strip() > 0.0 {
        plan = plan.theorem3_left_grid(&a, &inside(cf.upper_strip()), None);
    }
    plan
}

/// Runs [`default_suite`] with an optional fault and merges the reports.
pub fn run_default_suite(fault: Option<Fault>, options: BoundOptions<f64>) -> Result<ViolationReport> {
    let mut total = ViolationReport { label: "default suite".into(), ..Default::default() };
    for (spec, mut plan) in default_suite() {
        plan.fault = fault;
        plan.options = options;
        let cf = crate::cf::make_catalog_cf::<f64>(&spec)?;
        let oracle = oracle_for(&spec)?;
        total.merge(validate(&cf, &oracle, &plan));
    }
    Ok(total)
}
