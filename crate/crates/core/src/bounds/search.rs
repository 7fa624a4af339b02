use crate::cf::CharFn;
use crate::error::{Error, Result};
use crate::optimize::golden_section_min;
use crate::scalar::Scalar;
use crate::trigpoly::{TrigPoly, MAX_SIN_POWER};

use super::{
    corollary1_bound, require_positive, theorem1_bound, theorem2_bound, theorem3_left,
    theorem3_right, BoundOptions, TailBound,
};

/// Bound family to optimise, with its method-specific inputs.
#[derive(Debug, Clone, PartialEq)]
pub enum Method<T> {
    /// Fixed polynomial; `s = 2 pi / A`, nothing to search.
    Theorem1 { poly: TrigPoly<T> },
    /// `sin^{2k}` kernels with `s = 2 pi / A`, scanning `k = 1..=k_max`.
    Corollary1 { k_max: u32 },
    Theorem2,
    Theorem3Right { f0_plus: Option<T> },
    Theorem3Left { f0_minus: Option<T> },
}

impl<T> Method<T> {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Theorem1 { .. } => "theorem1",
            Method::Corollary1 { .. } => "corollary1",
            Method::Theorem2 => "theorem2",
            Method::Theorem3Right { .. } => "theorem3-right",
            Method::Theorem3Left { .. } => "theorem3-left",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions<T> {
    pub bound: BoundOptions<T>,
    /// Log-spaced grid size over the admissible `s` range.
    pub grid_points: usize,
    /// Golden-section steps around the grid minimiser.
    pub refine_iterations: usize,
    /// The grid covers `[s_max * 10^-decades, s_max]`.
    pub decades: f64,
}

impl<T: Scalar> Default for SearchOptions<T> {
    fn default() -> Self {
        SearchOptions {
            bound: BoundOptions::default(),
            grid_points: 64,
            refine_iterations: 30,
            decades: 4.0,
        }
    }
}

impl<T: Scalar> SearchOptions<T> {
    pub fn with_bound(bound: BoundOptions<T>) -> Self {
        SearchOptions { bound, ..Self::default() }
    }
}

/// Relative margin kept below a finite analyticity limit.
const STRIP_MARGIN: f64 = 1e-6;

/// Largest `u` in `(0, hi]` with `probe(u)` finite and below the overflow
/// guard. `probe` is convex with `probe(0) = 1` for every imaginary-axis
/// quantity used here, so the admissible set is an interval.
fn overflow_cap<T: Scalar>(hi: T, probe: impl Fn(T) -> T) -> T {
    let guard = T::lit(T::OVERFLOW_GUARD);
    let ok = |u: T| {
        let v = probe(u);
        v.is_finite() && v < guard
    };
    if ok(hi) {
        return hi;
    }
    let (mut lo, mut hi) = (T::zero(), hi);
    for _ in 0..200 {
        let mid = T::lit(0.5) * (lo + hi);
        if !(mid > lo && mid < hi) {
            break;
        }
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Admissible `s` range `(0, s_max]` for the analytic methods at
/// threshold `a`: below the analyticity limit, `s A <= EXP_ARG_CAP`, and
/// imaginary-axis values below the overflow guard.
pub fn s_domain<T: Scalar>(cf: &CharFn<T>, method: &Method<T>, a: T) -> Result<T> {
    require_positive("A", a)?;
    let limit = match method {
        Method::Theorem2 => cf.analyticity_radius(),
        Method::Theorem3Right { .. } => cf.lower_strip(),
        Method::Theorem3Left { .. } => cf.upper_strip(),
        Method::Theorem1 { .. } | Method::Corollary1 { .. } => {
            return Ok(T::TAU() / a);
        }
    };
    if !(limit > T::zero()) {
        return Err(Error::Unsupported(format!(
            "{} needs an analytic characteristic function; {} has analyticity limit 0",
            method.name(),
            cf.label()
        )));
    }
    if !cf.has_imag_axis() {
        return Err(Error::Unsupported(format!(
            "{} needs imaginary-axis values; {} has none",
            method.name(),
            cf.label()
        )));
    }
    let mut hi = T::lit(T::EXP_ARG_CAP) / a;
    if limit.is_finite() {
        hi = hi.min(limit * (T::one() - T::lit(STRIP_MARGIN)));
    }
    let axis = |u: T| cf.imag_axis_eval(u).unwrap_or_else(T::infinity);
    let hi = match method {
        Method::Theorem2 => overflow_cap(hi, |u| axis(u).max(axis(-u))),
        Method::Theorem3Right { .. } => overflow_cap(hi, |u| axis(-u)),
        _ => overflow_cap(hi, axis),
    };
    if !(hi > T::zero()) {
        return Err(Error::Unsupported(format!(
            "no admissible s for {} at A = {a}",
            method.name()
        )));
    }
    Ok(hi)
}

fn bound_at<T: Scalar>(
    cf: &CharFn<T>,
    method: &Method<T>,
    a: T,
    s: T,
    opts: &BoundOptions<T>,
) -> Result<TailBound<T>> {
    match method {
        Method::Theorem2 => theorem2_bound(cf, a, s, opts),
        Method::Theorem3Right { f0_plus } => theorem3_right(cf, a, s, *f0_plus, opts),
        Method::Theorem3Left { f0_minus } => theorem3_left(cf, a, s, *f0_minus, opts),
        Method::Theorem1 { poly } => theorem1_bound(cf, poly, s, opts),
        Method::Corollary1 { .. } => unreachable!("corollary bounds are scanned over k"),
    }
}

fn better<T: Scalar>(candidate: &TailBound<T>, incumbent: &Option<TailBound<T>>) -> bool {
    incumbent.as_ref().is_none_or(|b| candidate.raw_bound < b.raw_bound)
}

/// Smallest bound the method yields at threshold `a`.
///
/// Analytic methods scan a log-spaced grid of `s` and refine the best grid
/// point by golden-section search on `log s`; the result is never worse
/// than the best grid point. Trigonometric methods use `s = 2 pi / A`.
pub fn optimize_bound<T: Scalar>(
    cf: &CharFn<T>,
    method: &Method<T>,
    a: T,
    opts: &SearchOptions<T>,
) -> Result<TailBound<T>> {
    require_positive("A", a)?;
    match method {
        Method::Theorem1 { poly } => theorem1_bound(cf, poly, T::TAU() / a, &opts.bound),
        Method::Corollary1 { k_max } => {
            if !(1..=MAX_SIN_POWER).contains(k_max) {
                return Err(Error::ParameterDomain(format!(
                    "k_max must lie in 1..={MAX_SIN_POWER}, got {k_max}"
                )));
            }
            let s = T::TAU() / a;
            let mut best = None;
            let mut last_err = None;
            for k in 1..=*k_max {
                match corollary1_bound(cf, k, s, &opts.bound) {
                    Ok(b) if better(&b, &best) => best = Some(b),
                    Ok(_) => {}
                    Err(e) => last_err = Some(e),
                }
            }
            best.ok_or_else(|| last_err.expect("k range is nonempty"))
        }
        _ => {
            let hi = s_domain(cf, method, a)?;
            let n = opts.grid_points.max(2);
            let log_hi = hi.ln();
            let log_lo = log_hi - T::lit(opts.decades * std::f64::consts::LN_10);
            let log_s = |i: usize| log_lo + (log_hi - log_lo) * T::lit(i as f64 / (n - 1) as f64);

            let mut best: Option<TailBound<T>> = None;
            let mut best_index = 0;
            let mut last_err = None;
            for i in 0..n {
                let s = if i == n - 1 { hi } else { log_s(i).exp() };
                match bound_at(cf, method, a, s, &opts.bound) {
                    Ok(b) => {
                        if better(&b, &best) {
                            best = Some(b);
                            best_index = i;
                        }
                    }
                    Err(e) => last_err = Some(e),
                }
            }
            let Some(grid_best) = best else {
                return Err(last_err.expect("grid is nonempty"));
            };
            if opts.refine_iterations == 0 || grid_best.raw_bound <= T::zero() {
                return Ok(grid_best);
            }
            let lo_i = best_index.saturating_sub(1);
            let hi_i = (best_index + 1).min(n - 1);
            let found = golden_section_min(
                |x: T| {
                    bound_at(cf, method, a, x.exp().min(hi), &opts.bound)
                        .map_or(T::infinity(), |b| b.raw_bound)
                },
                log_s(lo_i),
                log_s(hi_i).min(log_hi),
                T::zero(),
                opts.refine_iterations,
            );
            match bound_at(cf, method, a, found.x.exp().min(hi), &opts.bound) {
                Ok(refined) if refined.raw_bound < grid_best.raw_bound => Ok(refined),
                _ => Ok(grid_best),
            }
        }
    }
}

/// [`optimize_bound`] over ascending positive thresholds.
pub fn tail_curve<T: Scalar>(
    cf: &CharFn<T>,
    method: &Method<T>,
    thresholds: &[T],
    opts: &SearchOptions<T>,
) -> Result<Vec<TailBound<T>>> {
    for (i, &a) in thresholds.iter().enumerate() {
        require_positive("threshold", a)?;
        if i > 0 && !(a > thresholds[i - 1]) {
            return Err(Error::ParameterDomain("thresholds must be strictly ascending".into()));
        }
    }
    thresholds.iter().map(|&a| optimize_bound(cf, method, a, opts)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf::{make_catalog_cf, CatalogSpec};

    fn cf(s: &str) -> CharFn<f64> {
        make_catalog_cf(&s.parse::<CatalogSpec>().unwrap()).unwrap()
    }

    #[test]
    fn normal_theorem2_optimised() {
        let c = cf("normal:0,1");
        let opts = SearchOptions::default();
        let b = optimize_bound(&c, &Method::Theorem2, 4.0, &opts).unwrap();
        let fixed = theorem2_bound(&c, 4.0, 1.0, &opts.bound).unwrap();
        assert!(b.bound <= fixed.bound);
        let truth = libm::erfc(4.0 / std::f64::consts::SQRT_2);
        assert!(b.bound >= truth);
    }

    #[test]
    fn never_worse_than_grid() {
        let c = cf("laplace:0,1");
        let opts = SearchOptions::default();
        let b = optimize_bound(&c, &Method::Theorem2, 5.0, &opts).unwrap();
        let hi = s_domain(&c, &Method::Theorem2, 5.0).unwrap();
        for i in 0..64 {
            let s = hi * 10f64.powf(-4.0 + 4.0 * i as f64 / 63.0);
            if let Ok(g) = theorem2_bound(&c, 5.0, s, &opts.bound) {
                assert!(b.raw_bound <= g.raw_bound, "grid point {s} beats optimiser");
            }
        }
    }

    #[test]
    fn deterministic() {
        let c = cf("exponential:1");
        let m = Method::Theorem3Right { f0_plus: None };
        let opts = SearchOptions::default();
        let a = optimize_bound(&c, &m, 5.0, &opts).unwrap();
        let b = optimize_bound(&c, &m, 5.0, &opts).unwrap();
        assert_eq!(a.raw_bound.to_bits(), b.raw_bound.to_bits());
        assert!(a.bound >= (-5.0f64).exp());
    }

    #[test]
    fn corollary_scan_is_minimum_over_k() {
        let c = cf("cauchy:0,1");
        let opts = SearchOptions::default();
        let b = optimize_bound(&c, &Method::Corollary1 { k_max: 8 }, std::f64::consts::TAU, &opts).unwrap();
        let direct = (1..=8)
            .map(|k| corollary1_bound(&c, k, 1.0, &opts.bound).unwrap().raw_bound)
            .fold(f64::INFINITY, f64::min);
        assert_eq!(b.raw_bound, direct);
        assert!(b.bound <= 1.0);
    }

    #[test]
    fn point_mass_theorem2_is_zero() {
        let b = optimize_bound(&cf("point_mass:0"), &Method::Theorem2, 1.0, &SearchOptions::default()).unwrap();
        assert_eq!(b.bound, 0.0);
    }

    #[test]
    fn unsupported_without_analyticity() {
        let e = optimize_bound(&cf("cauchy:0,1"), &Method::Theorem2, 1.0, &SearchOptions::default());
        assert!(matches!(e, Err(Error::Unsupported(_))));
    }

    #[test]
    fn domain_respects_overflow() {
        let c = cf("normal:0,1");
        let hi = s_domain(&c, &Method::Theorem2, 1.0).unwrap();
        // exp(u^2 / 2) < 1e300 requires u < sqrt(2 ln 1e300) ~ 37.17.
        assert!(hi > 37.0 && hi < 37.2, "{hi}");
        let lap = s_domain(&cf("laplace:0,1"), &Method::Theorem2, 1.0).unwrap();
        assert!(lap < 1.0 && lap > 0.999);
        let ex = s_domain(&cf("exponential:1"), &Method::Theorem3Left { f0_minus: None }, 2.0).unwrap();
        assert_eq!(ex, 350.0);
    }

    #[test]
    fn tail_curve_validation() {
        let c = cf("point_mass:0");
        let m = Method::Corollary1 { k_max: 1 };
        let opts = SearchOptions::default();
        let curve = tail_curve(&c, &m, &[1.0, 2.0, 4.0], &opts).unwrap();
        assert!(curve.iter().all(|b| b.bound.abs() < 1e-12));
        assert!(tail_curve(&c, &m, &[2.0, 1.0], &opts).is_err());
        assert!(tail_curve(&c, &m, &[0.0, 1.0], &opts).is_err());
    }
}
