use serde::Serialize;

use super::CharFn;
use crate::scalar::Scalar;

/// Which characteristic-function invariant a probe violated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SelfCheckFailure {
    /// `f(0) != 1`.
    Normalization,
    /// `|f(t)| > 1 + tol`.
    Modulus,
    /// `f(-t) != conj(f(t))`.
    Hermitian,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelfCheckReport {
    pub passed: bool,
    /// Largest violation amount seen, 0 when everything holds.
    pub worst_violation: f64,
    pub worst_at: Option<f64>,
    pub failure: Option<SelfCheckFailure>,
    pub probes: usize,
}

/// Checks `f(0) = 1`, `|f(t)| <= 1 + tol` and Hermitian symmetry on `grid`.
pub fn cf_self_check<T: Scalar>(cf: &CharFn<T>, grid: &[T], tol: T) -> SelfCheckReport {
    let mut report = SelfCheckReport {
        passed: true,
        worst_violation: 0.0,
        worst_at: None,
        failure: None,
        probes: 0,
    };
    let record = |amount: T, at: T, kind: SelfCheckFailure, report: &mut SelfCheckReport| {
        let amount = amount.as_f64();
        if amount > tol.as_f64() || amount.is_nan() {
            report.passed = false;
        }
        if amount > report.worst_violation || (amount.is_nan() && report.worst_violation.is_finite()) {
            report.worst_violation = amount;
            report.worst_at = Some(at.as_f64());
            report.failure = Some(kind);
        }
    };

    let at_zero = cf.eval(T::zero());
    record(
        (at_zero.re - T::one()).abs().max(at_zero.im.abs()),
        T::zero(),
        SelfCheckFailure::Normalization,
        &mut report,
    );
    report.probes += 1;

    for &t in grid {
        let ft = cf.eval(t);
        let excess = (ft.norm() - T::one()).max(T::zero());
        record(excess, t, SelfCheckFailure::Modulus, &mut report);
        let fm = cf.eval(-t);
        let asym = (fm - ft.conj()).norm();
        record(asym, t, SelfCheckFailure::Hermitian, &mut report);
        report.probes += 1;
    }
    if report.passed {
        report.failure = None;
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf::{empirical_cf, make_catalog_cf, CatalogSpec};
    use num_complex::Complex;

    fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn cauchy_passes() {
        let cf = make_catalog_cf::<f64>(&CatalogSpec::Cauchy { x0: 0.0, gamma: 1.0 }).unwrap();
        let r = cf_self_check(&cf, &grid(-2.0, 2.0, 41), 1e-12);
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn broken_normalization_detected_at_zero() {
        let cf = CharFn::<f64>::new("broken", |t| Complex::new(0.9 * (-t.abs()).exp(), 0.0));
        let r = cf_self_check(&cf, &grid(-1.0, 1.0, 11), 1e-12);
        assert!(!r.passed);
        assert_eq!(r.failure, Some(SelfCheckFailure::Normalization));
        assert_eq!(r.worst_at, Some(0.0));
    }

    #[test]
    fn broken_symmetry_detected() {
        let cf = CharFn::<f64>::new("lopsided", |t| Complex::new(t.cos(), t.sin().abs()));
        let r = cf_self_check(&cf, &grid(-3.0, 3.0, 13), 1e-9);
        assert_eq!(r.failure, Some(SelfCheckFailure::Hermitian));
    }

    #[test]
    fn empirical_passes() {
        let cf = empirical_cf(&[1.0f64, 2.0, 3.0]).unwrap();
        assert!(cf_self_check(&cf, &grid(-10.0, 10.0, 201), 1e-12).passed);
    }
}
