use serde::Serialize;

use crate::cf::CharFn;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::search::{s_domain, Method};
use super::{require_positive, theorem2_bound, BoundOptions};

/// Grid size for the support scan.
const SUPPORT_GRID: usize = 160;
/// The scan covers `[s_hi * 10^-SUPPORT_DECADES, s_hi]`.
const SUPPORT_DECADES: f64 = 4.0;

/// Outcome of [`certify_compact_support`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SupportCertificate<T> {
    pub threshold: T,
    pub certified: bool,
    /// Smallest exponential bound on `P(|X| > A)` found, clamped to `[0, 1]`.
    pub best_bound: T,
    pub s_at_best: T,
    pub s_max_probed: T,
    pub tol: T,
}

/// Scans the exponential two-sided bound over increasing `s` for an entire
/// characteristic function. `certified` means some bound fell below `tol`,
/// i.e. the mass outside `[-A, A]` is numerically below `tol`.
///
/// For a law supported in `[-rho, rho]` and `A > rho` the bound decays like
/// `exp((rho - A) s)`, so large `s` certifies; for `A` inside the support
/// the bound stays above the true tail.
pub fn certify_compact_support<T: Scalar>(
    cf: &CharFn<T>,
    a: T,
    tol: T,
    s_max: T,
    opts: &BoundOptions<T>,
) -> Result<SupportCertificate<T>> {
    require_positive("A", a)?;
    require_positive("tol", tol)?;
    require_positive("s_max", s_max)?;
    if cf.analyticity_radius() < T::infinity() {
        return Err(Error::Unsupported(format!(
            "support certification needs an entire characteristic function; {} has R = {}",
            cf.label(),
            cf.analyticity_radius()
        )));
    }
    let hi = s_domain(cf, &Method::Theorem2, a)?.min(s_max);
    let log_hi = hi.ln();
    let log_lo = log_hi - T::lit(SUPPORT_DECADES * std::f64::consts::LN_10);

    let mut best: Option<(T, T)> = None;
    let mut last_err = None;
    for i in 0..SUPPORT_GRID {
        let frac = T::lit(i as f64 / (SUPPORT_GRID - 1) as f64);
        let s = if i == SUPPORT_GRID - 1 { hi } else { (log_lo + (log_hi - log_lo) * frac).exp() };
        match theorem2_bound(cf, a, s, opts) {
            Ok(b) => {
                if best.is_none_or(|(v, _)| b.bound < v) {
                    best = Some((b.bound, s));
                }
            }
            Err(e) => last_err = Some(e),
        }
    }
    let Some((best_bound, s_at_best)) = best else {
        return Err(last_err.expect("grid is nonempty"));
    };
    Ok(SupportCertificate {
        threshold: a,
        certified: best_bound < tol,
        best_bound,
        s_at_best,
        s_max_probed: hi,
        tol,
    })
}
